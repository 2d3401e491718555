#include "hydroshock/rational_poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hydroshock {

RationalPoly::RationalPoly(std::vector<mpq_class> ascending) : c_(std::move(ascending)) {
    for (auto& v : c_) v.canonicalize();
    trim();
}

RationalPoly RationalPoly::from_ints(std::initializer_list<long> ascending) {
    std::vector<mpq_class> c;
    for (long v : ascending) c.emplace_back(v);
    return RationalPoly(std::move(c));
}

RationalPoly RationalPoly::constant(const mpq_class& c) { return RationalPoly({c}); }

RationalPoly RationalPoly::x() { return from_ints({0, 1}); }

void RationalPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class RationalPoly::coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : mpq_class(0);
}

mpq_class RationalPoly::eval(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double RationalPoly::eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

RationalPoly RationalPoly::derivative() const {
    std::vector<mpq_class> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
    return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::compose(const RationalPoly& inner) const {
    RationalPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(*it);
    return acc;
}

RationalPoly RationalPoly::pow(unsigned k) const {
    RationalPoly acc = constant(1);
    for (unsigned i = 0; i < k; ++i) acc = acc * *this;
    return acc;
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
    std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return RationalPoly(std::move(c));
}

RationalPoly RationalPoly::operator-() const {
    std::vector<mpq_class> c(c_);
    for (auto& v : c) v = -v;
    return RationalPoly(std::move(c));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) { return a + (-b); }

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(c));
}

RationalPoly operator*(const mpq_class& s, const RationalPoly& a) { return RationalPoly::constant(s) * a; }

std::pair<RationalPoly, RationalPoly> RationalPoly::divmod(const RationalPoly& a, const RationalPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<mpq_class> rem = a.c_;
    const int db = b.degree();
    std::vector<mpq_class> quo(static_cast<std::size_t>(std::max(a.degree() - db + 1, 0)));
    for (int k = a.degree() - db; k >= 0; --k) {
        const mpq_class f = rem[static_cast<std::size_t>(k + db)] / b.leading();
        quo[static_cast<std::size_t>(k)] = f;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    return {RationalPoly(std::move(quo)), RationalPoly(std::move(rem))};
}

std::string RationalPoly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const mpq_class& v = c_[static_cast<std::size_t>(k)];
        if (v == 0) continue;
        os << (first ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + "));
        const mpq_class a = abs(v);
        if (a != 1 || k == 0) os << a.get_str();
        if (k > 0) os << (a != 1 ? "*" : "") << var << (k > 1 ? "^" + std::to_string(k) : "");
        first = false;
    }
    return os.str();
}

namespace {

int sign(const mpq_class& v) { return sgn(v); }

int variations(const std::vector<int>& signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

RationalPoly deflate(RationalPoly p, const mpq_class& r) {
    const RationalPoly lin({-r, mpq_class(1)});
    while (!p.is_zero() && p.eval(r) == 0) p = RationalPoly::divmod(p, lin).first;
    return p;
}

} // namespace

int sturm_root_count(const RationalPoly& p0, const mpq_class& a, const std::optional<mpq_class>& b) {
    if (p0.is_zero()) throw std::domain_error("root count of the zero polynomial");
    RationalPoly p = deflate(p0, a);
    if (b) p = deflate(p, *b);
    if (p.degree() <= 0) return 0;

    std::vector<RationalPoly> chain{p, p.derivative()};
    while (!chain.back().is_zero()) {
        const auto r = RationalPoly::divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    std::vector<int> sa, sb;
    for (const auto& q : chain) {
        sa.push_back(sign(q.eval(a)));
        sb.push_back(b ? sign(q.eval(*b)) : sign(q.leading()));
    }
    return variations(sa) - variations(sb);
}

} // namespace hydroshock
