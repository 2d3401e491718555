#include "hydroshock/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hydroshock/errors.hpp"

namespace hydroshock {

namespace {

constexpr double kConverged = 1e-12;
constexpr double kTruncation = 1e-10;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct DopriStep {
    double y;
    double err;
};

template <class F>
DopriStep dopri_step(const F& f, double y, double dx) {
    const double k1 = f(y);
    const double k2 = f(y + dx * a21 * k1);
    const double k3 = f(y + dx * (a31 * k1 + a32 * k2));
    const double k4 = f(y + dx * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(y + dx * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(y + dx * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double y5 = y + dx * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(y5);
    const double err = dx * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, std::abs(err)};
}

// 16-point Gauss-Legendre on [a, b].
template <class F>
double gauss_legendre(const F& f, double a, double b) {
    static constexpr std::array<double, 8> xs = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static constexpr std::array<double, 8> ws = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * (f(m - r * xs[i]) + f(m + r * xs[i]));
    return r * s;
}

struct Branch {
    std::vector<double> x, h;
    bool converged = false;
};

// Marches H' = G(H) from x = 0 in direction dir until |x| = width or H reaches target.
// Error per unit step is held below step_tol * (1 + |G|), the scale of the residual test.
constexpr double kEps = std::numeric_limits<double>::epsilon();

Branch march(const ProfileOde& g, double h0, int dir, double width, double h_max, double step_tol,
             double target, bool corner) {
    Branch out;
    double x = 0.0, h = h0;
    double dx = std::min(h_max, 0.01 / std::max(std::abs(g.d1(h0)), 1e-12));
    const auto rhs = [&](double y) { return g(y); };
    int guard = 0;
    while (std::abs(x) < width) {
        if (++guard > 50'000'000) throw IntegrationError("profile integration did not terminate", x);
        dx = std::min({dx, h_max, width - std::abs(x)});
        DopriStep st{};
        bool ok = true;
        try {
            st = dopri_step(rhs, h, dir * dx);
        } catch (const SingularityError&) {
            ok = false;
        }
        if (!ok || !std::isfinite(st.y)) {
            dx *= 0.25;
            if (dx < 1e-14) throw IntegrationError("profile step size underflow", x);
            continue;
        }
        const double scale = std::max(step_tol * dx * (1.0 + std::abs(g(h))), 8.0 * kEps * std::max(1.0, std::abs(h)));
        const double ratio = st.err / scale;
        if (ratio <= 1.0) {
            if (corner && st.y <= target) {
                // degenerate class: G(H_R) != 0, so H reaches H_R at a finite corner
                const double len = gauss_legendre([&](double y) { return 1.0 / g(y); }, h, target);
                out.x.push_back(x + len);
                out.h.push_back(target);
                out.converged = true;
                return out;
            }
            x += dir * dx;
            h = st.y;
            if (std::abs(h - target) < kConverged) h = target;
            out.x.push_back(x);
            out.h.push_back(h);
            if (h == target) {
                out.converged = true;
                return out;
            }
        }
        const double grow = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        dx *= std::clamp(grow, 0.2, 5.0);
        if (dx < 1e-14) throw IntegrationError("profile step size underflow", x);
    }
    return out;
}

void extend(Branch& b, int dir, double width, double h_max, double value) {
    double x = b.x.empty() ? 0.0 : b.x.back();
    while (std::abs(x) < width * (1.0 - 1e-14)) {
        x = dir * std::min(std::abs(x) + h_max, width);
        b.x.push_back(x);
        b.h.push_back(value);
    }
}

std::array<double, 6> quintic_basis(double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    return {1 - 10 * t3 + 15 * t4 - 6 * t5,  t - 6 * t3 + 8 * t4 - 3 * t5,
            0.5 * (t2 - 3 * t3 + 3 * t4 - t5), 0.5 * (t3 - 2 * t4 + t5),
            -4 * t3 + 7 * t4 - 3 * t5,        10 * t3 - 15 * t4 + 6 * t5};
}

std::array<double, 6> quintic_basis_deriv(double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    return {-30 * t2 + 60 * t3 - 30 * t4,        1 - 18 * t2 + 32 * t3 - 15 * t4,
            0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4), 0.5 * (3 * t2 - 8 * t3 + 5 * t4),
            -12 * t2 + 28 * t3 - 15 * t4,        30 * t2 - 60 * t3 + 30 * t4};
}

} // namespace

ShockProfile::ShockProfile(const ModelParams& params, std::vector<double> x, std::vector<double> h)
    : ode_(params), x_(std::move(x)), h_(std::move(h)) {
    if (x_.size() != h_.size() || x_.size() < 2) throw DomainError("profile needs matching x and H samples");
    for (std::size_t i = 1; i < x_.size(); ++i)
        if (!(x_[i] > x_[i - 1])) throw DomainError("profile grid must be strictly increasing");
    const ReferencePoints& r = refs();
    q_.resize(h_.size());
    dh_.resize(h_.size());
    ddh_.resize(h_.size());
    for (std::size_t i = 0; i < h_.size(); ++i) {
        q_[i] = r.speed * h_[i] - r.q0;
        if (profile_class() == ProfileClass::discontinuous && x_[i] > 0.0) continue;
        try {
            const double g = ode_(h_[i]);
            dh_[i] = g;
            ddh_[i] = ode_.d1(h_[i]) * g;
        } catch (const SingularityError&) {
            dh_[i] = ddh_[i] = 0.0;
        }
    }
    if (profile_class() == ProfileClass::discontinuous) {
        const auto it = std::find(x_.begin(), x_.end(), 0.0);
        if (it == x_.end() || it + 1 == x_.end())
            throw DomainError("discontinuous profile needs a node at x = 0 and a node to its right");
        subshock_ = static_cast<std::size_t>(it - x_.begin());
    }
}

double ShockProfile::h_minus() const {
    if (!subshock_) throw DomainError("profile has no subshock");
    return h_[*subshock_];
}

double ShockProfile::h_plus() const {
    if (!subshock_) throw DomainError("profile has no subshock");
    return h_[*subshock_ + 1];
}

ShockProfile::Local ShockProfile::locate(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const bool constant = h_[i] == h_[i + 1] || (subshock_ && i >= *subshock_);
    return {i, constant};
}

double ShockProfile::height(double x) const {
    if (x <= x_.front()) return h_.front();
    if (x >= x_.back()) return h_.back();
    if (subshock_ && x > 0.0) return h_[*subshock_ + 1];
    const Local loc = locate(x);
    const std::size_t i = loc.i;
    if (loc.constant) return h_[i];
    const double d = x_[i + 1] - x_[i];
    const auto b = quintic_basis((x - x_[i]) / d);
    return h_[i] * b[0] + d * dh_[i] * b[1] + d * d * ddh_[i] * b[2] + d * d * ddh_[i + 1] * b[3]
         + d * dh_[i + 1] * b[4] + h_[i + 1] * b[5];
}

double ShockProfile::height_slope(double x) const {
    if (x < x_.front() || x > x_.back()) return 0.0;
    if (subshock_ && x > 0.0) return 0.0;
    const Local loc = locate(x);
    const std::size_t i = loc.i;
    if (loc.constant) return 0.0;
    const double d = x_[i + 1] - x_[i];
    const auto b = quintic_basis_deriv((x - x_[i]) / d);
    return (h_[i] * b[0] + d * dh_[i] * b[1] + d * d * ddh_[i] * b[2] + d * d * ddh_[i + 1] * b[3]
            + d * dh_[i + 1] * b[4] + h_[i + 1] * b[5]) / d;
}

ResidualDiagnostics ShockProfile::residual() const {
    ResidualDiagnostics out;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        if (h_[i] == h_[i + 1] || (subshock_ && i >= *subshock_)) continue;
        const double xm = 0.5 * (x_[i] + x_[i + 1]);
        const double g = ode_(height(xm));
        const double r = std::abs(height_slope(xm) - g) / (1.0 + std::abs(g));
        ++out.n_checked;
        if (r > out.max_residual) {
            out.max_residual = r;
            out.worst_x = xm;
        }
    }
    return out;
}

double default_half_width(const ModelParams& p) {
    const ProfileOde g(p);
    double rate = g.d1(1.0);
    if (g.profile_class() == ProfileClass::smooth) rate = std::min(rate, std::abs(g.d1(p.h_right)));
    return (std::log((1.0 - p.h_right) / kTruncation) + 2.0) / rate;
}

ShockProfile integrate_profile(const ModelParams& p, const ProfileOptions& opts) {
    const ProfileOde g(p);
    const ProfileClass cls = g.profile_class();
    const bool auto_width = !(opts.half_width > 0.0);
    double width = auto_width ? default_half_width(p) : opts.half_width;
    double step_tol = std::max(0.1 * opts.tol, 1e-15);
    const int n = std::max(opts.n_points, 16);
    int tightened = 0;

    for (int attempt = 0;; ++attempt) {
        const double h_max = 2.0 * width / n;
        const double anchor = cls == ProfileClass::discontinuous ? *g.refs().h_star : 0.5 * (1.0 + p.h_right);
        Branch left = march(g, anchor, -1, width, h_max, step_tol, 1.0, false);
        Branch right;
        if (cls != ProfileClass::discontinuous)
            right = march(g, anchor, +1, width, h_max, step_tol, p.h_right, cls == ProfileClass::degenerate);
        const double err_left = left.h.empty() ? 1.0 : std::abs(left.h.back() - 1.0);
        const double err_right = right.h.empty() ? 0.0 : std::abs(right.h.back() - p.h_right);
        if (auto_width && attempt < 4 && std::max(err_left, err_right) > kTruncation) {
            width *= 1.5;
            continue;
        }
        extend(left, -1, width, h_max, 1.0);
        if (cls == ProfileClass::discontinuous) {
            right.converged = true;
            right.x.clear();
            right.h.clear();
        }
        extend(right, +1, width, h_max, p.h_right);

        std::vector<double> xs, hs;
        xs.reserve(left.x.size() + right.x.size() + 1);
        hs.reserve(xs.capacity());
        for (std::size_t i = left.x.size(); i-- > 0;) {
            xs.push_back(left.x[i]);
            hs.push_back(left.h[i]);
        }
        xs.push_back(0.0);
        hs.push_back(anchor);
        xs.insert(xs.end(), right.x.begin(), right.x.end());
        hs.insert(hs.end(), right.h.begin(), right.h.end());

        ShockProfile profile(p, std::move(xs), std::move(hs));
        const ResidualDiagnostics res = profile.residual();
        if (res.max_residual > opts.tol && tightened < 3 && step_tol > 1e-15) {
            // steep layers next to a near-sonic anchor need a tighter step control
            step_tol = std::max(0.1 * step_tol, 1e-15);
            ++tightened;
            continue;
        }
        if (res.max_residual > opts.tol) {
            std::ostringstream os;
            os.precision(6);
            os << "profile residual " << res.max_residual << " exceeds tolerance " << opts.tol
               << " at x=" << res.worst_x;
            throw IntegrationError(os.str(), res.worst_x);
        }
        return profile;
    }
}

LaxReport lax_check(const ShockProfile& profile) {
    if (profile.profile_class() != ProfileClass::discontinuous)
        throw DomainError("Lax check applies to discontinuous profiles only");
    const std::size_t k = *profile.subshock_index();
    const double f2 = profile.params().froude * profile.params().froude;
    const double c = profile.refs().speed;
    const double hm = profile.h()[k], hp = profile.h()[k + 1];
    const double qm = profile.q()[k], qp = profile.q()[k + 1];
    const auto momentum = [&](double h, double q) { return q * q / h + h * h / (2.0 * f2); };
    LaxReport r;
    r.speed = c;
    r.mass_residual = c * (hp - hm) - (qp - qm);
    r.momentum_residual = c * (qp - qm) - (momentum(hp, qp) - momentum(hm, qm));
    const double froude = profile.params().froude;
    r.lambda1_minus = qm / hm - std::sqrt(hm) / froude;
    r.lambda2_minus = qm / hm + std::sqrt(hm) / froude;
    r.lambda1_plus = qp / hp - std::sqrt(hp) / froude;
    r.lambda2_plus = qp / hp + std::sqrt(hp) / froude;
    if (!(std::abs(r.mass_residual) <= 1e-10)) r.failed.push_back("rankine-hugoniot (mass)");
    if (!(std::abs(r.momentum_residual) <= 1e-10)) r.failed.push_back("rankine-hugoniot (momentum)");
    if (!(r.lambda2_minus > c)) r.failed.push_back("lax: lambda2(H-) > c");
    if (!(c > r.lambda2_plus)) r.failed.push_back("lax: c > lambda2(H+)");
    if (!(r.lambda1_minus < c)) r.failed.push_back("lax: lambda1(H-) < c");
    if (!(r.lambda1_plus < c)) r.failed.push_back("lax: lambda1(H+) < c");
    return r;
}

void write_profile_csv(const ShockProfile& profile, std::ostream& os) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    os << "x,H,Q\n";
    const auto& x = profile.x();
    const auto& h = profile.h();
    const auto& q = profile.q();
    const auto k = profile.subshock_index();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (k && i == *k) {
            os << "0-," << h[i] << ',' << q[i] << '\n';
            os << "0+," << h[i + 1] << ',' << q[i + 1] << '\n';
            continue;
        }
        os << x[i] << ',' << h[i] << ',' << q[i] << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

std::string profile_json(const ShockProfile& profile) {
    const auto& p = profile.params();
    const auto& r = profile.refs();
    const ResidualDiagnostics res = profile.residual();
    nlohmann::ordered_json j;
    j["schema"] = "hydroshock/1";
    j["params"] = {{"F", p.froude}, {"H_R", p.h_right}, {"nu", p.nu}};
    j["class"] = to_string(profile.profile_class());
    j["certifiable"] = profile.certifiable();
    nlohmann::ordered_json refs = {{"H3", r.h3}, {"Hs", r.hs}, {"Hc", r.hc}, {"c", r.speed}, {"q0", r.q0}};
    refs["Hstar"] = r.h_star ? nlohmann::ordered_json(*r.h_star) : nlohmann::ordered_json(nullptr);
    j["refs"] = refs;
    j["grid"] = {{"n", profile.size()}, {"x_min", profile.left_edge()}, {"x_max", profile.right_edge()}};
    j["residual"] = {{"max", res.max_residual}, {"worst_x", res.worst_x}, {"n_checked", res.n_checked}};
    j["endpoint_error"] = {{"left", std::abs(profile.h().front() - 1.0)},
                           {"right", std::abs(profile.h().back() - p.h_right)}};
    return j.dump(2);
}

} // namespace hydroshock
