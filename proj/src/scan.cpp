#include "hydroshock/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hydroshock/errors.hpp"
#include "hydroshock/evans.hpp"
#include "hydroshock/profile.hpp"

namespace hydroshock {

std::vector<double> GridRange::values() const {
    std::vector<double> v;
    if (count == 1) return {min};
    for (int i = 0; i < count; ++i) v.push_back(min + (max - min) * i / (count - 1));
    return v;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw DomainError("config: '" + key + "' expects a number, got '" + v + "'");
    return d;
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != static_cast<int>(d)) throw DomainError("config: '" + key + "' expects an integer, got '" + v + "'");
    return static_cast<int>(d);
}

mpq_class to_rational(const std::string& key, const std::string& v) {
    try {
        return parse_rational(v);
    } catch (const std::exception&) {
        throw DomainError("config: '" + key + "' expects a rational, got '" + v + "'");
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

mpq_class parse_rational(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw DomainError("empty rational");
    if (t.find('/') != std::string::npos) {
        mpq_class q;
        if (q.set_str(t, 10) != 0 || q.get_den() == 0) throw DomainError("bad rational '" + t + "'");
        q.canonicalize();
        return q;
    }
    std::size_t i = 0;
    bool neg = false;
    if (t[i] == '+' || t[i] == '-') neg = t[i++] == '-';
    std::string digits;
    long frac = 0;
    bool dot = false, any = false;
    for (; i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.'); ++i) {
        if (t[i] == '.') {
            if (dot) throw DomainError("bad rational '" + t + "'");
            dot = true;
        } else {
            digits += t[i];
            any = true;
            if (dot) ++frac;
        }
    }
    if (!any) throw DomainError("bad rational '" + t + "'");
    long exp10 = 0;
    if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
        std::size_t used = 0;
        exp10 = std::stol(t.substr(i + 1), &used);
        i += 1 + used;
    }
    if (i != t.size()) throw DomainError("bad rational '" + t + "'");
    mpq_class q{mpz_class(digits, 10)};
    mpz_class p10;
    const long e = exp10 - frac;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
    q = e < 0 ? mpq_class(q / p10) : mpq_class(q * p10);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

void ScanConfig::validate() const {
    const auto range = [](const GridRange& r, double lo, double hi, const char* name) {
        if (!(r.min > lo && r.max < hi && r.min <= r.max) || r.count < 1)
            throw DomainError(std::string("config: ") + name + " range must lie inside (" + fmt("%g", lo) + ", " +
                              fmt("%g", hi) + ") with min <= max and count >= 1");
    };
    range(froude, 0.0, 2.0, "froude");
    range(h_right, 0.0, 1.0, "h_right");
    if (!(r_indent > 0.0 && radius > r_indent)) throw DomainError("config: need 0 < r_indent < radius");
    if (profile_n < 10) throw DomainError("config: profile_n must be at least 10");
    if (!(profile_tol > 0.0 && evans_tol > 0.0)) throw DomainError("config: tolerances must be positive");
    if (winding_samples < 8) throw DomainError("config: winding_samples must be at least 8");
    if (jobs < 1) throw DomainError("config: jobs must be at least 1");
    if (nu_min || nu_max) {
        if (!nu_min || !nu_max || *nu_min < 1 || !(*nu_min < *nu_max) || nu_count < 1)
            throw DomainError("config: need 1 <= nu_min < nu_max and nu_count >= 1");
    }
    if (nu_tilde_min || nu_tilde_max) {
        if (!nu_tilde_min || !nu_tilde_max || *nu_tilde_min < 0 || *nu_tilde_max > 1 ||
            !(*nu_tilde_min < *nu_tilde_max) || nu_tilde_count < 1)
            throw DomainError("config: need 0 <= nu_tilde_min < nu_tilde_max <= 1 and nu_tilde_count >= 1");
    }
}

ScanConfig parse_scan_config(std::istream& in) {
    ScanConfig c;
    std::string line, section;
    int lineno = 0;
    std::map<std::string, std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw DomainError("config line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (seen.count(key)) throw DomainError("config: duplicate key '" + key + "'");
        seen[key] = v;

        if (key == "grid.froude_min") c.froude.min = to_double(key, v);
        else if (key == "grid.froude_max") c.froude.max = to_double(key, v);
        else if (key == "grid.froude_count") c.froude.count = to_int(key, v);
        else if (key == "grid.h_right_min") c.h_right.min = to_double(key, v);
        else if (key == "grid.h_right_max") c.h_right.max = to_double(key, v);
        else if (key == "grid.h_right_count") c.h_right.count = to_int(key, v);
        else if (key == "contour.radius") c.radius = to_double(key, v);
        else if (key == "contour.r_indent") c.r_indent = to_double(key, v);
        else if (key == "numerics.profile_n") c.profile_n = to_int(key, v);
        else if (key == "numerics.form_n") c.form_n = to_int(key, v);
        else if (key == "numerics.profile_tol") c.profile_tol = to_double(key, v);
        else if (key == "numerics.evans_tol") c.evans_tol = to_double(key, v);
        else if (key == "numerics.winding_samples") c.winding_samples = to_int(key, v);
        else if (key == "run.jobs") c.jobs = to_int(key, v);
        else if (key == "run.out_dir") c.out_dir = v;
        else if (key == "inequalities.nu_min") c.nu_min = to_rational(key, v);
        else if (key == "inequalities.nu_max") c.nu_max = to_rational(key, v);
        else if (key == "inequalities.nu_count") c.nu_count = to_int(key, v);
        else if (key == "inequalities.nu_tilde_min") c.nu_tilde_min = to_rational(key, v);
        else if (key == "inequalities.nu_tilde_max") c.nu_tilde_max = to_rational(key, v);
        else if (key == "inequalities.nu_tilde_count") c.nu_tilde_count = to_int(key, v);
        else throw DomainError("config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

ScanConfig load_scan_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config '" + path + "'");
    return parse_scan_config(in);
}

std::string to_string(const ScanConfig& c) {
    std::ostringstream os;
    const auto num = [](double v) { return fmt("%.17g", v); };
    os << "[grid]\n"
       << "froude_min = " << num(c.froude.min) << "\nfroude_max = " << num(c.froude.max)
       << "\nfroude_count = " << c.froude.count << "\nh_right_min = " << num(c.h_right.min)
       << "\nh_right_max = " << num(c.h_right.max) << "\nh_right_count = " << c.h_right.count << "\n\n"
       << "[contour]\nradius = " << num(c.radius) << "\nr_indent = " << num(c.r_indent) << "\n\n"
       << "[numerics]\nprofile_n = " << c.profile_n << "\nform_n = " << c.form_n
       << "\nprofile_tol = " << num(c.profile_tol) << "\nevans_tol = " << num(c.evans_tol)
       << "\nwinding_samples = " << c.winding_samples << "\n\n"
       << "[run]\njobs = " << c.jobs << "\nout_dir = " << c.out_dir << "\n";
    if (c.nu_min || c.nu_tilde_min) {
        os << "\n[inequalities]\n";
        if (c.nu_min)
            os << "nu_min = " << c.nu_min->get_str() << "\nnu_max = " << c.nu_max->get_str()
               << "\nnu_count = " << c.nu_count << "\n";
        if (c.nu_tilde_min)
            os << "nu_tilde_min = " << c.nu_tilde_min->get_str() << "\nnu_tilde_max = " << c.nu_tilde_max->get_str()
               << "\nnu_tilde_count = " << c.nu_tilde_count << "\n";
    }
    return os.str();
}

SampleSet nu_sample_set(const ScanConfig& cfg) {
    return cfg.nu_min ? uniform_samples(*cfg.nu_min, *cfg.nu_max, cfg.nu_count) : default_nu_samples();
}

SampleSet nu_tilde_sample_set(const ScanConfig& cfg) {
    return cfg.nu_tilde_min ? uniform_samples(*cfg.nu_tilde_min, *cfg.nu_tilde_max, cfg.nu_tilde_count)
                            : default_nu_tilde_samples();
}

bool ScanRow::stable() const {
    if (cls == ProfileClass::degenerate) return true;
    return winding && *winding == 0 && max_eig && *max_eig < 0.0;
}

int ScanResult::exit_code() const {
    bool unstable = false, numerical = false;
    for (const auto& r : rows) {
        if ((r.winding && *r.winding != 0) || (r.max_eig && *r.max_eig >= 0.0)) unstable = true;
        if (!r.error.empty()) numerical = true;
    }
    return unstable ? 1 : numerical ? 3 : 0;
}

ScanRow scan_point(double froude, double h_right, const ScanConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ScanRow row;
    row.froude = froude;
    row.h_right = h_right;
    const auto note = [&](const char* stage, const std::exception& e) {
        row.error += (row.error.empty() ? "" : "; ") + std::string(stage) + ": " + e.what();
    };
    try {
        const ModelParams p = ModelParams::make(froude, h_right);
        row.cls = classify(p);
        const ReferencePoints refs = reference_points(p);
        row.speed = refs.speed;
        row.h_star = refs.h_star;
        if (row.cls != ProfileClass::degenerate) {
            ProfileOptions po;
            po.n_points = cfg.profile_n;
            po.tol = cfg.profile_tol;
            const ShockProfile prof = integrate_profile(p, po);
            try {
                CountOptions co;
                co.evans.tol = cfg.evans_tol;
                co.winding.initial_samples = cfg.winding_samples;
                row.winding = count_unstable(prof, cfg.radius, cfg.r_indent, co).winding;
            } catch (const std::exception& e) {
                note("evans", e);
            }
            try {
                const FormReport fr = form_check(prof, cfg.form_n);
                row.max_eig = fr.max_eig;
                row.signs = fr.scans;
            } catch (const std::exception& e) {
                note("forms", e);
            }
        }
    } catch (const std::exception& e) {
        note("profile", e);
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

ScanResult run_scan(const ScanConfig& cfg, std::ostream* progress) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<double, double>> points;
    for (double f : cfg.froude.values())
        for (double hr : cfg.h_right.values()) points.emplace_back(f, hr);

    ScanResult res;
    res.rows.resize(points.size());
    std::atomic<std::size_t> next{0};
    std::mutex io;
    const auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            res.rows[i] = scan_point(points[i].first, points[i].second, cfg);
            if (progress) {
                const ScanRow& r = res.rows[i];
                std::lock_guard lock(io);
                *progress << "F=" << r.froude << " H_R=" << r.h_right << " " << to_string(r.cls)
                          << (r.error.empty() ? "" : " error") << " " << fmt("%.2f", r.wall_seconds) << "s\n";
            }
        }
    };
    const int n = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(points.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& sign_columns() {
    static const std::vector<std::pair<std::string, std::string>> cols = {
        {"alpha", "alpha"},
        {"beta", "beta"},
        {"f_positivity", "f_positivity"},
        {"f2^2/2+f2'", "f2sq_whole"},
        {"f2^2/4+f2'/2", "f2sq_half"},
        {"-c1", "neg_c1"},
        {"f2(H*)/2-c1", "robin_gap"},
    };
    return cols;
}

std::string status(const ScanRow& r) {
    if (r.cls == ProfileClass::degenerate) return "skipped";
    if (!r.error.empty()) return "error";
    return r.stable() ? "ok" : "unstable";
}

} // namespace

void write_scan_csv(const ScanResult& r, std::ostream& os) {
    os << "F,H_R,class,c,Hstar,winding,max_eig_B";
    for (const auto& c : sign_columns()) os << ',' << c.second;
    os << ",status\n";
    for (const auto& row : r.rows) {
        os << fmt("%.10g", row.froude) << ',' << fmt("%.10g", row.h_right) << ',' << to_string(row.cls) << ','
           << fmt("%.12g", row.speed) << ',' << (row.h_star ? fmt("%.12g", *row.h_star) : "") << ','
           << (row.winding ? std::to_string(*row.winding) : "") << ','
           << (row.max_eig ? fmt("%.9e", *row.max_eig) : "");
        for (const auto& c : sign_columns()) {
            os << ',';
            for (const auto& s : row.signs)
                if (s.name == c.first) os << (s.pass ? '1' : '0');
        }
        os << ',' << status(row) << '\n';
    }
}

std::string scan_summary_json(const ScanConfig& cfg, const ScanResult& r, int indent) {
    nlohmann::ordered_json j;
    j["schema"] = "hydroshock/1";
    j["config"] = {{"froude", {cfg.froude.min, cfg.froude.max, cfg.froude.count}},
                   {"h_right", {cfg.h_right.min, cfg.h_right.max, cfg.h_right.count}},
                   {"radius", cfg.radius},
                   {"r_indent", cfg.r_indent},
                   {"profile_n", cfg.profile_n},
                   {"form_n", cfg.form_n},
                   {"profile_tol", cfg.profile_tol},
                   {"evans_tol", cfg.evans_tol},
                   {"winding_samples", cfg.winding_samples}};
    int n_deg = 0, n_wind = 0, n_eig = 0, n_err = 0;
    std::map<std::string, int> sign_fail;
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    nlohmann::ordered_json times = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        times.push_back({row.froude, row.h_right, row.wall_seconds});
        if (row.cls == ProfileClass::degenerate) ++n_deg;
        std::vector<std::string> why;
        if (row.winding && *row.winding != 0) {
            ++n_wind;
            why.push_back("winding " + std::to_string(*row.winding));
        }
        if (row.max_eig && *row.max_eig >= 0.0) {
            ++n_eig;
            why.push_back("max_eig " + fmt("%.6e", *row.max_eig));
        }
        if (!row.error.empty()) {
            ++n_err;
            why.push_back(row.error);
        }
        for (const auto& s : row.signs)
            if (!s.pass) ++sign_fail[s.name];
        if (!why.empty()) failures.push_back({{"F", row.froude}, {"H_R", row.h_right}, {"reasons", why}});
    }
    j["n_points"] = r.rows.size();
    j["n_degenerate"] = n_deg;
    j["n_nonzero_winding"] = n_wind;
    j["n_nonnegative_eig"] = n_eig;
    j["n_numerical_failures"] = n_err;
    nlohmann::ordered_json sf = nlohmann::ordered_json::object();
    for (const auto& [k, v] : sign_fail) sf[k] = v;
    j["sign_scan_failures"] = sf;
    j["failures"] = failures;
    j["exit_code"] = r.exit_code();
    j["pass"] = r.exit_code() == 0;
    j["wall_seconds"] = r.wall_seconds;
    j["point_wall_seconds"] = times;
    return j.dump(indent);
}

} // namespace hydroshock
