// hydroshock: batch driver for profile construction, spectral certification and the
// exact inequality certificates.
//
// Exit codes: 0 pass, 1 stability-check failure, 2 usage or domain error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hydroshock/errors.hpp"
#include "hydroshock/evans.hpp"
#include "hydroshock/inequalities.hpp"
#include "hydroshock/linearization.hpp"
#include "hydroshock/profile.hpp"
#include "hydroshock/scan.hpp"
#include "hydroshock/sturm_forms.hpp"

namespace fs = std::filesystem;
using namespace hydroshock;

namespace {

struct Flags {
    std::optional<double> froude, h_right;
    std::string config;
    std::optional<std::string> out;
    std::optional<int> jobs;
    std::optional<double> radius, indent;
    std::optional<int> grid_n, form_n;
    std::optional<double> tol;
    bool inject_sign_flip = false;
};

// Config file first, command-line flags on top.
ScanConfig resolve(const Flags& f) {
    ScanConfig c = f.config.empty() ? ScanConfig{} : load_scan_config(f.config);
    if (f.out) c.out_dir = *f.out;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.radius) c.radius = *f.radius;
    if (f.indent) c.r_indent = *f.indent;
    if (f.grid_n) c.profile_n = *f.grid_n;
    if (f.form_n) c.form_n = *f.form_n;
    if (f.tol) c.profile_tol = *f.tol;
    c.validate();
    return c;
}

ModelParams params(const Flags& f) {
    if (!f.froude || !f.h_right) throw DomainError("--froude and --hr are required");
    return ModelParams::make(*f.froude, *f.h_right);
}

std::string tag(const ModelParams& p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "F%.6g_HR%.6g", p.froude, p.h_right);
    return buf;
}

fs::path out_dir(const Flags& f, const ScanConfig& c) {
    fs::path d = f.out ? fs::path(*f.out) : (f.config.empty() ? fs::path(".") : fs::path(c.out_dir));
    fs::create_directories(d);
    return d;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text << '\n';
}

ShockProfile build(const ModelParams& p, const ScanConfig& c) {
    ProfileOptions po;
    po.n_points = c.profile_n;
    po.tol = c.profile_tol;
    return integrate_profile(p, po);
}

int cmd_classify(const Flags& f) {
    const ModelParams p = params(f);
    const ReferencePoints r = reference_points(p);
    std::printf("%s\n", to_string(classify(p)).c_str());
    std::printf("c = %.12g\nq0 = %.12g\nH3 = %.12g\nHs = %.12g\nHc = %.12g\n", r.speed, r.q0, r.h3, r.hs, r.hc);
    if (r.h_star) std::printf("Hstar = %.12g\n", *r.h_star);
    std::printf("threshold H_R = %.12g\n", class_threshold(p.froude));
    return 0;
}

int cmd_profile(const Flags& f) {
    const ModelParams p = params(f);
    const ScanConfig c = resolve(f);
    const ShockProfile prof = build(p, c);
    const fs::path dir = out_dir(f, c);
    const fs::path csv = dir / ("profile_" + tag(p) + ".csv");
    std::ofstream os(csv);
    write_profile_csv(prof, os);
    write_file(dir / ("profile_" + tag(p) + ".json"), profile_json(prof));
    std::printf("%s %s residual %.3e -> %s\n", to_string(prof.profile_class()).c_str(), tag(p).c_str(),
                prof.residual().max_residual, csv.string().c_str());
    if (prof.profile_class() == ProfileClass::discontinuous) {
        const LaxReport lax = lax_check(prof);
        for (const auto& w : lax.failed) std::fprintf(stderr, "subshock condition failed: %s\n", w.c_str());
        if (!lax.pass()) return 3;
    }
    return 0;
}

int cmd_coefficients(const Flags& f) {
    const ModelParams p = params(f);
    const ScanConfig c = resolve(f);
    const ReferencePoints r = reference_points(p);
    const ProfileClass cls = classify(p);
    const double lo = cls == ProfileClass::discontinuous ? *r.h_star : p.h_right;
    const fs::path dir = out_dir(f, c);
    const fs::path csv = dir / ("coefficients_" + tag(p) + ".csv");
    std::ofstream os(csv);
    write_coefficient_csv(p, lo, 1.0, f.grid_n ? *f.grid_n : 401, os);
    std::printf("coefficients on [%.12g, 1] -> %s\n", lo, csv.string().c_str());
    if (cls == ProfileClass::discontinuous) {
        const BoundaryData b = boundary_coeffs(p);
        std::printf("c1 = %.12g\nc2 = %.12g\nc1 (boundary row) = %.12g\nc2 (boundary row) = %.12g\n", b.c1, b.c2,
                    b.c1_direct, b.c2_direct);
    }
    return 0;
}

int cmd_evans(const Flags& f) {
    const ModelParams p = params(f);
    ScanConfig c = resolve(f);
    if (f.tol) c.evans_tol = *f.tol;
    c.profile_tol = ProfileOptions{}.tol;
    const ShockProfile prof = build(p, c);
    CountOptions co;
    co.evans.tol = c.evans_tol;
    co.winding.initial_samples = c.winding_samples;
    const WindingReport w = count_unstable(prof, c.radius, c.r_indent, co);
    const fs::path dir = out_dir(f, c);
    write_file(dir / ("winding_" + tag(p) + ".json"), winding_json(prof, w));
    std::ofstream os(dir / ("winding_" + tag(p) + ".csv"));
    write_winding_csv(w, os);
    std::printf("%s winding %d on %s (%zu samples)\n", tag(p).c_str(), w.winding, w.contour.c_str(), w.samples.size());
    return w.winding == 0 ? 0 : 1;
}

int cmd_forms(const Flags& f) {
    const ModelParams p = params(f);
    const ScanConfig c = resolve(f);
    const ShockProfile prof = build(p, c);
    const FormReport r = form_check(prof, c.form_n);
    write_file(out_dir(f, c) / ("forms_" + tag(p) + ".json"), form_json(prof, r));
    std::printf("%s max eigenvalue %.9e (n = %zu)\n", tag(p).c_str(), r.max_eig, r.op.size());
    for (const auto& s : r.scans)
        std::printf("  %-14s min %+.6e at H = %.6f %s\n", s.name.c_str(), s.min_value, s.argmin_h,
                    s.pass ? "pass" : "FAIL");
    return r.max_eig < 0.0 ? 0 : 1;
}

int cmd_scan(const Flags& f) {
    const ScanConfig c = resolve(f);
    const ScanResult r = run_scan(c, &std::cerr);
    const fs::path dir = out_dir(f, c);
    {
        std::ofstream os(dir / "scan.csv");
        write_scan_csv(r, os);
    }
    write_file(dir / "summary.json", scan_summary_json(c, r));
    int unstable = 0, errors = 0;
    for (const auto& row : r.rows) {
        if (!row.error.empty()) ++errors;
        else if (!row.stable()) ++unstable;
    }
    std::printf("%zu points, %d unstable, %d numerical failures, %.1fs -> %s\n", r.rows.size(), unstable, errors,
                r.wall_seconds, (dir / "scan.csv").string().c_str());
    return r.exit_code();
}

int cmd_inequalities(const Flags& f) {
    const ScanConfig c = resolve(f);
    IneqOptions o;
    o.inject_sign_flip = f.inject_sign_flip;
    const std::vector<IneqCertificate> certs{verify_Hstar_gt_Hc(nu_sample_set(c), o),
                                             verify_Hstar_lower_bound(nu_sample_set(c), o),
                                             verify_c1_bound(nu_tilde_sample_set(c), o)};
    const fs::path dir = out_dir(f, c);
    write_file(dir / "certificates.json", certificates_json(certs));
    bool all = true;
    for (const auto& k : certs) {
        std::printf("%-18s %s  samples %zu  min %s  roots %d\n", k.name.c_str(), k.pass ? "pass" : "FAIL",
                    k.samples.points.size(), k.min_value.get_str().c_str(), k.root_count);
        if (!k.pass) std::fprintf(stderr, "%s witness: %s\n", k.name.c_str(), k.witness.value_or("?").c_str());
        all = all && k.pass;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hydraulic shock profiles: construction and spectral stability certification"};
    app.require_subcommand(1);
    Flags f;

    const auto point = [&](CLI::App* s) {
        s->add_option("--froude", f.froude, "Froude number F in (0, 2)")->required();
        s->add_option("--hr", f.h_right, "Right state H_R in (0, 1)")->required();
    };
    const auto common = [&](CLI::App* s) {
        s->add_option("--config", f.config, "key=value configuration file");
        s->add_option("--out", f.out, "Output directory");
        s->add_option("--grid-n", f.grid_n, "Profile step count (coefficients: table rows)");
        s->add_option("--tol", f.tol, "Tolerance (profile residual; Magnus local tolerance for evans)");
    };
    const auto spectral = [&](CLI::App* s) {
        s->add_option("--contour-radius", f.radius, "Contour radius R");
        s->add_option("--indent", f.indent, "Indentation radius about the origin");
    };

    auto* classify_cmd = app.add_subcommand("classify", "Print the profile class and reference heights");
    point(classify_cmd);
    auto* profile_cmd = app.add_subcommand("profile", "Write profile CSV and JSON sidecar");
    point(profile_cmd);
    common(profile_cmd);
    auto* coeff_cmd = app.add_subcommand("coefficients", "Tabulate reduction coefficients and Robin data");
    point(coeff_cmd);
    common(coeff_cmd);
    auto* evans_cmd = app.add_subcommand("evans", "Winding of the Evans(-Lopatinsky) determinant");
    point(evans_cmd);
    common(evans_cmd);
    spectral(evans_cmd);
    auto* forms_cmd = app.add_subcommand("forms", "Largest eigenvalue of the discretized quadratic form");
    point(forms_cmd);
    common(forms_cmd);
    forms_cmd->add_option("--form-n", f.form_n, "Form grid size (default: resolve the fastest scale)");
    auto* scan_cmd = app.add_subcommand("scan", "Grid scan: scan.csv and summary.json");
    common(scan_cmd);
    spectral(scan_cmd);
    scan_cmd->add_option("--jobs", f.jobs, "Worker threads");
    scan_cmd->add_option("--form-n", f.form_n, "Form grid size");
    auto* ineq_cmd = app.add_subcommand("inequalities", "Exact inequality certificates -> certificates.json");
    ineq_cmd->add_option("--config", f.config, "key=value configuration file");
    ineq_cmd->add_option("--out", f.out, "Output directory");
    ineq_cmd->add_flag("--inject-sign-flip", f.inject_sign_flip)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*classify_cmd) return cmd_classify(f);
        if (*profile_cmd) return cmd_profile(f);
        if (*coeff_cmd) return cmd_coefficients(f);
        if (*evans_cmd) return cmd_evans(f);
        if (*forms_cmd) return cmd_forms(f);
        if (*scan_cmd) return cmd_scan(f);
        if (*ineq_cmd) return cmd_inequalities(f);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
