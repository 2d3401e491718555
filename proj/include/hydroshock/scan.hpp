#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hydroshock/inequalities.hpp"
#include "hydroshock/model.hpp"
#include "hydroshock/sturm_forms.hpp"

namespace hydroshock {

struct GridRange {
    double min = 0.0, max = 0.0;
    int count = 1;
    std::vector<double> values() const;  // count == 1 gives {min}
};

// Batch configuration. File form: key=value lines grouped in [sections], '#' comments.
//   [grid]      froude_min froude_max froude_count h_right_min h_right_max h_right_count
//   [contour]   radius r_indent
//   [numerics]  profile_n form_n profile_tol evans_tol winding_samples
//   [run]       jobs out_dir
//   [inequalities] nu_min nu_max nu_count nu_tilde_min nu_tilde_max nu_tilde_count
// Rational inequality bounds accept "a/b" or exact decimals; min and max go together.
struct ScanConfig {
    GridRange froude{0.3, 1.9, 10};
    GridRange h_right{0.05, 0.95, 10};
    double radius = 10.0;
    double r_indent = 0.01;
    int profile_n = 4000;
    int form_n = 0;  // <= 0: per-profile recommendation
    double profile_tol = 1e-9;
    double evans_tol = 1e-8;
    int winding_samples = 96;
    int jobs = 1;
    std::string out_dir = "hydroshock_out";

    // Inequality sample sets; unset keeps the default sets.
    std::optional<mpq_class> nu_min, nu_max, nu_tilde_min, nu_tilde_max;
    int nu_count = 200, nu_tilde_count = 200;

    void validate() const;  // DomainError
};

ScanConfig parse_scan_config(std::istream& in);
ScanConfig load_scan_config(const std::string& path);
std::string to_string(const ScanConfig& cfg);

// Exact rational from "a/b", an integer or a decimal literal.
mpq_class parse_rational(const std::string& text);

SampleSet nu_sample_set(const ScanConfig& cfg);
SampleSet nu_tilde_sample_set(const ScanConfig& cfg);

struct ScanRow {
    double froude = 0.0, h_right = 0.0;
    ProfileClass cls = ProfileClass::smooth;
    double speed = 0.0;
    std::optional<double> h_star;
    std::optional<int> winding;
    std::optional<double> max_eig;
    std::vector<SignReport> signs;
    std::string error;  // numerical failure at this point, empty if none
    double wall_seconds = 0.0;

    bool stable() const;  // winding 0 and max_eig < 0, or degenerate
};

struct ScanResult {
    std::vector<ScanRow> rows;  // grid order: H_R fastest
    double wall_seconds = 0.0;
    int exit_code() const;      // 0 pass, 1 stability failure, 3 numerical failure
};

ScanRow scan_point(double froude, double h_right, const ScanConfig& cfg);
ScanResult run_scan(const ScanConfig& cfg, std::ostream* progress = nullptr);

// Fixed columns, documented in the README. Wall times are left out so reruns are byte-identical.
void write_scan_csv(const ScanResult& r, std::ostream& os);
std::string scan_summary_json(const ScanConfig& cfg, const ScanResult& r, int indent = 2);

} // namespace hydroshock
