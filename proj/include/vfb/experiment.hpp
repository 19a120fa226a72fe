#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vfb/energy.hpp"
#include "vfb/params.hpp"
#include "vfb/radial.hpp"
#include "vfb/weights.hpp"

namespace vfb {

// One experiment = one flat JSON object; every field has a default and any
// unknown key is rejected so configs cannot silently drift.
struct RunConfig {
    double gamma = 2.0;
    double delta = 1e-3;
    double eps = 1e-2;            // initial-data amplitude
    int n = 129;
    double dtau = 1e-3;
    double tau_max = 1.0;
    int output_stride = 10;
    double cfl = 0.8;
    double r_asymptotic = 0.9;
    int norm_order = 2;
    double cutoff_inner = 0.5;
    double cutoff_outer = 0.75;
    std::string initial = "perturbation"; // "perturbation" | "affine"
    double lambda0 = 1.0;
    double lambdadot0 = 1.05;
    std::string label = "run";
    // Sweep axes; an empty list means "use the scalar field".
    std::vector<double> gamma_list;
    std::vector<double> delta_list;
    std::vector<double> eps_list;
};

// Strict parse: unknown key or out-of-range value throws
// std::invalid_argument naming the field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical serialization (sorted keys, every field present) and its FNV-1a
// hash; identical configs hash identically across platforms.
std::string canonical_config(const RunConfig& c);
std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const RunConfig& c); // 16 hex digits

// Initial data families. "perturbation": phi = r(1 + eps(1-r^2)),
// nu = eps r(1-r^2). "affine": phi = lambda0 r, nu = (lambdadot0-lambda0) r.
std::function<double(double)> initial_phi(const RunConfig& c);
std::function<double(double)> initial_nu(const RunConfig& c);

struct RunRecord {
    std::string label;
    std::string hash;
    std::string status; // completed | apriori_violation(...) | inverted_map(...) | cfl_violation(...) | error(...)
    double wall_seconds = 0.0;
    double sup_S = 0.0;        // running-sup energy at the final frame
    bool apriori_clean = true; // no frame tripped a monitor flag
    std::vector<EnergyReport> reports;
};

RunRecord run_experiment(const RunConfig& c);

// Fixed-schema CSV (and a gnuplot-ready .dat mirror) written atomically via
// temp file + rename; deterministic bytes for a given record.
void write_csv(const RunRecord& rec, const std::string& path);
void write_dat(const RunRecord& rec, const std::string& path);

// Output root: the VFBLAB_OUT_DIR environment variable when set, else the
// fallback.
std::string output_root(const std::string& fallback);

// Cartesian product over the sweep axes, executed on `workers` threads; a
// job that throws is reported in its record's status and never disturbs
// siblings. When out_dir is nonempty each record is written to
// out_dir/<label>-<hash>.csv (+ .dat).
std::vector<RunRecord> sweep_experiment(const RunConfig& base, int workers,
                                        const std::string& out_dir);

struct ConvergenceRow {
    int n = 0;
    double dtau = 0.0;
    double error = 0.0; // sup-norm against the affine oracle (spatial mode)
                        // or against the next-finer step (temporal mode)
    double ratio = 0.0; // error(previous level)/error (NaN on the first row)
};

// Richardson table against the affine oracle. Spatial mode halves h toward
// the configured n; temporal mode halves dtau at fixed n and measures
// self-convergence. Throws std::invalid_argument for fewer than 3 levels or
// non-affine initial data.
std::vector<ConvergenceRow> convergence_study(const RunConfig& base, int levels,
                                              bool temporal = false);

} // namespace vfb
