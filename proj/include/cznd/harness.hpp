#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cznd/models.hpp"
#include "cznd/ode.hpp"
#include "cznd/problem.hpp"

namespace cznd {

/// SplitMix64: the fixed, documented PRNG behind every experiment.  Identical
/// (seed, spec) pairs reproduce bit-identical initial states and outputs.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform double in [-range, range].
    double next_symmetric(double range) { return (2.0 * next_double() - 1.0) * range; }
};

struct ExperimentSpec {
    std::string problem = "example3";  // builtin name or .tvp path
    std::string model = "con-cznd1-conj";
    Gain gamma{10.0, 0.0};
    double span_begin = 0.0;
    double span_end = 10.0;
    int runs = 8;
    double init_range = 5.0;
    std::uint64_t seed = 0;
    IntegratorConfig integrator;
    std::string out_prefix;  // empty disables file output
};

struct RunResult {
    bool ok = false;
    std::string error;
    Trajectory trajectory;
    double final_residual = 0.0;
    double residual_at_2 = 0.0;
    double min_cond = 0.0;
    double max_cond = 0.0;
};

struct RunReport {
    std::vector<RunResult> runs;
    double median_final_residual = 0.0;
    double median_residual_at_2 = 0.0;
    int failures = 0;
    std::vector<std::string> csv_files;
};

/// Parse "10", "10+20i", "10-20i" (also accepts "3i" for the imaginary part
/// alone, which Gain will reject).
Gain parse_gain(const std::string& text);
std::string gain_to_string(const Gain& g);

TvsscmeProblem resolve_problem(const std::string& name_or_path);
ModelSystem build_model(const std::string& name, const TvsscmeProblem& p, Gain gamma);

/// Residual per the harness convention: ||X_R - X_R*||_F when an exact
/// solution exists, otherwise the equation residual ||XF - A conj(X) - C||_F.
ResidualFn make_residual_fn(const TvsscmeProblem& p);

/// Initial states drawn once per run index, model-independent.
std::vector<RVector> draw_initial_states(const ExperimentSpec& spec, std::size_t dim);

/// One experiment batch: per-run CSVs plus an aggregate CSV.
RunReport run_experiment(const ExperimentSpec& spec);

/// Same seed-derived initial states across all gamma values; wide CSV of
/// residual columns per gamma, one file per run index.
RunReport gamma_sweep(const ExperimentSpec& spec, const std::vector<Gain>& gammas,
                      std::vector<std::vector<Trajectory>>* trajectories = nullptr);

/// Shared initial states across models; log10-residual comparison CSV.
RunReport compare_models(const ExperimentSpec& spec,
                         const std::vector<std::string>& models,
                         std::vector<std::vector<Trajectory>>* trajectories = nullptr);

// --- CSV ---

std::vector<std::string> trajectory_csv_header(std::size_t m, std::size_t n);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t m, std::size_t n);
Trajectory read_trajectory_csv(const std::string& path);
std::string format_full(double v);  // 17 significant digits

void write_uniqueness_csv(const std::string& path, const UniquenessReport& rep);

}  // namespace cznd
