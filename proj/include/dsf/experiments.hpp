#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsf/fusion.hpp"
#include "dsf/gabor.hpp"
#include "dsf/solvers.hpp"
#include "dsf/types.hpp"

namespace dsf::experiments {

struct CurvePoint {
    int x = 0;  // sparsity k or measurement count n, depending on the curve
    int successes = 0;
    int trials = 0;
    double rate() const noexcept { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct RecoveryCurve {
    std::string experiment;  // "classic" or "fusion"
    std::string label;
    std::vector<CurvePoint> points;
};

struct ClassicExperimentConfig {
    int N = 43;
    std::vector<gabor::GeneratorKind> generators{gabor::GeneratorKind::alltop, gabor::GeneratorKind::random_torus,
                                                 gabor::GeneratorKind::difference_set};
    // Size of the difference set; the set itself comes from the catalog.
    int K = 21;
    std::vector<int> sparsities;
    int trials = 50;
    std::uint64_t seed = 0;
    double threshold = 1e-6;
    solvers::SolverConfig solver;
    // Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;

    // Throws ConfigurationError.
    void validate() const;
};

struct FusionExperimentConfig {
    int N = 40;
    int K = 13;
    std::vector<int> measurements;
    std::vector<int> sparsities;
    int trials = 50;
    std::uint64_t seed = 0;
    double threshold = 1e-6;
    bool complex_signal = true;
    bool complex_coefficients = false;
    solvers::SolverConfig solver;
    unsigned threads = 0;

    void validate() const;
};

// k entries r exp(2 pi i theta), r ~ N(0,1), theta ~ U[0,1), on a uniformly
// random support. Throws InvalidInput unless 1 <= k <= dim.
CVector random_k_sparse_signal(int dim, int k, std::uint64_t seed);

// Stacked coefficients (N_sub blocks of size K) with exactly k nonzero
// blocks chosen uniformly. Active entries are i.i.d. circular complex normal
// with unit variance, or real standard normal when complex_values is false.
CVector random_fusion_sparse_signal(const fusion::FusionFrame& ff, int k, std::uint64_t seed,
                                    bool complex_values = true);

// ||x_hat - x||^2 / ||x||^2; throws InvalidInput for a zero reference.
double normalized_squared_error(const CVector& x_hat, const CVector& x);

// Seeds used by the experiment runners. Every (stream, x, k, t) tuple maps
// to a distinct 64-bit seed through splitmix64.
std::uint64_t trial_seed(std::uint64_t master, std::string_view stream, int x, int k, int t);

// One curve per generator kind, x = sparsity. The signal for trial (k, t) is
// shared across generators; the random-torus window is redrawn every trial.
std::vector<RecoveryCurve> run_classic_experiment(const ClassicExperimentConfig& cfg);

// One curve per measurement count n, x = fusion sparsity k.
std::vector<RecoveryCurve> run_fusion_experiment(const FusionExperimentConfig& cfg);

// CSV "experiment,label,x,successes,trials,rate"; rate with 6 decimals.
std::string curves_to_csv(const std::vector<RecoveryCurve>& curves);
// Writes curves_to_csv; throws IoError.
void emit_curves(const std::vector<RecoveryCurve>& curves, const std::filesystem::path& path);

// Points where the rate rises above an earlier point by more than `slack`
// (curves expected to fall with k).
std::vector<std::string> decreasing_violations(const RecoveryCurve& curve, double slack);
// Points where a later curve (larger n) falls below an earlier one at the
// same x by more than `slack`.
std::vector<std::string> ordering_violations(const std::vector<RecoveryCurve>& curves, double slack);

// Runs fn(0..count-1) on a worker pool. Each index is handled exactly once;
// results must be written to per-index slots.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace dsf::experiments
