#include "dsf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "dsf/diffset.hpp"
#include "dsf/error.hpp"
#include "dsf/rng.hpp"

namespace dsf::experiments {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigurationError(what);
}

}  // namespace

void ClassicExperimentConfig::validate() const {
    require(N >= 2, "N must be at least 2");
    require(trials >= 1, "trials must be at least 1");
    require(!generators.empty(), "at least one generator kind is required");
    require(!sparsities.empty(), "sparsity grid is empty");
    for (int k : sparsities) require(k >= 1 && k <= N * N, "sparsity " + std::to_string(k) + " outside [1, N^2]");
    require(threshold > 0.0, "success threshold must be positive");
    for (auto g : generators) require(g != gabor::GeneratorKind::custom, "custom generators are not supported here");
}

void FusionExperimentConfig::validate() const {
    require(N >= 2 && K >= 1 && K <= N, "invalid difference set size");
    require(trials >= 1, "trials must be at least 1");
    require(!measurements.empty(), "measurement grid is empty");
    for (int n : measurements) require(n >= 1, "measurement counts must be positive");
    require(!sparsities.empty(), "sparsity grid is empty");
    for (int k : sparsities) require(k >= 1 && k <= N, "fusion sparsity " + std::to_string(k) + " outside [1, N]");
    require(threshold > 0.0, "success threshold must be positive");
}

namespace {

// First k entries of a partial Fisher-Yates shuffle of 0..dim-1.
std::vector<int> random_support(int dim, int k, Rng& rng) {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> pick(i, dim - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

}  // namespace

CVector random_k_sparse_signal(int dim, int k, std::uint64_t seed) {
    if (k < 1 || k > dim) throw InvalidInput("need 1 <= k <= dim");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 1.0);
    CVector x = CVector::Zero(dim);
    for (int s : random_support(dim, k, rng)) {
        const double r = normal(rng);
        const double theta = phase(rng);
        x(s) = r * std::polar(1.0, 2.0 * kPi * theta);
    }
    return x;
}

CVector random_fusion_sparse_signal(const fusion::FusionFrame& ff, int k, std::uint64_t seed, bool complex_values) {
    const int blocks = static_cast<int>(ff.size());
    if (k < 1 || k > blocks) throw InvalidInput("need 1 <= k <= number of subspaces");
    const int m = ff.subspace(0).dimension();
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double s = complex_values ? std::sqrt(0.5) : 1.0;
    CVector c = CVector::Zero(static_cast<Eigen::Index>(blocks) * m);
    for (int j : random_support(blocks, k, rng))
        for (int i = 0; i < m; ++i) {
            const double re = normal(rng);
            const double im = complex_values ? normal(rng) : 0.0;
            c(static_cast<Eigen::Index>(j) * m + i) = Complex(re * s, im * s);
        }
    return c;
}

double normalized_squared_error(const CVector& x_hat, const CVector& x) {
    const double ref = x.squaredNorm();
    if (ref == 0.0) throw InvalidInput("normalized error needs a nonzero reference signal");
    if (x_hat.size() != x.size()) throw InvalidInput("signal lengths differ");
    return (x_hat - x).squaredNorm() / ref;
}

std::uint64_t trial_seed(std::uint64_t master, std::string_view stream, int x, int k, int t) {
    return mix_seed(master, {label_hash(stream), static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(k),
                             static_cast<std::uint64_t>(t)});
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<RecoveryCurve> run_classic_experiment(const ClassicExperimentConfig& cfg) {
    cfg.validate();
    cfg.solver.validate();
    using gabor::GeneratorKind;

    // Deterministic windows are built once.
    std::vector<std::optional<gabor::GaborFrame>> fixed(cfg.generators.size());
    for (std::size_t g = 0; g < cfg.generators.size(); ++g) {
        switch (cfg.generators[g]) {
            case GeneratorKind::difference_set: {
                const auto ds = diffset::catalog_lookup(cfg.N, cfg.K);
                require(ds.has_value(), "no (" + std::to_string(cfg.N) + "," + std::to_string(cfg.K) +
                                            ") difference set in the catalog");
                fixed[g].emplace(gabor::Generator::from_difference_set(*ds));
                break;
            }
            case GeneratorKind::alltop:
                try {
                    fixed[g].emplace(gabor::alltop_generator(cfg.N));
                } catch (const UnsupportedParameters& e) {
                    throw ConfigurationError(e.what());
                }
                break;
            default: break;
        }
    }

    const std::size_t G = cfg.generators.size();
    const std::size_t T = static_cast<std::size_t>(cfg.trials);
    const std::size_t jobs = cfg.sparsities.size() * T;
    std::vector<char> success(jobs * G, 0);

    parallel_for(jobs, cfg.threads, [&](std::size_t job) {
        const int k = cfg.sparsities[job / T];
        const int t = static_cast<int>(job % T);
        const CVector x = random_k_sparse_signal(cfg.N * cfg.N, k, trial_seed(cfg.seed, "classic/signal", 0, k, t));
        for (std::size_t g = 0; g < G; ++g) {
            std::optional<gabor::GaborFrame> fresh;
            if (cfg.generators[g] == GeneratorKind::random_torus)
                fresh.emplace(gabor::random_torus_generator(
                    cfg.N, trial_seed(cfg.seed, "classic/random_torus", 0, k, t)));
            const gabor::GaborFrame& frame = fresh ? *fresh : *fixed[g];
            const CVector y = frame.columns() * x;
            const auto res = solvers::basis_pursuit(frame.columns(), y, cfg.solver);
            success[job * G + g] = normalized_squared_error(res.solution, x) < cfg.threshold ? 1 : 0;
        }
    });

    std::vector<RecoveryCurve> curves;
    for (std::size_t g = 0; g < G; ++g) {
        RecoveryCurve c{"classic", std::string(gabor::to_string(cfg.generators[g])), {}};
        for (std::size_t ki = 0; ki < cfg.sparsities.size(); ++ki) {
            CurvePoint p{cfg.sparsities[ki], 0, cfg.trials};
            for (std::size_t t = 0; t < T; ++t) p.successes += success[(ki * T + t) * G + g];
            c.points.push_back(p);
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

std::vector<RecoveryCurve> run_fusion_experiment(const FusionExperimentConfig& cfg) {
    cfg.validate();
    cfg.solver.validate();
    const auto ds = diffset::catalog_lookup(cfg.N, cfg.K);
    require(ds.has_value(),
            "no (" + std::to_string(cfg.N) + "," + std::to_string(cfg.K) + ") difference set in the catalog");
    const auto ff = fusion::build_fusion_frame(*ds);

    const std::size_t T = static_cast<std::size_t>(cfg.trials);
    const std::size_t Kn = cfg.sparsities.size();
    const std::size_t jobs = cfg.measurements.size() * Kn * T;
    std::vector<char> success(jobs, 0);

    parallel_for(jobs, cfg.threads, [&](std::size_t job) {
        const int n = cfg.measurements[job / (Kn * T)];
        const int k = cfg.sparsities[(job / T) % Kn];
        const int t = static_cast<int>(job % T);
        const CMatrix a = solvers::gaussian_measurement_coefficients(
            n, static_cast<int>(ff.size()), trial_seed(cfg.seed, "fusion/coefficients", n, k, t),
            cfg.complex_coefficients);
        const auto op = solvers::assemble_fusion_operator(a, ff);
        const CVector c =
            random_fusion_sparse_signal(ff, k, trial_seed(cfg.seed, "fusion/signal", n, k, t), cfg.complex_signal);
        const CVector y = op.effective * c;
        const auto res = solvers::block_basis_pursuit(op.effective, y, op.blocks, cfg.solver);
        success[job] = normalized_squared_error(res.solution, c) < cfg.threshold ? 1 : 0;
    });

    std::vector<RecoveryCurve> curves;
    for (std::size_t ni = 0; ni < cfg.measurements.size(); ++ni) {
        RecoveryCurve c{"fusion", "n=" + std::to_string(cfg.measurements[ni]), {}};
        for (std::size_t ki = 0; ki < Kn; ++ki) {
            CurvePoint p{cfg.sparsities[ki], 0, cfg.trials};
            for (std::size_t t = 0; t < T; ++t) p.successes += success[(ni * Kn + ki) * T + t];
            c.points.push_back(p);
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

std::string curves_to_csv(const std::vector<RecoveryCurve>& curves) {
    std::string out = "experiment,label,x,successes,trials,rate\n";
    char rate[32];
    for (const auto& c : curves)
        for (const auto& p : c.points) {
            std::snprintf(rate, sizeof rate, "%.6f", p.rate());
            out += c.experiment + "," + c.label + "," + std::to_string(p.x) + "," + std::to_string(p.successes) +
                   "," + std::to_string(p.trials) + "," + rate + "\n";
        }
    return out;
}

void emit_curves(const std::vector<RecoveryCurve>& curves, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << curves_to_csv(curves);
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::vector<std::string> decreasing_violations(const RecoveryCurve& curve, double slack) {
    std::vector<std::string> out;
    double lowest = 2.0;
    int lowest_x = 0;
    for (const auto& p : curve.points) {
        if (p.rate() > lowest + slack)
            out.push_back(curve.label + ": rate " + std::to_string(p.rate()) + " at x=" + std::to_string(p.x) +
                          " exceeds " + std::to_string(lowest) + " at x=" + std::to_string(lowest_x));
        if (p.rate() < lowest) {
            lowest = p.rate();
            lowest_x = p.x;
        }
    }
    return out;
}

std::vector<std::string> ordering_violations(const std::vector<RecoveryCurve>& curves, double slack) {
    std::vector<std::string> out;
    for (std::size_t a = 0; a < curves.size(); ++a)
        for (std::size_t b = a + 1; b < curves.size(); ++b)
            for (const auto& pa : curves[a].points)
                for (const auto& pb : curves[b].points)
                    if (pa.x == pb.x && pb.rate() + slack < pa.rate())
                        out.push_back(curves[b].label + " below " + curves[a].label + " at x=" + std::to_string(pa.x));
    return out;
}

}  // namespace dsf::experiments
