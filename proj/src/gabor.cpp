#include "dsf/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "dsf/error.hpp"
#include "dsf/rng.hpp"

namespace dsf::gabor {

namespace {

long wrap(long a, long n) {
    const long r = a % n;
    return r < 0 ? r + n : r;
}

// exp(2 pi i r / N) with r reduced first so the angle stays in [0, 2 pi).
Complex unit_root(long r, long N) {
    const double angle = 2.0 * kPi * static_cast<double>(wrap(r, N)) / static_cast<double>(N);
    return {std::cos(angle), std::sin(angle)};
}

// Running maximum. Values within kTieTol of the maximum count as ties and
// resolve to the smallest pair, so roundoff does not move the argmax.
struct Best {
    static constexpr double kTieTol = 1e-12;
    double value = -1.0;
    std::pair<std::size_t, std::size_t> pair{0, 0};

    void offer(double v, std::size_t i, std::size_t j) {
        if (i > j) std::swap(i, j);
        if (v > value + kTieTol || (v >= value - kTieTol && std::make_pair(i, j) < pair)) pair = {i, j};
        value = std::max(value, v);
    }
};

}  // namespace

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::difference_set: return "difference_set";
        case GeneratorKind::alltop: return "alltop";
        case GeneratorKind::random_torus: return "random_torus";
        case GeneratorKind::custom: return "custom";
    }
    return "custom";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
    for (auto k : {GeneratorKind::difference_set, GeneratorKind::alltop, GeneratorKind::random_torus,
                   GeneratorKind::custom})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

Generator::Generator(CVector values, GeneratorKind kind)
    : values_(std::move(values)), kind_(kind), norm_(values_.norm()) {}

Generator Generator::from_difference_set(const diffset::DifferenceSet& ds) {
    Generator g(diffset::normalized_generator(ds), GeneratorKind::difference_set);
    g.params_ = ds.params();
    return g;
}

Generator Generator::scaled(Complex factor) const {
    Generator g(values_ * factor, kind_);
    g.params_ = params_;
    return g;
}

CVector translate(const CVector& g, long k) {
    const long N = g.size();
    CVector out(N);
    for (long n = 0; n < N; ++n) out(n) = g(wrap(n - k, N));
    return out;
}

CVector modulate(const CVector& g, long j) {
    const long N = g.size();
    CVector out(N);
    for (long n = 0; n < N; ++n) out(n) = unit_root(j * n, N) * g(n);
    return out;
}

GaborFrame::GaborFrame(Generator g) : generator_(std::move(g)), tightness_error_(0.0) {
    const long N = generator_.dimension();
    if (N == 0 || generator_.norm() == 0.0) throw InvalidInput("Gabor frame needs a nonzero generator");

    const CVector& v = generator_.values();
    columns_.resize(N, N * N);
    for (long k = 0; k < N; ++k)
        for (long j = 0; j < N; ++j) {
            const auto c = static_cast<Eigen::Index>(column_index(static_cast<int>(k), static_cast<int>(j),
                                                                  static_cast<int>(N)));
            for (long n = 0; n < N; ++n) columns_(n, c) = unit_root(j * n, N) * v(wrap(n - k, N));
        }

    const double bound = static_cast<double>(N) * generator_.norm() * generator_.norm();
    CMatrix S = columns_ * columns_.adjoint();
    S.diagonal().array() -= bound;
    tightness_error_ = S.cwiseAbs().maxCoeff();
}

GaborFrame build_gabor_frame(const Generator& g) { return GaborFrame(g); }

double welch_bound(std::size_t vectors, std::size_t dimension) {
    if (dimension == 0) throw InvalidInput("Welch bound needs a positive dimension");
    if (vectors < dimension)
        throw InvalidInput("Welch bound is undefined for fewer vectors than dimensions");
    if (vectors == dimension) return 0.0;
    const auto M = static_cast<double>(vectors);
    const auto N = static_cast<double>(dimension);
    return std::sqrt((M - N) / (N * (M - 1.0)));
}

double predicted_coherence(const diffset::Params& p) {
    if (!p.valid()) throw InvalidInput("invalid difference set parameters " + diffset::to_string(p));
    const double N = p.N, K = p.K;
    const double diagonal = std::sqrt((N - K) / (K * (N - 1.0)));
    if (p.lambda == 1) return diagonal;
    return std::max((K - 1.0) / (N - 1.0), diagonal);
}

CoherenceReport mutual_coherence(const GaborFrame& frame) {
    const int N = frame.dimension();
    const double scale = 1.0 / (frame.generator().norm() * frame.generator().norm());

    Best best;
    double diag_block = 0.0;
    double offdiag_block = 0.0;
    for (int r = 0; r < N; ++r) {
        const auto Br = frame.block(r);
        for (int q = r; q < N; ++q) {
            const CMatrix G = Br.adjoint() * frame.block(q);
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                    if (r == q && a == b) continue;
                    const double v = std::abs(G(a, b)) * scale;
                    const std::size_t i = GaborFrame::column_index(r, a, N);
                    const std::size_t j = GaborFrame::column_index(q, b, N);
                    best.offer(v, i, j);
                    if (r == q)
                        diag_block = std::max(diag_block, v);
                    else
                        offdiag_block = std::max(offdiag_block, v);
                }
        }
    }

    CoherenceReport report;
    report.mutual_coherence = std::max(best.value, 0.0);
    report.argmax_pair = best.pair;
    report.diagonal_block_offdiag_value = diag_block;
    report.offdiag_block_max = offdiag_block;
    report.welch_bound = welch_bound(static_cast<std::size_t>(N) * N, static_cast<std::size_t>(N));
    if (const auto& p = frame.generator().params()) report.predicted = predicted_coherence(*p);
    return report;
}

double column_coherence(const CMatrix& columns) {
    const Eigen::Index M = columns.cols();
    RVector norms = columns.colwise().norm().transpose();
    if (M > 0 && norms.minCoeff() == 0.0) throw InvalidInput("coherence undefined for zero columns");
    const CMatrix G = columns.adjoint() * columns;
    double best = 0.0;
    for (Eigen::Index i = 0; i < M; ++i)
        for (Eigen::Index j = i + 1; j < M; ++j) best = std::max(best, std::abs(G(i, j)) / (norms(i) * norms(j)));
    return best;
}

double fast_mutual_coherence(const Generator& g) {
    const long N = g.dimension();
    if (N == 0 || g.norm() == 0.0) throw InvalidInput("coherence needs a nonzero generator");
    const CVector& v = g.values();
    Eigen::FFT<double> fft;
    std::vector<Complex> h(static_cast<std::size_t>(N));
    std::vector<Complex> spectrum;
    double best = 0.0;
    for (long d = 0; d < N; ++d) {
        for (long n = 0; n < N; ++n) h[static_cast<std::size_t>(n)] = v(n) * std::conj(v(wrap(n - d, N)));
        fft.fwd(spectrum, h);
        for (long f = (d == 0 ? 1 : 0); f < N; ++f) best = std::max(best, std::abs(spectrum[static_cast<std::size_t>(f)]));
    }
    return best / (g.norm() * g.norm());
}

BlockProfile block_coherence_profile(const GaborFrame& frame, const diffset::Params& params) {
    const auto& gp = frame.generator().params();
    if (frame.generator().kind() != GeneratorKind::difference_set || !gp || *gp != params)
        throw UnsupportedParameters("block profile requires a frame generated by a " + diffset::to_string(params) +
                                    " difference set");
    const int N = frame.dimension();
    const double N_ = params.N, K_ = params.K;

    BlockProfile prof;
    prof.expected_diagonal_value = std::sqrt((N_ - K_) / (K_ * (N_ - 1.0)));
    prof.expected_offdiag_max = static_cast<double>(params.lambda) / K_;
    prof.diagonal_block_min.assign(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
    prof.diagonal_block_max.assign(static_cast<std::size_t>(N), 0.0);
    prof.offdiag_block_min = std::numeric_limits<double>::infinity();

    for (int r = 0; r < N; ++r) {
        const auto Br = frame.block(r);
        for (int q = r; q < N; ++q) {
            const CMatrix G = Br.adjoint() * frame.block(q);
            if (r == q) {
                for (int a = 0; a < N; ++a) {
                    prof.unit_diagonal_error = std::max(prof.unit_diagonal_error, std::abs(G(a, a) - 1.0));
                    for (int b = 0; b < N; ++b) {
                        if (a == b) continue;
                        const double v = std::abs(G(a, b));
                        auto k = static_cast<std::size_t>(r);
                        prof.diagonal_block_min[k] = std::min(prof.diagonal_block_min[k], v);
                        prof.diagonal_block_max[k] = std::max(prof.diagonal_block_max[k], v);
                    }
                }
            } else {
                const RVector mags = G.cwiseAbs().reshaped();
                prof.offdiag_block_min = std::min(prof.offdiag_block_min, mags.minCoeff());
                prof.offdiag_block_max = std::max(prof.offdiag_block_max, mags.maxCoeff());
            }
        }
    }
    if (N == 1) prof.offdiag_block_min = 0.0;
    return prof;
}

EtfDiagnostics is_etf(const CMatrix& vectors, double tol) {
    EtfDiagnostics d;
    const Eigen::Index M = vectors.cols();
    if (M == 0) return d;

    const RVector norms = vectors.colwise().norm().transpose();
    const double ref = norms(0);
    d.equal_norm = ref > 0.0 && (norms.array() - ref).abs().maxCoeff() <= tol * ref;
    if (ref == 0.0 || norms.minCoeff() == 0.0) return d;

    const CMatrix S = vectors * vectors.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(S, Eigen::EigenvaluesOnly);
    const RVector& ev = eig.eigenvalues();
    const double top = ev.maxCoeff();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > 1e-8 * top) {
            ++d.span_dimension;
            lo = std::min(lo, ev(i));
            hi = std::max(hi, ev(i));
        }
    d.frame_bound = hi;
    d.tight = (hi - lo) <= tol * std::max(1.0, hi);

    const CMatrix G = vectors.adjoint() * vectors;
    d.min_abs_inner = std::numeric_limits<double>::infinity();
    d.max_abs_inner = 0.0;
    for (Eigen::Index i = 0; i < M; ++i)
        for (Eigen::Index j = i + 1; j < M; ++j) {
            const double v = std::abs(G(i, j)) / (norms(i) * norms(j));
            d.min_abs_inner = std::min(d.min_abs_inner, v);
            d.max_abs_inner = std::max(d.max_abs_inner, v);
        }
    if (M == 1) d.min_abs_inner = 0.0;
    d.equiangular = d.max_abs_inner - d.min_abs_inner <= tol;
    if (static_cast<std::size_t>(M) >= d.span_dimension && d.span_dimension > 0)
        d.welch = welch_bound(static_cast<std::size_t>(M), d.span_dimension);
    d.is_etf = d.equal_norm && d.tight && d.equiangular;
    return d;
}

EtfDiagnostics is_etf(const GaborFrame& frame, double tol) { return is_etf(frame.columns(), tol); }

Generator alltop_generator(int N) {
    if (N < 5 || !diffset::is_prime(N))
        throw UnsupportedParameters("Alltop generator needs a prime N >= 5, got " + std::to_string(N));
    CVector v(N);
    const double amp = 1.0 / std::sqrt(static_cast<double>(N));
    for (long j = 0; j < N; ++j) v(j) = amp * unit_root(j * j % N * j, N);
    return Generator(std::move(v), GeneratorKind::alltop);
}

Generator random_torus_generator(int N, std::uint64_t seed) {
    if (N < 1) throw InvalidInput("random generator needs N >= 1");
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CVector v(N);
    const double amp = 1.0 / std::sqrt(static_cast<double>(N));
    for (int j = 0; j < N; ++j) v(j) = std::polar(amp, 2.0 * kPi * u(rng));
    return Generator(std::move(v), GeneratorKind::random_torus);
}

}  // namespace dsf::gabor
