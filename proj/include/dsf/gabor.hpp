#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "dsf/diffset.hpp"
#include "dsf/types.hpp"

namespace dsf::gabor {

enum class GeneratorKind { difference_set, alltop, random_torus, custom };

std::string_view to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);

// Window vector g in C^N. The norm is recomputed on construction.
class Generator {
public:
    explicit Generator(CVector values, GeneratorKind kind = GeneratorKind::custom);

    static Generator from_difference_set(const diffset::DifferenceSet& ds);

    const CVector& values() const noexcept { return values_; }
    GeneratorKind kind() const noexcept { return kind_; }
    double norm() const noexcept { return norm_; }
    int dimension() const noexcept { return static_cast<int>(values_.size()); }
    // Set for difference-set generators only.
    const std::optional<diffset::Params>& params() const noexcept { return params_; }

    // Copy multiplied by a scalar, keeping kind and params.
    Generator scaled(Complex factor) const;

private:
    CVector values_;
    GeneratorKind kind_;
    double norm_;
    std::optional<diffset::Params> params_;
};

// T_k g(n) = g(n - k mod N)
CVector translate(const CVector& g, long k);
// M_j g(n) = exp(2 pi i j n / N) g(n)
CVector modulate(const CVector& g, long j);

// The N x N^2 matrix of all time-frequency shifts M_j T_k g. Column
// c(k, j) = k N + j, so translation k occupies the contiguous block
// B_k = [M_0 T_k g, ..., M_{N-1} T_k g].
class GaborFrame {
public:
    // Throws InvalidInput for a zero generator.
    explicit GaborFrame(Generator g);

    const Generator& generator() const noexcept { return generator_; }
    int dimension() const noexcept { return generator_.dimension(); }
    const CMatrix& columns() const noexcept { return columns_; }
    auto block(int k) const { return columns_.middleCols(static_cast<Eigen::Index>(k) * dimension(), dimension()); }

    static std::size_t column_index(int k, int j, int N) noexcept {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(N) + static_cast<std::size_t>(j);
    }

    // max |Phi Phi^* - N ||g||^2 I|, computed at construction.
    double tightness_error() const noexcept { return tightness_error_; }
    bool is_tight(double tol = 1e-9) const noexcept { return tightness_error_ < tol; }

private:
    Generator generator_;
    CMatrix columns_;
    double tightness_error_;
};

GaborFrame build_gabor_frame(const Generator& g);

struct CoherenceReport {
    double mutual_coherence = 0.0;
    std::pair<std::size_t, std::size_t> argmax_pair{0, 0};
    // Largest off-diagonal |entry| over the diagonal Gram blocks B_k^* B_k.
    double diagonal_block_offdiag_value = 0.0;
    // Largest |entry| over the blocks B_r^* B_q, r != q.
    double offdiag_block_max = 0.0;
    double welch_bound = 0.0;
    // Closed form, for difference-set generators.
    std::optional<double> predicted;
};

// Brute-force scan of the normalized Gram matrix, O(N^4). Ties resolve to
// the lexicographically smallest (i, j), i < j, among values within 1e-12
// of the maximum.
CoherenceReport mutual_coherence(const GaborFrame& frame);

// Brute-force max_{i<j} |<a_i, a_j>| / (|a_i| |a_j|) for any column family.
double column_coherence(const CMatrix& columns);

// O(N^2 log N) route: |<M_l T_q g, M_j T_r g>| is the modulus of one DFT
// coefficient of g(n) conj(g(n-d)), d = r - q.
double fast_mutual_coherence(const Generator& g);

// sqrt((N-K)/(K(N-1))) when lambda = 1, otherwise
// max{(K-1)/(N-1), sqrt((N-K)/(K(N-1)))}.
double predicted_coherence(const diffset::Params& params);

// sqrt((M-N)/(N(M-1))) for M vectors in dimension N. Returns 0 when M == N
// and throws InvalidInput when M < N or N == 0.
double welch_bound(std::size_t vectors, std::size_t dimension);

struct BlockProfile {
    // Per translation k: extreme off-diagonal magnitudes of B_k^* B_k.
    std::vector<double> diagonal_block_min;
    std::vector<double> diagonal_block_max;
    // max |diag(B_k^* B_k) - 1| over all k.
    double unit_diagonal_error = 0.0;
    // Extreme magnitudes over all entries of B_r^* B_q, r != q.
    double offdiag_block_min = 0.0;
    double offdiag_block_max = 0.0;
    double expected_diagonal_value = 0.0;  // sqrt((N-K)/(K(N-1)))
    double expected_offdiag_max = 0.0;     // lambda / K
};

// Throws UnsupportedParameters unless the frame comes from a difference set
// with the given parameters.
BlockProfile block_coherence_profile(const GaborFrame& frame, const diffset::Params& params);

struct EtfDiagnostics {
    bool is_etf = false;
    bool equal_norm = false;
    bool tight = false;        // tight for the span of the vectors
    bool equiangular = false;
    std::size_t span_dimension = 0;
    double frame_bound = 0.0;  // common nonzero eigenvalue of the frame operator
    double min_abs_inner = 0.0;  // normalized
    double max_abs_inner = 0.0;
    double welch = 0.0;        // Welch bound for (count, span_dimension)
};

// Equal norms, tight on the span, and equal normalized |inner products|,
// each checked to within `tol`.
EtfDiagnostics is_etf(const CMatrix& vectors, double tol);
EtfDiagnostics is_etf(const GaborFrame& frame, double tol);

// g(j) = exp(2 pi i j^3 / N) / sqrt(N) for prime N >= 5.
Generator alltop_generator(int N);

// g(j) = exp(2 pi i u_j) / sqrt(N), u_j uniform on [0, 1).
Generator random_torus_generator(int N, std::uint64_t seed);

}  // namespace dsf::gabor
