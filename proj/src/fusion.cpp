#include "dsf/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsf/error.hpp"

namespace dsf::fusion {

namespace {

Subspace make_subspace(int index, int ambient, std::vector<int> support) {
    Subspace s;
    s.index = index;
    s.ambient = ambient;
    s.mask.assign(static_cast<std::size_t>(ambient), false);
    for (int c : support) {
        if (c < 0 || c >= ambient)
            throw InvalidInput("support index " + std::to_string(c) + " outside ambient dimension " +
                               std::to_string(ambient));
        if (s.mask[static_cast<std::size_t>(c)]) throw InvalidInput("duplicate support index " + std::to_string(c));
        s.mask[static_cast<std::size_t>(c)] = true;
    }
    std::sort(support.begin(), support.end());
    s.support = std::move(support);
    return s;
}

}  // namespace

FusionFrame FusionFrame::from_difference_set(const diffset::DifferenceSet& ds) {
    const int N = ds.modulus();
    FusionFrame ff;
    ff.ambient_ = N;
    ff.diffset_ = ds;
    ff.subspaces_.reserve(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        const auto shifted = ds.translated(i);
        ff.subspaces_.push_back(make_subspace(i, N, {shifted.elements().begin(), shifted.elements().end()}));
    }
    return ff;
}

FusionFrame FusionFrame::from_supports(int ambient, std::vector<std::vector<int>> supports) {
    if (ambient < 1) throw InvalidInput("ambient dimension must be positive");
    FusionFrame ff;
    ff.ambient_ = ambient;
    for (std::size_t i = 0; i < supports.size(); ++i)
        ff.subspaces_.push_back(make_subspace(static_cast<int>(i), ambient, std::move(supports[i])));
    return ff;
}

std::vector<int> FusionFrame::projection_sum_diagonal() const {
    std::vector<int> counts(static_cast<std::size_t>(ambient_), 0);
    for (const auto& s : subspaces_)
        for (int c : s.support) ++counts[static_cast<std::size_t>(c)];
    return counts;
}

Eigen::MatrixXd FusionFrame::projection_matrix(std::size_t i) const {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(ambient_, ambient_);
    for (int c : subspace(i).support) P(c, c) = 1.0;
    return P;
}

FusionFrame build_fusion_frame(const diffset::DifferenceSet& ds) { return FusionFrame::from_difference_set(ds); }

FrameBounds fusion_frame_bounds(const FusionFrame& ff) {
    const auto diag = ff.projection_sum_diagonal();
    const auto [lo, hi] = std::minmax_element(diag.begin(), diag.end());
    return {*lo, *hi};
}

int trace_product(const Subspace& a, const Subspace& b) {
    if (a.ambient != b.ambient) throw InvalidInput("subspaces live in different ambient spaces");
    int common = 0;
    for (int c : a.support) common += b.mask[static_cast<std::size_t>(c)] ? 1 : 0;
    return common;
}

int chordal_distance_squared(const Subspace& a, const Subspace& b) {
    if (a.dimension() != b.dimension())
        throw InvalidInput("chordal distance needs equal dimensions, got " + std::to_string(a.dimension()) +
                           " and " + std::to_string(b.dimension()));
    return a.dimension() - trace_product(a, b);
}

double chordal_distance(const Subspace& a, const Subspace& b) {
    return std::sqrt(static_cast<double>(chordal_distance_squared(a, b)));
}

double simplex_bound(int m, int M, int N) {
    if (m < 1 || m > N || M < 2) throw InvalidInput("simplex bound needs 1 <= m <= N and M >= 2");
    const double m_ = m, M_ = M, N_ = N;
    return m_ * (N_ - m_) * M_ / (N_ * (M_ - 1.0));
}

std::vector<std::vector<int>> pairwise_distance_squared(const FusionFrame& ff) {
    const std::size_t M = ff.size();
    std::vector<std::vector<int>> d(M, std::vector<int>(M, 0));
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = a + 1; b < M; ++b)
            d[a][b] = d[b][a] = chordal_distance_squared(ff.subspace(a), ff.subspace(b));
    return d;
}

EquidistanceResult equidistance_check(const FusionFrame& ff, double tol) {
    EquidistanceResult res;
    const std::size_t M = ff.size();
    if (M < 2) return res;

    res.min_distance_squared = std::numeric_limits<int>::max();
    res.max_distance_squared = std::numeric_limits<int>::min();
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = a + 1; b < M; ++b) {
            const int d = chordal_distance_squared(ff.subspace(a), ff.subspace(b));
            res.min_distance_squared = std::min(res.min_distance_squared, d);
            res.max_distance_squared = std::max(res.max_distance_squared, d);
        }
    if (res.min_distance_squared == res.max_distance_squared) res.distance_squared = res.min_distance_squared;

    const double N = ff.ambient_dimension();
    const double K = ff.subspace(0).dimension();
    res.closed_form = N > 1.0 ? K * (N - K) / (N - 1.0) : 0.0;

    bool matches = res.distance_squared.has_value() &&
                   std::abs(*res.distance_squared - res.closed_form) <= tol;
    if (const auto& ds = ff.difference_set())
        matches = matches && *res.distance_squared == ds->params().K - ds->params().lambda;
    res.equidistant = matches;
    return res;
}

SparseBases sparsity_count(const FusionFrame& ff) {
    SparseBases out;
    out.basis_indices.reserve(ff.size());
    for (const auto& s : ff.subspaces()) {
        out.basis_indices.push_back(s.support);
        out.total_support += s.support.size();
    }
    return out;
}

double projection_product_norm(const FusionFrame& ff, std::size_t a, std::size_t b) {
    if (a == b) throw InvalidInput("projection product norm is defined for distinct subspaces");
    // P_a P_b is the diagonal indicator of the intersection.
    return trace_product(ff.subspace(a), ff.subspace(b)) > 0 ? 1.0 : 0.0;
}

FusionReport fusion_report(const FusionFrame& ff, double tol) {
    FusionReport r;
    const auto bounds = fusion_frame_bounds(ff);
    r.tight = bounds.tight();
    r.tight_bound = bounds.upper;
    r.chordal_distances = pairwise_distance_squared(ff);
    const auto eq = equidistance_check(ff, tol);
    r.equidistant = eq.equidistant;
    r.distance_squared = eq.distance_squared;
    const int m = ff.size() ? ff.subspace(0).dimension() : 0;
    if (ff.size() >= 2 && m >= 1) r.simplex_bound = simplex_bound(m, static_cast<int>(ff.size()), ff.ambient_dimension());
    r.sparsity = sparsity_count(ff).total_support;
    r.optimal_packing = r.equidistant && r.tight && eq.distance_squared &&
                        std::abs(*eq.distance_squared - r.simplex_bound) < tol;
    return r;
}

}  // namespace dsf::fusion
