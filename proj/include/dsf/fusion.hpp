#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dsf/diffset.hpp"
#include "dsf/types.hpp"

namespace dsf::fusion {

// Coordinate subspace spanned by {e_s : s in support}. Its orthogonal
// projection is the diagonal 0/1 matrix with ones on the support.
struct Subspace {
    int index = 0;
    int ambient = 0;
    std::vector<int> support;  // sorted, distinct
    std::vector<bool> mask;    // mask[s] == true iff s in support

    int dimension() const noexcept { return static_cast<int>(support.size()); }
};

class FusionFrame {
public:
    // W_i = {x : supp(x) in K + i}, i = 0..N-1.
    static FusionFrame from_difference_set(const diffset::DifferenceSet& ds);
    // Arbitrary coordinate subspaces; throws InvalidInput on out-of-range or
    // duplicate indices.
    static FusionFrame from_supports(int ambient, std::vector<std::vector<int>> supports);

    int ambient_dimension() const noexcept { return ambient_; }
    std::size_t size() const noexcept { return subspaces_.size(); }
    const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
    const Subspace& subspace(std::size_t i) const { return subspaces_.at(i); }
    const std::optional<diffset::DifferenceSet>& difference_set() const noexcept { return diffset_; }

    // Diagonal of sum_i P_i: how many subspaces contain each coordinate.
    std::vector<int> projection_sum_diagonal() const;

    // Dense P_i, for cross-checks only.
    Eigen::MatrixXd projection_matrix(std::size_t i) const;

private:
    int ambient_ = 0;
    std::vector<Subspace> subspaces_;
    std::optional<diffset::DifferenceSet> diffset_;
};

FusionFrame build_fusion_frame(const diffset::DifferenceSet& ds);

struct FrameBounds {
    int lower = 0;
    int upper = 0;
    bool tight() const noexcept { return lower == upper; }
};

// Extreme eigenvalues of sum_i P_i, i.e. its extreme diagonal counts.
FrameBounds fusion_frame_bounds(const FusionFrame& ff);

// Tr[P_a P_b] = |supp_a ∩ supp_b|.
int trace_product(const Subspace& a, const Subspace& b);

// m - Tr[P_a P_b]; throws InvalidInput when dimensions differ.
int chordal_distance_squared(const Subspace& a, const Subspace& b);
double chordal_distance(const Subspace& a, const Subspace& b);

// m (N - m) M / (N (M - 1)).
double simplex_bound(int m, int M, int N);

struct EquidistanceResult {
    bool equidistant = false;
    std::optional<int> distance_squared;  // common value when all pairs agree
    double closed_form = 0.0;             // K (N - K) / (N - 1)
    int min_distance_squared = 0;
    int max_distance_squared = 0;
};

// All pairs share one d_c^2 which matches both K - lambda and K(N-K)/(N-1).
EquidistanceResult equidistance_check(const FusionFrame& ff, double tol = 1e-12);

// Symmetric matrix of pairwise d_c^2.
std::vector<std::vector<int>> pairwise_distance_squared(const FusionFrame& ff);

struct SparseBases {
    // Total number of nonzero entries over all subspace bases.
    std::size_t total_support = 0;
    // basis_indices[i][c] = coordinate of the c-th canonical basis vector of W_i.
    std::vector<std::vector<int>> basis_indices;
};

SparseBases sparsity_count(const FusionFrame& ff);

// ||P_a P_b||_2: 1 when the supports meet, 0 when they are disjoint.
// Throws InvalidInput when a == b.
double projection_product_norm(const FusionFrame& ff, std::size_t a, std::size_t b);

struct FusionReport {
    double tight_bound = 0.0;
    bool tight = false;
    std::vector<std::vector<int>> chordal_distances;  // squared
    double simplex_bound = 0.0;
    bool equidistant = false;
    std::optional<int> distance_squared;
    std::size_t sparsity = 0;
    bool optimal_packing = false;
};

FusionReport fusion_report(const FusionFrame& ff, double tol = 1e-12);

}  // namespace dsf::fusion
