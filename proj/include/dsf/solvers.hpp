#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dsf/fusion.hpp"
#include "dsf/types.hpp"

namespace dsf::solvers {

struct SolverConfig {
    double rho = 1.0;
    int max_iters = 5000;
    // Relative tolerances; the absolute part is scaled by sqrt(dimension).
    double tol_primal = 1e-9;
    double tol_dual = 1e-9;

    // Throws InvalidInput when rho or a tolerance is not positive or
    // max_iters < 1.
    void validate() const;
};

enum class SolveStatus { converged, max_iters_reached };

std::string_view to_string(SolveStatus s);

struct SolveResult {
    CVector solution;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    SolveStatus status = SolveStatus::max_iters_reached;
    // sqrt(r^2 + (s/rho)^2) after every iteration, r and s being the primal
    // and dual residuals. ADMM makes this sequence non-increasing.
    std::vector<double> residual_history;

    bool converged() const noexcept { return status == SolveStatus::converged; }
};

// Contiguous equal-size blocks: coefficient i belongs to block i / block_size.
class BlockStructure {
public:
    BlockStructure(std::size_t block_count, std::size_t block_size);

    std::size_t block_count() const noexcept { return count_; }
    std::size_t block_size() const noexcept { return size_; }
    std::size_t dimension() const noexcept { return count_ * size_; }
    std::size_t block_of(std::size_t index) const noexcept { return index / size_; }

private:
    std::size_t count_;
    std::size_t size_;
};

// z max(1 - tau/|z|, 0)
Complex complex_soft_threshold(Complex z, double tau);

// In-place group shrinkage of every block: v_b max(1 - tau/||v_b||, 0).
void block_soft_threshold(CVector& v, const BlockStructure& blocks, double tau);

double l1_norm(const CVector& x);
double mixed_norm(const CVector& x, const BlockStructure& blocks);

// Euclidean projection onto {x : A x = y}: x -> x + A^+(y - A x).
//
// When A A^* = c I (unit-norm Gabor frames have c = N) the pseudo-inverse is
// A^* / c and nothing is factored. Otherwise A is split into independent
// row/column components of its sparsity pattern and each component is
// factored with a complete orthogonal decomposition.
class AffineProjector {
public:
    enum class RowRank {
        // Rank-deficient row space raises SolverError.
        require_full,
        // Redundant rows are tolerated as long as y lies in the range of A.
        allow_redundant,
    };

    AffineProjector(const CMatrix& A, const CVector& y, RowRank policy = RowRank::require_full);

    CVector operator()(const CVector& x) const;
    void apply(CVector& x) const;

    // Replaces y by factor * y without refactoring.
    void scale_target(double factor);

    bool tight() const noexcept { return tight_; }
    double tight_constant() const noexcept { return tight_constant_; }
    std::size_t component_count() const noexcept { return components_.empty() ? 1 : components_.size(); }

private:
    struct Component {
        std::vector<Eigen::Index> rows;
        std::vector<Eigen::Index> cols;
        CMatrix A;
        CMatrix pinv;
        CVector y;
    };

    CMatrix A_;  // kept for the tight and single-component paths
    CVector y_;
    CMatrix pinv_;
    bool tight_ = false;
    double tight_constant_ = 0.0;
    std::vector<Component> components_;
};

AffineProjector affine_projection(const CMatrix& A, const CVector& y);

// min ||x||_1  s.t.  A x = y, by ADMM on the splitting x = z with x
// constrained to the affine set and z carrying the l1 term. Returns the
// feasible iterate. Requires full row rank.
SolveResult basis_pursuit(const CMatrix& A, const CVector& y, const SolverConfig& cfg = {});

// min sum_b ||x_b||_2  s.t.  A x = y. Redundant rows are accepted when the
// system is consistent.
SolveResult block_basis_pursuit(const CMatrix& A, const CVector& y, const BlockStructure& blocks,
                                const SolverConfig& cfg = {});

// i.i.d. standard normal entries (real), or circular complex normal with
// unit variance when complex_entries is set.
CMatrix gaussian_measurement_coefficients(int n, int N, std::uint64_t seed, bool complex_entries = false);

// Measurement operator A_P = {a_ij P_j} acting on stacked subspace
// coefficients. Coefficient block j holds c_j in C^K with x_j = B_j c_j, where
// B_j has the canonical vectors e_s, s in supp(W_j) (ascending), as columns.
// Measurement row (i, m) has index i N + m.
struct FusionMeasurementOperator {
    CMatrix coefficients;                    // n x N_sub
    CMatrix effective;                       // (n N) x (N_sub K)
    BlockStructure blocks{1, 1};
    std::vector<std::vector<int>> supports;  // per subspace
    int ambient = 0;

    int measurement_count() const noexcept { return static_cast<int>(coefficients.rows()); }

    // Stacked ambient vectors x_j = B_j c_j, length N_sub * N.
    CVector embed(const CVector& stacked_coefficients) const;
    // Inverse of embed on vectors with x_j in W_j.
    CVector restrict(const CVector& stacked_ambient) const;
    // y_i = sum_j a_ij P_j x_j for stacked ambient x.
    CVector apply_ambient(const CVector& stacked_ambient) const;
};

// Throws InvalidInput unless a has one column per subspace.
FusionMeasurementOperator assemble_fusion_operator(const CMatrix& a, const fusion::FusionFrame& ff);

// The block matrix [a_ij P_j] of size (n N) x (N_sub N), assembled from dense
// projections. Used to cross-check the effective operator.
CMatrix dense_fusion_operator(const CMatrix& a, const fusion::FusionFrame& ff);

}  // namespace dsf::solvers
