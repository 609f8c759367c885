#include "dsf/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dsf/error.hpp"
#include "dsf/rng.hpp"

namespace dsf::solvers {

void SolverConfig::validate() const {
    if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
    if (max_iters < 1) throw InvalidInput("max_iters must be at least 1");
    if (!(tol_primal > 0.0) || !(tol_dual > 0.0)) throw InvalidInput("tolerances must be positive");
}

std::string_view to_string(SolveStatus s) {
    return s == SolveStatus::converged ? "converged" : "max_iters_reached";
}

BlockStructure::BlockStructure(std::size_t block_count, std::size_t block_size)
    : count_(block_count), size_(block_size) {
    if (block_count == 0 || block_size == 0) throw InvalidInput("block structure needs positive count and size");
}

Complex complex_soft_threshold(Complex z, double tau) {
    const double mag = std::abs(z);
    if (mag <= tau) return {0.0, 0.0};
    return z * (1.0 - tau / mag);
}

void block_soft_threshold(CVector& v, const BlockStructure& blocks, double tau) {
    const auto m = static_cast<Eigen::Index>(blocks.block_size());
    for (std::size_t b = 0; b < blocks.block_count(); ++b) {
        auto seg = v.segment(static_cast<Eigen::Index>(b) * m, m);
        const double nrm = seg.norm();
        // Shrinking the block norm is the scalar soft threshold of that norm.
        const double shrunk = complex_soft_threshold(Complex(nrm, 0.0), tau).real();
        if (shrunk == 0.0)
            seg.setZero();
        else
            seg *= shrunk / nrm;
    }
}

double l1_norm(const CVector& x) { return x.cwiseAbs().sum(); }

double mixed_norm(const CVector& x, const BlockStructure& blocks) {
    const auto m = static_cast<Eigen::Index>(blocks.block_size());
    double total = 0.0;
    for (std::size_t b = 0; b < blocks.block_count(); ++b)
        total += x.segment(static_cast<Eigen::Index>(b) * m, m).norm();
    return total;
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

AffineProjector::AffineProjector(const CMatrix& A, const CVector& y, RowRank policy) : A_(A), y_(y) {
    const Eigen::Index n = A.rows(), d = A.cols();
    if (y.size() != n)
        throw InvalidInput("measurement length " + std::to_string(y.size()) + " does not match " +
                           std::to_string(n) + " rows");
    if (n == 0 || d == 0) throw InvalidInput("empty measurement matrix");

    // Row/column components of the sparsity pattern. Rows are nodes 0..n-1,
    // columns n..n+d-1.
    DisjointSets sets(static_cast<std::size_t>(n + d));
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (A(i, j) != Complex(0.0, 0.0)) sets.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(n + j));

    std::vector<std::size_t> root_to_component(static_cast<std::size_t>(n + d), SIZE_MAX);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t r = sets.find(static_cast<std::size_t>(i));
        if (root_to_component[r] == SIZE_MAX) {
            root_to_component[r] = components_.size();
            components_.emplace_back();
        }
        components_[root_to_component[r]].rows.push_back(i);
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        const std::size_t r = sets.find(static_cast<std::size_t>(n + j));
        if (root_to_component[r] != SIZE_MAX) components_[root_to_component[r]].cols.push_back(j);
    }

    if (components_.size() == 1 && components_[0].cols.size() == static_cast<std::size_t>(d)) {
        components_.clear();
        const CMatrix gram = A_ * A_.adjoint();
        const double c = gram.diagonal().real().mean();
        const double deviation = (gram - c * CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
        if (c > 0.0 && deviation <= 1e-10 * c) {
            tight_ = true;
            tight_constant_ = c;
            pinv_ = A_.adjoint() / c;
        } else {
            Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A_);
            if (policy == RowRank::require_full && cod.rank() < n)
                throw SolverError("rank-deficient row space: rank " + std::to_string(cod.rank()) + " < " +
                                  std::to_string(n) + " rows");
            pinv_ = cod.pseudoInverse();
        }
    } else {
        for (auto& comp : components_) {
            const auto rn = static_cast<Eigen::Index>(comp.rows.size());
            const auto cn = static_cast<Eigen::Index>(comp.cols.size());
            comp.A.resize(rn, cn);
            comp.y.resize(rn);
            for (Eigen::Index r = 0; r < rn; ++r) {
                comp.y(r) = y(comp.rows[static_cast<std::size_t>(r)]);
                for (Eigen::Index c = 0; c < cn; ++c)
                    comp.A(r, c) = A(comp.rows[static_cast<std::size_t>(r)], comp.cols[static_cast<std::size_t>(c)]);
            }
            if (cn == 0) {
                // A zero row: consistent only for a zero measurement.
                if (policy == RowRank::require_full) throw SolverError("rank-deficient row space: zero row");
                comp.pinv.resize(0, rn);
                continue;
            }
            Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(comp.A);
            if (policy == RowRank::require_full && cod.rank() < rn)
                throw SolverError("rank-deficient row space in an independent block");
            comp.pinv = cod.pseudoInverse();
        }
        A_.resize(0, 0);
    }

    CVector probe = CVector::Zero(d);
    apply(probe);
    const double mismatch = (A * probe - y).norm();
    if (mismatch > 1e-8 * std::max(1.0, y.norm()))
        throw SolverError("measurements are not in the range of the matrix (residual " + std::to_string(mismatch) +
                          ")");
}

void AffineProjector::apply(CVector& x) const {
    if (components_.empty()) {
        const CVector r = A_ * x - y_;
        x.noalias() -= pinv_ * r;
        return;
    }
    for (const auto& comp : components_) {
        if (comp.cols.empty()) continue;
        CVector xc(static_cast<Eigen::Index>(comp.cols.size()));
        for (std::size_t c = 0; c < comp.cols.size(); ++c) xc(static_cast<Eigen::Index>(c)) = x(comp.cols[c]);
        const CVector r = comp.A * xc - comp.y;
        xc.noalias() -= comp.pinv * r;
        for (std::size_t c = 0; c < comp.cols.size(); ++c) x(comp.cols[c]) = xc(static_cast<Eigen::Index>(c));
    }
}

void AffineProjector::scale_target(double factor) {
    y_ *= factor;
    for (auto& comp : components_) comp.y *= factor;
}

CVector AffineProjector::operator()(const CVector& x) const {
    CVector out = x;
    apply(out);
    return out;
}

AffineProjector affine_projection(const CMatrix& A, const CVector& y) { return AffineProjector(A, y); }

namespace {

// ADMM for  min g(z)  s.t.  x in {A x = y},  x = z  (scaled dual u).
template <typename Shrink>
SolveResult admm(const CMatrix& A, const CVector& y, AffineProjector::RowRank policy, const SolverConfig& cfg,
                 Shrink&& shrink) {
    cfg.validate();
    const Eigen::Index d = A.cols();
    if (y.size() != A.rows()) throw InvalidInput("measurement length does not match matrix rows");

    SolveResult res;
    if (y.norm() == 0.0) {
        res.solution = CVector::Zero(d);
        res.status = SolveStatus::converged;
        return res;
    }

    // Work on a problem whose least-norm solution has unit peak magnitude so
    // the threshold 1/rho is comparable across inputs.
    AffineProjector project(A, y, policy);
    const double scale = std::max(project(CVector::Zero(d)).cwiseAbs().maxCoeff(), 1e-300);
    project.scale_target(1.0 / scale);

    const double tau = 1.0 / cfg.rho;
    const double sqrt_d = std::sqrt(static_cast<double>(d));
    CVector x(d), z = CVector::Zero(d), u = CVector::Zero(d), z_prev(d), v(d);
    res.residual_history.reserve(static_cast<std::size_t>(std::min(cfg.max_iters, 100000)));

    double r_norm = 0.0, s_norm = 0.0;
    int it = 0;
    while (it < cfg.max_iters) {
        ++it;
        x = z - u;
        project.apply(x);
        z_prev = z;
        v = x + u;
        z = v;
        shrink(z, tau);
        u = v - z;

        r_norm = (x - z).norm();
        const double dz = (z - z_prev).norm();
        s_norm = cfg.rho * dz;
        res.residual_history.push_back(std::sqrt(r_norm * r_norm + dz * dz));

        const double eps_pri = cfg.tol_primal * (sqrt_d + std::max(x.norm(), z.norm()));
        const double eps_dual = cfg.tol_dual * (sqrt_d + cfg.rho * u.norm());
        if (r_norm <= eps_pri && s_norm <= eps_dual) {
            res.status = SolveStatus::converged;
            break;
        }
    }

    res.iterations = it;
    res.solution = x * scale;
    res.primal_residual = r_norm * scale;
    res.dual_residual = s_norm * scale;
    for (double& h : res.residual_history) h *= scale;
    return res;
}

}  // namespace

SolveResult basis_pursuit(const CMatrix& A, const CVector& y, const SolverConfig& cfg) {
    if (A.cols() < A.rows()) throw InvalidInput("basis pursuit expects at least as many columns as rows");
    return admm(A, y, AffineProjector::RowRank::require_full, cfg, [](CVector& v, double tau) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_soft_threshold(v(i), tau);
    });
}

SolveResult block_basis_pursuit(const CMatrix& A, const CVector& y, const BlockStructure& blocks,
                                const SolverConfig& cfg) {
    if (blocks.dimension() != static_cast<std::size_t>(A.cols()))
        throw InvalidInput("block structure covers " + std::to_string(blocks.dimension()) + " coefficients but matrix has " +
                           std::to_string(A.cols()) + " columns");
    return admm(A, y, AffineProjector::RowRank::allow_redundant, cfg,
                [&blocks](CVector& v, double tau) { block_soft_threshold(v, blocks, tau); });
}

CMatrix gaussian_measurement_coefficients(int n, int N, std::uint64_t seed, bool complex_entries) {
    if (n < 1 || N < 1) throw InvalidInput("coefficient matrix needs positive dimensions");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix a(n, N);
    const double s = complex_entries ? std::sqrt(0.5) : 1.0;
    // Row-major fill so the draw order does not depend on storage order.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < N; ++j) {
            const double re = normal(rng);
            const double im = complex_entries ? normal(rng) : 0.0;
            a(i, j) = Complex(re * s, im * s);
        }
    return a;
}

CVector FusionMeasurementOperator::embed(const CVector& stacked_coefficients) const {
    const auto m = static_cast<Eigen::Index>(blocks.block_size());
    if (stacked_coefficients.size() != static_cast<Eigen::Index>(blocks.dimension()))
        throw InvalidInput("coefficient vector has the wrong length");
    CVector x = CVector::Zero(static_cast<Eigen::Index>(supports.size()) * ambient);
    for (std::size_t j = 0; j < supports.size(); ++j)
        for (Eigen::Index c = 0; c < m; ++c)
            x(static_cast<Eigen::Index>(j) * ambient + supports[j][static_cast<std::size_t>(c)]) =
                stacked_coefficients(static_cast<Eigen::Index>(j) * m + c);
    return x;
}

CVector FusionMeasurementOperator::restrict(const CVector& stacked_ambient) const {
    const auto m = static_cast<Eigen::Index>(blocks.block_size());
    if (stacked_ambient.size() != static_cast<Eigen::Index>(supports.size()) * ambient)
        throw InvalidInput("ambient vector has the wrong length");
    CVector c(static_cast<Eigen::Index>(blocks.dimension()));
    for (std::size_t j = 0; j < supports.size(); ++j)
        for (Eigen::Index k = 0; k < m; ++k)
            c(static_cast<Eigen::Index>(j) * m + k) =
                stacked_ambient(static_cast<Eigen::Index>(j) * ambient + supports[j][static_cast<std::size_t>(k)]);
    return c;
}

CVector FusionMeasurementOperator::apply_ambient(const CVector& stacked_ambient) const {
    const Eigen::Index n = coefficients.rows();
    if (stacked_ambient.size() != static_cast<Eigen::Index>(supports.size()) * ambient)
        throw InvalidInput("ambient vector has the wrong length");
    CVector y = CVector::Zero(n * ambient);
    for (Eigen::Index i = 0; i < n; ++i)
        for (std::size_t j = 0; j < supports.size(); ++j)
            for (int s : supports[j])
                y(i * ambient + s) += coefficients(i, static_cast<Eigen::Index>(j)) *
                                      stacked_ambient(static_cast<Eigen::Index>(j) * ambient + s);
    return y;
}

FusionMeasurementOperator assemble_fusion_operator(const CMatrix& a, const fusion::FusionFrame& ff) {
    if (a.cols() != static_cast<Eigen::Index>(ff.size()))
        throw InvalidInput("coefficient matrix has " + std::to_string(a.cols()) + " columns for " +
                           std::to_string(ff.size()) + " subspaces");
    if (ff.size() == 0) throw InvalidInput("fusion frame has no subspaces");
    const int K = ff.subspace(0).dimension();
    for (const auto& s : ff.subspaces())
        if (s.dimension() != K) throw InvalidInput("fusion operator needs equal subspace dimensions");

    FusionMeasurementOperator op;
    op.coefficients = a;
    op.ambient = ff.ambient_dimension();
    op.blocks = BlockStructure(ff.size(), static_cast<std::size_t>(K));
    for (const auto& s : ff.subspaces()) op.supports.push_back(s.support);

    const Eigen::Index n = a.rows(), N = op.ambient;
    op.effective = CMatrix::Zero(n * N, static_cast<Eigen::Index>(op.blocks.dimension()));
    for (Eigen::Index i = 0; i < n; ++i)
        for (std::size_t j = 0; j < ff.size(); ++j)
            for (int c = 0; c < K; ++c)
                op.effective(i * N + op.supports[j][static_cast<std::size_t>(c)], static_cast<Eigen::Index>(j) * K + c) =
                    a(i, static_cast<Eigen::Index>(j));
    return op;
}

CMatrix dense_fusion_operator(const CMatrix& a, const fusion::FusionFrame& ff) {
    if (a.cols() != static_cast<Eigen::Index>(ff.size())) throw InvalidInput("coefficient matrix shape mismatch");
    const Eigen::Index n = a.rows(), N = ff.ambient_dimension();
    CMatrix D = CMatrix::Zero(n * N, static_cast<Eigen::Index>(ff.size()) * N);
    for (Eigen::Index i = 0; i < n; ++i)
        for (std::size_t j = 0; j < ff.size(); ++j)
            D.block(i * N, static_cast<Eigen::Index>(j) * N, N, N) =
                a(i, static_cast<Eigen::Index>(j)) * ff.projection_matrix(j).cast<Complex>();
    return D;
}

}  // namespace dsf::solvers
