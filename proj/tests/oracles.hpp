#pragma once

// Reference computations used only by the tests. They are written directly
// from the definitions and avoid the library's fast paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

// ĝ(j) = sum_k g(k) exp(-2 pi i k j / N), by direct summation.
inline std::vector<cd> direct_dft(const std::vector<cd>& g) {
    const auto N = static_cast<int>(g.size());
    std::vector<cd> out(g.size());
    for (int j = 0; j < N; ++j) {
        cd s = 0.0;
        for (int k = 0; k < N; ++k) s += g[k] * std::polar(1.0, -2.0 * kPi * ((static_cast<long>(k) * j) % N) / N);
        out[j] = s;
    }
    return out;
}

// Column (k, j) of the Gabor system built entry by entry from the
// definition, stored at k*N + j.
inline Eigen::MatrixXcd gabor_by_definition(const Eigen::VectorXcd& g) {
    const auto N = static_cast<int>(g.size());
    Eigen::MatrixXcd m(N, N * N);
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int n = 0; n < N; ++n)
                m(n, k * N + j) = std::polar(1.0, 2.0 * kPi * ((static_cast<long>(j) * n) % N) / N) *
                                  g(((n - k) % N + N) % N);
    return m;
}

// max_{i != j} |<a_i, a_j>| / (|a_i| |a_j|) over every ordered pair.
inline double brute_coherence(const Eigen::MatrixXcd& a) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i == j) continue;
            const double v = std::abs(a.col(i).dot(a.col(j))) / (a.col(i).norm() * a.col(j).norm());
            best = std::max(best, v);
        }
    return best;
}

// min ||x||_1 s.t. A x = y over all supports S with |S| = rank(A): the
// optimum of an LP in standard form is attained at a basic solution, so
// solving A_S x_S = y on every column subset of size rank and taking the
// cheapest feasible candidate gives the optimum. For complex data the same
// enumeration is only an upper bound, so callers use real instances.
inline std::optional<double> l1_by_support_enumeration(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    const auto d = static_cast<int>(A.cols());
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (unsigned mask = 1; mask < (1u << d); ++mask) {
        std::vector<int> cols;
        for (int c = 0; c < d; ++c)
            if (mask & (1u << c)) cols.push_back(c);
        if (static_cast<Eigen::Index>(cols.size()) > A.rows()) continue;
        Eigen::MatrixXd As(A.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) As.col(static_cast<Eigen::Index>(c)) = A.col(cols[c]);
        const Eigen::VectorXd xs = As.colPivHouseholderQr().solve(y);
        if ((As * xs - y).norm() > 1e-9 * (1.0 + y.norm())) continue;
        best = std::min(best, xs.lpNorm<1>());
        any = true;
    }
    if (!any) return std::nullopt;
    return best;
}

}  // namespace oracle
