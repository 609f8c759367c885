#include <doctest.h>

#include <cmath>

#include "dsf/diffset.hpp"
#include "dsf/error.hpp"
#include "dsf/fusion.hpp"
#include "dsf/gabor.hpp"

using namespace dsf;
using namespace dsf::fusion;

namespace {

FusionFrame from_catalog(int N, int K) { return build_fusion_frame(*diffset::catalog_lookup(N, K)); }

}  // namespace

TEST_CASE("subspaces are the translates of the set") {
    const auto ff = from_catalog(7, 3);
    REQUIRE(ff.size() == 7);
    CHECK(ff.subspace(0).support == std::vector<int>{1, 2, 4});
    CHECK(ff.subspace(1).support == std::vector<int>{2, 3, 5});
    CHECK(ff.subspace(6).support == std::vector<int>{0, 1, 3});
    for (const auto& s : ff.subspaces()) {
        const auto P = ff.projection_matrix(static_cast<std::size_t>(s.index));
        CHECK(P.trace() == 3.0);
        CHECK((P * P - P).norm() == 0.0);
    }
    CHECK(from_catalog(40, 13).subspace(0).dimension() == 13);
}

TEST_CASE("sum of projections") {
    for (const auto& ds : diffset::Catalog::builtin().entries()) {
        const auto ff = build_fusion_frame(ds);
        for (int c : ff.projection_sum_diagonal()) CHECK(c == ds.size());
        const auto b = fusion_frame_bounds(ff);
        CHECK(b.lower == ds.size());
        CHECK(b.upper == ds.size());
        CHECK(b.tight());
    }
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(7, 7);
    const auto ff = from_catalog(7, 3);
    for (std::size_t i = 0; i < ff.size(); ++i) S += ff.projection_matrix(i);
    CHECK((S - 3.0 * Eigen::MatrixXd::Identity(7, 7)).norm() == 0.0);

    const auto odd = FusionFrame::from_supports(4, {{0, 1}, {1, 2}});
    const auto b = fusion_frame_bounds(odd);
    CHECK(b.lower == 0);
    CHECK(b.upper == 2);
    CHECK_FALSE(b.tight());
}

TEST_CASE("fusion frame bounds of (11,5,2)") {
    const auto b = fusion_frame_bounds(from_catalog(11, 5));
    CHECK(b.lower == 5);
    CHECK(b.upper == 5);
}

TEST_CASE("chordal distances") {
    const auto ff7 = from_catalog(7, 3);
    for (std::size_t a = 0; a < 7; ++a)
        for (std::size_t b = 0; b < 7; ++b) {
            const int d2 = chordal_distance_squared(ff7.subspace(a), ff7.subspace(b));
            CHECK(d2 == (a == b ? 0 : 2));
            // Trace of dense projection products.
            const double tr = (ff7.projection_matrix(a) * ff7.projection_matrix(b)).trace();
            CHECK(tr == trace_product(ff7.subspace(a), ff7.subspace(b)));
        }
    CHECK(chordal_distance(ff7.subspace(2), ff7.subspace(2)) == 0.0);
    CHECK(std::abs(chordal_distance(ff7.subspace(0), ff7.subspace(3)) - std::sqrt(2.0)) < 1e-15);

    const auto ff11 = from_catalog(11, 5);
    for (std::size_t a = 0; a < 11; ++a)
        for (std::size_t b = a + 1; b < 11; ++b) CHECK(chordal_distance_squared(ff11.subspace(a), ff11.subspace(b)) == 3);

    const auto mixed = FusionFrame::from_supports(5, {{0, 1}, {2, 3, 4}});
    CHECK_THROWS_AS(chordal_distance_squared(mixed.subspace(0), mixed.subspace(1)), InvalidInput);
}

TEST_CASE("simplex bound") {
    CHECK(std::abs(simplex_bound(3, 7, 7) - 2.0) < 1e-15);
    CHECK(std::abs(simplex_bound(13, 40, 40) - 9.0) < 1e-12);
    CHECK(simplex_bound(5, 3, 5) == 0.0);
    CHECK_THROWS_AS(simplex_bound(0, 3, 5), InvalidInput);
    CHECK_THROWS_AS(simplex_bound(6, 3, 5), InvalidInput);
    CHECK_THROWS_AS(simplex_bound(2, 1, 5), InvalidInput);
}

TEST_CASE("equidistance") {
    const auto e7 = equidistance_check(from_catalog(7, 3));
    CHECK(e7.equidistant);
    CHECK(*e7.distance_squared == 2);
    const auto e43 = equidistance_check(from_catalog(43, 21));
    CHECK(e43.equidistant);
    CHECK(*e43.distance_squared == 11);
    CHECK(std::abs(e43.closed_form - 11.0) < 1e-12);

    for (const auto& ds : diffset::Catalog::builtin().entries()) {
        const auto p = ds.params();
        const double closed = static_cast<double>(p.K) * (p.N - p.K) / (p.N - 1);
        CHECK(std::abs(closed - (p.K - p.lambda)) < 1e-12);
        const auto e = equidistance_check(build_fusion_frame(ds));
        CHECK(e.equidistant);
        CHECK(e.min_distance_squared == p.K - p.lambda);
        CHECK(e.max_distance_squared == p.K - p.lambda);
    }

    const auto uneven = FusionFrame::from_supports(6, {{0, 1}, {1, 2}, {4, 5}});
    CHECK_FALSE(equidistance_check(uneven).equidistant);
}

TEST_CASE("sparsity") {
    const auto s7 = sparsity_count(from_catalog(7, 3));
    CHECK(s7.total_support == 21);
    CHECK(s7.basis_indices[1] == std::vector<int>{2, 3, 5});
    CHECK(sparsity_count(from_catalog(40, 13)).total_support == 520);
}

TEST_CASE("projection products") {
    const auto ff7 = from_catalog(7, 3);
    CHECK(projection_product_norm(ff7, 0, 1) == 1.0);
    const auto ff11 = from_catalog(11, 5);
    for (std::size_t a = 0; a < 11; ++a)
        for (std::size_t b = 0; b < 11; ++b)
            if (a != b) CHECK(projection_product_norm(ff11, a, b) == 1.0);
    // Dense spectral norm for one pair.
    const Eigen::MatrixXd PP = ff7.projection_matrix(2) * ff7.projection_matrix(5);
    CHECK(std::abs(Eigen::JacobiSVD<Eigen::MatrixXd>(PP).singularValues()(0) - 1.0) < 1e-15);

    const auto disjoint = FusionFrame::from_supports(4, {{0, 1}, {2, 3}});
    CHECK(projection_product_norm(disjoint, 0, 1) == 0.0);
    CHECK_THROWS_AS(projection_product_norm(ff7, 3, 3), InvalidInput);
}

TEST_CASE("report") {
    const auto r = fusion_report(from_catalog(7, 3));
    CHECK(r.tight);
    CHECK(r.tight_bound == 3.0);
    CHECK(r.equidistant);
    CHECK(*r.distance_squared == 2);
    CHECK(std::abs(r.simplex_bound - 2.0) < 1e-12);
    CHECK(r.sparsity == 21);
    CHECK(r.optimal_packing);
    CHECK(r.chordal_distances.size() == 7);
}

TEST_CASE("Gabor blocks span the fusion subspaces") {
    for (auto [N, K] : std::vector<std::pair<int, int>>{{7, 3}, {13, 4}, {11, 5}}) {
        const auto ds = *diffset::catalog_lookup(N, K);
        const gabor::GaborFrame f(gabor::Generator::from_difference_set(ds));
        const auto ff = build_fusion_frame(ds);
        for (int i = 0; i < N; ++i) {
            const CMatrix B = f.block(i);
            Eigen::ColPivHouseholderQR<CMatrix> qr(B);
            qr.setThreshold(1e-10);
            CHECK(qr.rank() == K);
            // Rows outside the support vanish.
            for (int n = 0; n < N; ++n)
                if (!ff.subspace(static_cast<std::size_t>(i)).mask[static_cast<std::size_t>(n)])
                    CHECK(B.row(n).norm() == 0.0);
            // N/K-tight on the support: B B^* = (N/K) P_i.
            const CMatrix S = B * B.adjoint();
            const CMatrix P = ff.projection_matrix(static_cast<std::size_t>(i)).cast<Complex>();
            CHECK((S - (static_cast<double>(N) / K) * P).cwiseAbs().maxCoeff() < 1e-9);
        }
        // Lifting the N/K-tight block frames through a C-tight fusion frame
        // yields the N-tight Gabor frame, so C = K.
        const double C = static_cast<double>(N) / (static_cast<double>(N) / K);
        CHECK(std::abs(C - fusion_frame_bounds(ff).lower) < 1e-12);
    }
}
