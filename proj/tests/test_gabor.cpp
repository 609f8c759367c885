#include <doctest.h>

#include <cmath>

#include "dsf/diffset.hpp"
#include "dsf/error.hpp"
#include "dsf/gabor.hpp"
#include "oracles.hpp"

using namespace dsf;
using namespace dsf::gabor;

namespace {

Generator ds_generator(int N, int K) { return Generator::from_difference_set(*diffset::catalog_lookup(N, K)); }

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("translate and modulate") {
    CVector e(3);
    e << 1, 0, 0;
    CVector e1(3);
    e1 << 0, 1, 0;
    CHECK((translate(e, 1) - e1).norm() == 0.0);
    CHECK((translate(e, -2) - e1).norm() == 0.0);

    const CVector g = random_torus_generator(9, 5).values();
    CHECK((translate(g, 0) - g).norm() == 0.0);
    CHECK((translate(translate(g, 4), 7) - translate(g, 2)).norm() == 0.0);
    CHECK((modulate(g, 0) - g).norm() < 1e-15);
    for (int j = 0; j < 9; ++j) CHECK(std::abs(modulate(g, j).norm() - g.norm()) < 1e-14);

    CVector ones = CVector::Ones(4);
    CVector alt(4);
    alt << 1, -1, 1, -1;
    CHECK((modulate(ones, 2) - alt).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("frame columns follow the k N + j convention") {
    for (auto g : {ds_generator(7, 3), alltop_generator(11), random_torus_generator(6, 1)}) {
        const GaborFrame f(g);
        const auto ref = oracle::gabor_by_definition(g.values());
        CHECK(max_abs(f.columns() - ref) < 1e-13);
        for (Eigen::Index c = 0; c < f.columns().cols(); ++c)
            CHECK(std::abs(f.columns().col(c).norm() - g.norm()) < 1e-13);
        CHECK(f.block(2).cols() == g.dimension());
        CHECK(max_abs(f.block(2) - ref.middleCols(2 * g.dimension(), g.dimension())) < 1e-13);
        CHECK(GaborFrame::column_index(2, 3, g.dimension()) == static_cast<std::size_t>(2 * g.dimension() + 3));
    }
}

TEST_CASE("(7,3,1) frame matches the displayed example after scaling by sqrt 3") {
    // Exponents of omega = exp(2 pi i / 7) for the three visible blocks;
    // -1 marks a zero entry.
    const int b0[7][7] = {{-1, -1, -1, -1, -1, -1, -1}, {0, 1, 2, 3, 4, 5, 6}, {0, 2, 4, 6, 1, 3, 5},
                          {-1, -1, -1, -1, -1, -1, -1}, {0, 4, 1, 5, 2, 6, 3}, {-1, -1, -1, -1, -1, -1, -1},
                          {-1, -1, -1, -1, -1, -1, -1}};
    const int b1[7][7] = {{-1, -1, -1, -1, -1, -1, -1}, {-1, -1, -1, -1, -1, -1, -1}, {0, 2, 4, 6, 1, 3, 5},
                          {0, 3, 6, 2, 5, 1, 4},        {-1, -1, -1, -1, -1, -1, -1}, {0, 5, 3, 1, 6, 4, 2},
                          {-1, -1, -1, -1, -1, -1, -1}};
    const int b6[7][7] = {{0, 0, 0, 0, 0, 0, 0},        {0, 1, 2, 3, 4, 5, 6},        {-1, -1, -1, -1, -1, -1, -1},
                          {0, 3, 6, 2, 5, 1, 4},        {-1, -1, -1, -1, -1, -1, -1}, {-1, -1, -1, -1, -1, -1, -1},
                          {-1, -1, -1, -1, -1, -1, -1}};
    const GaborFrame f(ds_generator(7, 3));
    const CMatrix scaled = f.columns() * std::sqrt(3.0);
    auto check_block = [&](int k, const int (&e)[7][7]) {
        for (int n = 0; n < 7; ++n)
            for (int j = 0; j < 7; ++j) {
                const Complex expect = e[n][j] < 0 ? Complex(0.0) : std::polar(1.0, 2.0 * kPi * e[n][j] / 7.0);
                CHECK(std::abs(scaled(n, k * 7 + j) - expect) < 1e-12);
            }
    };
    check_block(0, b0);
    check_block(1, b1);
    check_block(6, b6);
}

TEST_CASE("tightness") {
    CVector delta = CVector::Zero(3);
    delta(0) = 1.0;
    const GaborFrame fd{Generator(delta)};
    CHECK(fd.tightness_error() < 1e-12);
    CHECK(max_abs(fd.columns() * fd.columns().adjoint() - 3.0 * CMatrix::Identity(3, 3)) < 1e-12);

    for (int N : {2, 7, 16, 31, 64}) {
        const GaborFrame f(random_torus_generator(N, static_cast<std::uint64_t>(N)));
        CHECK(f.is_tight());
        const CMatrix S = f.columns() * f.columns().adjoint();
        CHECK(max_abs(S - N * CMatrix::Identity(N, N)) < 1e-9);
    }
    // Non unit-norm windows give N ||g||^2.
    const auto g = random_torus_generator(5, 3).scaled(Complex(2.0, 0.0));
    const GaborFrame f(g);
    CHECK(max_abs(f.columns() * f.columns().adjoint() - 20.0 * CMatrix::Identity(5, 5)) < 1e-9);
    CHECK_THROWS_AS(GaborFrame(Generator(CVector::Zero(4))), InvalidInput);
}

TEST_CASE("coherence of difference-set frames") {
    SUBCASE("(7,3,1)") {
        const auto rep = mutual_coherence(GaborFrame(ds_generator(7, 3)));
        CHECK(std::abs(rep.mutual_coherence - std::sqrt(4.0 / 18.0)) < 1e-10);
        CHECK(std::abs(rep.mutual_coherence - 0.471405) < 1e-6);
        CHECK(std::abs(rep.welch_bound - std::sqrt(1.0 / 8.0)) < 1e-12);
        REQUIRE(rep.predicted);
        CHECK(std::abs(*rep.predicted - rep.mutual_coherence) < 1e-10);
        CHECK(std::abs(rep.diagonal_block_offdiag_value - std::sqrt(4.0 / 18.0)) < 1e-10);
        CHECK(std::abs(rep.offdiag_block_max - 1.0 / 3.0) < 1e-10);
        CHECK(rep.argmax_pair.first < rep.argmax_pair.second);
    }
    SUBCASE("(11,5,2)") {
        const auto rep = mutual_coherence(GaborFrame(ds_generator(11, 5)));
        CHECK(std::abs(rep.mutual_coherence - 0.4) < 1e-10);
        CHECK(std::abs(rep.offdiag_block_max - 0.4) < 1e-10);
        CHECK(std::abs(rep.diagonal_block_offdiag_value - std::sqrt(6.0 / 50.0)) < 1e-10);
    }
    SUBCASE("brute force oracle agrees with the scan") {
        for (auto [N, K] : std::vector<std::pair<int, int>>{{7, 3}, {7, 4}, {11, 5}, {13, 4}, {15, 7}}) {
            const GaborFrame f(ds_generator(N, K));
            const double ref = oracle::brute_coherence(f.columns());
            CHECK(std::abs(mutual_coherence(f).mutual_coherence - ref) < 1e-12);
            CHECK(std::abs(predicted_coherence(*diffset::derive_params(N, K)) - ref) < 1e-10);
        }
    }
    SUBCASE("every catalog set up to N = 64") {
        for (const auto& ds : diffset::Catalog::builtin().entries()) {
            if (ds.modulus() > 64) continue;
            const auto rep = mutual_coherence(GaborFrame(Generator::from_difference_set(ds)));
            CHECK(std::abs(rep.mutual_coherence - predicted_coherence(ds.params())) < 1e-10);
            if (ds.modulus() > 3)
                CHECK(rep.mutual_coherence > rep.welch_bound + 1e-6);
            else
                CHECK(std::abs(rep.mutual_coherence - rep.welch_bound) < 1e-10);
        }
    }
}

TEST_CASE("orthonormal basis has zero coherence") {
    CHECK(column_coherence(CMatrix::Identity(5, 5)) == 0.0);
}

TEST_CASE("predicted coherence closed forms") {
    CHECK(std::abs(predicted_coherence({7, 3, 1}) - std::sqrt(2.0) / 3.0) < 1e-15);
    const double mu43 = predicted_coherence({43, 21, 10});
    CHECK(std::abs(mu43 * mu43 - 1600.0 / 7056.0) < 1e-15);
    CHECK(std::abs(mu43 - 20.0 / 42.0) < 1e-15);
    CHECK(std::abs(predicted_coherence({3, 2, 1}) - 0.5) < 1e-15);
}

TEST_CASE("welch bound") {
    CHECK(std::abs(welch_bound(49, 7) - std::sqrt(1.0 / 8.0)) < 1e-15);
    CHECK(std::abs(welch_bound(9, 3) - 0.5) < 1e-15);
    CHECK(welch_bound(5, 5) == 0.0);
    CHECK_THROWS_AS(welch_bound(4, 5), InvalidInput);
    CHECK_THROWS_AS(welch_bound(4, 0), InvalidInput);
}

TEST_CASE("fast coherence matches brute force") {
    for (auto g : {ds_generator(7, 3), ds_generator(13, 4), alltop_generator(7), random_torus_generator(8, 11),
                   random_torus_generator(12, 2)}) {
        const double brute = mutual_coherence(GaborFrame(g)).mutual_coherence;
        CHECK(std::abs(fast_mutual_coherence(g) - brute) < 1e-12);
    }
}

TEST_CASE("block profile") {
    SUBCASE("(7,3,1)") {
        const auto p = block_coherence_profile(GaborFrame(ds_generator(7, 3)), {7, 3, 1});
        for (int k = 0; k < 7; ++k) {
            CHECK(std::abs(p.diagonal_block_min[k] - 0.471405) < 1e-6);
            CHECK(std::abs(p.diagonal_block_max[k] - p.diagonal_block_min[k]) < 1e-10);
        }
        CHECK(std::abs(p.offdiag_block_min - 1.0 / 3.0) < 1e-10);
        CHECK(std::abs(p.offdiag_block_max - 1.0 / 3.0) < 1e-10);
        CHECK(p.unit_diagonal_error < 1e-12);
    }
    SUBCASE("(11,5,2)") {
        const auto p = block_coherence_profile(GaborFrame(ds_generator(11, 5)), {11, 5, 2});
        CHECK(std::abs(p.offdiag_block_max - 0.4) < 1e-10);
        CHECK(std::abs(p.expected_offdiag_max - 0.4) < 1e-15);
        for (int k = 0; k < 11; ++k) CHECK(std::abs(p.diagonal_block_max[k] - std::sqrt(6.0 / 50.0)) < 1e-10);
    }
    CHECK_THROWS_AS(block_coherence_profile(GaborFrame(alltop_generator(7)), {7, 3, 1}), UnsupportedParameters);
    CHECK_THROWS_AS(block_coherence_profile(GaborFrame(ds_generator(7, 3)), {7, 4, 2}), UnsupportedParameters);
}

TEST_CASE("ETF checks") {
    const GaborFrame f3(Generator::from_difference_set(diffset::DifferenceSet::make(3, {0, 1})));
    const auto d3 = is_etf(f3, 1e-12);
    CHECK(d3.is_etf);
    CHECK(std::abs(d3.max_abs_inner - 0.5) < 1e-12);
    CHECK(std::abs(d3.welch - 0.5) < 1e-12);

    const auto d7 = is_etf(GaborFrame(ds_generator(7, 3)), 1e-10);
    CHECK_FALSE(d7.is_etf);
    CHECK(d7.tight);
    CHECK_FALSE(d7.equiangular);

    // A single block spans the K-dimensional support and is an N/K-tight ETF there.
    const GaborFrame f(ds_generator(7, 3));
    const auto db = is_etf(CMatrix(f.block(3)), 1e-10);
    CHECK(db.is_etf);
    CHECK(db.span_dimension == 3);
    CHECK(std::abs(db.frame_bound - 7.0 / 3.0) < 1e-9);
}

TEST_CASE("coherence is invariant under a global phase") {
    for (auto g : {ds_generator(13, 4), random_torus_generator(9, 4)}) {
        const auto a = mutual_coherence(GaborFrame(g));
        const auto b = mutual_coherence(GaborFrame(g.scaled(std::polar(1.0, 0.7))));
        CHECK(std::abs(a.mutual_coherence - b.mutual_coherence) < 1e-12);
        CHECK(std::abs(a.diagonal_block_offdiag_value - b.diagonal_block_offdiag_value) < 1e-12);
        CHECK(std::abs(a.offdiag_block_max - b.offdiag_block_max) < 1e-12);
        CHECK(a.argmax_pair == b.argmax_pair);
    }
}

TEST_CASE("Gram magnitudes are symmetric") {
    const GaborFrame f(random_torus_generator(6, 9));
    const CMatrix G = f.columns().adjoint() * f.columns();
    CHECK((G.cwiseAbs() - G.transpose().cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("alltop generator") {
    const auto g = alltop_generator(5);
    CHECK(std::abs(g.values()(0) - 1.0 / std::sqrt(5.0)) < 1e-15);
    CHECK(std::abs(g.values()(1) - std::polar(1.0 / std::sqrt(5.0), 2.0 * kPi / 5.0)) < 1e-15);
    CHECK(std::abs(g.norm() - 1.0) < 1e-15);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(std::abs(g.values()(i)) - 1.0 / std::sqrt(5.0)) < 1e-15);
    CHECK_THROWS_AS(alltop_generator(4), UnsupportedParameters);
    CHECK_THROWS_AS(alltop_generator(3), UnsupportedParameters);
    CHECK(std::abs(mutual_coherence(GaborFrame(alltop_generator(11))).mutual_coherence - 1.0 / std::sqrt(11.0)) < 1e-12);
}

TEST_CASE("random torus generator") {
    const auto a = random_torus_generator(16, 42);
    const auto b = random_torus_generator(16, 42);
    const auto c = random_torus_generator(16, 43);
    CHECK((a.values() - b.values()).norm() == 0.0);
    CHECK((a.values() - c.values()).norm() > 0.0);
    CHECK(std::abs(a.norm() - 1.0) < 1e-15);
    CHECK(a.kind() == GeneratorKind::random_torus);
}

TEST_CASE("generator kind names") {
    for (auto k : {GeneratorKind::alltop, GeneratorKind::random_torus, GeneratorKind::difference_set})
        CHECK(parse_generator_kind(to_string(k)) == k);
    CHECK_FALSE(parse_generator_kind("gaussian"));
}
