//
// Spectral filters and filtered solves across the three operator views:
// implicit factorization, baseline diagonal, dense oracle.
//

#include "doctest.h"

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/baseline.hpp"
#include "kronsvd/decompose.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/kron.hpp"
#include "kronsvd/problems.hpp"
#include "kronsvd/regularization.hpp"
#include "kronsvd/svd.hpp"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace kronsvd;

TEST_CASE("regularization: tsvd factors are an indicator") {
    FilterSpec spec{FilterKind::tsvd, 0.0, 2};
    std::vector<double> phi = filter_factors({3.0, 2.0, 1.0}, spec);
    REQUIRE(phi.size() == 3);
    CHECK(phi[0] == 1.0);
    CHECK(phi[1] == 1.0);
    CHECK(phi[2] == 0.0);

    FilterSpec full{FilterKind::tsvd, 0.0, 0};
    for (double p : filter_factors({3.0, 2.0, 1.0}, full)) CHECK(p == 1.0);
}

TEST_CASE("regularization: tikhonov factors and asymptotics") {
    FilterSpec spec{FilterKind::tikhonov, 3.0, 0};
    std::vector<double> phi = filter_factors({3.0, 2.0, 1.0}, spec);
    CHECK(phi[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(phi[1] == doctest::Approx(4.0 / 13.0).epsilon(1e-14));

    FilterSpec small{FilterKind::tikhonov, 1e-3, 0};
    std::vector<double> sig{1.0, 1e-6};
    std::vector<double> p2 = filter_factors(sig, small);
    CHECK(std::abs(p2[0] - 1.0) <= 1e-5);
    CHECK(p2[1] == doctest::Approx(1e-12 / (1e-12 + 1e-6)).epsilon(1e-10));

    for (double p : p2) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }

    FilterSpec bigger{FilterKind::tikhonov, 2e-3, 0};
    std::vector<double> p3 = filter_factors(sig, bigger);
    for (std::size_t i = 0; i < sig.size(); ++i) CHECK(p3[i] <= p2[i]);
    for (std::size_t i = 1; i < p2.size(); ++i) CHECK(p2[i] <= p2[i - 1]);
}

TEST_CASE("regularization: combined kind multiplies indicator and tikhonov") {
    FilterSpec spec{FilterKind::tsvd_plus_tikhonov, 1.0, 1};
    std::vector<double> phi = filter_factors({1.0, 1.0}, spec);
    CHECK(phi[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(phi[1] == 0.0);
}

TEST_CASE("regularization: filter spec validation") {
    CHECK_THROWS_AS(filter_factors({1.0}, FilterSpec{FilterKind::tikhonov, 0.0, 0}),
                    Error);
    CHECK_THROWS_AS(
        filter_factors({1.0}, FilterSpec{FilterKind::tsvd_plus_tikhonov, -1.0, 0}),
        Error);
    CHECK_THROWS_AS(filter_factors({1.0, 0.5}, FilterSpec{FilterKind::tsvd, 0.0, 3}),
                    DimensionError);
}

TEST_CASE("regularization: identity operator passes data through") {
    DenseSvdTriple triple = dense_svd(DenseMatrix::identity(4));
    auto op = make_spectral(triple);
    std::mt19937 rng(501);
    std::vector<double> d = testutil::random_vector(4, rng);
    std::vector<double> x = filtered_solve(*op, d, FilterSpec{FilterKind::tsvd, 0.0, 0});
    CHECK(testutil::rel_vec_diff(x, d) <= 1e-12);
}

TEST_CASE("regularization: full filter reproduces the direct solve") {
    std::mt19937 rng(503);
    DenseMatrix k = testutil::random_matrix(6, 6, rng);
    for (std::size_t i = 0; i < 6; ++i) k(i, i) += 4.0;
    DenseSvdTriple triple = dense_svd(k);
    auto op = make_spectral(triple);
    std::vector<double> d = testutil::random_vector(6, rng);

    std::vector<double> x = filtered_solve(*op, d, FilterSpec{FilterKind::tsvd, 0.0, 0});
    CHECK(testutil::rel_vec_diff(matvec(k, x), d) <= 1e-10);
}

TEST_CASE("regularization: implicit view equals the pinv route") {
    std::mt19937 rng(507);
    KroneckerSum ks = testutil::random_ksum(4, 2, rng);
    for (std::size_t i = 0; i < 4; ++i) {
        ks.terms[0].a(i, i) += 2.0;
        ks.terms[0].b(i, i) += 2.0;
    }
    ImplicitTsvd tsvd = build(ks, 10);
    auto op = make_spectral(tsvd);
    CHECK(op->dim() == 16);
    CHECK(op->spectrum_size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(op->sigma(i) == tsvd.s_t[i]);

    std::vector<double> d = testutil::random_vector(16, rng);
    std::vector<double> via_filter =
        filtered_solve(*op, d, FilterSpec{FilterKind::tsvd, 0.0, 7});
    std::vector<double> via_pinv = tsvd_pinv_apply(tsvd, d, 7);
    CHECK(testutil::rel_vec_diff(via_filter, via_pinv) <= 1e-12);
}

TEST_CASE("regularization: baseline view equals baseline_pinv_apply") {
    Psf psf = make_speckle_psf(8, 11);
    KroneckerSum ks = psf_kron_sum(psf);
    BaselineTsvd b = baseline_build(ks, factor_svds(ks.terms[0]));
    auto op = make_spectral(b);
    CHECK(op->spectrum_size() == 64);

    std::mt19937 rng(509);
    std::vector<double> d = testutil::random_vector(64, rng);
    const double alpha = 1e-3;
    const std::size_t k = 20;
    std::vector<double> via_filter = filtered_solve(
        *op, d, FilterSpec{FilterKind::tsvd_plus_tikhonov, alpha, k});
    std::vector<double> via_pinv = baseline_pinv_apply(b, d, k, alpha);
    CHECK(testutil::rel_vec_diff(via_filter, via_pinv) <= 1e-11);
}

TEST_CASE("regularization: dense view equals the tsvd solution") {
    std::mt19937 rng(511);
    DenseMatrix k = testutil::random_matrix(5, 5, rng);
    DenseSvdTriple triple = dense_svd(k);
    auto op = make_spectral(triple);
    std::vector<double> d = testutil::random_vector(5, rng);

    std::vector<double> via_filter =
        filtered_solve(*op, d, FilterSpec{FilterKind::tsvd, 0.0, 3});
    std::vector<double> via_tsvd = dense_tsvd_solution(triple, d, 3);
    CHECK(testutil::rel_vec_diff(via_filter, via_tsvd) <= 1e-12);
}

TEST_CASE("regularization: zero singular values contribute nothing") {
    DenseMatrix k(3, 3);
    k(0, 0) = 2.0;
    DenseSvdTriple triple = dense_svd(k);
    auto op = make_spectral(triple);
    std::vector<double> d{1.0, 1.0, 1.0};
    std::vector<double> x =
        filtered_solve(*op, d, FilterSpec{FilterKind::tsvd, 0.0, 0});
    std::vector<double> kd = matvec(k, x);
    CHECK(kd[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(x[1]) <= 1e-13);
    CHECK(std::abs(x[2]) <= 1e-13);
}

TEST_CASE("regularization: truncation beyond the spectrum is an error") {
    DenseSvdTriple triple = dense_svd(DenseMatrix::identity(3));
    auto op = make_spectral(triple);
    std::vector<double> d{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(filtered_solve(*op, d, FilterSpec{FilterKind::tsvd, 0.0, 4}),
                    DimensionError);
    CHECK_THROWS_AS(
        filtered_solve(*op, std::vector<double>(2, 1.0),
                       FilterSpec{FilterKind::tsvd, 0.0, 0}),
        DimensionError);
}

TEST_CASE("regularization: restoration beats the unregularized inverse") {
    const std::size_t n = 16;
    Psf psf = make_speckle_psf(n, 11);
    KroneckerSum ks = psf_kron_sum(psf);
    DenseMatrix img = make_satellite_image(n);
    BlurProblem prob = make_problem(psf, img, 0.02, 3);

    DenseSvdTriple oracle = dense_svd(kron_sum_dense(ks));
    auto op = make_spectral(oracle);

    auto rel_err = [&](const std::vector<double>& x) {
        double num = 0.0, den = 0.0;
        const std::vector<double> truth = vec(img);
        for (std::size_t i = 0; i < x.size(); ++i) {
            num += (x[i] - truth[i]) * (x[i] - truth[i]);
            den += truth[i] * truth[i];
        }
        return std::sqrt(num / den);
    };

    std::vector<double> naive =
        filtered_solve(*op, prob.d, FilterSpec{FilterKind::tsvd, 0.0, 0});
    std::vector<double> regularized = filtered_solve(
        *op, prob.d, FilterSpec{FilterKind::tsvd_plus_tikhonov, 1e-3, 60});
    CHECK(rel_err(regularized) * 10.0 <= rel_err(naive));
}
