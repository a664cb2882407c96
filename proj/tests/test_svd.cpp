//
// Dense SVD oracle: reconstruction, ordering, deterministic signs, solves,
// and the materialization cap.
//

#include "doctest.h"

#include "kronsvd/config.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/svd.hpp"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace kronsvd;

TEST_CASE("svd: identity has unit spectrum") {
    DenseSvdTriple t = dense_svd(DenseMatrix::identity(4));
    REQUIRE(t.s.size() == 4);
    for (double s : t.s) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("svd: diagonal values come out sorted") {
    DenseMatrix m(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    DenseSvdTriple t = dense_svd(m);
    CHECK(t.s[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(t.s[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(t.s[2] == doctest::Approx(1.0).epsilon(1e-14));
    DenseMatrix recon(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < 3; ++l)
                acc += t.u(i, l) * t.s[l] * t.v(j, l);
            recon(i, j) = acc;
        }
    CHECK(testutil::rel_frobenius_diff(recon, m) <= 1e-13);
}

TEST_CASE("svd: random 20x20 reconstructs and factors are orthogonal") {
    std::mt19937 rng(23);
    DenseMatrix m = testutil::random_matrix(20, 20, rng);
    DenseSvdTriple t = dense_svd(m);

    for (std::size_t i = 1; i < t.s.size(); ++i) CHECK(t.s[i] <= t.s[i - 1]);
    CHECK(testutil::max_abs_off_identity(t.u) <= 1e-11);
    CHECK(testutil::max_abs_off_identity(t.v) <= 1e-11);

    DenseMatrix us = t.u;
    for (std::size_t j = 0; j < 20; ++j)
        for (std::size_t i = 0; i < 20; ++i) us(i, j) *= t.s[j];
    DenseMatrix recon = matmul(us, t.v, false, true);
    CHECK(testutil::rel_frobenius_diff(recon, m) <= 1e-11);
}

TEST_CASE("svd: sign convention makes repeated runs identical") {
    std::mt19937 rng(31);
    DenseMatrix m = testutil::random_matrix(8, 8, rng);
    DenseSvdTriple t1 = dense_svd(m);
    DenseSvdTriple t2 = dense_svd(m);
    for (std::size_t j = 0; j < 8; ++j) {
        double peak = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < 8; ++i)
            if (std::abs(t1.u(i, j)) > peak) {
                peak = std::abs(t1.u(i, j));
                arg = i;
            }
        CHECK(t1.u(arg, j) > 0.0);
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(t1.u(i, j) == t2.u(i, j));
            CHECK(t1.v(i, j) == t2.v(i, j));
        }
    }
}

TEST_CASE("svd: tsvd solutions match direct formulas") {
    std::mt19937 rng(37);
    DenseMatrix m = testutil::random_matrix(6, 6, rng);
    for (std::size_t i = 0; i < 6; ++i) m(i, i) += 4.0;
    DenseSvdTriple t = dense_svd(m);
    std::vector<double> d = testutil::random_vector(6, rng);

    std::vector<double> x = dense_tsvd_solution(t, d, 6);
    std::vector<double> kd = matvec(m, x);
    CHECK(testutil::rel_vec_diff(kd, d) <= 1e-9);

    std::vector<double> x1 = dense_tsvd_solution(t, d, 1);
    double coeff = 0.0;
    for (std::size_t i = 0; i < 6; ++i) coeff += t.u(i, 0) * d[i];
    coeff /= t.s[0];
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(std::abs(x1[i] - coeff * t.v(i, 0)) <= 1e-12);
}

TEST_CASE("svd: zero singular value within k is an error") {
    DenseMatrix m(3, 3);
    m(0, 0) = 1.0;
    DenseSvdTriple t = dense_svd(m);
    std::vector<double> d{1.0, 0.0, 0.0};
    CHECK_NOTHROW(dense_tsvd_solution(t, d, 1));
    CHECK_THROWS_AS(dense_tsvd_solution(t, d, 3), NumericError);
}

TEST_CASE("svd: spectral norm of a rank-1 outer product") {
    std::mt19937 rng(41);
    std::vector<double> u = testutil::random_vector(7, rng);
    std::vector<double> v = testutil::random_vector(7, rng);
    DenseMatrix m(7, 7);
    for (std::size_t j = 0; j < 7; ++j)
        for (std::size_t i = 0; i < 7; ++i) m(i, j) = u[i] * v[j];
    CHECK(spectral_norm(m) ==
          doctest::Approx(norm2(u) * norm2(v)).epsilon(1e-12));
    CHECK(spectral_norm(DenseMatrix()) == 0.0);
}

TEST_CASE("svd: materialization cap refusal") {
    const std::size_t old_cap = materialization_cap();
    set_materialization_cap(10);
    CHECK_THROWS_AS(dense_svd(DenseMatrix(11, 11)), CapacityError);
    set_materialization_cap(old_cap);
    CHECK_NOTHROW(dense_svd(DenseMatrix::identity(11)));
}
