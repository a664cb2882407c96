//
// Column-major storage, vec round trips, and the small matmul helpers.
//

#include "doctest.h"

#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/errors.hpp"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace kronsvd;

TEST_CASE("dense_matrix: column-major layout and identity") {
    DenseMatrix m(2, 3);
    m(0, 0) = 1.0;
    m(1, 0) = 2.0;
    m(0, 1) = 3.0;
    m(1, 2) = 4.0;
    CHECK(m.values()[0] == 1.0);
    CHECK(m.values()[1] == 2.0);
    CHECK(m.values()[2] == 3.0);
    CHECK(m.col(2)[1] == 4.0);

    DenseMatrix eye = DenseMatrix::identity(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(eye(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("dense_matrix: vec and unvec invert each other") {
    std::mt19937 rng(5);
    DenseMatrix m = testutil::random_matrix(4, 4, rng);
    std::vector<double> v = vec(m);
    REQUIRE(v.size() == 16);
    CHECK(v[1] == m(1, 0));
    CHECK(v[4] == m(0, 1));
    DenseMatrix back = unvec(v, 4);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) CHECK(back(i, j) == m(i, j));

    CHECK_THROWS_AS(vec(testutil::random_matrix(2, 3, rng)), DimensionError);
    CHECK_THROWS_AS(unvec(std::vector<double>(5, 0.0), 2), DimensionError);
}

TEST_CASE("dense_matrix: matmul and matvec against brute force") {
    std::mt19937 rng(17);
    DenseMatrix a = testutil::random_matrix(5, 3, rng);
    DenseMatrix b = testutil::random_matrix(3, 4, rng);

    DenseMatrix c = matmul(a, b);
    REQUIRE(c.rows() == 5);
    REQUIRE(c.cols() == 4);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double want = 0.0;
            for (std::size_t l = 0; l < 3; ++l) want += a(i, l) * b(l, j);
            CHECK(std::abs(c(i, j) - want) <= 1e-13);
        }

    DenseMatrix ct = matmul(a, transpose(b), false, true);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(ct(i, j) - c(i, j)) <= 1e-13);

    DenseMatrix at = matmul(transpose(a), b, true, false);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(at(i, j) - c(i, j)) <= 1e-13);

    std::vector<double> x = testutil::random_vector(3, rng);
    std::vector<double> y = matvec(a, x);
    for (std::size_t i = 0; i < 5; ++i) {
        double want = 0.0;
        for (std::size_t l = 0; l < 3; ++l) want += a(i, l) * x[l];
        CHECK(std::abs(y[i] - want) <= 1e-13);
    }
    std::vector<double> yt = matvec(a, y, true);
    REQUIRE(yt.size() == 3);

    CHECK_THROWS_AS(matmul(a, a), DimensionError);
    CHECK_THROWS_AS(matvec(a, y, false), DimensionError);
}

TEST_CASE("dense_matrix: norms and dot") {
    DenseMatrix m(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = 4.0;
    CHECK(frobenius_norm(m) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(max_abs(m) == 4.0);

    std::vector<double> a{1.0, 2.0, 2.0};
    CHECK(norm2(a) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(dot(a, a) == doctest::Approx(9.0).epsilon(1e-14));
}
