//
// Kronecker primitives: apply via the vec identity against brute-force
// dense products, sums of terms, and cap behavior.
//

#include "doctest.h"

#include "kronsvd/config.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/kron.hpp"
#include "test_util.hpp"

#include <random>

using namespace kronsvd;

TEST_CASE("kron: kron_dense equals the textbook product") {
    std::mt19937 rng(101);
    KronPair pair{testutil::random_matrix(3, 3, rng),
                  testutil::random_matrix(3, 3, rng)};
    DenseMatrix dense = kron_dense(pair);
    DenseMatrix brute = testutil::kron_brute(pair.a, pair.b);
    CHECK(testutil::rel_frobenius_diff(dense, brute) <= 1e-14);
}

TEST_CASE("kron: apply matches dense multiplication both ways") {
    std::mt19937 rng(103);
    for (std::size_t n : {2, 4, 5}) {
        KronPair pair{testutil::random_matrix(n, n, rng),
                      testutil::random_matrix(n, n, rng)};
        DenseMatrix dense = kron_dense(pair);
        std::vector<double> d = testutil::random_vector(n * n, rng);

        std::vector<double> fast = kron_apply(pair, d);
        std::vector<double> slow = matvec(dense, d);
        CHECK(testutil::rel_vec_diff(fast, slow) <= 1e-13);

        std::vector<double> fast_t = kron_apply(pair, d, true);
        std::vector<double> slow_t = matvec(dense, d, true);
        CHECK(testutil::rel_vec_diff(fast_t, slow_t) <= 1e-13);
    }
}

TEST_CASE("kron: vec identity (A x B) vec(X) = vec(B X A^T)") {
    std::mt19937 rng(107);
    const std::size_t n = 4;
    KronPair pair{testutil::random_matrix(n, n, rng),
                  testutil::random_matrix(n, n, rng)};
    DenseMatrix x = testutil::random_matrix(n, n, rng);

    std::vector<double> lhs = kron_apply(pair, vec(x));
    DenseMatrix rhs = matmul(matmul(pair.b, x), pair.a, false, true);
    CHECK(testutil::rel_vec_diff(lhs, vec(rhs)) <= 1e-13);
}

TEST_CASE("kron: sums apply term by term") {
    std::mt19937 rng(109);
    KroneckerSum ks = testutil::random_ksum(4, 3, rng);
    DenseMatrix dense = kron_sum_dense(ks);

    DenseMatrix by_hand(16, 16);
    for (const KronPair& term : ks.terms) {
        DenseMatrix part = testutil::kron_brute(term.a, term.b);
        for (std::size_t j = 0; j < 16; ++j)
            for (std::size_t i = 0; i < 16; ++i) by_hand(i, j) += part(i, j);
    }
    CHECK(testutil::rel_frobenius_diff(dense, by_hand) <= 1e-13);

    std::vector<double> d = testutil::random_vector(16, rng);
    CHECK(testutil::rel_vec_diff(kron_sum_apply(ks, d), matvec(dense, d)) <= 1e-13);
    CHECK(testutil::rel_vec_diff(kron_sum_apply(ks, d, true), matvec(dense, d, true)) <=
          1e-13);
}

TEST_CASE("kron: dimension and cap errors") {
    std::mt19937 rng(113);
    KronPair bad{testutil::random_matrix(2, 3, rng),
                 testutil::random_matrix(2, 2, rng)};
    CHECK_THROWS_AS(check_pair(bad), DimensionError);
    KronPair mixed{testutil::random_matrix(2, 2, rng),
                   testutil::random_matrix(3, 3, rng)};
    CHECK_THROWS_AS(check_pair(mixed), DimensionError);

    KronPair ok{testutil::random_matrix(2, 2, rng),
                testutil::random_matrix(2, 2, rng)};
    CHECK_THROWS_AS(kron_apply(ok, std::vector<double>(5, 0.0)), DimensionError);

    const std::size_t old_cap = materialization_cap();
    set_materialization_cap(3);
    KronPair big{testutil::random_matrix(2, 2, rng),
                 testutil::random_matrix(2, 2, rng)};
    CHECK_THROWS_AS(kron_dense(big), CapacityError);
    set_materialization_cap(old_cap);
    CHECK_NOTHROW(kron_dense(big));
}
