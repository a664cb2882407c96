//
// A-posteriori bounds: gap blocks against brute-force materialization, the
// four bound formulas, true subspace distances, and validity flags.
//

#include "doctest.h"

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/bounds.hpp"
#include "kronsvd/config.hpp"
#include "kronsvd/decompose.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/kron.hpp"
#include "kronsvd/problems.hpp"
#include "kronsvd/svd.hpp"
#include "test_util.hpp"

#include <cmath>
#include <cstdint>
#include <random>

using namespace kronsvd;

namespace {

// Brute-force permuted gap matrix via explicit U1, V1 and index maps.
DenseMatrix brute_permuted_w(const KroneckerSum& ks, const ImplicitTsvd& tsvd) {
    const std::size_t n2 = ks.n * ks.n;
    DenseMatrix u1 = testutil::kron_brute(tsvd.fsvd.u_a, tsvd.fsvd.u_b);
    DenseMatrix v1 = testutil::kron_brute(tsvd.fsvd.v_a, tsvd.fsvd.v_b);
    DenseMatrix rest(n2, n2);
    for (std::size_t t = 1; t < ks.terms.size(); ++t) {
        DenseMatrix part = testutil::kron_brute(ks.terms[t].a, ks.terms[t].b);
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t i = 0; i < n2; ++i) rest(i, j) += part(i, j);
    }
    DenseMatrix w = matmul(matmul(u1, rest, true, false), v1);
    DenseMatrix wp(n2, n2);
    for (std::size_t p = 0; p < n2; ++p)
        for (std::size_t q = 0; q < n2; ++q)
            wp(p, q) = w(tsvd.perm.map[p], tsvd.perm.map[q]);
    return wp;
}

} // namespace

TEST_CASE("bounds: single-term instances have zero gap") {
    std::mt19937 rng(701);
    KroneckerSum ks = testutil::random_ksum(3, 1, rng);
    ImplicitTsvd tsvd = build(ks, 5);
    GapBlocks gap = gap_blocks(kron_sum_dense(ks), tsvd);

    CHECK(frobenius_norm(gap.w11) <= 1e-12);
    CHECK(frobenius_norm(gap.w12) <= 1e-12);
    CHECK(frobenius_norm(gap.w21) <= 1e-12);
    CHECK(frobenius_norm(gap.w22) <= 1e-12);

    BoundValue sb = signal_subspace_bound(gap, tsvd.sigma1_permuted(4));
    CHECK(sb.valid);
    CHECK(sb.value <= 1e-11);
    BoundValue nb = noise_subspace_bound(gap, tsvd.sigma1_permuted(4));
    CHECK(nb.valid);
    CHECK(nb.value <= 1e-11);
}

TEST_CASE("bounds: gap blocks match brute-force materialization") {
    std::mt19937 rng(703);
    KroneckerSum ks = testutil::random_ksum(3, 2, rng);
    const std::size_t n2 = 9, k = 4;
    ImplicitTsvd tsvd = build(ks, k);
    GapBlocks gap = gap_blocks(kron_sum_dense(ks), tsvd);
    DenseMatrix wp = brute_permuted_w(ks, tsvd);

    REQUIRE(gap.w11.rows() == k);
    REQUIRE(gap.w22.rows() == n2 - k);
    for (std::size_t p = 0; p < n2; ++p)
        for (std::size_t q = 0; q < n2; ++q) {
            const double want = wp(p, q);
            double got;
            if (p < k && q < k) got = gap.w11(p, q);
            else if (p < k) got = gap.w12(p, q - k);
            else if (q < k) got = gap.w21(p - k, q);
            else got = gap.w22(p - k, q - k);
            CHECK(std::abs(got - want) <= 1e-11);
        }

    DenseMatrix w12_hat = matmul(tsvd.u_t, gap.w12, true, false);
    CHECK(testutil::rel_frobenius_diff(gap.w12_hat, w12_hat) <= 1e-12);
    DenseMatrix w21_hat = matmul(gap.w21, tsvd.v_t);
    CHECK(testutil::rel_frobenius_diff(gap.w21_hat, w21_hat) <= 1e-12);

    REQUIRE(gap.sigma0_hat.size() == n2 - k);
    for (std::size_t p = k; p < n2; ++p)
        CHECK(gap.sigma0_hat[p - k] ==
              doctest::Approx(tsvd.sigma1_permuted(p)).epsilon(1e-13));
}

TEST_CASE("bounds: full truncation leaves only w11") {
    std::mt19937 rng(707);
    KroneckerSum ks = testutil::random_ksum(3, 2, rng);
    ImplicitTsvd tsvd = build(ks, 9);
    GapBlocks gap = gap_blocks(kron_sum_dense(ks), tsvd);

    CHECK(gap.w12.size() == 0);
    CHECK(gap.w21.size() == 0);
    CHECK(gap.w22.size() == 0);
    CHECK(gap.sigma0_hat.empty());
    DenseMatrix wp = brute_permuted_w(ks, tsvd);
    CHECK(testutil::rel_frobenius_diff(gap.w11, wp) <= 1e-11);
}

TEST_CASE("bounds: subspace bound formula wiring") {
    std::mt19937 rng(709);
    KroneckerSum ks = testutil::random_ksum(3, 2, rng);
    ImplicitTsvd tsvd = build(ks, 4);
    GapBlocks gap = gap_blocks(kron_sum_dense(ks), tsvd);

    DenseMatrix tail = gap.w22;
    for (std::size_t i = 0; i < tail.rows(); ++i)
        tail(i, i) += gap.sigma0_hat[i];
    const double t = spectral_norm(tail);
    const double w12h = spectral_norm(gap.w12_hat);
    const double w21h = spectral_norm(gap.w21_hat);

    const double sigma_big = 2.0 * t + 1.0;
    BoundValue sb = signal_subspace_bound(gap, sigma_big);
    REQUIRE(sb.valid);
    const double want_signal =
        (sigma_big * w21h + w12h * t) / (sigma_big * sigma_big - t * t);
    CHECK(sb.value == doctest::Approx(want_signal).epsilon(1e-12));

    BoundValue nb = noise_subspace_bound(gap, sigma_big);
    REQUIRE(nb.valid);
    const double want_noise =
        (sigma_big * w12h + w21h * t) / (sigma_big * sigma_big - t * t);
    CHECK(nb.value == doctest::Approx(want_noise).epsilon(1e-12));

    BoundValue invalid = signal_subspace_bound(gap, t * 0.5);
    CHECK_FALSE(invalid.valid);
    CHECK(invalid.value >= 0.0);
}

TEST_CASE("bounds: pinv bound constant and linearity") {
    CHECK(kPhi == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
    CHECK(pinv_bound(1.0, 1.0, 0.0, 0.0) == 0.0);

    const double base = pinv_bound(2.0, 0.5, 0.1, 0.3);
    CHECK(base == doctest::Approx(kPhi / 0.5 * (2.0 * 0.1 + 0.3)).epsilon(1e-14));
    const double doubled = pinv_bound(4.0, 0.5, 0.1, 0.3);
    CHECK(doubled - base ==
          doctest::Approx(kPhi / 0.5 * 2.0 * 0.1).epsilon(1e-12));
    CHECK_THROWS_AS(pinv_bound(1.0, 0.0, 0.1, 0.3), NumericError);
}

TEST_CASE("bounds: solution bound formula and validity") {
    CHECK(solution_bound(1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0).value == 0.0);

    BoundValue b = solution_bound(2.0, 1.0, 0.5, 0.1, 0.3, 0.6, 1.0);
    REQUIRE(b.valid);
    const double want = kPhi * 2.0 / (1.0 * 0.5 * std::sqrt(1.0 - 0.36)) *
                        (2.0 * 0.1 + 0.3);
    CHECK(b.value == doctest::Approx(want).epsilon(1e-13));

    BoundValue closer = solution_bound(2.0, 1.0, 0.5, 0.1, 0.3, 0.99, 1.0);
    CHECK(closer.value > b.value);
    BoundValue invalid = solution_bound(2.0, 1.0, 0.5, 0.1, 0.3, 1.0, 1.0);
    CHECK_FALSE(invalid.valid);
    CHECK(invalid.value >= 0.0);
}

TEST_CASE("bounds: true distance vanishes for exact factorizations") {
    std::mt19937 rng(711);
    KroneckerSum ks = testutil::random_ksum(3, 1, rng);
    DenseMatrix k_dense = kron_sum_dense(ks);
    DenseSvdTriple oracle = dense_svd(k_dense);

    ImplicitTsvd full = build(ks, 9);
    CHECK(true_subspace_distance(oracle, full, SubspaceKind::signal) <= 1e-9);
    CHECK(true_subspace_distance(oracle, full, SubspaceKind::noise) <= 1e-9);

    ImplicitTsvd part = build(ks, 4);
    CHECK(true_subspace_distance(oracle, part, SubspaceKind::signal) <= 1e-9);
    CHECK(true_subspace_distance(oracle, part, SubspaceKind::noise) <= 1e-9);
}

TEST_CASE("bounds: orthogonal subspaces are at distance one") {
    DenseMatrix a(2, 2), b(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 0.5;
    b(0, 0) = 1.0;
    b(1, 1) = 0.5;
    KroneckerSum ks;
    ks.n = 2;
    ks.terms.push_back(KronPair{a, b});
    ks.weights.push_back(1.0);
    ks.kron_rank_full = 1;
    ImplicitTsvd tsvd = build(ks, 1);

    DenseMatrix other(4, 4);
    other(0, 0) = 0.1;
    other(3, 3) = 1.0;
    DenseSvdTriple oracle = dense_svd(other);
    CHECK(true_subspace_distance(oracle, tsvd, SubspaceKind::signal) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(true_subspace_distance(oracle, tsvd, SubspaceKind::noise) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bounds: distance equals the projector difference norm") {
    Psf psf = make_speckle_psf(8, 11);
    KroneckerSum ks = psf_kron_sum(psf);
    DenseMatrix k_dense = kron_sum_dense(ks);
    DenseSvdTriple oracle = dense_svd(k_dense);

    for (std::size_t k : {8, 16, 24}) {
        ImplicitTsvd tsvd = build(ks, k);
        const double dist =
            true_subspace_distance(oracle, tsvd, SubspaceKind::signal);

        DenseMatrix u_hat = materialize_u_hat(tsvd);
        DenseMatrix u_lead(64, k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < 64; ++i) u_lead(i, j) = oracle.u(i, j);
        DenseMatrix diff = matmul(u_lead, u_lead, false, true);
        DenseMatrix hat_proj = matmul(u_hat, u_hat, false, true);
        for (std::size_t j = 0; j < 64; ++j)
            for (std::size_t i = 0; i < 64; ++i) diff(i, j) -= hat_proj(i, j);
        CHECK(std::abs(dist - spectral_norm(diff)) <= 1e-10);
        CHECK(dist >= 0.0);
        CHECK(dist <= 1.0 + 1e-12);
    }
}

TEST_CASE("bounds: evaluated bounds dominate true errors") {
    std::mt19937 rng(713);
    std::size_t valid_signal = 0;
    for (int trial = 0; trial < 12; ++trial) {
        KroneckerSum ks = testutil::random_ksum(3, 2, rng);
        DenseMatrix k_dense = kron_sum_dense(ks);
        ImplicitTsvd tsvd = build(ks, 4);
        std::vector<double> d = testutil::random_vector(9, rng);
        BoundReport rep = evaluate_bounds(k_dense, tsvd, d);

        DenseSvdTriple oracle = dense_svd(k_dense);
        CHECK(rep.sigma1 == doctest::Approx(oracle.s[0]).epsilon(1e-12));
        CHECK(rep.sigma_k == doctest::Approx(oracle.s[3]).epsilon(1e-12));
        CHECK(rep.sigma_hat_k == doctest::Approx(tsvd.s_t[3]).epsilon(1e-12));
        CHECK(rep.phi == kPhi);

        if (rep.signal_bound.valid) {
            ++valid_signal;
            CHECK(rep.true_signal_dist <= rep.signal_bound.value + 1e-9);
        }
        if (rep.noise_bound.valid)
            CHECK(rep.true_noise_dist <= rep.noise_bound.value + 1e-9);
        if (rep.pinv_bound.valid)
            CHECK(rep.true_pinv_err <= rep.pinv_bound.value + 1e-9);
        if (rep.solution_bound.valid)
            CHECK(rep.true_solution_err <= rep.solution_bound.value + 1e-9);

        CHECK(rep.signal_bound.value >= 0.0);
        CHECK(rep.noise_bound.value >= 0.0);
        CHECK(rep.pinv_bound.value >= 0.0);
        CHECK(rep.solution_bound.value >= 0.0);
        CHECK(rep.true_signal_dist <= 1.0 + 1e-12);
        CHECK(rep.true_noise_dist <= 1.0 + 1e-12);
    }
    CHECK(valid_signal > 0);
}

TEST_CASE("bounds: scaling the operator rescales the pinv bound") {
    std::mt19937 rng(717);
    KroneckerSum ks = testutil::random_ksum(3, 2, rng);
    std::vector<double> d = testutil::random_vector(9, rng);
    ImplicitTsvd tsvd = build(ks, 4);
    BoundReport rep = evaluate_bounds(kron_sum_dense(ks), tsvd, d);

    const double c = 4.0;
    KroneckerSum scaled = ks;
    for (KronPair& term : scaled.terms)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t i = 0; i < 3; ++i) term.a(i, j) *= c;
    ImplicitTsvd tsvd_scaled = build(scaled, 4);
    BoundReport rep_scaled =
        evaluate_bounds(kron_sum_dense(scaled), tsvd_scaled, d);

    REQUIRE(rep.signal_bound.valid == rep_scaled.signal_bound.valid);
    if (rep.signal_bound.valid) {
        CHECK(rep_scaled.signal_bound.value ==
              doctest::Approx(rep.signal_bound.value).epsilon(1e-9));
        CHECK(rep_scaled.pinv_bound.value ==
              doctest::Approx(rep.pinv_bound.value / c).epsilon(1e-9));
    }
}

TEST_CASE("bounds: materialization cap refusal") {
    std::mt19937 rng(719);
    KroneckerSum ks = testutil::random_ksum(3, 1, rng);
    ImplicitTsvd tsvd = build(ks, 4);
    const std::size_t old_cap = materialization_cap();
    set_materialization_cap(8);
    CHECK_THROWS_AS(gap_blocks(DenseMatrix(9, 9), tsvd), CapacityError);
    set_materialization_cap(old_cap);
}
