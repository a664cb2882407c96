//
// Gap blocks and the four accuracy bounds, desk scale only.
//

#include "kronsvd/bounds.hpp"

#include "kronsvd/config.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kronsvd {

namespace {

DenseMatrix materialize_hat(const ImplicitTsvd& tsvd, Side side) {
    const std::size_t n2 = tsvd.n * tsvd.n;
    DenseMatrix out(n2, tsvd.k);
    std::vector<double> e(tsvd.k, 0.0);
    for (std::size_t i = 0; i < tsvd.k; ++i) {
        e[i] = 1.0;
        const std::vector<double> col = expand(tsvd, e, side);
        std::copy(col.begin(), col.end(), out.col(i));
        e[i] = 0.0;
    }
    return out;
}

double sigma0_plus_w22_norm(const GapBlocks& gap) {
    if (gap.k == gap.n2) return 0.0;
    DenseMatrix m = gap.w22;
    for (std::size_t i = 0; i < gap.sigma0_hat.size(); ++i)
        m(i, i) += gap.sigma0_hat[i];
    return spectral_norm(m);
}

} // namespace

DenseMatrix materialize_u_hat(const ImplicitTsvd& tsvd) {
    return materialize_hat(tsvd, Side::left);
}

DenseMatrix materialize_v_hat(const ImplicitTsvd& tsvd) {
    return materialize_hat(tsvd, Side::right);
}

GapBlocks gap_blocks(const DenseMatrix& k_dense, const ImplicitTsvd& tsvd) {
    const std::size_t n2 = tsvd.n * tsvd.n;
    if (k_dense.rows() != n2 || k_dense.cols() != n2)
        throw DimensionError("gap_blocks: operator must be " +
                             std::to_string(n2) + " x " + std::to_string(n2));
    check_cap(n2, "gap_blocks");

    const DenseMatrix u1 = kron_dense(KronPair{tsvd.fsvd.u_a, tsvd.fsvd.u_b});
    const DenseMatrix v1 = kron_dense(KronPair{tsvd.fsvd.v_a, tsvd.fsvd.v_b});
    const DenseMatrix w = matmul(matmul(u1, k_dense, true, false), v1);

    DenseMatrix wp(n2, n2);
    for (std::size_t q = 0; q < n2; ++q)
        for (std::size_t p = 0; p < n2; ++p)
            wp(p, q) = w(tsvd.perm.map[p], tsvd.perm.map[q]);
    for (std::size_t p = 0; p < n2; ++p)
        wp(p, p) -= tsvd.sigma1_permuted(p);

    GapBlocks gap;
    gap.n2 = n2;
    gap.k = tsvd.k;
    const std::size_t k = tsvd.k;
    const std::size_t tail = n2 - k;
    gap.w11 = DenseMatrix(k, k);
    gap.w12 = DenseMatrix(k, tail);
    gap.w21 = DenseMatrix(tail, k);
    gap.w22 = DenseMatrix(tail, tail);
    for (std::size_t q = 0; q < n2; ++q)
        for (std::size_t p = 0; p < n2; ++p) {
            const double x = wp(p, q);
            if (p < k && q < k) gap.w11(p, q) = x;
            else if (p < k) gap.w12(p, q - k) = x;
            else if (q < k) gap.w21(p - k, q) = x;
            else gap.w22(p - k, q - k) = x;
        }
    gap.w12_hat = matmul(tsvd.u_t, gap.w12, true, false);
    gap.w21_hat = matmul(gap.w21, tsvd.v_t);
    gap.sigma0_hat.resize(tail);
    for (std::size_t p = k; p < n2; ++p)
        gap.sigma0_hat[p - k] = tsvd.sigma1_permuted(p);
    return gap;
}

BoundValue signal_subspace_bound(const GapBlocks& gap, double sigma_k) {
    const double t = sigma0_plus_w22_norm(gap);
    const double denom = sigma_k * sigma_k - t * t;
    if (denom <= 0.0) return {0.0, false};
    const double num = sigma_k * spectral_norm(gap.w21_hat) +
                       spectral_norm(gap.w12_hat) * t;
    return {num / denom, true};
}

BoundValue noise_subspace_bound(const GapBlocks& gap, double sigma_k) {
    const double t = sigma0_plus_w22_norm(gap);
    const double denom = sigma_k * sigma_k - t * t;
    if (denom <= 0.0) return {0.0, false};
    const double num = sigma_k * spectral_norm(gap.w12_hat) +
                       spectral_norm(gap.w21_hat) * t;
    return {num / denom, true};
}

double pinv_bound(double sigma1, double sigma_hat_k, double noise_dist,
                  double w21_hat_norm) {
    if (!(sigma_hat_k > 0.0))
        throw NumericError("pinv_bound: sigma_hat_k must be > 0");
    return kPhi / sigma_hat_k * (sigma1 * noise_dist + w21_hat_norm);
}

BoundValue solution_bound(double sigma1, double sigma_k, double sigma_hat_k,
                          double noise_dist, double w21_hat_norm,
                          double r_norm, double d_norm) {
    if (!(sigma_k > 0.0) || !(sigma_hat_k > 0.0))
        throw NumericError("solution_bound: sigma_k and sigma_hat_k must be > 0");
    if (r_norm >= d_norm) return {0.0, false};
    const double ratio = r_norm / d_norm;
    const double factor = std::sqrt(1.0 - ratio * ratio);
    const double value = kPhi * sigma1 / (sigma_k * sigma_hat_k * factor) *
                         (sigma1 * noise_dist + w21_hat_norm);
    return {value, true};
}

double true_subspace_distance(const DenseSvdTriple& oracle,
                              const ImplicitTsvd& tsvd, SubspaceKind which) {
    const std::size_t n2 = tsvd.n * tsvd.n;
    const std::size_t k = tsvd.k;
    const DenseMatrix& full =
        which == SubspaceKind::signal ? oracle.u : oracle.v;
    if (full.rows() != n2 || full.cols() != n2)
        throw DimensionError("true_subspace_distance: oracle dimension mismatch");

    DenseMatrix lead(n2, k);
    for (std::size_t j = 0; j < k; ++j)
        std::copy(full.col(j), full.col(j) + n2, lead.col(j));
    const DenseMatrix hat = which == SubspaceKind::signal
                                ? materialize_u_hat(tsvd)
                                : materialize_v_hat(tsvd);

    const DenseMatrix g = matmul(hat, lead, true, false);
    const DenseMatrix proj = matmul(hat, g);
    DenseMatrix c = lead;
    kernels::ops().axpy(c.data(), -1.0, proj.data(), c.size());
    return spectral_norm(c);
}

BoundReport evaluate_bounds(const DenseMatrix& k_dense, const ImplicitTsvd& tsvd,
                            const std::vector<double>& d) {
    const std::size_t n2 = tsvd.n * tsvd.n;
    const std::size_t k = tsvd.k;
    if (d.size() != n2)
        throw DimensionError("evaluate_bounds: rhs length mismatch");

    const DenseSvdTriple oracle = dense_svd(k_dense);
    const GapBlocks gap = gap_blocks(k_dense, tsvd);

    BoundReport report;
    report.sigma1 = oracle.s[0];
    report.sigma_k = oracle.s[k - 1];
    report.sigma_hat_k = tsvd.s_t[k - 1];
    if (!(report.sigma_k > 0.0))
        throw NumericError("evaluate_bounds: oracle sigma_k is zero");

    report.true_signal_dist =
        true_subspace_distance(oracle, tsvd, SubspaceKind::signal);
    report.true_noise_dist =
        true_subspace_distance(oracle, tsvd, SubspaceKind::noise);
    report.signal_bound = signal_subspace_bound(gap, report.sigma_k);
    report.noise_bound = noise_subspace_bound(gap, report.sigma_k);

    const double w21_hat_norm = spectral_norm(gap.w21_hat);
    report.pinv_bound.value = pinv_bound(report.sigma1, report.sigma_hat_k,
                                         report.true_noise_dist, w21_hat_norm);
    report.pinv_bound.valid = true;

    DenseMatrix v_scaled(n2, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double inv = 1.0 / oracle.s[j];
        const double* src = oracle.v.col(j);
        double* dst = v_scaled.col(j);
        for (std::size_t i = 0; i < n2; ++i) dst[i] = inv * src[i];
    }
    DenseMatrix u_lead(n2, k);
    for (std::size_t j = 0; j < k; ++j)
        std::copy(oracle.u.col(j), oracle.u.col(j) + n2, u_lead.col(j));
    const DenseMatrix pinv_true = matmul(v_scaled, u_lead, false, true);

    DenseMatrix pinv_hat(n2, n2);
    std::vector<double> e(n2, 0.0);
    for (std::size_t j = 0; j < n2; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = tsvd_pinv_apply(tsvd, e);
        std::copy(col.begin(), col.end(), pinv_hat.col(j));
        e[j] = 0.0;
    }
    DenseMatrix diff = pinv_hat;
    kernels::ops().axpy(diff.data(), -1.0, pinv_true.data(), diff.size());
    report.true_pinv_err = spectral_norm(diff) * report.sigma_k;

    const std::vector<double> x_tsvd = dense_tsvd_solution(oracle, d, k);
    const std::vector<double> x_hat = tsvd_pinv_apply(tsvd, d);
    std::vector<double> dx = x_hat;
    kernels::ops().axpy(dx.data(), -1.0, x_tsvd.data(), dx.size());
    const double x_norm = norm2(x_tsvd);
    report.true_solution_err = x_norm > 0.0 ? norm2(dx) / x_norm : 0.0;

    std::vector<double> r = matvec(k_dense, x_tsvd);
    kernels::ops().scal(r.data(), -1.0, r.size());
    kernels::ops().axpy(r.data(), 1.0, d.data(), r.size());
    report.solution_bound =
        solution_bound(report.sigma1, report.sigma_k, report.sigma_hat_k,
                       report.true_noise_dist, w21_hat_norm, norm2(r), norm2(d));
    return report;
}

} // namespace kronsvd
