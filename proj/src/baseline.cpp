//
// Baseline TSVD with first-term singular vectors and the optimal diagonal.
// The diagonal of a Kronecker product is the Kronecker product of the
// diagonals, so sigma_hat accumulates per term from the small products.
//

#include "kronsvd/baseline.hpp"

#include "kronsvd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace kronsvd {

BaselineTsvd baseline_build(const KroneckerSum& ksum, const FactorSvd& fsvd) {
    if (ksum.terms.empty()) throw Error("baseline_build: sum has no terms");
    const std::size_t n = ksum.n;

    BaselineTsvd b;
    b.n = n;
    b.fsvd = fsvd;
    b.sigma_hat.assign(n * n, 0.0);
    for (const KronPair& pair : ksum.terms) {
        if (pair.a.rows() != n || pair.b.rows() != n)
            throw DimensionError("baseline_build: term dimension mismatch");
        const DenseMatrix ga = matmul(matmul(fsvd.u_a, pair.a, true, false), fsvd.v_a);
        const DenseMatrix gb = matmul(matmul(fsvd.u_b, pair.b, true, false), fsvd.v_b);
        for (std::size_t i = 0; i < n; ++i) {
            const double da = ga(i, i);
            for (std::size_t j = 0; j < n; ++j)
                b.sigma_hat[i * n + j] += da * gb(j, j);
        }
    }

    b.perm_by_magnitude.resize(n * n);
    std::iota(b.perm_by_magnitude.begin(), b.perm_by_magnitude.end(), std::size_t{0});
    std::stable_sort(b.perm_by_magnitude.begin(), b.perm_by_magnitude.end(),
                     [&](std::size_t x, std::size_t y) {
                         return std::fabs(b.sigma_hat[x]) > std::fabs(b.sigma_hat[y]);
                     });
    return b;
}

std::vector<double> baseline_pinv_apply(const BaselineTsvd& b,
                                        const std::vector<double>& d,
                                        std::size_t k, double alpha) {
    const std::size_t n = b.n;
    if (k > n * n)
        throw DimensionError("baseline_pinv_apply: k = " + std::to_string(k) +
                             " exceeds n^2 = " + std::to_string(n * n));
    if (d.size() != n * n)
        throw DimensionError("baseline_pinv_apply: vector length mismatch");

    // y = U_1^T d = (U_A^T (x) U_B^T) d.
    const DenseMatrix dm = unvec(d, n);
    std::vector<double> y =
        vec(matmul(matmul(b.fsvd.u_b, dm, true, false), b.fsvd.u_a));

    std::vector<double> filtered(n * n, 0.0);
    for (std::size_t rank_pos = 0; rank_pos < k; ++rank_pos) {
        const std::size_t idx = b.perm_by_magnitude[rank_pos];
        const double sigma = b.sigma_hat[idx];
        if (alpha == 0.0 && sigma == 0.0)
            throw NumericError("baseline_pinv_apply: zero sigma within k at rank " +
                               std::to_string(rank_pos + 1));
        filtered[idx] = sigma / (sigma * sigma + alpha * alpha) * y[idx];
    }

    // x = V_1 filtered = (V_A (x) V_B) filtered.
    const DenseMatrix fm = unvec(filtered, n);
    return vec(matmul(matmul(b.fsvd.v_b, fm), b.fsvd.v_a, false, true));
}

} // namespace kronsvd
