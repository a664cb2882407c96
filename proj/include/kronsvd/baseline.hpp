#pragma once
//
// kronsvd/baseline.hpp: the fixed-vector baseline. Singular vectors come
// from the first Kronecker term only; the diagonal sigma_hat = diag of
// U_1^T K V_1 is Frobenius-optimal among diagonals but may carry negative
// entries.
//

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/kron.hpp"

#include <cstddef>
#include <vector>

namespace kronsvd {

struct BaselineTsvd {
    std::size_t n = 0;
    FactorSvd fsvd;
    std::vector<double> sigma_hat;               // n^2, signed, Kronecker order
    std::vector<std::size_t> perm_by_magnitude;  // sorts |sigma_hat| descending
};

BaselineTsvd baseline_build(const KroneckerSum& ksum, const FactorSvd& fsvd);

// V_1 diag(f_i) U_1^T d with f_i = sigma_i/(sigma_i^2 + alpha^2) on the k
// largest-magnitude entries (signed sigma), zero elsewhere. alpha = 0 gives
// the plain truncated pseudoinverse.
std::vector<double> baseline_pinv_apply(const BaselineTsvd& b,
                                        const std::vector<double>& d,
                                        std::size_t k, double alpha);

} // namespace kronsvd
