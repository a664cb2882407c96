#pragma once
//
// kronsvd/approx_tsvd.hpp: approximate truncated SVD of a Kronecker sum.
// The factorization is K ~ U_hat_k S_hat_k V_hat_k^T where U_hat_k and
// V_hat_k exist only implicitly: first-term factor SVDs, a sorting
// permutation kept as index maps, and the k x k SVD of the core matrix
// T = Sigma_1k + W11. Storage is O(n^2 + k^2).
//

#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/kron.hpp"

#include <cstddef>
#include <vector>

namespace kronsvd {

struct FactorSvd {
    DenseMatrix u_a, v_a;     // n x n orthogonal
    std::vector<double> s_a;  // non-increasing
    DenseMatrix u_b, v_b;
    std::vector<double> s_b;
};

struct SawbladePermutation {
    // map[p] = Kronecker-diagonal index holding the p-th largest product
    // s_a[i]*s_b[j] (index i*n + j); ties keep the original order.
    std::vector<std::size_t> map;
    std::vector<std::size_t> inverse_map;
};

struct CoreMatrix {
    DenseMatrix t;  // k x k, diag of top-k permuted first-term values + W11
};

struct ImplicitTsvd {
    std::size_t n = 0;  // image dimension, operator is n^2 x n^2
    std::size_t k = 0;  // truncation index
    FactorSvd fsvd;
    SawbladePermutation perm;
    DenseMatrix u_t, v_t;     // k x k SVD factors of the core matrix
    std::vector<double> s_t;  // the approximate singular values, sorted

    // First-term singular value at permuted position p (the sorted
    // diagonal of Sigma_A (x) Sigma_B).
    double sigma1_permuted(std::size_t p) const {
        const std::size_t idx = perm.map[p];
        return fsvd.s_a[idx / n] * fsvd.s_b[idx % n];
    }
};

enum class Side { left, right };

// Full SVDs of both factors of the pair, deterministic signs.
FactorSvd factor_svds(const KronPair& pair);

// Sorting permutation of the products s_a[i]*s_b[j], non-increasing,
// stable ties by original Kronecker index.
SawbladePermutation sawblade_perm(const std::vector<double>& s_a,
                                  const std::vector<double>& s_b);

// Core matrix T = Sigma_1k + W11 without ever forming the N x N matrix W.
CoreMatrix assemble_w11(const KroneckerSum& ksum, const FactorSvd& fsvd,
                        const SawbladePermutation& perm, std::size_t k);

// factor_svds + sawblade_perm + assemble_w11 + dense SVD of the core.
ImplicitTsvd build(const KroneckerSum& ksum, std::size_t k);

// side = right: V_hat_k^T d; side = left: U_hat_k^T d. Four steps: Kronecker
// apply, permute, truncate to k, multiply by the small core factor.
std::vector<double> project(const ImplicitTsvd& tsvd, const std::vector<double>& d,
                            Side side);

// Reverse of project; truncation becomes zero padding.
std::vector<double> expand(const ImplicitTsvd& tsvd, const std::vector<double>& y,
                           Side side);

// U_hat_k diag(s_t) V_hat_k^T d.
std::vector<double> tsvd_apply(const ImplicitTsvd& tsvd, const std::vector<double>& d);

// V_hat diag(1/s_1..1/s_eff, 0..) U_hat^T d. effective_k <= k supports
// post-hoc down-truncation; the overload uses effective_k = k.
std::vector<double> tsvd_pinv_apply(const ImplicitTsvd& tsvd,
                                    const std::vector<double>& d,
                                    std::size_t effective_k);
std::vector<double> tsvd_pinv_apply(const ImplicitTsvd& tsvd,
                                    const std::vector<double>& d);

} // namespace kronsvd
