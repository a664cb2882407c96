#pragma once
//
// kronsvd/kron.hpp: Kronecker-product primitives. Products are applied
// through the vec identity (A (x) B) d = vec(B * unvec(d) * A^T) and the
// big product is only materialized through the cap-guarded kron_dense.
//

#include "kronsvd/dense_matrix.hpp"

#include <cstddef>
#include <vector>

namespace kronsvd {

struct KronPair {
    DenseMatrix a;  // n x n
    DenseMatrix b;  // n x n
};

struct KroneckerSum {
    std::size_t n = 0;                 // factor dimension
    std::vector<KronPair> terms;       // ordered, first term dominant
    std::vector<double> weights;       // non-increasing, one per kept term
    std::size_t kron_rank_full = 0;    // R, full rank of the rearrangement
};

// Throws DimensionError unless both factors are square with equal dimension.
void check_pair(const KronPair& pair);

// (A (x) B) d, or (A^T (x) B^T) d when transpose is set. Never materializes
// the product.
std::vector<double> kron_apply(const KronPair& pair, const std::vector<double>& d,
                               bool transpose = false);

// Sum of kron_apply over all terms, in term order.
std::vector<double> kron_sum_apply(const KroneckerSum& ksum,
                                   const std::vector<double>& d,
                                   bool transpose = false);

// Explicit n^2 x n^2 product; refuses when n^2 exceeds the materialization cap.
DenseMatrix kron_dense(const KronPair& pair);

// Sum of kron_dense over all terms (oracle helper, same cap rule).
DenseMatrix kron_sum_dense(const KroneckerSum& ksum);

} // namespace kronsvd
