#pragma once
//
// kronsvd/svd.hpp: dense SVD oracle and truncated solves. u and v are full
// square orthogonal factors so trailing subspaces are available directly.
//

#include "kronsvd/dense_matrix.hpp"

#include <cstddef>
#include <vector>

namespace kronsvd {

struct DenseSvdTriple {
    DenseMatrix u;          // m x m
    std::vector<double> s;  // min(m, n), non-increasing, nonnegative
    DenseMatrix v;          // n x n, columns are right singular vectors
};

// Full SVD with deterministic signs (largest-magnitude entry of each left
// singular vector made positive, first such index on ties). Refuses inputs
// larger than the materialization cap.
DenseSvdTriple dense_svd(const DenseMatrix& k_dense);

// x = V_k diag(1/s_1..1/s_k) U_k^T d. Errors when s_k is zero.
std::vector<double> dense_tsvd_solution(const DenseSvdTriple& triple,
                                        const std::vector<double>& d,
                                        std::size_t k);

// Largest singular value; 0 for an empty matrix.
double spectral_norm(const DenseMatrix& m);

namespace detail {
// Same as dense_svd but without the cap check, for internal factors that are
// small by construction (n x n PSF factors, k x k core matrices).
DenseSvdTriple svd(const DenseMatrix& m);
}

} // namespace kronsvd
