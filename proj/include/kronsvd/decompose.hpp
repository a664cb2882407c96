#pragma once
//
// kronsvd/decompose.hpp: Kronecker sum decompositions. Two routes: the
// generic rearrangement/SVD path for dense operators, and the O(n^3)
// structured path that builds banded Toeplitz factors from a PSF under
// zero boundary conditions.
//

#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/kron.hpp"

#include <cstddef>
#include <vector>

namespace kronsvd {

struct Psf {
    DenseMatrix array;          // n x n, nonnegative
    std::size_t center_row = 0;
    std::size_t center_col = 0;
};

// Psf with center at the maximal entry (smallest (row, col) on ties).
Psf make_psf(DenseMatrix array);
Psf make_psf(DenseMatrix array, std::size_t center_row, std::size_t center_col);

struct RearrangedMatrix {
    DenseMatrix tilde;  // n^2 x n^2; rank equals the Kronecker rank of K
};

// Block (i, j) of K becomes row j*n + i of tilde, holding vec of the block.
// Under this convention rearrange(A (x) B) = vec(A) vec(B)^T.
RearrangedMatrix rearrange(const DenseMatrix& k_dense, std::size_t n);

// Van Loan-Pitsianis: SVD of the rearrangement, terms scaled by sqrt of the
// singular values, truncated at r terms.
KroneckerSum vlp_decompose(const DenseMatrix& k_dense, std::size_t n, std::size_t r);

// Structured decomposition from the PSF's SVD: term i pairs the Toeplitz
// matrices generated by sqrt(s_i)*v_i (anchored at the center column) and
// sqrt(s_i)*u_i (anchored at the center row). Exact for the zero-boundary
// blur operator at r = rank(psf.array).
KroneckerSum psf_kron_sum(const Psf& psf, std::size_t r);
KroneckerSum psf_kron_sum(const Psf& psf);  // r = full numerical rank

// Numerical rank of the PSF array (singular values above 1e-12 relative).
std::size_t psf_rank(const Psf& psf);

// Smallest r with weights[r]/weights[0] < tol (0-based index r, so r terms
// are kept); the full length when no weight falls below the threshold.
std::size_t kron_rank_truncate(const std::vector<double>& weights, double tol);

inline constexpr double kDefaultKronRankTol = 1e-12;

} // namespace kronsvd
