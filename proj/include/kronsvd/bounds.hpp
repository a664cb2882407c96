#pragma once
//
// kronsvd/bounds.hpp: a-posteriori accuracy bounds for the approximate
// truncated SVD, evaluated against dense oracles at desk scale. The gap
// matrix W collects everything the first Kronecker term misses; its
// permuted blocks drive the subspace, pseudoinverse, and solution bounds.
//

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/svd.hpp"

#include <cstddef>
#include <vector>

namespace kronsvd {

// (1 + sqrt(5)) / 2, fixed constant of the pseudoinverse perturbation bound.
inline constexpr double kPhi = 1.6180339887498948482;

struct GapBlocks {
    std::size_t n2 = 0;  // N, full operator dimension
    std::size_t k = 0;
    DenseMatrix w11;      // k x k
    DenseMatrix w12;      // k x (N-k)
    DenseMatrix w21;      // (N-k) x k
    DenseMatrix w22;      // (N-k) x (N-k)
    DenseMatrix w12_hat;  // U_t^T * w12
    DenseMatrix w21_hat;  // w21 * V_t
    std::vector<double> sigma0_hat;  // trailing first-term values, permuted order
};

struct BoundValue {
    double value = 0.0;
    bool valid = true;  // false when the hypothesis fails; value is then unusable
};

struct BoundReport {
    BoundValue signal_bound;
    BoundValue noise_bound;
    BoundValue pinv_bound;
    BoundValue solution_bound;
    double true_signal_dist = 0.0;
    double true_noise_dist = 0.0;
    double true_pinv_err = 0.0;
    double true_solution_err = 0.0;
    double phi = kPhi;
    double sigma1 = 0.0;
    double sigma_k = 0.0;
    double sigma_hat_k = 0.0;
};

enum class SubspaceKind { signal, noise };

// N x k approximate singular vector blocks, one expand per basis vector.
DenseMatrix materialize_u_hat(const ImplicitTsvd& tsvd);
DenseMatrix materialize_v_hat(const ImplicitTsvd& tsvd);

// W = U1^T (K - first term) V1, permuted on both sides, partitioned at k.
GapBlocks gap_blocks(const DenseMatrix& k_dense, const ImplicitTsvd& tsvd);

// (sigma_k ||w21_hat|| + ||w12_hat|| t) / (sigma_k^2 - t^2) with
// t = ||diag(sigma0_hat) + w22||; invalid when sigma_k^2 <= t^2.
BoundValue signal_subspace_bound(const GapBlocks& gap, double sigma_k);

// Same denominator, hat-block roles swapped in the numerator.
BoundValue noise_subspace_bound(const GapBlocks& gap, double sigma_k);

// (phi / sigma_hat_k) (sigma1 * noise_dist + w21_hat_norm).
double pinv_bound(double sigma1, double sigma_hat_k, double noise_dist,
                  double w21_hat_norm);

// phi sigma1 / (sigma_k sigma_hat_k sqrt(1 - (r/d)^2)) *
// (sigma1 * noise_dist + w21_hat_norm); invalid when r_norm >= d_norm.
BoundValue solution_bound(double sigma1, double sigma_k, double sigma_hat_k,
                          double noise_dist, double w21_hat_norm,
                          double r_norm, double d_norm);

// signal: ||U_k^T U_hat_0||; noise: ||V_k^T V_hat_0||. Computed as the
// spectral norm of the oracle's leading block projected off the
// approximate leading subspace.
double true_subspace_distance(const DenseSvdTriple& oracle,
                              const ImplicitTsvd& tsvd, SubspaceKind which);

// Full evaluation on one instance: oracle SVD, gap blocks, all four bounds
// with the true noise distance, and the matching true errors for rhs d.
BoundReport evaluate_bounds(const DenseMatrix& k_dense, const ImplicitTsvd& tsvd,
                            const std::vector<double>& d);

} // namespace kronsvd
