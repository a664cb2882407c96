#pragma once
//
// kronsvd/krylov.hpp: CGLS and preconditioned CGLS for the damped
// least-squares problem min ||Kx - d||^2 + alpha^2 ||x||^2, plus
// preconditioners built from approximate truncated SVDs. Preconditioners
// return the action of the split factor E = V_hat diag(g) V_hat^T +
// (I - V_hat V_hat^T) with g_i = 1/sqrt(sigma_i^2 + alpha^2).
//

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/baseline.hpp"
#include "kronsvd/dense_matrix.hpp"
#include "kronsvd/kron.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kronsvd {

struct LinearOperator {
    std::size_t dim = 0;  // square, maps R^dim to R^dim
    std::function<std::vector<double>(const std::vector<double>&)> apply;
    std::function<std::vector<double>(const std::vector<double>&)> apply_transpose;
};

struct SolveReport {
    std::vector<double> x;
    std::size_t iterations = 0;
    // ||K^T d|| at the zero start, the reference for the relative test.
    double initial_residual = 0.0;
    // ||K^T (d - K x) - alpha^2 x|| after each completed iteration,
    // unpreconditioned for every solver variant.
    std::vector<double> residual_history;
    bool converged = false;
    std::string diagnostic;  // nonempty only on breakdown
};

LinearOperator identity_operator(std::size_t dim);
LinearOperator make_operator(const KroneckerSum& ksum);
LinearOperator make_operator(const DenseMatrix& k_dense);

// Conjugate gradients on the damped normal equations, zero start.
// Stops when the normal residual falls below tol times its initial value.
SolveReport cgls(const LinearOperator& op, const std::vector<double>& d,
                 double alpha, double tol = 1e-6, std::size_t maxit = 200);

// Same iteration on the symmetrically preconditioned system
// E (K^T K + alpha^2 I) E. precond must be symmetric; the identity
// preconditioner reproduces cgls exactly.
SolveReport pcgls(const LinearOperator& op, const std::vector<double>& d,
                  double alpha, const LinearOperator& precond,
                  double tol = 1e-6, std::size_t maxit = 200);

// Split preconditioner from an implicit TSVD: spectral part over the first
// effective_k approximate singular triplets, identity on the complement.
// Values below 1e-10 times the largest are left alone. effective_k = 0
// degenerates to the identity; the two-argument overload uses tsvd.k.
LinearOperator make_preconditioner(const ImplicitTsvd& tsvd, double alpha,
                                   std::size_t effective_k);
LinearOperator make_preconditioner(const ImplicitTsvd& tsvd, double alpha);

// Same form over the top-k magnitude entries of the baseline diagonal.
// Nonpositive entries are skipped (g_i = 1); the skip count is written to
// warning_count when given.
LinearOperator make_preconditioner(const BaselineTsvd& baseline, std::size_t k,
                                   double alpha,
                                   std::size_t* warning_count = nullptr);

} // namespace kronsvd
