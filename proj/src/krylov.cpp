//
// Damped (P)CGLS and TSVD-based split preconditioners.
//

#include "kronsvd/krylov.hpp"

#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <utility>

namespace kronsvd {

namespace {

double vnorm(const std::vector<double>& v) {
    return std::sqrt(kernels::ops().dot(v.data(), v.data(), v.size()));
}

void check_square_apply(const LinearOperator& op, const char* what) {
    if (op.dim == 0 || !op.apply || !op.apply_transpose)
        throw Error(std::string(what) + ": operator is not fully populated");
}

} // namespace

LinearOperator identity_operator(std::size_t dim) {
    LinearOperator op;
    op.dim = dim;
    op.apply = [](const std::vector<double>& v) { return v; };
    op.apply_transpose = op.apply;
    return op;
}

LinearOperator make_operator(const KroneckerSum& ksum) {
    auto hold = std::make_shared<const KroneckerSum>(ksum);
    LinearOperator op;
    op.dim = ksum.n * ksum.n;
    op.apply = [hold](const std::vector<double>& v) {
        return kron_sum_apply(*hold, v, false);
    };
    op.apply_transpose = [hold](const std::vector<double>& v) {
        return kron_sum_apply(*hold, v, true);
    };
    return op;
}

LinearOperator make_operator(const DenseMatrix& k_dense) {
    if (k_dense.rows() != k_dense.cols())
        throw DimensionError("make_operator: matrix must be square");
    auto hold = std::make_shared<const DenseMatrix>(k_dense);
    LinearOperator op;
    op.dim = k_dense.rows();
    op.apply = [hold](const std::vector<double>& v) {
        return matvec(*hold, v, false);
    };
    op.apply_transpose = [hold](const std::vector<double>& v) {
        return matvec(*hold, v, true);
    };
    return op;
}

SolveReport pcgls(const LinearOperator& op, const std::vector<double>& d,
                  double alpha, const LinearOperator& precond, double tol,
                  std::size_t maxit) {
    check_square_apply(op, "pcgls");
    check_square_apply(precond, "pcgls preconditioner");
    if (d.size() != op.dim)
        throw DimensionError("pcgls: rhs length " + std::to_string(d.size()) +
                             " != operator dim " + std::to_string(op.dim));
    if (precond.dim != op.dim)
        throw DimensionError("pcgls: preconditioner dim mismatch");
    if (alpha < 0.0) throw Error("pcgls: alpha must be >= 0");
    if (!(tol > 0.0)) throw Error("pcgls: tol must be > 0");
    if (maxit < 1) throw Error("pcgls: maxit must be >= 1");

    const auto& ops = kernels::ops();
    const std::size_t n = op.dim;
    const double a2 = alpha * alpha;

    SolveReport report;
    report.x.assign(n, 0.0);

    std::vector<double> r = d;                       // d - K x, x = 0
    std::vector<double> s = op.apply_transpose(r);   // K^T r - a2 x
    report.initial_residual = vnorm(s);
    if (report.initial_residual == 0.0) {
        report.converged = true;
        return report;
    }

    std::vector<double> g = precond.apply(s);
    std::vector<double> p = g;
    double gamma = ops.dot(g.data(), g.data(), n);

    for (std::size_t it = 1; it <= maxit; ++it) {
        if (gamma <= 0.0) {
            report.diagnostic = "breakdown: zero curvature";
            break;
        }
        const std::vector<double> t = precond.apply(p);
        const std::vector<double> q = op.apply(t);
        const double delta =
            ops.dot(q.data(), q.data(), n) + a2 * ops.dot(t.data(), t.data(), n);
        if (delta <= 0.0) {
            report.diagnostic = "breakdown: zero curvature";
            break;
        }
        const double step = gamma / delta;
        ops.axpy(report.x.data(), step, t.data(), n);
        ops.axpy(r.data(), -step, q.data(), n);

        s = op.apply_transpose(r);
        if (a2 > 0.0) ops.axpy(s.data(), -a2, report.x.data(), n);
        const double resid = vnorm(s);
        report.residual_history.push_back(resid);
        report.iterations = it;
        if (resid <= tol * report.initial_residual) {
            report.converged = true;
            break;
        }

        g = precond.apply(s);
        const double gamma_next = ops.dot(g.data(), g.data(), n);
        const double beta = gamma_next / gamma;
        gamma = gamma_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = g[i] + beta * p[i];
    }
    return report;
}

SolveReport cgls(const LinearOperator& op, const std::vector<double>& d,
                 double alpha, double tol, std::size_t maxit) {
    return pcgls(op, d, alpha, identity_operator(op.dim), tol, maxit);
}

LinearOperator make_preconditioner(const ImplicitTsvd& tsvd, double alpha,
                                   std::size_t effective_k) {
    if (effective_k > tsvd.k)
        throw DimensionError("make_preconditioner: effective_k " +
                             std::to_string(effective_k) + " exceeds k " +
                             std::to_string(tsvd.k));
    const std::size_t dim = tsvd.n * tsvd.n;
    if (effective_k == 0) return identity_operator(dim);

    const double floor = 1e-10 * tsvd.s_t[0];
    auto gm1 = std::make_shared<std::vector<double>>(tsvd.k, 0.0);
    for (std::size_t i = 0; i < effective_k; ++i) {
        const double s = tsvd.s_t[i];
        if (s < floor) continue;
        (*gm1)[i] = 1.0 / std::sqrt(s * s + alpha * alpha) - 1.0;
    }

    auto hold = std::make_shared<const ImplicitTsvd>(tsvd);
    LinearOperator op;
    op.dim = dim;
    op.apply = [hold, gm1](const std::vector<double>& v) {
        std::vector<double> y = project(*hold, v, Side::right);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] *= (*gm1)[i];
        std::vector<double> out = expand(*hold, y, Side::right);
        const auto& ops = kernels::ops();
        ops.axpy(out.data(), 1.0, v.data(), out.size());
        return out;
    };
    op.apply_transpose = op.apply;
    return op;
}

LinearOperator make_preconditioner(const ImplicitTsvd& tsvd, double alpha) {
    return make_preconditioner(tsvd, alpha, tsvd.k);
}

LinearOperator make_preconditioner(const BaselineTsvd& baseline, std::size_t k,
                                   double alpha, std::size_t* warning_count) {
    const std::size_t n2 = baseline.n * baseline.n;
    if (k > n2)
        throw DimensionError("make_preconditioner: k " + std::to_string(k) +
                             " exceeds spectrum size " + std::to_string(n2));
    std::size_t warnings = 0;
    if (k == 0) {
        if (warning_count) *warning_count = 0;
        return identity_operator(n2);
    }

    const double top = std::abs(baseline.sigma_hat[baseline.perm_by_magnitude[0]]);
    const double floor = 1e-10 * top;
    auto gm1 = std::make_shared<std::vector<double>>(n2, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t idx = baseline.perm_by_magnitude[i];
        const double s = baseline.sigma_hat[idx];
        if (s <= 0.0) {
            ++warnings;
            continue;
        }
        if (s < floor) continue;
        (*gm1)[idx] = 1.0 / std::sqrt(s * s + alpha * alpha) - 1.0;
    }
    if (warning_count) *warning_count = warnings;

    auto hold = std::make_shared<const BaselineTsvd>(baseline);
    LinearOperator op;
    op.dim = n2;
    op.apply = [hold, gm1](const std::vector<double>& v) {
        const std::size_t n = hold->n;
        const DenseMatrix dm = unvec(v, n);
        std::vector<double> y =
            vec(matmul(matmul(hold->fsvd.v_b, dm, true, false), hold->fsvd.v_a));
        for (std::size_t i = 0; i < y.size(); ++i) y[i] *= (*gm1)[i];
        const DenseMatrix cm = unvec(y, n);
        std::vector<double> out =
            vec(matmul(matmul(hold->fsvd.v_b, cm), hold->fsvd.v_a, false, true));
        const auto& ops = kernels::ops();
        ops.axpy(out.data(), 1.0, v.data(), out.size());
        return out;
    };
    op.apply_transpose = op.apply;
    return op;
}

} // namespace kronsvd
