//
// Dense SVD built on LAPACKE (dgesdd, with dgesvd as the fallback when the
// divide-and-conquer driver fails to converge). OpenBLAS is pinned to one
// thread so repeated runs produce identical bits.
//

#include "kronsvd/svd.hpp"

#include "kronsvd/config.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

extern "C" void openblas_set_num_threads(int);

namespace kronsvd {

namespace {

std::once_flag blas_once;

void pin_blas_threads() {
    std::call_once(blas_once, [] { openblas_set_num_threads(1); });
}

void fix_signs(DenseMatrix& u, DenseMatrix& v, std::size_t pairs) {
    for (std::size_t j = 0; j < pairs; ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
            const double mag = std::fabs(u(i, j));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (u(arg, j) < 0.0) {
            for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
        }
    }
}

} // namespace

namespace detail {

DenseSvdTriple svd(const DenseMatrix& m) {
    pin_blas_threads();
    const lapack_int rows = static_cast<lapack_int>(m.rows());
    const lapack_int cols = static_cast<lapack_int>(m.cols());
    const std::size_t mn = std::min(m.rows(), m.cols());

    DenseSvdTriple out;
    out.u = DenseMatrix(m.rows(), m.rows());
    out.v = DenseMatrix(m.cols(), m.cols());
    out.s.assign(mn, 0.0);
    if (mn == 0) return out;

    DenseMatrix work = m;
    DenseMatrix vt(m.cols(), m.cols());
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'A', rows, cols,
                                     work.data(), rows, out.s.data(),
                                     out.u.data(), rows, vt.data(), cols);
    if (info > 0) {
        work = m;
        std::vector<double> superb(mn > 1 ? mn - 1 : 1, 0.0);
        info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'A', 'A', rows, cols,
                              work.data(), rows, out.s.data(),
                              out.u.data(), rows, vt.data(), cols,
                              superb.data());
    }
    if (info != 0)
        throw NumericError("svd: LAPACK driver failed with info = " +
                           std::to_string(info));

    out.v = transpose(vt);
    fix_signs(out.u, out.v, mn);
    return out;
}

} // namespace detail

DenseSvdTriple dense_svd(const DenseMatrix& k_dense) {
    check_cap(std::max(k_dense.rows(), k_dense.cols()), "dense_svd");
    return detail::svd(k_dense);
}

std::vector<double> dense_tsvd_solution(const DenseSvdTriple& triple,
                                        const std::vector<double>& d,
                                        std::size_t k) {
    if (k == 0 || k > triple.s.size())
        throw DimensionError("dense_tsvd_solution: k = " + std::to_string(k) +
                             " outside 1.." + std::to_string(triple.s.size()));
    if (d.size() != triple.u.rows())
        throw DimensionError("dense_tsvd_solution: rhs length " +
                             std::to_string(d.size()) + " != " +
                             std::to_string(triple.u.rows()));
    if (triple.s[k - 1] <= 0.0)
        throw NumericError("dense_tsvd_solution: singular value " +
                           std::to_string(k) + " is zero");
    std::vector<double> x(triple.v.rows(), 0.0);
    const auto& ops = kernels::ops();
    for (std::size_t i = 0; i < k; ++i) {
        const double c =
            ops.dot(triple.u.col(i), d.data(), d.size()) / triple.s[i];
        ops.axpy(x.data(), c, triple.v.col(i), x.size());
    }
    return x;
}

double spectral_norm(const DenseMatrix& m) {
    if (m.empty()) return 0.0;
    const DenseSvdTriple t = detail::svd(m);
    return t.s.empty() ? 0.0 : t.s[0];
}

} // namespace kronsvd
