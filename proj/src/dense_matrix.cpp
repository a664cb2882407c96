//
// Dense matrix helpers. All multiplications go through the kernel layer so
// summation order is identical for every code path within a kernel set.
//

#include "kronsvd/dense_matrix.hpp"

#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kronsvd {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> vec(const DenseMatrix& d_mat) {
    if (d_mat.rows() != d_mat.cols())
        throw DimensionError("vec: input must be square, got " +
                             std::to_string(d_mat.rows()) + "x" +
                             std::to_string(d_mat.cols()));
    return d_mat.values();
}

DenseMatrix unvec(const std::vector<double>& d, std::size_t n) {
    if (d.size() != n * n)
        throw DimensionError("unvec: vector length " + std::to_string(d.size()) +
                             " does not equal n*n for n = " + std::to_string(n));
    DenseMatrix m(n, n);
    std::copy(d.begin(), d.end(), m.data());
    return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, bool ta, bool tb) {
    if (ta && tb) {
        // (A^T B^T) = (B A)^T; the kernels only implement nn, tn, nt.
        return transpose(matmul(b, a));
    }
    const std::size_t m = ta ? a.cols() : a.rows();
    const std::size_t p = ta ? a.rows() : a.cols();
    const std::size_t pb = tb ? b.cols() : b.rows();
    const std::size_t n = tb ? b.rows() : b.cols();
    if (p != pb)
        throw DimensionError("matmul: inner dimensions disagree (" +
                             std::to_string(p) + " vs " + std::to_string(pb) + ")");
    DenseMatrix c(m, n);
    if (m == 0 || n == 0) return c;
    if (p == 0) return c;
    kernels::ops().matmul(c.data(), a.data(), b.data(), m, p, n, ta, tb);
    return c;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x, bool ta) {
    const std::size_t m = ta ? a.cols() : a.rows();
    const std::size_t p = ta ? a.rows() : a.cols();
    if (x.size() != p)
        throw DimensionError("matvec: vector length " + std::to_string(x.size()) +
                             " does not match operator width " + std::to_string(p));
    std::vector<double> y(m, 0.0);
    if (m == 0 || p == 0) return y;
    kernels::ops().matmul(y.data(), a.data(), x.data(), m, p, 1, ta, false);
    return y;
}

DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix t(m.cols(), m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            t(j, i) = m(i, j);
    return t;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DimensionError("dot: lengths disagree (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    if (a.empty()) return 0.0;
    return kernels::ops().dot(a.data(), b.data(), a.size());
}

double norm2(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::sqrt(kernels::ops().dot(v.data(), v.data(), v.size()));
}

double frobenius_norm(const DenseMatrix& m) {
    if (m.empty()) return 0.0;
    return std::sqrt(kernels::ops().dot(m.data(), m.data(), m.size()));
}

double max_abs(const DenseMatrix& m) {
    double best = 0.0;
    const double* p = m.data();
    for (std::size_t i = 0; i < m.size(); ++i)
        best = std::max(best, std::fabs(p[i]));
    return best;
}

} // namespace kronsvd
