#pragma once
//
// kronsvd/dense_matrix.hpp: column-major dense matrix and small BLAS-like
// helpers built on the runtime-selected kernels.
//

#include <cstddef>
#include <vector>

namespace kronsvd {

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* col(std::size_t j) { return data_.data() + j * rows_; }
    const double* col(std::size_t j) const { return data_.data() + j * rows_; }

    const std::vector<double>& values() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Column-major stacking of a square matrix; throws DimensionError otherwise.
std::vector<double> vec(const DenseMatrix& d_mat);

// Inverse of vec; length(d) must equal n*n.
DenseMatrix unvec(const std::vector<double>& d, std::size_t n);

// C = op(A) * op(B) with op = transpose when the flag is set.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b,
                   bool ta = false, bool tb = false);

// y = op(A) * x.
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x,
                           bool ta = false);

DenseMatrix transpose(const DenseMatrix& m);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
double frobenius_norm(const DenseMatrix& m);
double max_abs(const DenseMatrix& m);

} // namespace kronsvd
