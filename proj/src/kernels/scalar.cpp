//
// Scalar reference kernels. These define the semantics the SIMD variants
// are equivalence-tested against.
//

#include "kernels_detail.hpp"

#include <cstring>

namespace kronsvd::kernels::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double* y, double alpha, const double* x, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double* x, double alpha, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) x[i] *= alpha;
}

// C = A*B, all column-major: per output column, accumulate scaled columns
// of A. Summation order over l is ascending for every C entry.
void matmul_nn(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        const double* bj = b + j * p;
        for (std::size_t l = 0; l < p; ++l)
            axpy_scalar(cj, bj[l], a + l * m, m);
    }
}

// C = A^T*B with A stored p x m: entries are contiguous dot products.
void matmul_tn(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        const double* bj = b + j * p;
        for (std::size_t i = 0; i < m; ++i)
            cj[i] = dot_scalar(a + i * p, bj, p);
    }
}

// C = A*B^T with B stored n x p.
void matmul_nt(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (std::size_t l = 0; l < p; ++l) {
        const double* al = a + l * m;
        const double* bl = b + l * n;
        for (std::size_t j = 0; j < n; ++j)
            axpy_scalar(c + j * m, bl[j], al, m);
    }
}

void matmul_scalar(double* c, const double* a, const double* b,
                   std::size_t m, std::size_t p, std::size_t n,
                   bool ta, bool tb) {
    if (ta && tb) {
        // not needed anywhere; keep the contract narrow
        std::abort();
    } else if (ta) {
        matmul_tn(c, a, b, m, p, n);
    } else if (tb) {
        matmul_nt(c, a, b, m, p, n);
    } else {
        matmul_nn(c, a, b, m, p, n);
    }
}

void gather_mac_scalar(double* w, const double* ga, const double* gb,
                       const std::int32_t* ia, const std::int32_t* ib,
                       std::size_t len) {
    for (std::size_t i = 0; i < len; ++i)
        w[i] += ga[ia[i]] * gb[ib[i]];
}

const Ops table = {
    "scalar",     dot_scalar,        axpy_scalar,
    scal_scalar,  matmul_scalar,     gather_mac_scalar,
};

} // namespace

const Ops& scalar_ops() { return table; }

} // namespace kronsvd::kernels::detail
