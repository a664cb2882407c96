//
// NEON kernels for aarch64 (ASIMD is baseline there, no extra flags).
//

#include "kernels_detail.hpp"

#ifdef KRONSVD_HAVE_NEON_TU

#include <arm_neon.h>

#include <cstring>

namespace kronsvd::kernels::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t len) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    if (i + 2 <= len) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        i += 2;
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < len; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy_neon(double* y, double alpha, const double* x, std::size_t len) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < len; ++i) y[i] += alpha * x[i];
}

void scal_neon(double* x, double alpha, std::size_t len) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2)
        vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < len; ++i) x[i] *= alpha;
}

void matmul_nn(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        const double* bj = b + j * p;
        for (std::size_t l = 0; l < p; ++l)
            axpy_neon(cj, bj[l], a + l * m, m);
    }
}

void matmul_tn(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        const double* bj = b + j * p;
        for (std::size_t i = 0; i < m; ++i)
            cj[i] = dot_neon(a + i * p, bj, p);
    }
}

void matmul_nt(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (std::size_t l = 0; l < p; ++l) {
        const double* al = a + l * m;
        const double* bl = b + l * n;
        for (std::size_t j = 0; j < n; ++j)
            axpy_neon(c + j * m, bl[j], al, m);
    }
}

void matmul_neon(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t p, std::size_t n,
                 bool ta, bool tb) {
    if (ta && tb) {
        std::abort();
    } else if (ta) {
        matmul_tn(c, a, b, m, p, n);
    } else if (tb) {
        matmul_nt(c, a, b, m, p, n);
    } else {
        matmul_nn(c, a, b, m, p, n);
    }
}

// No gather on NEON; the loads dominate anyway.
void gather_mac_neon(double* w, const double* ga, const double* gb,
                     const std::int32_t* ia, const std::int32_t* ib,
                     std::size_t len) {
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t va = {ga[ia[i]], ga[ia[i + 1]]};
        float64x2_t vb = {gb[ib[i]], gb[ib[i + 1]]};
        vst1q_f64(w + i, vfmaq_f64(vld1q_f64(w + i), va, vb));
    }
    for (; i < len; ++i) w[i] += ga[ia[i]] * gb[ib[i]];
}

const Ops table = {
    "neon",     dot_neon,        axpy_neon,
    scal_neon,  matmul_neon,     gather_mac_neon,
};

} // namespace

const Ops& neon_ops() { return table; }

} // namespace kronsvd::kernels::detail

#endif // KRONSVD_HAVE_NEON_TU
