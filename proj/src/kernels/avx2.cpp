//
// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma;
// dispatch only routes here after __builtin_cpu_supports confirms both.
//

#include "kernels_detail.hpp"

#ifdef KRONSVD_HAVE_AVX2_TU

#include <immintrin.h>

#include <cstring>

namespace kronsvd::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t len) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= len) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < len; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy_avx2(double* y, double alpha, const double* x, std::size_t len) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < len; ++i) y[i] += alpha * x[i];
}

void scal_avx2(double* x, double alpha, std::size_t len) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < len; ++i) x[i] *= alpha;
}

void matmul_nn(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        const double* bj = b + j * p;
        for (std::size_t l = 0; l < p; ++l)
            axpy_avx2(cj, bj[l], a + l * m, m);
    }
}

void matmul_tn(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        const double* bj = b + j * p;
        for (std::size_t i = 0; i < m; ++i)
            cj[i] = dot_avx2(a + i * p, bj, p);
    }
}

void matmul_nt(double* c, const double* a, const double* b,
               std::size_t m, std::size_t p, std::size_t n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (std::size_t l = 0; l < p; ++l) {
        const double* al = a + l * m;
        const double* bl = b + l * n;
        for (std::size_t j = 0; j < n; ++j)
            axpy_avx2(c + j * m, bl[j], al, m);
    }
}

void matmul_avx2(double* c, const double* a, const double* b,
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

void gather_mac_avx2(double* w, const double* ga, const double* gb,
                     const std::int32_t* ia, const std::int32_t* ib,
                     std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m128i via = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ia + i));
        __m128i vib = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ib + i));
        __m256d va = _mm256_i32gather_pd(ga, via, 8);
        __m256d vb = _mm256_i32gather_pd(gb, vib, 8);
        __m256d vw = _mm256_loadu_pd(w + i);
        _mm256_storeu_pd(w + i, _mm256_fmadd_pd(va, vb, vw));
    }
    for (; i < len; ++i) w[i] += ga[ia[i]] * gb[ib[i]];
}

const Ops table = {
    "avx2",     dot_avx2,        axpy_avx2,
    scal_avx2,  matmul_avx2,     gather_mac_avx2,
};

} // namespace

const Ops& avx2_ops() { return table; }

} // namespace kronsvd::kernels::detail

#endif // KRONSVD_HAVE_AVX2_TU
