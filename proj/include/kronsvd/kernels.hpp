#pragma once
//
// kronsvd/kernels.hpp: data-parallel arithmetic kernels.
//
// Scalar reference implementations plus SIMD variants (AVX2 on x86_64,
// NEON on aarch64) selected once per process at first use.  Every kernel
// set keeps a fixed summation order, so results are bit-reproducible for
// a given selection; different sets may round differently.
//

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace kronsvd::kernels {

struct Ops {
    const char* name;

    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t len);

    // y[i] += alpha * x[i]
    void (*axpy)(double* y, double alpha, const double* x, std::size_t len);

    // x[i] *= alpha
    void (*scal)(double* x, double alpha, std::size_t len);

    // Column-major dense matmul, C = op(A) * op(B), C overwritten.
    // Shapes after op: (m x p) * (p x n) -> (m x n).  A is stored m x p
    // (ta false) or p x m (ta true); B is p x n or n x p.  ta && tb is
    // unsupported.
    void (*matmul)(double* c, const double* a, const double* b,
                   std::size_t m, std::size_t p, std::size_t n,
                   bool ta, bool tb);

    // w[i] += ga[ia[i]] * gb[ib[i]]: the scatter step of the core-matrix
    // accumulation.
    void (*gather_mac)(double* w, const double* ga, const double* gb,
                       const std::int32_t* ia, const std::int32_t* ib,
                       std::size_t len);
};

// Active kernel set.  First call selects: KRONSVD_KERNEL env var if set
// ("scalar", "avx2", "neon", "auto"), otherwise the best supported set.
const Ops& ops();

// Force a specific set (primarily for tests).  Returns false if the set is
// not available on this CPU; the active set is then unchanged.
bool select(std::string_view name);

// Names of the sets usable on this machine, scalar first.
std::vector<std::string_view> available();

} // namespace kronsvd::kernels
