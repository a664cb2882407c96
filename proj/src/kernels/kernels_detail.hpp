#pragma once
//
// Internal: per-ISA kernel tables. Each table lives in a translation unit
// compiled with the matching target flags; dispatch.cpp never executes an
// instruction the CPU lacks because selection is guarded by feature checks.
//

#include "kronsvd/kernels.hpp"

namespace kronsvd::kernels::detail {

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
#define KRONSVD_HAVE_AVX2_TU 1
const Ops& avx2_ops();
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define KRONSVD_HAVE_NEON_TU 1
const Ops& neon_ops();
#endif

} // namespace kronsvd::kernels::detail
