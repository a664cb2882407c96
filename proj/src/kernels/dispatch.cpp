//
// Runtime kernel selection. The first call to ops() picks the widest
// instruction set the host supports, unless KRONSVD_KERNEL overrides it.
//

#include "kronsvd/kernels.hpp"

#include "kernels_detail.hpp"

#include <atomic>
#include <cstdlib>

namespace kronsvd::kernels {

namespace {

const Ops* pick_best() {
#ifdef KRONSVD_HAVE_AVX2_TU
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &detail::avx2_ops();
#endif
#ifdef KRONSVD_HAVE_NEON_TU
    return &detail::neon_ops();
#endif
    return &detail::scalar_ops();
}

const Ops* pick_named(std::string_view name) {
    if (name == "auto") return pick_best();
    if (name == "scalar") return &detail::scalar_ops();
#ifdef KRONSVD_HAVE_AVX2_TU
    if (name == "avx2" &&
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &detail::avx2_ops();
#endif
#ifdef KRONSVD_HAVE_NEON_TU
    if (name == "neon") return &detail::neon_ops();
#endif
    return nullptr;
}

std::atomic<const Ops*> active{nullptr};

const Ops* init_from_env() {
    if (const char* env = std::getenv("KRONSVD_KERNEL")) {
        if (const Ops* named = pick_named(env)) return named;
    }
    return pick_best();
}

} // namespace

const Ops& ops() {
    const Ops* cur = active.load(std::memory_order_acquire);
    if (!cur) {
        const Ops* fresh = init_from_env();
        // Racing first calls may both store; both store the same choice.
        active.store(fresh, std::memory_order_release);
        cur = fresh;
    }
    return *cur;
}

bool select(std::string_view name) {
    const Ops* named = pick_named(name);
    if (!named) return false;
    active.store(named, std::memory_order_release);
    return true;
}

std::vector<std::string_view> available() {
    std::vector<std::string_view> out;
    out.emplace_back("scalar");
#ifdef KRONSVD_HAVE_AVX2_TU
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        out.emplace_back("avx2");
#endif
#ifdef KRONSVD_HAVE_NEON_TU
    out.emplace_back("neon");
#endif
    return out;
}

} // namespace kronsvd::kernels
