//
// Process-wide guard against accidentally materializing huge dense operators.
//

#include "kronsvd/config.hpp"

#include "kronsvd/errors.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

namespace kronsvd {

namespace {

std::size_t cap_from_env() {
    if (const char* env = std::getenv("KRONSVD_CAP")) {
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
        if (ec == std::errc{} && *ptr == '\0' && value > 0) return value;
    }
    return std::size_t{4096};
}

std::atomic<std::size_t> cap{0};

} // namespace

std::size_t materialization_cap() {
    std::size_t cur = cap.load(std::memory_order_relaxed);
    if (cur == 0) {
        cur = cap_from_env();
        cap.store(cur, std::memory_order_relaxed);
    }
    return cur;
}

void set_materialization_cap(std::size_t value) {
    cap.store(value == 0 ? cap_from_env() : value, std::memory_order_relaxed);
}

void check_cap(std::size_t dim, const char* what) {
    const std::size_t limit = materialization_cap();
    if (dim > limit)
        throw CapacityError(std::string(what) + ": dimension " +
                            std::to_string(dim) + " exceeds materialization cap " +
                            std::to_string(limit) +
                            " (override with KRONSVD_CAP)");
}

} // namespace kronsvd
