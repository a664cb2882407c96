#pragma once
//
// kronsvd/config.hpp: process-wide configuration knobs.
//

#include <cstddef>

namespace kronsvd {

// Largest matrix dimension N for which explicit N x N materialization
// (kron_dense, rearrange, dense_svd, gap_blocks) is allowed.  Default 4096;
// the KRONSVD_CAP environment variable overrides it at startup.
std::size_t materialization_cap();
void set_materialization_cap(std::size_t cap);

// Throws CapacityError when dim exceeds the cap. `what` names the operation.
void check_cap(std::size_t dim, const char* what);

} // namespace kronsvd
