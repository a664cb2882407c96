#pragma once
//
// kronsvd/serialize.hpp: directory bundles for decompositions and
// factorizations. A plain-text manifest carries the scalars; matrices and
// vectors live in CSV files with shortest round-trip decimals, so a save
// and load round-trip is bit exact.
//

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/baseline.hpp"
#include "kronsvd/kron.hpp"

#include <cstddef>
#include <map>
#include <string>

namespace kronsvd {

void save_kron_sum(const std::string& dir, const KroneckerSum& ksum);
KroneckerSum load_kron_sum(const std::string& dir);

void save_implicit_tsvd(const std::string& dir, const ImplicitTsvd& tsvd);
ImplicitTsvd load_implicit_tsvd(const std::string& dir);

void save_baseline_tsvd(const std::string& dir, const BaselineTsvd& baseline);
BaselineTsvd load_baseline_tsvd(const std::string& dir);

struct SerializedStats {
    std::size_t total_values = 0;
    std::map<std::string, std::size_t> per_file;  // basename -> value count
};

// Counts numeric values across the bundle's CSV files.
SerializedStats serialized_stats(const std::string& dir);

} // namespace kronsvd
