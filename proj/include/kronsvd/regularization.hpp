#pragma once
//
// kronsvd/regularization.hpp: spectral filtering over any operator exposing
// its spectrum and projection/expansion maps. The solve is
// x = V diag(phi_i / sigma_i) U^T d, with phi_i / sigma_i = 0 when sigma_i
// is zero.
//

#include "kronsvd/approx_tsvd.hpp"
#include "kronsvd/baseline.hpp"
#include "kronsvd/svd.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace kronsvd {

enum class FilterKind { tsvd, tikhonov, tsvd_plus_tikhonov };

struct FilterSpec {
    FilterKind kind = FilterKind::tsvd;
    double alpha = 0.0;
    // Truncation index for kinds involving tsvd; 0 means the operator's
    // full spectrum size.
    std::size_t effective_truncation = 0;
};

// Spectral view of a factorization: sigma(i) may be signed for the baseline.
class SpectralOperator {
public:
    virtual ~SpectralOperator() = default;
    virtual std::size_t dim() const = 0;            // N = n^2
    virtual std::size_t spectrum_size() const = 0;  // k (or N)
    virtual double sigma(std::size_t i) const = 0;
    virtual std::vector<double> ut_apply(const std::vector<double>& d) const = 0;
    virtual std::vector<double> v_expand(const std::vector<double>& y) const = 0;
};

std::unique_ptr<SpectralOperator> make_spectral(const ImplicitTsvd& tsvd);
std::unique_ptr<SpectralOperator> make_spectral(const BaselineTsvd& baseline);
std::unique_ptr<SpectralOperator> make_spectral(const DenseSvdTriple& triple);

// Per-kind filter factors in [0, 1]; magnitudes are used so signed baseline
// spectra filter symmetrically.
std::vector<double> filter_factors(const std::vector<double>& sigmas,
                                   const FilterSpec& spec);

std::vector<double> filtered_solve(const SpectralOperator& op,
                                   const std::vector<double>& d,
                                   const FilterSpec& spec);

} // namespace kronsvd
