//
// Spectral filtering over implicit, baseline, and dense factorizations.
//

#include "kronsvd/regularization.hpp"

#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"

#include <cmath>
#include <string>

namespace kronsvd {

namespace {

struct ImplicitView final : SpectralOperator {
    const ImplicitTsvd& t;
    explicit ImplicitView(const ImplicitTsvd& tsvd) : t(tsvd) {}
    std::size_t dim() const override { return t.n * t.n; }
    std::size_t spectrum_size() const override { return t.k; }
    double sigma(std::size_t i) const override { return t.s_t[i]; }
    std::vector<double> ut_apply(const std::vector<double>& d) const override {
        return project(t, d, Side::left);
    }
    std::vector<double> v_expand(const std::vector<double>& y) const override {
        return expand(t, y, Side::right);
    }
};

struct BaselineView final : SpectralOperator {
    const BaselineTsvd& b;
    explicit BaselineView(const BaselineTsvd& baseline) : b(baseline) {}
    std::size_t dim() const override { return b.n * b.n; }
    std::size_t spectrum_size() const override { return b.n * b.n; }
    double sigma(std::size_t i) const override {
        return b.sigma_hat[b.perm_by_magnitude[i]];
    }
    std::vector<double> ut_apply(const std::vector<double>& d) const override {
        const DenseMatrix dm = unvec(d, b.n);
        const std::vector<double> y =
            vec(matmul(matmul(b.fsvd.u_b, dm, true, false), b.fsvd.u_a));
        std::vector<double> out(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            out[i] = y[b.perm_by_magnitude[i]];
        return out;
    }
    std::vector<double> v_expand(const std::vector<double>& y) const override {
        std::vector<double> scattered(b.n * b.n, 0.0);
        for (std::size_t i = 0; i < y.size(); ++i)
            scattered[b.perm_by_magnitude[i]] = y[i];
        const DenseMatrix fm = unvec(scattered, b.n);
        return vec(matmul(matmul(b.fsvd.v_b, fm), b.fsvd.v_a, false, true));
    }
};

struct DenseView final : SpectralOperator {
    const DenseSvdTriple& t;
    explicit DenseView(const DenseSvdTriple& triple) : t(triple) {}
    std::size_t dim() const override { return t.u.rows(); }
    std::size_t spectrum_size() const override { return t.s.size(); }
    double sigma(std::size_t i) const override { return t.s[i]; }
    std::vector<double> ut_apply(const std::vector<double>& d) const override {
        std::vector<double> out(t.s.size());
        const auto& ops = kernels::ops();
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = ops.dot(t.u.col(i), d.data(), d.size());
        return out;
    }
    std::vector<double> v_expand(const std::vector<double>& y) const override {
        std::vector<double> out(t.v.rows(), 0.0);
        const auto& ops = kernels::ops();
        for (std::size_t i = 0; i < y.size(); ++i)
            ops.axpy(out.data(), y[i], t.v.col(i), out.size());
        return out;
    }
};

std::size_t resolve_truncation(std::size_t requested, std::size_t spectrum) {
    if (requested == 0) return spectrum;
    if (requested > spectrum)
        throw DimensionError("filter: truncation " + std::to_string(requested) +
                             " exceeds spectrum size " + std::to_string(spectrum));
    return requested;
}

} // namespace

std::unique_ptr<SpectralOperator> make_spectral(const ImplicitTsvd& tsvd) {
    return std::make_unique<ImplicitView>(tsvd);
}
std::unique_ptr<SpectralOperator> make_spectral(const BaselineTsvd& baseline) {
    return std::make_unique<BaselineView>(baseline);
}
std::unique_ptr<SpectralOperator> make_spectral(const DenseSvdTriple& triple) {
    return std::make_unique<DenseView>(triple);
}

std::vector<double> filter_factors(const std::vector<double>& sigmas,
                                   const FilterSpec& spec) {
    if (spec.kind != FilterKind::tsvd && spec.alpha <= 0.0)
        throw Error("filter_factors: tikhonov kinds require alpha > 0");
    const std::size_t cut = resolve_truncation(spec.effective_truncation,
                                               sigmas.size());
    std::vector<double> phi(sigmas.size(), 0.0);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        const double s2 = sigmas[i] * sigmas[i];
        const double tik = s2 / (s2 + spec.alpha * spec.alpha);
        switch (spec.kind) {
            case FilterKind::tsvd:
                phi[i] = i < cut ? 1.0 : 0.0;
                break;
            case FilterKind::tikhonov:
                phi[i] = tik;
                break;
            case FilterKind::tsvd_plus_tikhonov:
                phi[i] = i < cut ? tik : 0.0;
                break;
        }
    }
    return phi;
}

std::vector<double> filtered_solve(const SpectralOperator& op,
                                   const std::vector<double>& d,
                                   const FilterSpec& spec) {
    if (d.size() != op.dim())
        throw DimensionError("filtered_solve: rhs length " +
                             std::to_string(d.size()) + " != operator dim " +
                             std::to_string(op.dim()));
    std::vector<double> sigmas(op.spectrum_size());
    for (std::size_t i = 0; i < sigmas.size(); ++i) sigmas[i] = op.sigma(i);
    const std::vector<double> phi = filter_factors(sigmas, spec);

    std::vector<double> y = op.ut_apply(d);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = sigmas[i] == 0.0 ? 0.0 : phi[i] / sigmas[i] * y[i];
    return op.v_expand(y);
}

} // namespace kronsvd
