//
// Reordered approximate truncated SVD. The W11 accumulation follows the
// permuted index decomposition: position p of the sorted diagonal came from
// Kronecker index map[p] = rowA*n + rowB, so the (p, q) entry of the
// permuted W gathers G_A(rowA(p), rowA(q)) * G_B(rowB(p), rowB(q)) summed
// over the trailing Kronecker terms.
//

#include "kronsvd/approx_tsvd.hpp"

#include "kronsvd/errors.hpp"
#include "kronsvd/kernels.hpp"
#include "kronsvd/svd.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

namespace kronsvd {

namespace {

// (Ma (x) Mb) d, or the transposed form, without copying the factors.
std::vector<double> pair_apply(const DenseMatrix& ma, const DenseMatrix& mb,
                               const std::vector<double>& d, bool transpose) {
    const DenseMatrix dm = unvec(d, mb.rows());
    DenseMatrix out = transpose ? matmul(matmul(mb, dm, true, false), ma)
                                : matmul(matmul(mb, dm), ma, false, true);
    return vec(out);
}

} // namespace

FactorSvd factor_svds(const KronPair& pair) {
    check_pair(pair);
    DenseSvdTriple ta = detail::svd(pair.a);
    DenseSvdTriple tb = detail::svd(pair.b);
    FactorSvd f;
    f.u_a = std::move(ta.u);
    f.v_a = std::move(ta.v);
    f.s_a = std::move(ta.s);
    f.u_b = std::move(tb.u);
    f.v_b = std::move(tb.v);
    f.s_b = std::move(tb.s);
    return f;
}

SawbladePermutation sawblade_perm(const std::vector<double>& s_a,
                                  const std::vector<double>& s_b) {
    const std::size_t nb = s_b.size();
    const std::size_t total = s_a.size() * nb;
    std::vector<double> products(total);
    for (std::size_t i = 0; i < s_a.size(); ++i)
        for (std::size_t j = 0; j < nb; ++j)
            products[i * nb + j] = s_a[i] * s_b[j];

    SawbladePermutation perm;
    perm.map.resize(total);
    std::iota(perm.map.begin(), perm.map.end(), std::size_t{0});
    std::stable_sort(perm.map.begin(), perm.map.end(),
                     [&](std::size_t x, std::size_t y) {
                         return products[x] > products[y];
                     });
    perm.inverse_map.resize(total);
    for (std::size_t p = 0; p < total; ++p) perm.inverse_map[perm.map[p]] = p;
    return perm;
}

CoreMatrix assemble_w11(const KroneckerSum& ksum, const FactorSvd& fsvd,
                        const SawbladePermutation& perm, std::size_t k) {
    if (ksum.terms.empty()) throw Error("assemble_w11: sum has no terms");
    const std::size_t n = ksum.n;
    if (k < 1 || k > n * n)
        throw Error("assemble_w11: k = " + std::to_string(k) + " outside 1.." +
                    std::to_string(n * n));

    CoreMatrix core{DenseMatrix(k, k)};
    for (std::size_t p = 0; p < k; ++p) {
        const std::size_t idx = perm.map[p];
        core.t(p, p) = fsvd.s_a[idx / n] * fsvd.s_b[idx % n];
    }
    if (ksum.terms.size() == 1) return core;

    std::vector<std::int32_t> row_a(k), row_b(k);
    for (std::size_t p = 0; p < k; ++p) {
        row_a[p] = static_cast<std::int32_t>(perm.map[p] / n);
        row_b[p] = static_cast<std::int32_t>(perm.map[p] % n);
    }

    const auto& ops = kernels::ops();
    for (std::size_t term = 1; term < ksum.terms.size(); ++term) {
        const KronPair& pair = ksum.terms[term];
        if (pair.a.rows() != n || pair.b.rows() != n)
            throw DimensionError("assemble_w11: term dimension mismatch");
        const DenseMatrix ga = matmul(matmul(fsvd.u_a, pair.a, true, false), fsvd.v_a);
        const DenseMatrix gb = matmul(matmul(fsvd.u_b, pair.b, true, false), fsvd.v_b);
        for (std::size_t q = 0; q < k; ++q) {
            const std::size_t col_a = perm.map[q] / n;
            const std::size_t col_b = perm.map[q] % n;
            ops.gather_mac(core.t.col(q), ga.col(col_a), gb.col(col_b),
                           row_a.data(), row_b.data(), k);
        }
    }
    return core;
}

ImplicitTsvd build(const KroneckerSum& ksum, std::size_t k) {
    if (ksum.terms.empty()) throw Error("build: sum has no terms");
    ImplicitTsvd tsvd;
    tsvd.n = ksum.n;
    tsvd.k = k;
    tsvd.fsvd = factor_svds(ksum.terms[0]);
    tsvd.perm = sawblade_perm(tsvd.fsvd.s_a, tsvd.fsvd.s_b);
    CoreMatrix core = assemble_w11(ksum, tsvd.fsvd, tsvd.perm, k);
    DenseSvdTriple t = detail::svd(core.t);
    tsvd.u_t = std::move(t.u);
    tsvd.v_t = std::move(t.v);
    tsvd.s_t = std::move(t.s);
    return tsvd;
}

std::vector<double> project(const ImplicitTsvd& tsvd, const std::vector<double>& d,
                            Side side) {
    const std::size_t n = tsvd.n;
    if (d.size() != n * n)
        throw DimensionError("project: vector length " + std::to_string(d.size()) +
                             " != n^2 = " + std::to_string(n * n));
    const bool left = side == Side::left;
    const std::vector<double> full =
        pair_apply(left ? tsvd.fsvd.u_a : tsvd.fsvd.v_a,
                   left ? tsvd.fsvd.u_b : tsvd.fsvd.v_b, d, true);
    std::vector<double> top(tsvd.k);
    for (std::size_t p = 0; p < tsvd.k; ++p) top[p] = full[tsvd.perm.map[p]];
    return matvec(left ? tsvd.u_t : tsvd.v_t, top, true);
}

std::vector<double> expand(const ImplicitTsvd& tsvd, const std::vector<double>& y,
                           Side side) {
    const std::size_t n = tsvd.n;
    if (y.size() != tsvd.k)
        throw DimensionError("expand: vector length " + std::to_string(y.size()) +
                             " != k = " + std::to_string(tsvd.k));
    const bool left = side == Side::left;
    const std::vector<double> small = matvec(left ? tsvd.u_t : tsvd.v_t, y, false);
    std::vector<double> full(n * n, 0.0);
    for (std::size_t p = 0; p < tsvd.k; ++p) full[tsvd.perm.map[p]] = small[p];
    return pair_apply(left ? tsvd.fsvd.u_a : tsvd.fsvd.v_a,
                      left ? tsvd.fsvd.u_b : tsvd.fsvd.v_b, full, false);
}

std::vector<double> tsvd_apply(const ImplicitTsvd& tsvd, const std::vector<double>& d) {
    std::vector<double> y = project(tsvd, d, Side::right);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= tsvd.s_t[i];
    return expand(tsvd, y, Side::left);
}

std::vector<double> tsvd_pinv_apply(const ImplicitTsvd& tsvd,
                                    const std::vector<double>& d,
                                    std::size_t effective_k) {
    if (effective_k < 1 || effective_k > tsvd.k)
        throw DimensionError("tsvd_pinv_apply: effective_k = " +
                             std::to_string(effective_k) + " outside 1.." +
                             std::to_string(tsvd.k));
    std::vector<double> y = project(tsvd, d, Side::left);
    for (std::size_t i = 0; i < effective_k; ++i) {
        if (tsvd.s_t[i] <= 0.0)
            throw NumericError("tsvd_pinv_apply: singular value " +
                               std::to_string(i + 1) + " is zero");
        y[i] /= tsvd.s_t[i];
    }
    for (std::size_t i = effective_k; i < y.size(); ++i) y[i] = 0.0;
    return expand(tsvd, y, Side::right);
}

std::vector<double> tsvd_pinv_apply(const ImplicitTsvd& tsvd,
                                    const std::vector<double>& d) {
    return tsvd_pinv_apply(tsvd, d, tsvd.k);
}

} // namespace kronsvd
