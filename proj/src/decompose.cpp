//
// Kronecker sum decomposition routines.
//

#include "kronsvd/decompose.hpp"

#include "kronsvd/config.hpp"
#include "kronsvd/errors.hpp"
#include "kronsvd/svd.hpp"

#include <cmath>
#include <string>

namespace kronsvd {

Psf make_psf(DenseMatrix array) {
    if (array.rows() != array.cols())
        throw DimensionError("make_psf: array must be square");
    std::size_t best_r = 0, best_c = 0;
    double best = -1.0;
    bool any_nonzero = false;
    for (std::size_t i = 0; i < array.rows(); ++i)
        for (std::size_t j = 0; j < array.cols(); ++j) {
            const double v = array(i, j);
            if (v < 0.0)
                throw Error("make_psf: negative entry at (" + std::to_string(i) +
                            "," + std::to_string(j) + ")");
            if (v != 0.0) any_nonzero = true;
            // Lexicographic (row, col) scan order, strict > keeps the first max.
            if (v > best) {
                best = v;
                best_r = i;
                best_c = j;
            }
        }
    if (!any_nonzero) throw Error("make_psf: all-zero PSF");
    return Psf{std::move(array), best_r, best_c};
}

Psf make_psf(DenseMatrix array, std::size_t center_row, std::size_t center_col) {
    if (array.rows() != array.cols())
        throw DimensionError("make_psf: array must be square");
    if (center_row >= array.rows() || center_col >= array.cols())
        throw DimensionError("make_psf: center (" + std::to_string(center_row) +
                             "," + std::to_string(center_col) + ") out of bounds");
    bool any_nonzero = false;
    for (std::size_t i = 0; i < array.size() && !any_nonzero; ++i)
        any_nonzero = array.data()[i] != 0.0;
    if (!any_nonzero) throw Error("make_psf: all-zero PSF");
    return Psf{std::move(array), center_row, center_col};
}

RearrangedMatrix rearrange(const DenseMatrix& k_dense, std::size_t n) {
    if (k_dense.rows() != n * n || k_dense.cols() != n * n)
        throw DimensionError("rearrange: expected " + std::to_string(n * n) +
                             " square input, got " + std::to_string(k_dense.rows()) +
                             "x" + std::to_string(k_dense.cols()));
    check_cap(n * n, "rearrange");
    DenseMatrix tilde(n * n, n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t q = 0; q < n; ++q)
                for (std::size_t p = 0; p < n; ++p)
                    tilde(j * n + i, q * n + p) = k_dense(i * n + p, j * n + q);
    return RearrangedMatrix{std::move(tilde)};
}

KroneckerSum vlp_decompose(const DenseMatrix& k_dense, std::size_t n, std::size_t r) {
    if (r < 1) throw Error("vlp_decompose: r must be at least 1");
    if (r > n * n)
        throw Error("vlp_decompose: r = " + std::to_string(r) + " exceeds n^2 = " +
                     std::to_string(n * n));
    const RearrangedMatrix re = rearrange(k_dense, n);
    const DenseSvdTriple t = detail::svd(re.tilde);

    KroneckerSum out;
    out.n = n;
    out.kron_rank_full = kron_rank_truncate(t.s, kDefaultKronRankTol);
    out.terms.reserve(r);
    out.weights.assign(t.s.begin(), t.s.begin() + static_cast<long>(r));
    for (std::size_t i = 0; i < r; ++i) {
        const double scale = std::sqrt(t.s[i]);
        DenseMatrix a(n, n), b(n, n);
        for (std::size_t e = 0; e < n * n; ++e) {
            a.data()[e] = scale * t.u(e, i);
            b.data()[e] = scale * t.v(e, i);
        }
        out.terms.push_back(KronPair{std::move(a), std::move(b)});
    }
    return out;
}

KroneckerSum psf_kron_sum(const Psf& psf, std::size_t r) {
    const std::size_t n = psf.array.rows();
    if (psf.array.cols() != n)
        throw DimensionError("psf_kron_sum: PSF array must be square");
    const DenseSvdTriple t = detail::svd(psf.array);
    const std::size_t rank = kron_rank_truncate(t.s, kDefaultKronRankTol);
    if (r < 1) throw Error("psf_kron_sum: r must be at least 1");
    if (r > rank)
        throw Error("psf_kron_sum: r = " + std::to_string(r) +
                     " exceeds PSF rank " + std::to_string(rank));
    if (t.s[0] <= 0.0) throw Error("psf_kron_sum: all-zero PSF");

    KroneckerSum out;
    out.n = n;
    out.kron_rank_full = rank;
    out.weights.assign(t.s.begin(), t.s.begin() + static_cast<long>(r));
    out.terms.reserve(r);
    const long cr = static_cast<long>(psf.center_row);
    const long cc = static_cast<long>(psf.center_col);
    for (std::size_t i = 0; i < r; ++i) {
        const double scale = std::sqrt(t.s[i]);
        DenseMatrix a(n, n), b(n, n);
        // A[j, j'] = sqrt(s_i) v_i[j - j' + cc], zero outside the band;
        // B[i, i'] = sqrt(s_i) u_i[i - i' + cr]. Matches the zero-boundary
        // correlation in blur_apply entry for entry.
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t row = 0; row < n; ++row) {
                const long da = static_cast<long>(row) - static_cast<long>(col) + cc;
                if (da >= 0 && da < static_cast<long>(n))
                    a(row, col) = scale * t.v(static_cast<std::size_t>(da), i);
                const long db = static_cast<long>(row) - static_cast<long>(col) + cr;
                if (db >= 0 && db < static_cast<long>(n))
                    b(row, col) = scale * t.u(static_cast<std::size_t>(db), i);
            }
        out.terms.push_back(KronPair{std::move(a), std::move(b)});
    }
    return out;
}

KroneckerSum psf_kron_sum(const Psf& psf) {
    return psf_kron_sum(psf, psf_rank(psf));
}

std::size_t psf_rank(const Psf& psf) {
    const DenseSvdTriple t = detail::svd(psf.array);
    if (t.s.empty() || t.s[0] <= 0.0) throw Error("psf_rank: all-zero PSF");
    return kron_rank_truncate(t.s, kDefaultKronRankTol);
}

std::size_t kron_rank_truncate(const std::vector<double>& weights, double tol) {
    if (weights.empty()) throw Error("kron_rank_truncate: empty weights");
    if (weights[0] <= 0.0)
        throw Error("kron_rank_truncate: first weight must be positive");
    for (std::size_t i = 1; i < weights.size(); ++i) {
        if (weights[i] > weights[i - 1])
            throw Error("kron_rank_truncate: weights increase at index " +
                        std::to_string(i));
        if (weights[i] < 0.0)
            throw Error("kron_rank_truncate: negative weight at index " +
                        std::to_string(i));
    }
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i] < tol * weights[0]) return i;
    return weights.size();
}

} // namespace kronsvd
