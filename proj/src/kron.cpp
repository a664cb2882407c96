//
// Kronecker product application and small-scale materialization.
//

#include "kronsvd/kron.hpp"

#include "kronsvd/config.hpp"
#include "kronsvd/errors.hpp"

#include <string>

namespace kronsvd {

void check_pair(const KronPair& pair) {
    if (pair.a.rows() != pair.a.cols() || pair.b.rows() != pair.b.cols())
        throw DimensionError("kron: factors must be square");
    if (pair.a.rows() != pair.b.rows())
        throw DimensionError("kron: factor dimensions disagree (" +
                             std::to_string(pair.a.rows()) + " vs " +
                             std::to_string(pair.b.rows()) + ")");
}

std::vector<double> kron_apply(const KronPair& pair, const std::vector<double>& d,
                               bool transpose) {
    check_pair(pair);
    const std::size_t n = pair.a.rows();
    const DenseMatrix dm = unvec(d, n);
    // (A (x) B) d = vec(B D A^T); transposed form is vec(B^T D A).
    DenseMatrix out = transpose
                          ? matmul(matmul(pair.b, dm, true, false), pair.a)
                          : matmul(matmul(pair.b, dm), pair.a, false, true);
    return vec(out);
}

std::vector<double> kron_sum_apply(const KroneckerSum& ksum,
                                   const std::vector<double>& d,
                                   bool transpose) {
    if (ksum.terms.empty())
        throw Error("kron_sum_apply: sum has no terms");
    std::vector<double> acc = kron_apply(ksum.terms[0], d, transpose);
    for (std::size_t i = 1; i < ksum.terms.size(); ++i) {
        const std::vector<double> part = kron_apply(ksum.terms[i], d, transpose);
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += part[j];
    }
    return acc;
}

DenseMatrix kron_dense(const KronPair& pair) {
    check_pair(pair);
    const std::size_t n = pair.a.rows();
    check_cap(n * n, "kron_dense");
    DenseMatrix k(n * n, n * n);
    for (std::size_t jb = 0; jb < n; ++jb)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t ib = 0; ib < n; ++ib) {
                const double aij = pair.a(ib, jb);
                if (aij == 0.0) continue;
                for (std::size_t i = 0; i < n; ++i)
                    k(ib * n + i, jb * n + j) = aij * pair.b(i, j);
            }
    return k;
}

DenseMatrix kron_sum_dense(const KroneckerSum& ksum) {
    if (ksum.terms.empty())
        throw Error("kron_sum_dense: sum has no terms");
    DenseMatrix acc = kron_dense(ksum.terms[0]);
    for (std::size_t t = 1; t < ksum.terms.size(); ++t) {
        const DenseMatrix part = kron_dense(ksum.terms[t]);
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc.data()[i] += part.data()[i];
    }
    return acc;
}

} // namespace kronsvd
