#pragma once
// Test-only oracles, independent of the library's elimination path:
// determinant-minor rank and naive modular products.

#include <vector>

#include "matrixkpd/galois.hpp"

namespace matrixkpd::oracles {

// Laplace-expansion determinant of the submatrix selected by rows/cols.
inline u32 minor_det(const Matrix& a, const std::vector<u32>& rows,
                     const std::vector<u32>& cols) {
    const Modulus& m = a.mod();
    const std::size_t k = rows.size();
    if (k == 1) return a.at(rows[0], cols[0]);
    u32 det = 0;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<u32> sub_rows;
        for (std::size_t r = 1; r < k; ++r) sub_rows.push_back(rows[r]);
        std::vector<u32> sub_cols;
        for (std::size_t c = 0; c < k; ++c)
            if (c != i) sub_cols.push_back(cols[c]);
        u32 term = fe_mul_free(a.at(rows[0], cols[i]), minor_det(a, sub_rows, sub_cols), m);
        det = (i % 2 == 0) ? fe_add(det, term, m) : fe_sub(det, term, m);
    }
    return det;
}

inline bool has_nonzero_minor(const Matrix& a, u32 k) {
    std::vector<u32> rows(k), cols(k);
    // Enumerate k-subsets of rows and columns.
    std::vector<u32> rsel(k), csel(k);
    for (u32 i = 0; i < k; ++i) rsel[i] = i;
    while (true) {
        for (u32 i = 0; i < k; ++i) csel[i] = i;
        while (true) {
            if (minor_det(a, rsel, csel) != 0) return true;
            int pos = int(k) - 1;
            while (pos >= 0 && csel[pos] == a.cols() - k + pos) --pos;
            if (pos < 0) break;
            ++csel[pos];
            for (u32 i = u32(pos) + 1; i < k; ++i) csel[i] = csel[i - 1] + 1;
        }
        int pos = int(k) - 1;
        while (pos >= 0 && rsel[pos] == a.rows() - k + pos) --pos;
        if (pos < 0) break;
        ++rsel[pos];
        for (u32 i = u32(pos) + 1; i < k; ++i) rsel[i] = rsel[i - 1] + 1;
    }
    return false;
}

// Rank as the largest k with a nonsingular k x k minor. Exponential; keep
// inputs at 4x4 or below.
inline u32 brute_rank(const Matrix& a) {
    u32 max_k = std::min(a.rows(), a.cols());
    for (u32 k = max_k; k >= 1; --k)
        if (has_nonzero_minor(a, k)) return k;
    return 0;
}

// Naive A = G^T D, no shortcuts shared with the schemes module.
inline Matrix naive_gt_d(const Matrix& g, const Matrix& d) {
    const Modulus& m = g.mod();
    Matrix a(g.cols(), d.cols(), m);
    for (u32 i = 0; i < g.cols(); ++i)
        for (u32 j = 0; j < d.cols(); ++j) {
            u64 acc = 0;
            for (u32 k = 0; k < g.rows(); ++k) acc += u64(g.at(k, i)) * d.at(k, j) % m.q;
            a.at(i, j) = u32(acc % m.q);
        }
    return a;
}

}  // namespace matrixkpd::oracles
