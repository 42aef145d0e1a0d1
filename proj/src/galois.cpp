#include "matrixkpd/galois.hpp"

#include <string>

namespace matrixkpd {

bool is_prime(u64 q) {
    if (q < 2) return false;
    if (q % 2 == 0) return q == 2;
    for (u64 d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

Modulus Modulus::prime(u64 q) {
    if (q < 2 || q >= (u64(1) << 31))
        throw NotPrime("modulus must satisfy 2 <= q < 2^31, got " + std::to_string(q));
    if (!is_prime(q)) throw NotPrime("modulus is not prime: " + std::to_string(q));
    Modulus m;
    m.q = u32(q);
    m.bits = 0;
    for (u64 v = q - 1; v > 0; v >>= 1) ++m.bits;
    return m;
}

u32 fe_pow(u32 a, u64 e, const Modulus& m) {
    u64 base = a % m.q, acc = 1;
    while (e > 0) {
        if (e & 1) acc = acc * base % m.q;
        base = base * base % m.q;
        e >>= 1;
    }
    return u32(acc);
}

u32 fe_inv(u32 a, const Modulus& m) {
    if (a % m.q == 0) throw ZeroInverse("inverse of zero mod " + std::to_string(m.q));
    return fe_pow(a, m.q - 2, m);
}

u32 sample_uniform(DeterministicRng& rng, const Modulus& m, bool exclude_zero) {
    const u64 range = exclude_zero ? m.q - 1 : m.q;
    const u64 limit = UINT64_MAX - UINT64_MAX % range;
    u64 draw;
    do {
        draw = rng.next();
    } while (draw >= limit);
    return u32(draw % range) + (exclude_zero ? 1 : 0);
}

std::vector<u32> Matrix::row(u32 r) const {
    return {a_.begin() + std::size_t(r) * cols_, a_.begin() + std::size_t(r + 1) * cols_};
}

std::vector<u32> Matrix::col(u32 c) const {
    std::vector<u32> out(rows_);
    for (u32 r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

bool Matrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (u32 r = 0; r < rows_; ++r)
        for (u32 c = r + 1; c < cols_; ++c)
            if (at(r, c) != at(c, r)) return false;
    return true;
}

Matrix identity(u32 n, Modulus mod) {
    Matrix m(n, n, mod);
    for (u32 i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, MulCounter* c) {
    if (a.cols() != b.rows() || !(a.mod() == b.mod()))
        throw DimensionMismatch("mat_mul: " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
    const Modulus& m = a.mod();
    Matrix out(a.rows(), b.cols(), m);
    for (u32 i = 0; i < a.rows(); ++i)
        for (u32 j = 0; j < b.cols(); ++j) {
            u64 acc = 0;
            for (u32 k = 0; k < a.cols(); ++k) {
                if (c) c->tick();
                acc += u64(a.at(i, k)) * b.at(k, j) % m.q;
            }
            out.at(i, j) = u32(acc % m.q);
        }
    return out;
}

Matrix mat_transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows(), a.mod());
    for (u32 r = 0; r < a.rows(); ++r)
        for (u32 c = 0; c < a.cols(); ++c) out.at(c, r) = a.at(r, c);
    return out;
}

std::vector<u32> mat_vec(const Matrix& a, const std::vector<u32>& x) {
    if (a.cols() != x.size()) throw DimensionMismatch("mat_vec: size mismatch");
    const Modulus& m = a.mod();
    std::vector<u32> out(a.rows());
    for (u32 r = 0; r < a.rows(); ++r) {
        u64 acc = 0;
        for (u32 c = 0; c < a.cols(); ++c) acc += u64(a.at(r, c)) * x[c] % m.q;
        out[r] = u32(acc % m.q);
    }
    return out;
}

Matrix random_symmetric(u32 order, DeterministicRng& rng, const Modulus& m) {
    Matrix d(order, order, m);
    for (u32 r = 0; r < order; ++r)
        for (u32 c = r; c < order; ++c) {
            u32 v = sample_uniform(rng, m);
            d.at(r, c) = v;
            d.at(c, r) = v;
        }
    return d;
}

Matrix random_matrix(u32 rows, u32 cols, DeterministicRng& rng, const Modulus& m) {
    Matrix g(rows, cols, m);
    for (auto& v : g.data()) v = sample_uniform(rng, m);
    return g;
}

GaussResult gauss_solve(const Matrix& a, const std::vector<u32>& b) {
    if (a.rows() != b.size()) throw DimensionMismatch("gauss_solve: rhs length != rows");
    const Modulus& m = a.mod();
    const u32 rows = a.rows(), cols = a.cols();

    // Augmented working copy [A | b].
    Matrix w(rows, cols + 1, m);
    for (u32 r = 0; r < rows; ++r) {
        for (u32 c = 0; c < cols; ++c) w.at(r, c) = a.at(r, c);
        w.at(r, cols) = b[r];
    }

    std::vector<u32> pivot_col;  // column of the pivot in each reduced row
    u32 row = 0;
    for (u32 col = 0; col < cols && row < rows; ++col) {
        u32 p = row;
        while (p < rows && w.at(p, col) == 0) ++p;
        if (p == rows) continue;
        if (p != row)
            for (u32 c = 0; c <= cols; ++c) std::swap(w.at(p, c), w.at(row, c));
        u32 inv = fe_inv(w.at(row, col), m);
        for (u32 c = col; c <= cols; ++c) w.at(row, c) = fe_mul_free(w.at(row, c), inv, m);
        for (u32 r = 0; r < rows; ++r) {
            if (r == row || w.at(r, col) == 0) continue;
            u32 f = w.at(r, col);
            for (u32 c = col; c <= cols; ++c)
                w.at(r, c) = fe_sub(w.at(r, c), fe_mul_free(f, w.at(row, c), m), m);
        }
        pivot_col.push_back(col);
        ++row;
    }

    GaussResult res;
    res.rank = u32(pivot_col.size());

    bool consistent = true;
    for (u32 r = res.rank; r < rows; ++r)
        if (w.at(r, cols) != 0) consistent = false;

    if (consistent) {
        std::vector<u32> x(cols, 0);
        for (u32 r = 0; r < res.rank; ++r) x[pivot_col[r]] = w.at(r, cols);
        res.particular = std::move(x);
    }

    std::vector<bool> is_pivot(cols, false);
    for (u32 c : pivot_col) is_pivot[c] = true;
    for (u32 free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<u32> v(cols, 0);
        v[free_col] = 1;
        for (u32 r = 0; r < res.rank; ++r)
            v[pivot_col[r]] = fe_neg(w.at(r, free_col), m);
        res.nullspace.push_back(std::move(v));
    }
    return res;
}

u32 mat_rank(const Matrix& a) {
    return gauss_solve(a, std::vector<u32>(a.rows(), 0)).rank;
}

}  // namespace matrixkpd
