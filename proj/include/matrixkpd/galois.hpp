#pragma once
// Prime-field arithmetic over Z_q (q < 2^31) with instrumented multiplication
// counting, plus dense matrix algebra and Gaussian elimination.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace matrixkpd {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct NotPrime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ZeroInverse : std::domain_error {
    using std::domain_error::domain_error;
};
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Deterministic primality check by trial division; valid for q < 2^31.
bool is_prime(u64 q);

// A prime modulus q with 2 <= q < 2^31, so a product of two residues fits
// in 64 bits.
struct Modulus {
    u32 q = 0;
    unsigned bits = 0;  // ceil(log2 q)

    static Modulus prime(u64 q);

    friend bool operator==(const Modulus&, const Modulus&) = default;
};

// Counts field multiplications routed through fe_mul / mat_mul. One counter
// per session; never shared across concurrent sessions.
struct MulCounter {
    u64 count = 0;
    void tick() { ++count; }
};

inline u32 fe_add(u32 a, u32 b, const Modulus& m) {
    u64 s = u64(a) + b;
    return u32(s >= m.q ? s - m.q : s);
}

inline u32 fe_sub(u32 a, u32 b, const Modulus& m) {
    return a >= b ? a - b : u32(u64(a) + m.q - b);
}

inline u32 fe_neg(u32 a, const Modulus& m) { return a == 0 ? 0 : m.q - a; }

// Counted multiplication: the unit of all computation accounting.
inline u32 fe_mul(u32 a, u32 b, const Modulus& m, MulCounter& c) {
    c.tick();
    return u32((u64(a) * b) % m.q);
}

// Uncounted variant for oracles and bookkeeping outside the cost model.
inline u32 fe_mul_free(u32 a, u32 b, const Modulus& m) {
    return u32((u64(a) * b) % m.q);
}

// a^e mod q by square-and-multiply; e = 0 gives 1. Uncounted.
u32 fe_pow(u32 a, u64 e, const Modulus& m);

// Modular inverse via Fermat; throws ZeroInverse for a = 0.
u32 fe_inv(u32 a, const Modulus& m);

// Deterministic 64-bit PRNG. Stable across runs and platforms: std::mt19937_64
// has a standard-mandated output sequence for a given seed.
struct DeterministicRng {
    std::mt19937_64 gen;
    explicit DeterministicRng(u64 seed) : gen(seed) {}
    u64 next() { return gen(); }
};

// Uniform residue by rejection from 64-bit draws (no modulo bias).
u32 sample_uniform(DeterministicRng& rng, const Modulus& m, bool exclude_zero = false);

// Dense row-major matrix over Z_q.
class Matrix {
public:
    Matrix() = default;
    Matrix(u32 rows, u32 cols, Modulus mod)
        : rows_(rows), cols_(cols), mod_(mod), a_(std::size_t(rows) * cols, 0) {}

    u32 rows() const { return rows_; }
    u32 cols() const { return cols_; }
    const Modulus& mod() const { return mod_; }

    u32& at(u32 r, u32 c) { return a_[std::size_t(r) * cols_ + c]; }
    u32 at(u32 r, u32 c) const { return a_[std::size_t(r) * cols_ + c]; }

    const std::vector<u32>& data() const { return a_; }
    std::vector<u32>& data() { return a_; }

    std::vector<u32> row(u32 r) const;
    std::vector<u32> col(u32 c) const;

    bool is_symmetric() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    u32 rows_ = 0, cols_ = 0;
    Modulus mod_;
    std::vector<u32> a_;
};

Matrix identity(u32 n, Modulus mod);

// Standard product mod q. When a counter is supplied it advances by exactly
// rows(A) * cols(A) * cols(B).
Matrix mat_mul(const Matrix& a, const Matrix& b, MulCounter* c = nullptr);

Matrix mat_transpose(const Matrix& a);

// Matrix-vector product, uncounted.
std::vector<u32> mat_vec(const Matrix& a, const std::vector<u32>& x);

// Symmetric random matrix: upper triangle sampled, lower mirrored.
Matrix random_symmetric(u32 order, DeterministicRng& rng, const Modulus& m);

Matrix random_matrix(u32 rows, u32 cols, DeterministicRng& rng, const Modulus& m);

struct GaussResult {
    u32 rank = 0;
    // Present iff the system is consistent.
    std::optional<std::vector<u32>> particular;
    // Basis of the homogeneous nullspace, size = cols - rank.
    std::vector<std::vector<u32>> nullspace;
};

// Row reduction over Z_q, pivoting on the first nonzero entry scanning
// downward (no randomization, runs are reproducible).
GaussResult gauss_solve(const Matrix& a, const std::vector<u32>& b);

u32 mat_rank(const Matrix& a);

}  // namespace matrixkpd
