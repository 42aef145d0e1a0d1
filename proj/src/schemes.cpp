#include "matrixkpd/schemes.hpp"

#include <numeric>
#include <sstream>

namespace matrixkpd {

std::string scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::BlomDense: return "blom";
        case SchemeKind::DdhvVandermonde: return "ddhv";
        case SchemeKind::OrDdhv: return "or-ddhv";
    }
    return "?";
}

std::optional<SchemeKind> scheme_from_name(const std::string& name) {
    if (name == "blom") return SchemeKind::BlomDense;
    if (name == "ddhv") return SchemeKind::DdhvVandermonde;
    if (name == "or-ddhv") return SchemeKind::OrDdhv;
    return std::nullopt;
}

static std::string join(const std::vector<std::string>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "; " : "") << v[i];
    return os.str();
}

InvalidParams::InvalidParams(std::vector<std::string> v)
    : std::invalid_argument("invalid parameters: " + join(v)), violations(std::move(v)) {}

u32 smallest_primitive_root(const Modulus& m) {
    // Factor q-1 by trial division (desk scale, q < 2^31).
    u64 n = m.q - 1;
    std::vector<u64> factors;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) factors.push_back(n);

    for (u32 g = 2; g < m.q; ++g) {
        bool primitive = true;
        for (u64 f : factors)
            if (fe_pow(g, (m.q - 1) / f, m) == 1) {
                primitive = false;
                break;
            }
        if (primitive) return g;
    }
    throw std::logic_error("no primitive root found");  // unreachable for prime q
}

bool order_at_least(u32 s, u32 n, const Modulus& m) {
    if (s % m.q == 0) return false;
    u64 e = 1;
    for (u32 k = 1; k < n; ++k) {
        e = e * s % m.q;
        if (e == 1) return false;  // order k < n
    }
    return true;
}

u32 SchemeParams::payload_elements() const {
    switch (kind) {
        case SchemeKind::BlomDense: return m;
        case SchemeKind::DdhvVandermonde: return 1;
        case SchemeKind::OrDdhv: return 2;
    }
    return 0;
}

std::vector<std::string> validate_params(const SchemeParams& p) {
    std::vector<std::string> bad;
    if (!is_prime(p.q.q)) bad.push_back("q must be prime");
    if (p.lambda < 2) bad.push_back("lambda must be >= 2");
    if (p.n < 2) bad.push_back("network size N must be >= 2");
    const u32 want_m = p.kind == SchemeKind::OrDdhv ? p.lambda : p.lambda + 1;
    if (p.m != want_m)
        bad.push_back("m must be " + std::to_string(want_m) + " for " + scheme_name(p.kind));
    if (p.kind == SchemeKind::OrDdhv && p.n > 2 * p.lambda)
        bad.push_back("N exceeds the maximum network size 2*lambda = " +
                      std::to_string(2 * p.lambda));
    if (p.kind == SchemeKind::DdhvVandermonde) {
        if (p.s == 0 || p.s >= p.q.q)
            bad.push_back("generator s must lie in [1, q)");
        else if (!order_at_least(p.s, p.n, p.q))
            bad.push_back("multiplicative order of s is below N");
    }
    return bad;
}

// The size limit is the one rule the unsafe flag may override; everything
// else stays fatal.
static void enforce(const SchemeParams& p) {
    auto bad = validate_params(p);
    if (p.allow_oversize)
        std::erase_if(bad, [](const std::string& r) { return r.starts_with("N exceeds"); });
    if (!bad.empty()) throw InvalidParams(std::move(bad));
}

SchemeParams SchemeParams::make(SchemeKind kind, u64 q, u32 lambda, u32 n,
                                std::optional<u32> s, u64 seed, bool allow_oversize) {
    SchemeParams p;
    p.kind = kind;
    p.q = Modulus::prime(q);
    p.lambda = lambda;
    p.m = kind == SchemeKind::OrDdhv ? lambda : lambda + 1;
    p.n = n;
    p.seed = seed;
    p.allow_oversize = allow_oversize;
    if (kind == SchemeKind::DdhvVandermonde)
        p.s = s.value_or(smallest_primitive_root(p.q));
    else
        p.s = s.value_or(0);
    enforce(p);
    return p;
}

std::pair<u32, u32> sparse_support(u32 node_id, u32 lambda) {
    return {node_id % lambda, (node_id + 1) % lambda};
}

std::vector<u32> PublicMatrix::payload_for(u32 node_id, const SchemeParams& p) const {
    switch (kind) {
        case SchemeKind::BlomDense: return dense.col(node_id);
        case SchemeKind::DdhvVandermonde: return {fe_pow(s, node_id, p.q)};
        case SchemeKind::OrDdhv:
            return {sparse_pairs[node_id][0], sparse_pairs[node_id][1]};
    }
    return {};
}

Deployment setup(const SchemeParams& params) {
    enforce(params);
    DeterministicRng rng(params.seed);
    const Modulus& q = params.q;

    Deployment dep;
    dep.params = params;
    dep.master_d = random_symmetric(params.m, rng, q);

    PublicMatrix& pub = dep.pub;
    pub.kind = params.kind;
    pub.dense = Matrix(params.m, params.n, q);
    switch (params.kind) {
        case SchemeKind::BlomDense:
            pub.dense = random_matrix(params.m, params.n, rng, q);
            break;
        case SchemeKind::DdhvVandermonde:
            pub.s = params.s;
            // Column j is [1, x, x^2, ..., x^lambda] with x = s^j.
            for (u32 j = 0; j < params.n; ++j) {
                u32 x = fe_pow(params.s, j, q);
                u32 e = 1;
                for (u32 r = 0; r < params.m; ++r) {
                    pub.dense.at(r, j) = e;
                    e = fe_mul_free(e, x, q);
                }
            }
            break;
        case SchemeKind::OrDdhv:
            pub.sparse_pairs.resize(params.n);
            for (u32 j = 0; j < params.n; ++j) {
                u32 v1 = sample_uniform(rng, q, /*exclude_zero=*/true);
                u32 v2 = sample_uniform(rng, q, /*exclude_zero=*/true);
                pub.sparse_pairs[j] = {v1, v2};
                auto [p1, p2] = sparse_support(j, params.lambda);
                pub.dense.at(p1, j) = v1;
                pub.dense.at(p2, j) = v2;
            }
            break;
    }

    Matrix a = mat_mul(mat_transpose(pub.dense), dep.master_d);  // N x m
    dep.shares.reserve(params.n);
    for (u32 i = 0; i < params.n; ++i)
        dep.shares.push_back({i, a.row(i), pub.payload_for(i, params)});
    return dep;
}

static void check_payload_len(const SchemeParams& p, const std::vector<u32>& payload) {
    if (payload.size() != p.payload_elements())
        throw PayloadLengthMismatch("payload has " + std::to_string(payload.size()) +
                                    " elements, expected " +
                                    std::to_string(p.payload_elements()));
}

std::vector<u32> reconstruct_column(const SchemeParams& p, u32 peer_id,
                                    const std::vector<u32>& payload, MulCounter& c) {
    check_payload_len(p, payload);
    switch (p.kind) {
        case SchemeKind::BlomDense:
            return payload;  // verbatim, 0 multiplications
        case SchemeKind::DdhvVandermonde: {
            // [1, x, x^2, ..., x^lambda]: lambda counted multiplications,
            // including the opening 1*x.
            std::vector<u32> col(p.m);
            col[0] = 1;
            u32 e = 1;
            for (u32 r = 1; r < p.m; ++r) {
                e = fe_mul(e, payload[0], p.q, c);
                col[r] = e;
            }
            return col;
        }
        case SchemeKind::OrDdhv: {
            std::vector<u32> col(p.m, 0);
            auto [p1, p2] = sparse_support(peer_id, p.lambda);
            col[p1] = payload[0];
            col[p2] = payload[1];
            return col;
        }
    }
    throw std::logic_error("bad scheme kind");
}

u32 derive_key(const NodeShare& share, const std::vector<u32>& peer_payload,
               u32 peer_id, const SchemeParams& p, MulCounter& c) {
    check_payload_len(p, peer_payload);
    const Modulus& q = p.q;
    const auto& row = share.private_row;
    switch (p.kind) {
        case SchemeKind::BlomDense: {
            u32 acc = 0;
            for (u32 k = 0; k < p.m; ++k)
                acc = fe_add(acc, fe_mul(row[k], peer_payload[k], q, c), q);
            return acc;
        }
        case SchemeKind::DdhvVandermonde: {
            auto col = reconstruct_column(p, peer_id, peer_payload, c);
            // col[0] == 1, so that term is a plain add.
            u32 acc = row[0];
            for (u32 k = 1; k < p.m; ++k)
                acc = fe_add(acc, fe_mul(row[k], col[k], q, c), q);
            return acc;
        }
        case SchemeKind::OrDdhv: {
            auto [p1, p2] = sparse_support(peer_id, p.lambda);
            u32 acc = fe_mul(row[p1], peer_payload[0], q, c);
            return fe_add(acc, fe_mul(row[p2], peer_payload[1], q, c), q);
        }
    }
    throw std::logic_error("bad scheme kind");
}

Matrix oracle_key_matrix(const Matrix& d, const PublicMatrix& g, const SchemeParams& p) {
    if (d.rows() != p.m || d.cols() != p.m || g.dense.rows() != p.m ||
        g.dense.cols() != p.n)
        throw DimensionMismatch("oracle_key_matrix: inconsistent dimensions");
    return mat_mul(mat_mul(mat_transpose(g.dense), d), g.dense);
}

}  // namespace matrixkpd
