#pragma once
// The three key pre-distribution schemes: dense Blom baseline, the
// Vandermonde-column variant, and the sparse two-entry variant. Covers the
// authority-side offline setup and the node-side column reconstruction and
// key derivation.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "matrixkpd/galois.hpp"

namespace matrixkpd {

enum class SchemeKind : u32 { BlomDense = 0, DdhvVandermonde = 1, OrDdhv = 2 };

std::string scheme_name(SchemeKind k);                  // "blom" | "ddhv" | "or-ddhv"
std::optional<SchemeKind> scheme_from_name(const std::string& name);

struct InvalidParams : std::invalid_argument {
    std::vector<std::string> violations;
    explicit InvalidParams(std::vector<std::string> v);
};
struct PayloadLengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// All public system parameters. m is explicit: lambda+1 for BlomDense and
// DdhvVandermonde, lambda for OrDdhv.
struct SchemeParams {
    SchemeKind kind = SchemeKind::BlomDense;
    Modulus q;
    u32 lambda = 0;
    u32 m = 0;
    u32 n = 0;
    u32 s = 0;       // generator element, DdhvVandermonde only
    u64 seed = 0;
    bool allow_oversize = false;  // unsafe override of the N <= 2*lambda limit

    // Fills m from the kind and defaults s to the smallest primitive root of q
    // when the scheme needs one. Throws InvalidParams on violation.
    static SchemeParams make(SchemeKind kind, u64 q, u32 lambda, u32 n,
                             std::optional<u32> s = std::nullopt, u64 seed = 0,
                             bool allow_oversize = false);

    u32 payload_elements() const;  // m, 1 or 2
};

// Returns the violated-rule list; empty means ok. The OrDdhv size limit is
// reported even when allow_oversize suppresses the hard failure.
std::vector<std::string> validate_params(const SchemeParams& p);

// Smallest primitive root of q, by factoring q-1.
u32 smallest_primitive_root(const Modulus& m);

// True iff the multiplicative order of s mod q is at least n.
bool order_at_least(u32 s, u32 n, const Modulus& m);

// Kind-specific public matrix descriptor. The dense form is kept alongside
// the compressed one; only the compressed payload ever travels.
struct PublicMatrix {
    SchemeKind kind = SchemeKind::BlomDense;
    Matrix dense;  // m x N, always materialized
    u32 s = 0;
    std::vector<std::array<u32, 2>> sparse_pairs;  // OrDdhv: (v1, v2) per column

    std::vector<u32> payload_for(u32 node_id, const SchemeParams& p) const;
};

struct NodeShare {
    u32 node_id = 0;
    std::vector<u32> private_row;      // row node_id of A = G^T D, length m
    std::vector<u32> public_payload;   // m, 1 or 2 elements

    friend bool operator==(const NodeShare&, const NodeShare&) = default;
};

struct Deployment {
    SchemeParams params;
    Matrix master_d;   // authority-only
    PublicMatrix pub;
    std::vector<NodeShare> shares;
};

// Offline phase: D symmetric random, G per kind, A = G^T D; share i carries
// row i of A plus column i's compressed payload. Deterministic given seed.
Deployment setup(const SchemeParams& params);

// Sparse column support positions: (id mod lambda, (id+1) mod lambda).
std::pair<u32, u32> sparse_support(u32 node_id, u32 lambda);

// Node-side reconstruction of a peer's public column from its payload.
// Counted cost: 0 (BlomDense, OrDdhv), lambda (DdhvVandermonde).
std::vector<u32> reconstruct_column(const SchemeParams& p, u32 peer_id,
                                    const std::vector<u32>& payload, MulCounter& c);

// k_ij = A_r(i) * G_c(j), with the per-scheme fast path. Counted cost per
// call: m (BlomDense), 2*lambda (DdhvVandermonde), 2 (OrDdhv).
u32 derive_key(const NodeShare& share, const std::vector<u32>& peer_payload,
               u32 peer_id, const SchemeParams& p, MulCounter& c);

// Test oracle: B = G^T D G by plain (uncounted) matrix products.
Matrix oracle_key_matrix(const Matrix& d, const PublicMatrix& g, const SchemeParams& p);

}  // namespace matrixkpd
