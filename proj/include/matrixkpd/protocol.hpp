#pragma once
// Simulated pairwise handshake: wire encoding of public payloads, key
// agreement sessions, and per-session resource metering.

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "matrixkpd/schemes.hpp"

namespace matrixkpd {

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadVersion : WireError {
    using WireError::WireError;
};
struct SchemeMismatch : WireError {
    using WireError::WireError;
};
struct ElementOutOfRange : WireError {
    using WireError::WireError;
};
struct TruncatedMessage : WireError {
    using WireError::WireError;
};
struct KeyMismatch : std::runtime_error {
    u32 node_i, node_j;
    KeyMismatch(u32 i, u32 j);
};

constexpr std::uint8_t kWireVersion = 0x01;
constexpr u32 kHeaderBytes = 8;

// Width in bytes of one wire element for modulus q.
inline u32 element_width(const Modulus& q) { return (q.bits + 7) / 8; }

// Layout: version byte 0x01 | scheme id (0x00 dense, 0x01 vandermonde,
// 0x02 sparse) | node_id u32 LE | element count u16 LE | elements, each
// element_width(q) bytes LE.
std::vector<std::uint8_t> encode_message(const NodeShare& share, const SchemeParams& p);

// Inverse of encode_message; validates version, scheme id, exact length,
// and element reduction below q.
std::pair<u32, std::vector<u32>> decode_message(std::span<const std::uint8_t> bytes,
                                                const SchemeParams& p);

struct ResourceMeter {
    u64 mults = 0;         // counted field multiplications for this session
    u64 comm_bits = 0;     // peer payload bits (element count * ceil(log2 q))
    u64 header_bits = 0;   // wire header overhead, reported separately
    u64 memory_bits = 0;   // private-row storage: m * ceil(log2 q)
};

// One side of the online phase: decode the peer message, derive the key,
// fill the meter.
std::pair<u32, ResourceMeter> handshake(const NodeShare& share,
                                        std::span<const std::uint8_t> peer_msg,
                                        const SchemeParams& p);

struct AgreementReport {
    std::string scheme;
    u64 q = 0;
    u32 lambda = 0, m = 0, n = 0;
    u64 pairs_tested = 0;
    bool all_keys_match = false;
    u64 mults_per_key = 0;  // constant per scheme kind; verified constant
    u64 comm_bits_per_handshake = 0;
    u64 header_bits = 0;
    u64 memory_bits_per_node = 0;
};

// Runs both directions of every selected pair and checks key equality.
// sample_k == 0 selects all pairs; otherwise sample_k pairs drawn with the
// deployment seed.
AgreementReport run_all_pairs(const Deployment& dep, u64 sample_k = 0);

nlohmann::json report_to_json(const AgreementReport& r);

}  // namespace matrixkpd
