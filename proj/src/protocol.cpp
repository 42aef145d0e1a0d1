#include "matrixkpd/protocol.hpp"

#include <algorithm>
#include <string>

namespace matrixkpd {

KeyMismatch::KeyMismatch(u32 i, u32 j)
    : std::runtime_error("key mismatch for pair (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")"),
      node_i(i),
      node_j(j) {}

static void put_le(std::vector<std::uint8_t>& out, u64 v, u32 width) {
    for (u32 k = 0; k < width; ++k) {
        out.push_back(std::uint8_t(v & 0xff));
        v >>= 8;
    }
}

std::vector<std::uint8_t> encode_message(const NodeShare& share, const SchemeParams& p) {
    const u32 w = element_width(p.q);
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + share.public_payload.size() * w);
    out.push_back(kWireVersion);
    out.push_back(std::uint8_t(p.kind));
    put_le(out, share.node_id, 4);
    put_le(out, share.public_payload.size(), 2);
    for (u32 e : share.public_payload) put_le(out, e, w);
    return out;
}

static u64 get_le(std::span<const std::uint8_t> b, std::size_t off, u32 width) {
    u64 v = 0;
    for (u32 k = 0; k < width; ++k) v |= u64(b[off + k]) << (8 * k);
    return v;
}

std::pair<u32, std::vector<u32>> decode_message(std::span<const std::uint8_t> bytes,
                                                const SchemeParams& p) {
    if (bytes.size() < kHeaderBytes)
        throw TruncatedMessage("message shorter than the 8-byte header");
    if (bytes[0] != kWireVersion)
        throw BadVersion("unsupported wire version " + std::to_string(bytes[0]));
    if (bytes[1] != std::uint8_t(p.kind))
        throw SchemeMismatch("scheme id " + std::to_string(bytes[1]) +
                             " does not match deployment");
    const u32 node_id = u32(get_le(bytes, 2, 4));
    const u32 count = u32(get_le(bytes, 6, 2));
    if (count != p.payload_elements())
        throw SchemeMismatch("element count " + std::to_string(count) +
                             " does not match scheme payload size");
    const u32 w = element_width(p.q);
    if (bytes.size() != kHeaderBytes + std::size_t(count) * w)
        throw TruncatedMessage("message length does not match element count");
    if (node_id >= p.n)
        throw ElementOutOfRange("node id " + std::to_string(node_id) + " >= N");
    std::vector<u32> payload(count);
    for (u32 i = 0; i < count; ++i) {
        u64 v = get_le(bytes, kHeaderBytes + std::size_t(i) * w, w);
        if (v >= p.q.q)
            throw ElementOutOfRange("element " + std::to_string(v) + " >= q");
        payload[i] = u32(v);
    }
    return {node_id, std::move(payload)};
}

std::pair<u32, ResourceMeter> handshake(const NodeShare& share,
                                        std::span<const std::uint8_t> peer_msg,
                                        const SchemeParams& p) {
    auto [peer_id, payload] = decode_message(peer_msg, p);
    MulCounter c;
    u32 key = derive_key(share, payload, peer_id, p, c);
    ResourceMeter meter;
    meter.mults = c.count;
    meter.comm_bits = u64(payload.size()) * p.q.bits;
    meter.header_bits = kHeaderBytes * 8;
    meter.memory_bits = u64(p.m) * p.q.bits;
    return {key, meter};
}

AgreementReport run_all_pairs(const Deployment& dep, u64 sample_k) {
    const SchemeParams& p = dep.params;
    if (p.n < 2) throw InvalidParams({"run_all_pairs needs N >= 2"});

    std::vector<std::pair<u32, u32>> pairs;
    if (sample_k == 0) {
        for (u32 i = 0; i < p.n; ++i)
            for (u32 j = i + 1; j < p.n; ++j) pairs.emplace_back(i, j);
    } else {
        DeterministicRng rng(p.seed ^ 0x70616972u);  // independent pair-picking stream
        for (u64 k = 0; k < sample_k; ++k) {
            u32 i = u32(rng.next() % p.n), j = u32(rng.next() % p.n);
            if (i == j) j = (j + 1) % p.n;
            if (i > j) std::swap(i, j);
            pairs.emplace_back(i, j);
        }
    }

    AgreementReport rep;
    rep.scheme = scheme_name(p.kind);
    rep.q = p.q.q;
    rep.lambda = p.lambda;
    rep.m = p.m;
    rep.n = p.n;
    rep.pairs_tested = pairs.size();

    bool first = true;
    for (auto [i, j] : pairs) {
        auto msg_i = encode_message(dep.shares[i], p);
        auto msg_j = encode_message(dep.shares[j], p);
        auto [key_ij, meter_ij] = handshake(dep.shares[i], msg_j, p);
        auto [key_ji, meter_ji] = handshake(dep.shares[j], msg_i, p);
        if (key_ij != key_ji) throw KeyMismatch(i, j);
        if (first) {
            rep.mults_per_key = meter_ij.mults;
            rep.comm_bits_per_handshake = meter_ij.comm_bits;
            rep.header_bits = meter_ij.header_bits;
            rep.memory_bits_per_node = meter_ij.memory_bits;
            first = false;
        } else if (meter_ij.mults != rep.mults_per_key || meter_ji.mults != rep.mults_per_key) {
            // mults per handshake is a scheme constant
            throw std::logic_error("multiplication count varies across pairs");
        }
    }
    rep.all_keys_match = true;
    return rep;
}

nlohmann::json report_to_json(const AgreementReport& r) {
    return {{"scheme", r.scheme},
            {"q", r.q},
            {"lambda", r.lambda},
            {"m", r.m},
            {"n", r.n},
            {"pairs_tested", r.pairs_tested},
            {"all_keys_match", r.all_keys_match},
            {"mults_per_key", r.mults_per_key},
            {"comm_bits_per_handshake", r.comm_bits_per_handshake},
            {"header_bits", r.header_bits},
            {"memory_bits_per_node", r.memory_bits_per_node}};
}

}  // namespace matrixkpd
