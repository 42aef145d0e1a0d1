#include "matrixkpd/serialize.hpp"

#include <fstream>

namespace matrixkpd {

using nlohmann::json;

static json elements_to_json(const std::vector<u32>& v) {
    json arr = json::array();
    for (u32 x : v) arr.push_back(std::to_string(x));
    return arr;
}

static std::vector<u32> elements_from_json(const json& arr, const Modulus& q,
                                           const char* what) {
    if (!arr.is_array()) throw FormatError(std::string(what) + ": expected array");
    std::vector<u32> out;
    out.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_string()) throw FormatError(std::string(what) + ": expected decimal string");
        u64 v;
        try {
            v = std::stoull(e.get<std::string>());
        } catch (const std::exception&) {
            throw FormatError(std::string(what) + ": bad decimal value");
        }
        if (v >= q.q) throw FormatError(std::string(what) + ": element not reduced mod q");
        out.push_back(u32(v));
    }
    return out;
}

static json params_header(const SchemeParams& p) {
    json j;
    j["version"] = 1;
    j["scheme"] = scheme_name(p.kind);
    j["q"] = p.q.q;
    j["lambda"] = p.lambda;
    j["m"] = p.m;
    j["n"] = p.n;
    if (p.kind == SchemeKind::DdhvVandermonde) j["s"] = std::to_string(p.s);
    return j;
}

static SchemeParams params_from_header(const json& j, u64 seed) {
    if (!j.contains("version") || j.at("version").get<int>() != 1)
        throw FormatError("unsupported file version");
    auto kind = scheme_from_name(j.at("scheme").get<std::string>());
    if (!kind) throw FormatError("unknown scheme name");
    std::optional<u32> s;
    if (j.contains("s")) s = u32(std::stoull(j.at("s").get<std::string>()));
    SchemeParams p = SchemeParams::make(*kind, j.at("q").get<u64>(),
                                        j.at("lambda").get<u32>(), j.at("n").get<u32>(),
                                        s, seed, /*allow_oversize=*/true);
    if (p.m != j.at("m").get<u32>()) throw FormatError("m inconsistent with scheme kind");
    return p;
}

json share_to_json(const NodeShare& share, const SchemeParams& p) {
    json j = params_header(p);
    j["node_id"] = share.node_id;
    j["private_row"] = elements_to_json(share.private_row);
    j["public_payload"] = elements_to_json(share.public_payload);
    return j;
}

std::pair<NodeShare, SchemeParams> share_from_json(const json& j) {
    try {
        SchemeParams p = params_from_header(j, 0);
        NodeShare s;
        s.node_id = j.at("node_id").get<u32>();
        if (s.node_id >= p.n) throw FormatError("node_id out of range");
        s.private_row = elements_from_json(j.at("private_row"), p.q, "private_row");
        s.public_payload = elements_from_json(j.at("public_payload"), p.q, "public_payload");
        if (s.private_row.size() != p.m) throw FormatError("private_row length != m");
        if (s.public_payload.size() != p.payload_elements())
            throw FormatError("public_payload length mismatch");
        return {std::move(s), p};
    } catch (const json::exception& e) {
        throw FormatError(std::string("share file: ") + e.what());
    }
}

json authority_to_json(const Deployment& dep) {
    json j = params_header(dep.params);
    j["seed"] = dep.params.seed;
    json d = json::array();
    for (u32 v : dep.master_d.data()) d.push_back(std::to_string(v));
    j["d"] = d;
    return j;
}

std::pair<SchemeParams, Matrix> authority_from_json(const json& j) {
    try {
        SchemeParams p = params_from_header(j, j.at("seed").get<u64>());
        auto entries = elements_from_json(j.at("d"), p.q, "d");
        if (entries.size() != std::size_t(p.m) * p.m)
            throw FormatError("d has wrong entry count");
        Matrix d(p.m, p.m, p.q);
        d.data() = std::move(entries);
        if (!d.is_symmetric()) throw FormatError("d is not symmetric");
        return {p, std::move(d)};
    } catch (const json::exception& e) {
        throw FormatError(std::string("authority file: ") + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace matrixkpd
