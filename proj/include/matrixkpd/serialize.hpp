#pragma once
// JSON share/authority file formats. Field elements serialize as decimal
// strings to avoid integer-width ambiguity.

#include <json.hpp>

#include "matrixkpd/schemes.hpp"

namespace matrixkpd {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json share_to_json(const NodeShare& share, const SchemeParams& p);
nlohmann::json authority_to_json(const Deployment& dep);

// Parses a share file; returns the share and the deployment parameters it
// declares. Throws FormatError on schema violations.
std::pair<NodeShare, SchemeParams> share_from_json(const nlohmann::json& j);

// Reconstructs the authority view (params, D). Public payloads live in the
// share files.
std::pair<SchemeParams, Matrix> authority_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace matrixkpd
