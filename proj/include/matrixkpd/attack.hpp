#pragma once
// Adversary model: compromise nodes, assemble the linear system over the
// unknown entries of D from captured private rows, solve it over Z_q, and
// measure recovery thresholds empirically.

#include <map>
#include <optional>

#include <json.hpp>

#include "matrixkpd/schemes.hpp"

namespace matrixkpd {

struct EmptyTranscript : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InconsistentTranscript : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// What the adversary holds: full public knowledge plus the shares of the
// compromised nodes.
struct CompromiseTranscript {
    SchemeParams params;
    PublicMatrix pub;
    std::vector<NodeShare> compromised;  // distinct node ids
};

CompromiseTranscript make_transcript(const Deployment& dep, const std::vector<u32>& ids);

// Bijection between unknown entries of D and solver columns. Folded mode
// identifies d_kl with d_lk (m(m+1)/2 unknowns); unfolded keeps all m^2
// without any symmetry constraint rows.
struct UnknownIndex {
    u32 m = 0;
    bool folded = true;

    u32 count() const { return folded ? m * (m + 1) / 2 : m * m; }
    u32 index(u32 k, u32 l) const;
    std::pair<u32, u32> entry_at(u32 idx) const;
};

struct AssembledSystem {
    Matrix coeffs;          // one row per captured a_ij
    std::vector<u32> rhs;
    UnknownIndex idx;
};

// Each captured entry a_ij = sum_k g_ki d_kj is one linear equation in the
// d's; m rows per compromised node.
AssembledSystem assemble_system(const CompromiseTranscript& t, bool fold_symmetry = true);

struct RecoveryResult {
    u32 rank = 0;
    u32 unknown_count = 0;
    u32 nullspace_dim = 0;
    // Present only when the system pins D uniquely and the candidate
    // regenerates every captured private row exactly.
    std::optional<Matrix> d_candidate;
    bool regeneration_ok = false;
};

RecoveryResult recover(const CompromiseTranscript& t, bool fold_symmetry = true);

// Key between two uncompromised nodes from a candidate D and their public
// payloads only: G_c(i)^T * D * G_c(j).
u32 predict_key(const Matrix& d_candidate, const std::vector<u32>& payload_i, u32 id_i,
                const std::vector<u32>& payload_j, u32 id_j, const SchemeParams& p);

struct AmbiguityWitness {
    Matrix d1, d2;
    u32 key1 = 0, key2 = 0;  // differing predicted keys for the target pair
};

// For an under-determined transcript, searches particular + nullspace span
// for two consistent symmetric candidates that disagree on the target pair's
// key. Exhaustive when q^nullspace_dim <= 10^4, else 10^4 seeded random
// draws. Absence of a witness is a reported outcome, not an error.
std::optional<AmbiguityWitness> ambiguity_witness(const CompromiseTranscript& t,
                                                 u32 target_i, u32 target_j);

struct SecurityStats {
    std::string scheme;
    u64 q = 0;
    u32 lambda = 0, n = 0, c = 0;
    u64 trials = 0;
    std::map<u32, u64> rank_histogram;
    double full_recovery_fraction = 0.0;
    double colliding_support_fraction = 0.0;  // OrDdhv only, else 0
};

// T trials, each with a fresh seeded deployment and a uniformly random
// compromise set of size c. Trials derive independent sub-seeds, so results
// are schedule-independent.
SecurityStats security_experiment(const SchemeParams& params, u32 compromise_count,
                                  u64 trials);

nlohmann::json stats_to_json(const SecurityStats& s);

}  // namespace matrixkpd
