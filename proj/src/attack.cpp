#include "matrixkpd/attack.hpp"

#include <algorithm>
#include <numeric>

namespace matrixkpd {

CompromiseTranscript make_transcript(const Deployment& dep, const std::vector<u32>& ids) {
    CompromiseTranscript t;
    t.params = dep.params;
    t.pub = dep.pub;
    for (u32 id : ids) {
        if (id >= dep.params.n)
            throw std::out_of_range("compromised id " + std::to_string(id) + " >= N");
        t.compromised.push_back(dep.shares[id]);
    }
    return t;
}

u32 UnknownIndex::index(u32 k, u32 l) const {
    if (!folded) return k * m + l;
    u32 a = std::min(k, l), b = std::max(k, l);
    // Row-major over the upper triangle.
    return a * m - a * (a - 1) / 2 + (b - a);
}

std::pair<u32, u32> UnknownIndex::entry_at(u32 idx) const {
    if (!folded) return {idx / m, idx % m};
    for (u32 a = 0; a < m; ++a) {
        u32 row_len = m - a;
        if (idx < row_len) return {a, a + idx};
        idx -= row_len;
    }
    throw std::out_of_range("unknown index out of range");
}

AssembledSystem assemble_system(const CompromiseTranscript& t, bool fold_symmetry) {
    if (t.compromised.empty()) throw EmptyTranscript("no compromised nodes");
    const SchemeParams& p = t.params;
    const u32 m = p.m;
    UnknownIndex idx{m, fold_symmetry};

    AssembledSystem sys;
    sys.idx = idx;
    sys.coeffs = Matrix(u32(t.compromised.size()) * m, idx.count(), p.q);
    sys.rhs.reserve(sys.coeffs.rows());

    u32 row = 0;
    for (const NodeShare& share : t.compromised) {
        const auto g_col = t.pub.dense.col(share.node_id);  // known public column
        for (u32 j = 0; j < m; ++j) {
            // a_ij = sum_k g_ki * d_kj
            for (u32 k = 0; k < m; ++k) {
                if (g_col[k] == 0) continue;
                u32 col = idx.index(k, j);
                sys.coeffs.at(row, col) = fe_add(sys.coeffs.at(row, col), g_col[k], p.q);
            }
            sys.rhs.push_back(share.private_row[j]);
            ++row;
        }
    }
    return sys;
}

static Matrix candidate_from_solution(const std::vector<u32>& x, const UnknownIndex& idx,
                                      const Modulus& q) {
    Matrix d(idx.m, idx.m, q);
    for (u32 k = 0; k < idx.m; ++k)
        for (u32 l = 0; l < idx.m; ++l) d.at(k, l) = x[idx.index(k, l)];
    return d;
}

static bool regenerates_rows(const Matrix& d, const CompromiseTranscript& t) {
    for (const NodeShare& share : t.compromised) {
        const auto g_col = t.pub.dense.col(share.node_id);
        // row = G_c(id)^T D
        for (u32 j = 0; j < t.params.m; ++j) {
            u64 acc = 0;
            for (u32 k = 0; k < t.params.m; ++k)
                acc += u64(g_col[k]) * d.at(k, j) % t.params.q.q;
            if (u32(acc % t.params.q.q) != share.private_row[j]) return false;
        }
    }
    return true;
}

RecoveryResult recover(const CompromiseTranscript& t, bool fold_symmetry) {
    AssembledSystem sys = assemble_system(t, fold_symmetry);
    GaussResult g = gauss_solve(sys.coeffs, sys.rhs);

    RecoveryResult res;
    res.rank = g.rank;
    res.unknown_count = sys.idx.count();
    res.nullspace_dim = u32(g.nullspace.size());
    if (!g.particular)
        throw InconsistentTranscript("captured rows are mutually inconsistent");
    if (res.nullspace_dim == 0) {
        Matrix d = candidate_from_solution(*g.particular, sys.idx, t.params.q);
        res.regeneration_ok = regenerates_rows(d, t);
        if (res.regeneration_ok) res.d_candidate = std::move(d);
    }
    return res;
}

u32 predict_key(const Matrix& d_candidate, const std::vector<u32>& payload_i, u32 id_i,
                const std::vector<u32>& payload_j, u32 id_j, const SchemeParams& p) {
    if (d_candidate.rows() != p.m || d_candidate.cols() != p.m)
        throw DimensionMismatch("predict_key: candidate is not m x m");
    MulCounter scratch;
    auto col_i = reconstruct_column(p, id_i, payload_i, scratch);
    auto col_j = reconstruct_column(p, id_j, payload_j, scratch);
    auto d_colj = mat_vec(d_candidate, col_j);
    u64 acc = 0;
    for (u32 k = 0; k < p.m; ++k) acc += u64(col_i[k]) * d_colj[k] % p.q.q;
    return u32(acc % p.q.q);
}

std::optional<AmbiguityWitness> ambiguity_witness(const CompromiseTranscript& t,
                                                 u32 target_i, u32 target_j) {
    const SchemeParams& p = t.params;
    AssembledSystem sys = assemble_system(t, /*fold_symmetry=*/true);
    GaussResult g = gauss_solve(sys.coeffs, sys.rhs);
    if (!g.particular) throw InconsistentTranscript("transcript inconsistent");
    if (g.nullspace.empty())
        throw std::invalid_argument("ambiguity_witness: system has full rank");

    const auto payload_i = t.pub.payload_for(target_i, p);
    const auto payload_j = t.pub.payload_for(target_j, p);
    Matrix d0 = candidate_from_solution(*g.particular, sys.idx, p.q);
    const u32 key0 = predict_key(d0, payload_i, target_i, payload_j, target_j, p);

    const u32 dim = u32(g.nullspace.size());
    auto try_coeffs = [&](const std::vector<u32>& coeffs) -> std::optional<AmbiguityWitness> {
        std::vector<u32> x = *g.particular;
        for (u32 v = 0; v < dim; ++v) {
            if (coeffs[v] == 0) continue;
            for (std::size_t c = 0; c < x.size(); ++c)
                x[c] = fe_add(x[c], fe_mul_free(coeffs[v], g.nullspace[v][c], p.q), p.q);
        }
        Matrix d = candidate_from_solution(x, sys.idx, p.q);
        u32 key = predict_key(d, payload_i, target_i, payload_j, target_j, p);
        if (key == key0) return std::nullopt;
        return AmbiguityWitness{std::move(d0), std::move(d), key0, key};
    };

    // Exhaustive scan of coefficient space when small, else a seeded random
    // budget of 10^4 draws.
    constexpr u64 kBudget = 10000;
    bool exhaustive = true;
    u64 total = 1;
    for (u32 v = 0; v < dim && exhaustive; ++v) {
        total *= p.q.q;
        if (total > kBudget) exhaustive = false;
    }

    if (exhaustive) {
        std::vector<u32> coeffs(dim, 0);
        for (u64 it = 1; it < total; ++it) {
            u32 v = 0;
            while (v < dim) {
                if (++coeffs[v] < p.q.q) break;
                coeffs[v++] = 0;
            }
            if (auto w = try_coeffs(coeffs)) return w;
        }
        return std::nullopt;
    }

    DeterministicRng rng(p.seed ^ 0x616d6269u);
    std::vector<u32> coeffs(dim);
    for (u64 it = 0; it < kBudget; ++it) {
        for (u32 v = 0; v < dim; ++v) coeffs[v] = sample_uniform(rng, p.q);
        if (auto w = try_coeffs(coeffs)) return w;
    }
    return std::nullopt;
}

SecurityStats security_experiment(const SchemeParams& params, u32 compromise_count,
                                  u64 trials) {
    if (compromise_count > params.n)
        throw InvalidParams({"compromise count exceeds network size"});

    SecurityStats stats;
    stats.scheme = scheme_name(params.kind);
    stats.q = params.q.q;
    stats.lambda = params.lambda;
    stats.n = params.n;
    stats.c = compromise_count;
    stats.trials = trials;

    // Pre-drawn sub-seeds keep trials independent of execution order.
    DeterministicRng master(params.seed ^ 0x73656563u);
    std::vector<u64> trial_seeds(trials);
    for (auto& s : trial_seeds) s = master.next();

    const UnknownIndex idx{params.m, true};
    u64 full = 0, colliding_pairs = 0, total_pairs = 0;
    for (u64 t = 0; t < trials; ++t) {
        SchemeParams p = params;
        p.seed = trial_seeds[t];
        Deployment dep = setup(p);

        DeterministicRng pick(trial_seeds[t] ^ 0x7069636bu);
        std::vector<u32> ids(params.n);
        std::iota(ids.begin(), ids.end(), 0);
        for (u32 i = 0; i < compromise_count; ++i)
            std::swap(ids[i], ids[i + pick.next() % (params.n - i)]);
        ids.resize(compromise_count);

        if (params.kind == SchemeKind::OrDdhv)
            for (u32 a = 0; a < compromise_count; ++a)
                for (u32 b = a + 1; b < compromise_count; ++b) {
                    ++total_pairs;
                    if (ids[a] % params.lambda == ids[b] % params.lambda) ++colliding_pairs;
                }

        if (compromise_count == 0) {
            ++stats.rank_histogram[0];
            continue;
        }
        auto res = recover(make_transcript(dep, ids), /*fold_symmetry=*/true);
        ++stats.rank_histogram[res.rank];
        if (res.rank == idx.count()) ++full;
    }
    if (trials > 0) stats.full_recovery_fraction = double(full) / double(trials);
    if (total_pairs > 0)
        stats.colliding_support_fraction = double(colliding_pairs) / double(total_pairs);
    return stats;
}

nlohmann::json stats_to_json(const SecurityStats& s) {
    nlohmann::json hist = nlohmann::json::object();
    for (auto [rank, count] : s.rank_histogram) hist[std::to_string(rank)] = count;
    return {{"scheme", s.scheme},
            {"q", s.q},
            {"lambda", s.lambda},
            {"n", s.n},
            {"c", s.c},
            {"trials", s.trials},
            {"rank_histogram", hist},
            {"full_recovery_fraction", s.full_recovery_fraction},
            {"colliding_support_fraction", s.colliding_support_fraction}};
}

}  // namespace matrixkpd
