// Command-line front end: deployment generation, handshake runs, resource
// benchmarking across the three schemes, and attack experiments.
//
// Exit codes: 0 ok, 2 invalid parameters, 3 I/O failure, 4 internal
// invariant breach (key mismatch).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "matrixkpd/attack.hpp"
#include "matrixkpd/protocol.hpp"
#include "matrixkpd/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace matrixkpd;

namespace {

struct RunConfig {
    std::string scheme = "or-ddhv";
    u64 q = 65537;
    u32 lambda = 64;
    u32 n = 128;
    u32 s = 0;  // 0 = default generator
    u64 seed = 42;
    bool unsafe_oversize = false;
    std::string pairs = "all";
    std::string compromise;
    u64 trials = 100;
    std::string format = "json";
    std::string out;
};

u64 default_seed() {
    if (const char* env = std::getenv("MATRIXKPD_SEED")) return std::stoull(env);
    return 42;
}

SchemeParams params_from_config(const RunConfig& cfg) {
    auto kind = scheme_from_name(cfg.scheme);
    if (!kind) throw InvalidParams({"unknown scheme: " + cfg.scheme});
    std::optional<u32> s;
    if (cfg.s != 0) s = cfg.s;
    return SchemeParams::make(*kind, cfg.q, cfg.lambda, cfg.n, s, cfg.seed,
                              cfg.unsafe_oversize);
}

std::string share_path(const std::string& dir, u32 id) {
    return dir + "/share_" + std::to_string(id) + ".json";
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw IoError("cannot open for writing: " + out_path);
    f << text;
    if (!f) throw IoError("write failed: " + out_path);
}

int cmd_setup(const RunConfig& cfg) {
    SchemeParams p = params_from_config(cfg);
    for (const auto& v : validate_params(p))
        std::cerr << "warning: " << v << "\n";
    Deployment dep = setup(p);
    const std::string dir = cfg.out.empty() ? "deployment" : cfg.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir);
    write_json_file(dir + "/authority.json", authority_to_json(dep));
    for (const NodeShare& s : dep.shares)
        write_json_file(share_path(dir, s.node_id), share_to_json(s, p));
    std::cout << "wrote " << dep.shares.size() << " share files and authority.json to "
              << dir << "\n";
    return 0;
}

int cmd_handshake(const RunConfig& cfg, u32 i, u32 j) {
    const std::string dir = cfg.out.empty() ? "deployment" : cfg.out;
    auto [share_i, p] = share_from_json(read_json_file(share_path(dir, i)));
    auto [share_j, p2] = share_from_json(read_json_file(share_path(dir, j)));
    auto [key_ij, meter] = handshake(share_i, encode_message(share_j, p), p);
    auto [key_ji, meter_back] = handshake(share_j, encode_message(share_i, p2), p2);
    std::cout << "key=" << key_ij << "\n"
              << "mults=" << meter.mults << "\n"
              << "comm_bits=" << meter.comm_bits << "\n"
              << "header_bits=" << meter.header_bits << "\n"
              << "memory_bits=" << meter.memory_bits << "\n";
    if (key_ij != key_ji) throw KeyMismatch(i, j);
    return 0;
}

struct BenchRow {
    AgreementReport report;
    u64 comm_elements = 0;
    u64 memory_elements_actual = 0;
    u64 memory_elements_paper_model = 0;
    double wall_us_per_key = 0.0;  // informational only, never deterministic
};

u64 parse_pairs_selector(const std::string& sel) {
    if (sel == "all") return 0;
    if (sel.rfind("random:", 0) == 0) return std::stoull(sel.substr(7));
    throw InvalidParams({"--pairs must be all or random:K"});
}

int cmd_bench(const RunConfig& cfg) {
    const u64 sample_k = parse_pairs_selector(cfg.pairs);
    std::vector<BenchRow> rows;
    for (SchemeKind kind :
         {SchemeKind::BlomDense, SchemeKind::DdhvVandermonde, SchemeKind::OrDdhv}) {
        RunConfig c = cfg;
        c.scheme = scheme_name(kind);
        // Same (q, lambda) everywhere; N clamped to the sparse scheme's limit.
        if (kind == SchemeKind::OrDdhv) c.n = std::min(cfg.n, 2 * cfg.lambda);
        SchemeParams p = params_from_config(c);
        Deployment dep = setup(p);
        auto t0 = std::chrono::steady_clock::now();
        AgreementReport rep = run_all_pairs(dep, sample_k);
        auto t1 = std::chrono::steady_clock::now();

        BenchRow row;
        row.report = rep;
        row.comm_elements = p.payload_elements();
        row.memory_elements_actual = p.m;
        row.memory_elements_paper_model = p.lambda;  // the lambda * q-bit figure
        row.wall_us_per_key =
            std::chrono::duration<double, std::micro>(t1 - t0).count() /
            double(2 * rep.pairs_tested);
        rows.push_back(row);
    }

    std::ostringstream text;
    if (cfg.format == "json") {
        json out;
        out["table1"] = json::array();
        out["reports"] = json::array();
        for (const auto& r : rows) {
            out["reports"].push_back(report_to_json(r.report));
            out["table1"].push_back({{"algorithm", r.report.scheme},
                                     {"comm_elements", r.comm_elements},
                                     {"comm_bits", r.report.comm_bits_per_handshake},
                                     {"mults_per_key", r.report.mults_per_key},
                                     {"memory_elements", r.memory_elements_actual},
                                     {"memory_elements_paper_model",
                                      r.memory_elements_paper_model},
                                     {"memory_bits", r.report.memory_bits_per_node}});
        }
        text << out.dump(2) << "\n";
    } else {
        text << "algorithm,comm_elements,comm_bits,mults_per_key,memory_elements,"
                "memory_elements_paper_model,memory_bits,pairs_tested,all_keys_match\n";
        for (const auto& r : rows)
            text << r.report.scheme << "," << r.comm_elements << ","
                 << r.report.comm_bits_per_handshake << "," << r.report.mults_per_key
                 << "," << r.memory_elements_actual << ","
                 << r.memory_elements_paper_model << "," << r.report.memory_bits_per_node
                 << "," << r.report.pairs_tested << "," << r.report.all_keys_match
                 << "\n";
    }
    emit(text.str(), cfg.out);
    for (const auto& r : rows)
        std::cerr << r.report.scheme << ": " << r.wall_us_per_key << " us/key\n";
    return 0;
}

// Rebuilds the adversary's public view from the share files (payloads are
// public; private rows are read only for the compromised ids).
PublicMatrix public_matrix_from_shares(const std::string& dir, const SchemeParams& p) {
    PublicMatrix pub;
    pub.kind = p.kind;
    pub.s = p.s;
    pub.dense = Matrix(p.m, p.n, p.q);
    if (p.kind == SchemeKind::OrDdhv) pub.sparse_pairs.resize(p.n);
    MulCounter scratch;
    for (u32 id = 0; id < p.n; ++id) {
        auto [share, sp] = share_from_json(read_json_file(share_path(dir, id)));
        auto col = reconstruct_column(p, id, share.public_payload, scratch);
        for (u32 r = 0; r < p.m; ++r) pub.dense.at(r, id) = col[r];
        if (p.kind == SchemeKind::OrDdhv)
            pub.sparse_pairs[id] = {share.public_payload[0], share.public_payload[1]};
    }
    return pub;
}

int cmd_attack(const RunConfig& cfg) {
    const std::string dir = cfg.out.empty() ? "deployment" : cfg.out;
    auto [p, authority_d] = authority_from_json(read_json_file(dir + "/authority.json"));

    // Explicit id list => single recovery; plain count => trial experiment.
    if (cfg.compromise.find(',') != std::string::npos ||
        (cfg.trials == 0 && !cfg.compromise.empty())) {
        std::vector<u32> ids;
        std::stringstream ss(cfg.compromise);
        for (std::string tok; std::getline(ss, tok, ',');) ids.push_back(u32(std::stoul(tok)));

        CompromiseTranscript t;
        t.params = p;
        t.pub = public_matrix_from_shares(dir, p);
        for (u32 id : ids) {
            auto [share, sp] = share_from_json(read_json_file(share_path(dir, id)));
            t.compromised.push_back(std::move(share));
        }
        RecoveryResult res = recover(t);
        json out = {{"scheme", scheme_name(p.kind)},
                    {"compromised", ids},
                    {"rank", res.rank},
                    {"unknown_count", res.unknown_count},
                    {"nullspace_dim", res.nullspace_dim},
                    {"recovered", res.d_candidate.has_value()},
                    {"matches_authority_d",
                     res.d_candidate.has_value() && *res.d_candidate == authority_d}};
        emit(out.dump(2) + "\n", "");
        return 0;
    }

    u32 c = cfg.compromise.empty() ? p.lambda : u32(std::stoul(cfg.compromise));
    SecurityStats stats = security_experiment(p, c, cfg.trials);
    std::ostringstream text;
    if (cfg.format == "json") {
        text << stats_to_json(stats).dump(2) << "\n";
    } else {
        text << "scheme,q,lambda,n,c,trials,full_recovery_fraction,"
                "colliding_support_fraction,rank_histogram\n";
        text << stats.scheme << "," << stats.q << "," << stats.lambda << "," << stats.n
             << "," << stats.c << "," << stats.trials << ","
             << stats.full_recovery_fraction << "," << stats.colliding_support_fraction
             << ",";
        bool first = true;
        for (auto [rank, count] : stats.rank_histogram) {
            text << (first ? "" : "|") << rank << ":" << count;
            first = false;
        }
        text << "\n";
    }
    emit(text.str(), "");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix-based key pre-distribution toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.seed = default_seed();
    u32 node_i = 0, node_j = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scheme", cfg.scheme, "blom | ddhv | or-ddhv");
        sub->add_option("--q", cfg.q, "prime modulus");
        sub->add_option("--lambda", cfg.lambda, "security parameter");
        sub->add_option("--n", cfg.n, "network size");
        sub->add_option("--s", cfg.s, "Vandermonde generator (default: primitive root)");
        sub->add_option("--seed", cfg.seed, "deterministic seed");
        sub->add_option("--format", cfg.format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.out, "output path (deployment dir or report file)");
        sub->add_flag("--unsafe-oversize", cfg.unsafe_oversize,
                      "override the N <= 2*lambda limit for or-ddhv");
    };

    auto* sc_setup = app.add_subcommand("setup", "generate authority and share files");
    add_common(sc_setup);
    auto* sc_hand = app.add_subcommand("handshake", "derive a pairwise key from share files");
    add_common(sc_hand);
    sc_hand->add_option("i", node_i, "first node id")->required();
    sc_hand->add_option("j", node_j, "second node id")->required();
    auto* sc_bench = app.add_subcommand("bench", "compare the three schemes");
    add_common(sc_bench);
    sc_bench->add_option("--pairs", cfg.pairs, "all | random:K");
    auto* sc_attack = app.add_subcommand("attack", "node-compromise recovery experiments");
    add_common(sc_attack);
    sc_attack->add_option("--compromise", cfg.compromise,
                          "compromise count, or comma-separated id list");
    sc_attack->add_option("--trials", cfg.trials, "trial count for the experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sc_setup->parsed()) return cmd_setup(cfg);
        if (sc_hand->parsed()) return cmd_handshake(cfg, node_i, node_j);
        if (sc_bench->parsed()) return cmd_bench(cfg);
        if (sc_attack->parsed()) return cmd_attack(cfg);
    } catch (const InvalidParams& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotPrime& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const KeyMismatch& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
