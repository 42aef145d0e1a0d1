// Python bindings for the key pre-distribution toolkit.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matrixkpd/attack.hpp"
#include "matrixkpd/protocol.hpp"
#include "matrixkpd/serialize.hpp"

namespace py = pybind11;
using namespace matrixkpd;

namespace {

std::vector<std::vector<u32>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<u32>> out;
    out.reserve(m.rows());
    for (u32 r = 0; r < m.rows(); ++r) out.push_back(m.row(r));
    return out;
}

py::dict meter_dict(const ResourceMeter& m) {
    py::dict d;
    d["mults"] = m.mults;
    d["comm_bits"] = m.comm_bits;
    d["header_bits"] = m.header_bits;
    d["memory_bits"] = m.memory_bits;
    return d;
}

}  // namespace

PYBIND11_MODULE(_matrixkpd, mod) {
    mod.doc() = "Matrix-based key pre-distribution schemes with exact resource metering";

    py::enum_<SchemeKind>(mod, "SchemeKind")
        .value("BLOM_DENSE", SchemeKind::BlomDense)
        .value("DDHV_VANDERMONDE", SchemeKind::DdhvVandermonde)
        .value("OR_DDHV", SchemeKind::OrDdhv);

    py::class_<SchemeParams>(mod, "SchemeParams")
        .def_static(
            "make",
            [](const std::string& scheme, u64 q, u32 lambda, u32 n,
               std::optional<u32> s, u64 seed, bool allow_oversize) {
                auto kind = scheme_from_name(scheme);
                if (!kind) throw py::value_error("unknown scheme: " + scheme);
                return SchemeParams::make(*kind, q, lambda, n, s, seed, allow_oversize);
            },
            py::arg("scheme"), py::arg("q"), py::arg("lambda_"), py::arg("n"),
            py::arg("s") = std::nullopt, py::arg("seed") = 0,
            py::arg("allow_oversize") = false)
        .def_property_readonly("scheme", [](const SchemeParams& p) { return scheme_name(p.kind); })
        .def_property_readonly("q", [](const SchemeParams& p) { return p.q.q; })
        .def_readonly("lambda_", &SchemeParams::lambda)
        .def_readonly("m", &SchemeParams::m)
        .def_readonly("n", &SchemeParams::n)
        .def_readonly("s", &SchemeParams::s)
        .def_readonly("seed", &SchemeParams::seed)
        .def("payload_elements", &SchemeParams::payload_elements);

    py::class_<NodeShare>(mod, "NodeShare")
        .def_readonly("node_id", &NodeShare::node_id)
        .def_readonly("private_row", &NodeShare::private_row)
        .def_readonly("public_payload", &NodeShare::public_payload);

    py::class_<Deployment>(mod, "Deployment")
        .def_readonly("params", &Deployment::params)
        .def_readonly("shares", &Deployment::shares)
        .def_property_readonly("master_d",
                               [](const Deployment& d) { return matrix_rows(d.master_d); })
        .def("oracle_key_matrix", [](const Deployment& d) {
            return matrix_rows(oracle_key_matrix(d.master_d, d.pub, d.params));
        });

    mod.def("setup", &setup, py::arg("params"));
    mod.def("validate_params", &validate_params, py::arg("params"));

    mod.def(
        "derive_key",
        [](const Deployment& dep, u32 i, u32 j) {
            MulCounter c;
            u32 key = derive_key(dep.shares[i], dep.shares[j].public_payload, j,
                                 dep.params, c);
            return py::make_tuple(key, c.count);
        },
        py::arg("deployment"), py::arg("i"), py::arg("j"),
        "Derive k_ij on node i's side; returns (key, counted multiplications)");

    mod.def(
        "encode_message",
        [](const Deployment& dep, u32 i) {
            auto bytes = encode_message(dep.shares[i], dep.params);
            return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("deployment"), py::arg("i"));

    mod.def(
        "handshake",
        [](const Deployment& dep, u32 i, const py::bytes& msg) {
            std::string buf = msg;
            auto [key, meter] = handshake(
                dep.shares[i],
                std::span(reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size()),
                dep.params);
            return py::make_tuple(key, meter_dict(meter));
        },
        py::arg("deployment"), py::arg("i"), py::arg("peer_message"));

    mod.def(
        "run_all_pairs",
        [](const Deployment& dep, u64 sample_k) {
            return py::module_::import("json").attr("loads")(
                report_to_json(run_all_pairs(dep, sample_k)).dump());
        },
        py::arg("deployment"), py::arg("sample_k") = 0);

    mod.def(
        "recover",
        [](const Deployment& dep, const std::vector<u32>& ids, bool fold_symmetry) {
            auto res = recover(make_transcript(dep, ids), fold_symmetry);
            py::dict d;
            d["rank"] = res.rank;
            d["unknown_count"] = res.unknown_count;
            d["nullspace_dim"] = res.nullspace_dim;
            d["recovered"] = res.d_candidate.has_value();
            if (res.d_candidate) d["d_candidate"] = matrix_rows(*res.d_candidate);
            return d;
        },
        py::arg("deployment"), py::arg("compromised_ids"), py::arg("fold_symmetry") = true);

    mod.def(
        "security_experiment",
        [](const SchemeParams& p, u32 c, u64 trials) {
            return py::module_::import("json").attr("loads")(
                stats_to_json(security_experiment(p, c, trials)).dump());
        },
        py::arg("params"), py::arg("compromise_count"), py::arg("trials"));

    py::register_exception<InvalidParams>(mod, "InvalidParamsError", PyExc_ValueError);
    py::register_exception<WireError>(mod, "WireError", PyExc_ValueError);
    py::register_exception<InconsistentTranscript>(mod, "InconsistentTranscriptError",
                                                   PyExc_RuntimeError);
}
