#pragma once

#include "zxdb/circuit.hpp"
#include "zxdb/diagram.hpp"
#include "zxdb/errors.hpp"
#include "zxdb/phase.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace zxdb {

    using json         = nlohmann::json;
    using ordered_json = nlohmann::ordered_json;

    // ---- phases -------------------------------------------------------------

    inline ordered_json phase_to_json(const Phase& p) {
        if (p.is_exact()) {
            return std::to_string(p.numerator()) + "/" + std::to_string(p.denominator());
        }
        return ordered_json{{"inexact", p.to_radians()}};
    }

    inline Phase phase_from_json(const json& j) {
        if (j.is_string()) {
            const auto s     = j.get<std::string>();
            const auto slash = s.find('/');
            try {
                std::size_t used = 0;
                if (slash == std::string::npos) {
                    const auto num = std::stoll(s, &used);
                    if (used != s.size()) throw std::invalid_argument(s);
                    return Phase::fraction(num, 1);
                }
                const auto num = std::stoll(s.substr(0, slash), &used);
                if (used != slash) throw std::invalid_argument(s);
                const auto rest = s.substr(slash + 1);
                const auto den  = std::stoll(rest, &used);
                if (used != rest.size() || den == 0) throw std::invalid_argument(s);
                return Phase::fraction(num, den);
            } catch (const std::exception&) {
                throw FormatError("bad phase '" + s + "', expected \"num/den\"");
            }
        }
        if (j.is_object() && j.size() == 1 && j.contains("inexact") && j["inexact"].is_number()) {
            return Phase::radians(j["inexact"].get<double>());
        }
        throw FormatError("bad phase " + j.dump() + R"(, expected "num/den" or {"inexact": <radians>})");
    }

    // ---- diagrams -----------------------------------------------------------

    /// Deterministic JSON: nodes by ascending id, edges as (s < t) sorted.
    inline ordered_json to_json(const Diagram& d) {
        ordered_json nodes = ordered_json::array();
        d.for_each_node([&](NodeId v) {
            ordered_json n{{"id", v}, {"kind", to_string(d.kind(v))}};
            if (d.kind(v) != NodeKind::B) n["phase"] = phase_to_json(d.phase(v));
            nodes.push_back(std::move(n));
        });
        ordered_json edges = ordered_json::array();
        for (const auto& [uv, k]: d.edges()) {
            edges.push_back(ordered_json{{"s", uv.first}, {"t", uv.second}, {"kind", to_string(k)}});
        }
        return ordered_json{{"nodes", nodes}, {"edges", edges}, {"inputs", d.inputs()}, {"outputs", d.outputs()}};
    }

    inline Diagram diagram_from_json(const json& j) {
        if (!j.is_object()) throw FormatError("diagram must be a JSON object");
        for (const char* key: {"nodes", "edges", "inputs", "outputs"}) {
            if (!j.contains(key) || !j[key].is_array()) {
                throw FormatError(std::string("missing array '") + key + "'");
            }
        }
        auto read_id = [](const json& v, const char* what) -> NodeId {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
                throw FormatError(std::string(what) + " must be a non-negative integer, got " + v.dump());
            }
            return v.get<NodeId>();
        };
        Diagram d;
        try {
            for (const auto& n: j["nodes"]) {
                if (!n.is_object() || !n.contains("id") || !n.contains("kind")) {
                    throw FormatError("node entries need 'id' and 'kind': " + n.dump());
                }
                const NodeId      id   = read_id(n["id"], "node id");
                const std::string kind = n["kind"].is_string() ? n["kind"].get<std::string>() : "";
                if (kind == "B") {
                    if (n.contains("phase")) throw FormatError("boundary node " + std::to_string(id) + " has a phase");
                    d.emplace_node(id, NodeKind::B, {});
                } else if (kind == "Z" || kind == "X") {
                    const Phase p = n.contains("phase") ? phase_from_json(n["phase"]) : Phase::zero();
                    d.emplace_node(id, kind == "Z" ? NodeKind::Z : NodeKind::X, p);
                } else {
                    throw FormatError("node " + std::to_string(id) + " has unknown kind " + n["kind"].dump());
                }
            }
            for (const auto& e: j["edges"]) {
                if (!e.is_object() || !e.contains("s") || !e.contains("t") || !e.contains("kind")) {
                    throw FormatError("edge entries need 's', 't' and 'kind': " + e.dump());
                }
                const NodeId s = read_id(e["s"], "edge endpoint");
                const NodeId t = read_id(e["t"], "edge endpoint");
                const std::string k = e["kind"].is_string() ? e["kind"].get<std::string>() : "";
                if (k != "S" && k != "H") throw FormatError("edge kind must be \"S\" or \"H\": " + e.dump());
                if (!d.contains(s) || !d.contains(t)) throw FormatError("edge to unknown node: " + e.dump());
                if (s == t || d.has_edge(s, t)) throw FormatError("self-loop or parallel edge: " + e.dump());
                d.connect(s, t, k == "S" ? EdgeKind::Simple : EdgeKind::Hadamard);
            }
            std::vector<NodeId> ins, outs;
            for (const auto& v: j["inputs"]) ins.push_back(read_id(v, "input id"));
            for (const auto& v: j["outputs"]) outs.push_back(read_id(v, "output id"));
            d.assign_boundaries(std::move(ins), std::move(outs));
        } catch (const FormatError&) {
            throw;
        } catch (const ZxError& e) {
            throw FormatError(e.what());
        } catch (const std::exception& e) {
            throw FormatError(e.what());
        }
        if (auto problem = d.check_invariants(false)) {
            throw FormatError(*problem);
        }
        return d;
    }

    inline std::string dump_diagram(const Diagram& d) { return to_json(d).dump(2) + "\n"; }

    inline Diagram parse_diagram(const std::string& text) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what());
        }
        return diagram_from_json(j);
    }

    // ---- files --------------------------------------------------------------

    inline std::string read_text(const std::string& path) {
        if (path == "-") {
            std::stringstream ss;
            ss << std::cin.rdbuf();
            return ss.str();
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    inline void write_text(const std::string& path, const std::string& text) {
        if (path == "-") {
            std::cout << text;
            std::cout.flush();
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        out << text;
    }

    inline bool has_qasm_extension(const std::string& path) {
        return path.size() >= 5 && path.compare(path.size() - 5, 5, ".qasm") == 0;
    }

    /// Loads a diagram from JSON, or from OpenQASM when the path ends in .qasm.
    inline Diagram load_diagram(const std::string& path) {
        const std::string text = read_text(path);
        if (has_qasm_extension(path)) {
            return circuit_to_diagram(parse_qasm(text));
        }
        return parse_diagram(text);
    }

} // namespace zxdb
