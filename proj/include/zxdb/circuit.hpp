#pragma once

#include "zxdb/diagram.hpp"
#include "zxdb/errors.hpp"
#include "zxdb/phase.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace zxdb {

    enum class GateName : std::uint8_t { H, X, Z, S, Sdg, T, Tdg, Rz, Rx, Cx, Cz };

    inline constexpr std::array<GateName, 11> all_gates = {GateName::H,  GateName::X,   GateName::Z,
                                                           GateName::S,  GateName::Sdg, GateName::T,
                                                           GateName::Tdg, GateName::Rz, GateName::Rx,
                                                           GateName::Cx, GateName::Cz};

    inline const char* to_string(GateName g) {
        switch (g) {
            case GateName::H: return "h";
            case GateName::X: return "x";
            case GateName::Z: return "z";
            case GateName::S: return "s";
            case GateName::Sdg: return "sdg";
            case GateName::T: return "t";
            case GateName::Tdg: return "tdg";
            case GateName::Rz: return "rz";
            case GateName::Rx: return "rx";
            case GateName::Cx: return "cx";
            case GateName::Cz: return "cz";
        }
        return "?";
    }

    inline std::optional<GateName> gate_from_string(std::string_view s) {
        for (auto g: all_gates) {
            if (s == to_string(g)) {
                return g;
            }
        }
        return std::nullopt;
    }

    inline constexpr bool is_two_qubit(GateName g) { return g == GateName::Cx || g == GateName::Cz; }
    inline constexpr bool is_rotation(GateName g) { return g == GateName::Rz || g == GateName::Rx; }

    struct Gate {
        GateName                 name;
        std::vector<std::size_t> qubits;
        std::optional<Phase>     angle; // rotation gates only

        friend bool operator==(const Gate&, const Gate&) = default;
    };

    struct Circuit {
        std::size_t       num_qubits = 0;
        std::vector<Gate> gates;

        friend bool operator==(const Circuit&, const Circuit&) = default;

        Circuit& h(std::size_t q) { return add({GateName::H, {q}, {}}); }
        Circuit& x(std::size_t q) { return add({GateName::X, {q}, {}}); }
        Circuit& z(std::size_t q) { return add({GateName::Z, {q}, {}}); }
        Circuit& s(std::size_t q) { return add({GateName::S, {q}, {}}); }
        Circuit& sdg(std::size_t q) { return add({GateName::Sdg, {q}, {}}); }
        Circuit& t(std::size_t q) { return add({GateName::T, {q}, {}}); }
        Circuit& tdg(std::size_t q) { return add({GateName::Tdg, {q}, {}}); }
        Circuit& rz(Phase a, std::size_t q) { return add({GateName::Rz, {q}, a}); }
        Circuit& rx(Phase a, std::size_t q) { return add({GateName::Rx, {q}, a}); }
        Circuit& cx(std::size_t c, std::size_t t) { return add({GateName::Cx, {c, t}, {}}); }
        Circuit& cz(std::size_t a, std::size_t b) { return add({GateName::Cz, {a, b}, {}}); }

        Circuit& add(Gate g) {
            gates.push_back(std::move(g));
            return *this;
        }

        /// Empty if every gate respects the qubit count and arity rules.
        [[nodiscard]] std::optional<std::string> check() const {
            for (std::size_t i = 0; i < gates.size(); ++i) {
                const auto& g = gates[i];
                if (g.qubits.size() != (is_two_qubit(g.name) ? 2U : 1U)) {
                    return "gate " + std::to_string(i) + " has wrong arity";
                }
                for (auto q: g.qubits) {
                    if (q >= num_qubits) {
                        return "gate " + std::to_string(i) + " uses qubit " + std::to_string(q) + " out of range";
                    }
                }
                if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
                    return "gate " + std::to_string(i) + " repeats a qubit";
                }
                if (g.angle.has_value() != is_rotation(g.name)) {
                    return "gate " + std::to_string(i) + " angle presence mismatch";
                }
            }
            return std::nullopt;
        }
    };

    /// Z-phase of the discrete single-qubit gates (x maps to an X spider).
    inline Phase fixed_phase(GateName g) {
        switch (g) {
            case GateName::X:
            case GateName::Z: return Phase::pi();
            case GateName::S: return Phase::fraction(1, 2);
            case GateName::Sdg: return Phase::fraction(3, 2);
            case GateName::T: return Phase::fraction(1, 4);
            case GateName::Tdg: return Phase::fraction(7, 4);
            default: return Phase::zero();
        }
    }

    namespace detail {

        inline std::string_view trim(std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
                s.remove_prefix(1);
            }
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
                s.remove_suffix(1);
            }
            return s;
        }

        inline std::optional<std::int64_t> parse_int(std::string_view s) {
            s = trim(s);
            std::int64_t v{};
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size()) {
                return std::nullopt;
            }
            return v;
        }

        // pi, pi/k, m*pi, m*pi/k (optionally negated) become exact; decimals inexact
        inline std::optional<Phase> parse_angle(std::string_view s) {
            s          = trim(s);
            bool minus = false;
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
                minus = s.front() == '-';
                s     = trim(s.substr(1));
            }
            if (s.empty()) {
                return std::nullopt;
            }
            const auto pi_pos = s.find("pi");
            if (pi_pos != std::string_view::npos) {
                std::int64_t num = 1;
                std::int64_t den = 1;
                auto         pre = trim(s.substr(0, pi_pos));
                auto         post = trim(s.substr(pi_pos + 2));
                if (!pre.empty()) {
                    if (pre.back() != '*') {
                        return std::nullopt;
                    }
                    auto m = parse_int(pre.substr(0, pre.size() - 1));
                    if (!m) {
                        return std::nullopt;
                    }
                    num = *m;
                }
                if (!post.empty()) {
                    if (post.front() != '/') {
                        return std::nullopt;
                    }
                    auto k = parse_int(post.substr(1));
                    if (!k || *k == 0) {
                        return std::nullopt;
                    }
                    den = *k;
                }
                return Phase::fraction(minus ? -num : num, den);
            }
            double v{};
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || p != s.data() + s.size()) {
                return std::nullopt;
            }
            return Phase::radians(minus ? -v : v);
        }

    } // namespace detail

    /// Parses the supported OpenQASM 2 subset: header lines, one qreg, and
    /// statements over h, x, z, s, sdg, t, tdg, rz, rx, cx, cz.
    inline Circuit parse_qasm(std::string_view text) {
        Circuit                    c;
        std::optional<std::string> reg;

        // split into statements, remembering the line each one starts on
        std::string stmt;
        std::size_t line       = 1;
        std::size_t stmt_line  = 1;
        bool        in_comment = false;
        std::vector<std::pair<std::string, std::size_t>> statements;
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char ch = text[i];
            if (ch == '\n') {
                ++line;
                in_comment = false;
                stmt.push_back(' ');
                continue;
            }
            if (in_comment) {
                continue;
            }
            if (ch == '/' && i + 1 < text.size() && text[i + 1] == '/') {
                in_comment = true;
                continue;
            }
            if (detail::trim(stmt).empty()) {
                stmt_line = line;
            }
            if (ch == ';') {
                statements.emplace_back(std::string(detail::trim(stmt)), stmt_line);
                stmt.clear();
                continue;
            }
            stmt.push_back(ch);
        }
        if (!detail::trim(stmt).empty()) {
            throw ParseError("statement not terminated by ';'", stmt_line);
        }

        auto parse_operand = [&](std::string_view op, std::size_t ln) -> std::size_t {
            op             = detail::trim(op);
            const auto lb  = op.find('[');
            const auto rb  = op.find(']');
            if (lb == std::string_view::npos || rb == std::string_view::npos || rb < lb || rb + 1 != op.size()) {
                throw ParseError("malformed qubit operand '" + std::string(op) + "'", ln);
            }
            if (!reg || detail::trim(op.substr(0, lb)) != *reg) {
                throw ParseError("unknown register in '" + std::string(op) + "'", ln);
            }
            auto idx = detail::parse_int(op.substr(lb + 1, rb - lb - 1));
            if (!idx || *idx < 0) {
                throw ParseError("malformed qubit index in '" + std::string(op) + "'", ln);
            }
            if (static_cast<std::size_t>(*idx) >= c.num_qubits) {
                throw QubitIndexError("qubit index " + std::to_string(*idx) + " out of range", ln);
            }
            return static_cast<std::size_t>(*idx);
        };

        for (const auto& [s, ln]: statements) {
            std::string_view st = s;
            if (st.empty()) {
                continue;
            }
            if (st.starts_with("OPENQASM") || st.starts_with("include")) {
                continue;
            }
            if (st.starts_with("qreg")) {
                if (reg) {
                    throw ParseError("only one qreg is supported", ln);
                }
                auto body = detail::trim(st.substr(4));
                auto lb   = body.find('[');
                auto rb   = body.find(']');
                if (lb == std::string_view::npos || rb == std::string_view::npos || rb < lb) {
                    throw ParseError("malformed qreg declaration", ln);
                }
                auto n = detail::parse_int(body.substr(lb + 1, rb - lb - 1));
                auto name = detail::trim(body.substr(0, lb));
                if (!n || *n <= 0 || name.empty()) {
                    throw ParseError("malformed qreg declaration", ln);
                }
                reg          = std::string(name);
                c.num_qubits = static_cast<std::size_t>(*n);
                continue;
            }

            // gate statement: name[(angle)] operands
            std::size_t pos = 0;
            while (pos < st.size() && (std::isalnum(static_cast<unsigned char>(st[pos])) || st[pos] == '_')) {
                ++pos;
            }
            const std::string name(st.substr(0, pos));
            if (name.empty()) {
                throw ParseError("malformed statement '" + s + "'", ln);
            }
            auto gate = gate_from_string(name);
            if (!gate) {
                throw UnsupportedGate(name, ln);
            }
            if (!reg) {
                throw ParseError("gate before qreg declaration", ln);
            }
            std::string_view rest = detail::trim(st.substr(pos));
            Gate             g{*gate, {}, {}};
            if (!rest.empty() && rest.front() == '(') {
                auto close = rest.find(')');
                if (close == std::string_view::npos) {
                    throw ParseError("unterminated angle", ln);
                }
                if (!is_rotation(*gate)) {
                    throw ParseError("gate '" + name + "' takes no angle", ln);
                }
                auto angle = detail::parse_angle(rest.substr(1, close - 1));
                if (!angle) {
                    throw ParseError("malformed angle '" + std::string(rest.substr(1, close - 1)) + "'", ln);
                }
                g.angle = *angle;
                rest    = detail::trim(rest.substr(close + 1));
            } else if (is_rotation(*gate)) {
                throw ParseError("gate '" + name + "' needs an angle", ln);
            }
            std::size_t start = 0;
            while (start <= rest.size()) {
                auto comma = rest.find(',', start);
                auto part  = rest.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
                g.qubits.push_back(parse_operand(part, ln));
                if (comma == std::string_view::npos) {
                    break;
                }
                start = comma + 1;
            }
            if (g.qubits.size() != (is_two_qubit(*gate) ? 2U : 1U)) {
                throw ParseError("wrong number of operands for '" + name + "'", ln);
            }
            if (g.qubits.size() == 2 && g.qubits[0] == g.qubits[1]) {
                throw ParseError("two-qubit gate on a single qubit", ln);
            }
            c.gates.push_back(std::move(g));
        }
        if (!reg) {
            throw ParseError("missing qreg declaration", line);
        }
        return c;
    }

    inline std::string angle_to_qasm(const Phase& p) {
        if (p.is_exact()) {
            if (p.numerator() == 0) {
                return "0*pi";
            }
            std::string s = p.numerator() == 1 ? "pi" : std::to_string(p.numerator()) + "*pi";
            if (p.denominator() != 1) {
                s += "/" + std::to_string(p.denominator());
            }
            return s;
        }
        std::ostringstream os;
        os << std::setprecision(std::numeric_limits<double>::max_digits10) << p.to_radians();
        std::string s = os.str();
        if (s.find_first_of(".e") == std::string::npos) {
            s += ".0";
        }
        return s;
    }

    inline std::string to_qasm(const Circuit& c) {
        std::ostringstream os;
        os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.num_qubits << "];\n";
        for (const auto& g: c.gates) {
            os << to_string(g.name);
            if (g.angle) {
                os << '(' << angle_to_qasm(*g.angle) << ')';
            }
            os << ' ';
            for (std::size_t i = 0; i < g.qubits.size(); ++i) {
                os << (i ? "," : "") << "q[" << g.qubits[i] << ']';
            }
            os << ";\n";
        }
        return os.str();
    }

    /// Builds the ZX-diagram of a circuit: one input and one output boundary per
    /// qubit, spiders appended along a per-wire frontier, Hadamards folded into
    /// the kind of the next edge on the wire.
    inline Diagram circuit_to_diagram(const Circuit& c) {
        if (auto err = c.check()) {
            throw std::invalid_argument("circuit_to_diagram: " + *err);
        }
        Diagram               d;
        std::vector<NodeId>   frontier(c.num_qubits);
        std::vector<EdgeKind> pending(c.num_qubits, EdgeKind::Simple);
        for (std::size_t q = 0; q < c.num_qubits; ++q) {
            frontier[q] = d.add_boundary(BoundaryRole::Input);
        }
        auto append = [&](std::size_t q, NodeKind kind, Phase phase) {
            const NodeId v = d.add_spider(kind, phase);
            d.connect(frontier[q], v, pending[q]);
            frontier[q] = v;
            pending[q]  = EdgeKind::Simple;
            return v;
        };
        for (const auto& g: c.gates) {
            const std::size_t q = g.qubits[0];
            switch (g.name) {
                case GateName::H: pending[q] = toggled(pending[q]); break;
                case GateName::X: append(q, NodeKind::X, Phase::pi()); break;
                case GateName::Rx: append(q, NodeKind::X, *g.angle); break;
                case GateName::Rz: append(q, NodeKind::Z, *g.angle); break;
                case GateName::Z:
                case GateName::S:
                case GateName::Sdg:
                case GateName::T:
                case GateName::Tdg: append(q, NodeKind::Z, fixed_phase(g.name)); break;
                case GateName::Cx: {
                    const NodeId ctrl = append(q, NodeKind::Z, Phase::zero());
                    const NodeId targ = append(g.qubits[1], NodeKind::X, Phase::zero());
                    d.connect(ctrl, targ, EdgeKind::Simple);
                    break;
                }
                case GateName::Cz: {
                    const NodeId a = append(q, NodeKind::Z, Phase::zero());
                    const NodeId b = append(g.qubits[1], NodeKind::Z, Phase::zero());
                    d.connect(a, b, EdgeKind::Hadamard);
                    break;
                }
            }
        }
        for (std::size_t q = 0; q < c.num_qubits; ++q) {
            if (pending[q] == EdgeKind::Hadamard) {
                // keep a spider between the wire and the Hadamard boundary edge
                const NodeId v = d.add_spider(NodeKind::Z);
                d.connect(frontier[q], v, EdgeKind::Simple);
                frontier[q] = v;
            }
            const NodeId out = d.add_boundary(BoundaryRole::Output);
            d.connect(frontier[q], out, pending[q]);
        }
        return d;
    }

    /// Seeded random circuit over the 11 supported gates. Angles are drawn from
    /// the eight exact multiples of pi/4 plus one inexact category.
    inline Circuit gen_random_circuit(std::size_t num_qubits, std::size_t num_gates, std::uint64_t seed) {
        if (num_qubits == 0) {
            throw std::invalid_argument("gen_random_circuit: need at least one qubit");
        }
        std::mt19937_64 rng(seed);
        Circuit         c;
        c.num_qubits = num_qubits;
        const std::size_t n_choices = num_qubits >= 2 ? all_gates.size() : all_gates.size() - 2;
        auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
        for (std::size_t i = 0; i < num_gates; ++i) {
            const GateName name = all_gates[pick(n_choices)];
            Gate           g{name, {}, {}};
            g.qubits.push_back(pick(num_qubits));
            if (is_two_qubit(name)) {
                std::size_t other = pick(num_qubits - 1);
                if (other >= g.qubits[0]) {
                    ++other;
                }
                g.qubits.push_back(other);
            }
            if (is_rotation(name)) {
                const std::size_t a = pick(9);
                if (a < 8) {
                    g.angle = Phase::fraction(static_cast<std::int64_t>(a), 4);
                } else {
                    g.angle = Phase::radians(std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng));
                }
            }
            c.gates.push_back(std::move(g));
        }
        return c;
    }

} // namespace zxdb
