#pragma once

#include "zxdb/diagram.hpp"
#include "zxdb/errors.hpp"
#include "zxdb/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace zxdb {

    enum class VerifyMethod { Tensor, Isomorphism, DegreeSequence };

    inline const char* to_string(VerifyMethod m) {
        switch (m) {
            case VerifyMethod::Tensor: return "tensor";
            case VerifyMethod::Isomorphism: return "isomorphism";
            case VerifyMethod::DegreeSequence: return "degree_sequence";
        }
        return "?";
    }

    struct EquivalenceVerdict {
        bool                     equal = false;
        cplx                     scalar{0, 0};
        std::vector<std::size_t> permutation; // qubit q of b corresponds to qubit permutation[q] of a
        VerifyMethod             method   = VerifyMethod::Tensor;
        double                   residual = 0.0;
    };

    inline constexpr double default_tolerance = 1e-8;

    inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

    /// Is B = s·A for some non-zero s, up to tol relative to the largest entry?
    inline EquivalenceVerdict equal_up_to_scalar(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                                 double tol = default_tolerance) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) {
            throw DimensionMismatch("operators are " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
        }
        EquivalenceVerdict v;
        const double       na   = max_abs(a);
        const double       nb   = max_abs(b);
        const double       norm = std::max(na, nb);
        Eigen::Index       r = 0, c = 0;
        if (a.size() > 0) a.cwiseAbs().maxCoeff(&r, &c);
        if (norm == 0.0 || na <= tol * norm) {
            // A is numerically zero: equal only if B is too
            v.residual = nb;
            v.equal    = nb <= tol * norm || norm == 0.0;
            v.scalar   = v.equal ? cplx{1, 0} : cplx{0, 0};
            return v;
        }
        const cplx s = b(r, c) / a(r, c);
        v.scalar     = s;
        v.residual   = max_abs(b - s * a);
        v.equal      = s != cplx{0, 0} && v.residual <= tol * nb;
        return v;
    }

    /// Relabels the qubits of a square 2^n x 2^n operator on both sides:
    /// qubit q of the result is qubit perm[q] of m (qubit 0 most significant).
    inline Eigen::MatrixXcd permute_qubits(const Eigen::MatrixXcd& m, const std::vector<std::size_t>& perm) {
        const std::size_t n   = perm.size();
        const std::size_t dim = std::size_t{1} << n;
        std::vector<std::size_t> map(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            std::size_t j = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if ((i >> (n - 1 - q)) & 1U) j |= std::size_t{1} << (n - 1 - perm[q]);
            }
            map[i] = j;
        }
        Eigen::MatrixXcd out(m.rows(), m.cols());
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    m(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[k]));
            }
        }
        return out;
    }

    inline EquivalenceVerdict equal_up_to_qubit_permutation(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                                            std::size_t n_qubits, double tol = default_tolerance) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
        if (a.rows() != dim || a.cols() != dim || b.rows() != dim || b.cols() != dim) {
            throw DimensionMismatch("expected two " + std::to_string(dim) + "x" + std::to_string(dim) + " operators");
        }
        if (n_qubits > 6) {
            throw std::invalid_argument("permutation search is limited to 6 qubits");
        }
        std::vector<std::size_t> perm(n_qubits);
        std::iota(perm.begin(), perm.end(), 0);
        EquivalenceVerdict first;
        bool               have_first = false;
        do {
            auto v = equal_up_to_scalar(a, permute_qubits(b, perm), tol);
            v.permutation = perm;
            if (v.equal) return v;
            if (!have_first) {
                first      = v;
                have_first = true;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return first;
    }

    struct OperatorFingerprint {
        std::vector<cplx>   traces; // tr(A), tr(A^2), ..., empty for non-square A
        std::vector<double> singular_values; // descending
    };

    inline OperatorFingerprint operator_fingerprint(const Eigen::MatrixXcd& a, std::size_t k_max) {
        OperatorFingerprint f;
        if (a.rows() == a.cols()) {
            Eigen::MatrixXcd p = a;
            for (std::size_t k = 1; k <= k_max; ++k) {
                f.traces.push_back(p.trace());
                if (k < k_max) p = p * a;
            }
        }
        if (a.size() > 0) {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
            const auto&                        sv = svd.singularValues();
            f.singular_values.assign(sv.data(), sv.data() + sv.size());
            std::sort(f.singular_values.begin(), f.singular_values.end(), std::greater<>());
        }
        return f;
    }

    inline bool fingerprints_close(const OperatorFingerprint& x, const OperatorFingerprint& y, double tol) {
        if (x.traces.size() != y.traces.size() || x.singular_values.size() != y.singular_values.size()) return false;
        for (std::size_t i = 0; i < x.traces.size(); ++i) {
            if (std::abs(x.traces[i] - y.traces[i]) > tol * std::max(1.0, std::abs(x.traces[i]))) return false;
        }
        for (std::size_t i = 0; i < x.singular_values.size(); ++i) {
            if (std::abs(x.singular_values[i] - y.singular_values[i]) > tol * std::max(1.0, x.singular_values[i])) {
                return false;
            }
        }
        return true;
    }

    // ---- graph-level checks ------------------------------------------------

    inline bool degree_sequence_equal(const Diagram& g1, const Diagram& g2) {
        return g1.degree_sequence() == g2.degree_sequence();
    }

    inline constexpr double inexact_phase_tolerance = 1e-12;

    inline bool phases_match(const Phase& a, const Phase& b) {
        if (a.is_exact() != b.is_exact()) return false;
        if (a.is_exact()) return a == b;
        return a.distance(b) <= inexact_phase_tolerance;
    }

    namespace detail {

        /// Role of a node for isomorphism purposes: spiders by kind, boundaries
        /// by (input|output, list position).
        inline std::pair<int, std::size_t> role_of(const Diagram& d, NodeId v) {
            if (d.kind(v) != NodeKind::B) return {static_cast<int>(d.kind(v)), 0};
            const auto& in = d.inputs();
            if (auto it = std::find(in.begin(), in.end(), v); it != in.end()) {
                return {10, static_cast<std::size_t>(it - in.begin())};
            }
            const auto& out = d.outputs();
            return {11, static_cast<std::size_t>(std::find(out.begin(), out.end(), v) - out.begin())};
        }

        /// Everything about v that an isomorphism must preserve, except the
        /// inexact phase value (compared with tolerance separately).
        struct Signature {
            std::pair<int, std::size_t>       role;
            bool                              exact;
            std::int64_t                      num;
            std::int64_t                      den;
            std::size_t                       degree;
            std::vector<std::pair<int, int>>  neighborhood; // sorted (neighbour kind, edge kind)

            auto operator<=>(const Signature&) const = default;
        };

        inline Signature signature(const Diagram& d, NodeId v) {
            Signature s;
            s.role   = role_of(d, v);
            const Phase p = d.phase(v);
            s.exact  = p.is_exact();
            s.num    = s.exact ? p.numerator() : 0;
            s.den    = s.exact ? p.denominator() : 0;
            s.degree = d.degree(v);
            for (const auto& inc: d.neighbors(v)) {
                s.neighborhood.emplace_back(static_cast<int>(d.kind(inc.node)), static_cast<int>(inc.kind));
            }
            std::sort(s.neighborhood.begin(), s.neighborhood.end());
            return s;
        }

    } // namespace detail

    /// Searches for a bijection g1 -> g2 preserving node kind, phase, edges with
    /// their kinds, and boundary roles and positions. Returns the mapping, or
    /// nothing if the diagrams are not isomorphic.
    inline std::optional<std::map<NodeId, NodeId>> labeled_isomorphic(const Diagram& g1, const Diagram& g2) {
        if (g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count() ||
            g1.inputs().size() != g2.inputs().size() || g1.outputs().size() != g2.outputs().size()) {
            return std::nullopt;
        }
        const auto n1 = g1.nodes();
        const auto n2 = g2.nodes();
        std::map<NodeId, detail::Signature> sig2;
        for (auto v: n2) sig2.emplace(v, detail::signature(g2, v));

        // candidates per g1 node
        std::vector<std::vector<NodeId>> cand(n1.size());
        for (std::size_t i = 0; i < n1.size(); ++i) {
            const auto s = detail::signature(g1, n1[i]);
            const Phase p = g1.phase(n1[i]);
            for (auto w: n2) {
                const auto& t = sig2.at(w);
                if (t.role != s.role || t.exact != s.exact || t.degree != s.degree || t.neighborhood != s.neighborhood) {
                    continue;
                }
                if (!phases_match(p, g2.phase(w))) continue;
                cand[i].push_back(w);
            }
            if (cand[i].empty()) return std::nullopt;
        }

        // order: fewest candidates first, then prefer nodes adjacent to already ordered ones
        std::vector<std::size_t> order;
        std::vector<char>        placed(n1.size(), 0);
        std::map<NodeId, std::size_t> index1;
        for (std::size_t i = 0; i < n1.size(); ++i) index1[n1[i]] = i;
        std::vector<std::size_t> adjacency_to_placed(n1.size(), 0);
        for (std::size_t step = 0; step < n1.size(); ++step) {
            std::size_t best = n1.size();
            for (std::size_t i = 0; i < n1.size(); ++i) {
                if (placed[i]) continue;
                if (best == n1.size()) {
                    best = i;
                    continue;
                }
                const bool more_adjacent = adjacency_to_placed[i] > adjacency_to_placed[best];
                const bool same_adjacent = adjacency_to_placed[i] == adjacency_to_placed[best];
                if (more_adjacent || (same_adjacent && cand[i].size() < cand[best].size())) best = i;
            }
            placed[best] = 1;
            order.push_back(best);
            for (const auto& inc: g1.neighbors(n1[best])) ++adjacency_to_placed[index1.at(inc.node)];
        }

        std::map<NodeId, NodeId> fwd;
        std::map<NodeId, NodeId> rev;
        auto consistent = [&](NodeId v, NodeId w) {
            if (rev.count(w)) return false;
            for (const auto& inc: g1.neighbors(v)) {
                auto it = fwd.find(inc.node);
                if (it == fwd.end()) continue;
                if (g2.edge(w, it->second) != inc.kind) return false;
            }
            return true;
        };
        // iterative backtracking
        std::vector<std::size_t> choice(order.size(), 0);
        std::size_t              depth = 0;
        while (true) {
            if (depth == order.size()) return fwd;
            const std::size_t i  = order[depth];
            const NodeId      v  = n1[i];
            bool              advanced = false;
            while (choice[depth] < cand[i].size()) {
                const NodeId w = cand[i][choice[depth]++];
                if (consistent(v, w)) {
                    fwd[v] = w;
                    rev[w] = v;
                    ++depth;
                    if (depth < order.size()) choice[depth] = 0;
                    advanced = true;
                    break;
                }
            }
            if (advanced) continue;
            if (depth == 0) return std::nullopt;
            --depth;
            const NodeId pv = n1[order[depth]];
            rev.erase(fwd.at(pv));
            fwd.erase(pv);
        }
    }

    /// Rebuilds g1 under a node mapping and checks it reproduces g2 exactly.
    inline bool mapping_reproduces(const Diagram& g1, const Diagram& g2, const std::map<NodeId, NodeId>& m) {
        if (m.size() != g1.node_count() || g1.node_count() != g2.node_count() || g1.edge_count() != g2.edge_count()) {
            return false;
        }
        for (const auto& [v, w]: m) {
            if (!g2.contains(w) || g1.kind(v) != g2.kind(w) || !phases_match(g1.phase(v), g2.phase(w))) return false;
        }
        for (const auto& [uv, k]: g1.edges()) {
            if (g2.edge(m.at(uv.first), m.at(uv.second)) != k) return false;
        }
        auto mapped = [&](const std::vector<NodeId>& xs) {
            std::vector<NodeId> out;
            for (auto x: xs) out.push_back(m.at(x));
            return out;
        };
        return mapped(g1.inputs()) == g2.inputs() && mapped(g1.outputs()) == g2.outputs();
    }

    struct VerifyBudget {
        TensorCaps     caps = TensorCaps::from_env();
        double         tol  = default_tolerance;
        const Diagram* reference = nullptr; // independently rewritten expected result, if any
    };

    /// Strongest affordable check that `after` implements the same map as
    /// `before`: dense tensors (with qubit-permutation fallback) within caps,
    /// else labeled isomorphism against a supplied reference, else degree
    /// sequences.
    inline EquivalenceVerdict verify(const Diagram& before, const Diagram& after, const VerifyBudget& budget = {}) {
        EquivalenceVerdict v;
        if (budget.caps.admits(before) && budget.caps.admits(after)) {
            try {
                const auto a = diagram_to_operator(before, budget.caps);
                const auto b = diagram_to_operator(after, budget.caps);
                if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols()) {
                    v.method   = VerifyMethod::Tensor;
                    v.equal    = false;
                    v.residual = std::numeric_limits<double>::infinity();
                    return v;
                }
                v = equal_up_to_scalar(a.matrix, b.matrix, budget.tol);
                v.permutation.resize(after.inputs().size());
                std::iota(v.permutation.begin(), v.permutation.end(), 0);
                const std::size_t n = before.inputs().size();
                if (!v.equal && n == before.outputs().size() && n <= 6 && n > 1) {
                    auto p = equal_up_to_qubit_permutation(a.matrix, b.matrix, n, budget.tol);
                    if (p.equal) v = p;
                }
                v.method = VerifyMethod::Tensor;
                return v;
            } catch (const CapExceeded&) {
                // fall through to cheaper methods
            }
        }
        if (budget.reference != nullptr) {
            v.method = VerifyMethod::Isomorphism;
            v.equal  = labeled_isomorphic(after, *budget.reference).has_value();
            v.scalar = v.equal ? cplx{1, 0} : cplx{0, 0};
            return v;
        }
        v.method = VerifyMethod::DegreeSequence;
        v.equal  = degree_sequence_equal(before, after);
        v.scalar = v.equal ? cplx{1, 0} : cplx{0, 0};
        return v;
    }

} // namespace zxdb
