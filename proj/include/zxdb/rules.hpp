#pragma once

#include "zxdb/diagram.hpp"
#include "zxdb/errors.hpp"
#include "zxdb/phase.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zxdb {

    enum class RuleId : std::uint8_t {
        IdentityRemoval,
        SpiderFusion,
        Bialgebra,
        GadgetFusion,
        LocalComplementation,
        Pivot,
        PivotGadget,
        PivotBoundary,
    };

    inline constexpr std::array<RuleId, 8> all_rules = {
        RuleId::IdentityRemoval,      RuleId::SpiderFusion, RuleId::Bialgebra,   RuleId::GadgetFusion,
        RuleId::LocalComplementation, RuleId::Pivot,        RuleId::PivotGadget, RuleId::PivotBoundary};

    /// Short name used on the command line and in CSV output.
    inline const char* rule_name(RuleId r) {
        switch (r) {
            case RuleId::IdentityRemoval: return "identity";
            case RuleId::SpiderFusion: return "fusion";
            case RuleId::Bialgebra: return "bialgebra";
            case RuleId::GadgetFusion: return "gadget";
            case RuleId::LocalComplementation: return "lcomp";
            case RuleId::Pivot: return "pivot";
            case RuleId::PivotGadget: return "pivot_gadget";
            case RuleId::PivotBoundary: return "pivot_boundary";
        }
        return "?";
    }

    inline std::optional<RuleId> rule_from_name(std::string_view s) {
        for (auto r: all_rules) {
            if (s == rule_name(r)) {
                return r;
            }
        }
        if (s == "identity_removal") return RuleId::IdentityRemoval;
        if (s == "spider_fusion") return RuleId::SpiderFusion;
        if (s == "gadget_fusion") return RuleId::GadgetFusion;
        if (s == "local_complementation") return RuleId::LocalComplementation;
        return std::nullopt;
    }

    inline constexpr bool requires_graph_like(RuleId r) {
        return r == RuleId::LocalComplementation || r == RuleId::Pivot || r == RuleId::PivotGadget ||
               r == RuleId::PivotBoundary;
    }

    /// One occurrence of a rule's left-hand side.
    ///
    /// Layout of bound / groups per rule:
    ///   identity        bound {v}                      groups {{a, b}} (the two neighbours)
    ///   fusion          bound {keep, absorb}
    ///   bialgebra       bound sorted(Zs ∪ Xs)           groups {Zs, Xs, Z externals, X externals}
    ///   gadget          bound {hub1, axis1, hub2, axis2} groups {legs}
    ///   lcomp           bound {u}                      groups {neighbours}
    ///   pivot           bound {u, v}                   groups {A, B, C}
    ///   pivot_gadget    bound {u (non-Pauli), v}       groups {A, B, C}
    ///   pivot_boundary  bound {u (interior), v, b}     groups {A, B, C}
    ///
    /// The footprint is every node the rewrite deletes, mutates, or whose state
    /// the match predicate reads; two matches conflict iff their footprints meet.
    struct Match {
        RuleId                           rule{};
        std::vector<NodeId>              bound;
        std::vector<std::vector<NodeId>> groups;
        std::vector<NodeId>              footprint;

        [[nodiscard]] bool same_binding(const Match& o) const {
            return rule == o.rule && bound == o.bound && groups == o.groups;
        }
    };

    namespace detail {

        inline std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        }

        inline std::vector<NodeId> neighbor_ids(const Diagram& d, NodeId v) {
            std::vector<NodeId> out;
            out.reserve(d.degree(v));
            for (const auto& inc: d.neighbors(v)) {
                out.push_back(inc.node);
            }
            return out;
        }

        inline bool is_boundary(const Diagram& d, NodeId v) { return d.kind(v) == NodeKind::B; }

        /// Z(0) of degree two joining a boundary (simple edge) to a spider
        /// (Hadamard edge): the graph-like encoding of a Hadamard boundary wire.
        inline bool is_buffer(const Diagram& d, NodeId x) {
            if (d.kind(x) != NodeKind::Z || !d.phase(x).is_zero() || d.degree(x) != 2) {
                return false;
            }
            const auto n     = d.neighbors(x);
            const bool first = is_boundary(d, n[0].node);
            const auto& bnd  = first ? n[0] : n[1];
            const auto& spd  = first ? n[1] : n[0];
            return is_boundary(d, bnd.node) && bnd.kind == EdgeKind::Simple && !is_boundary(d, spd.node) &&
                   spd.kind == EdgeKind::Hadamard;
        }

        /// Z spider whose edges are all Hadamard, to Z spiders none of which is a buffer.
        inline bool is_interior(const Diagram& d, NodeId u) {
            if (d.kind(u) != NodeKind::Z) {
                return false;
            }
            for (const auto& inc: d.neighbors(u)) {
                if (inc.kind != EdgeKind::Hadamard || d.kind(inc.node) != NodeKind::Z || is_buffer(d, inc.node)) {
                    return false;
                }
            }
            return true;
        }

        inline bool has_leaf_neighbor(const Diagram& d, NodeId v, std::optional<NodeId> except = std::nullopt) {
            for (const auto& inc: d.neighbors(v)) {
                if (inc.node != except && d.degree(inc.node) == 1) {
                    return true;
                }
            }
            return false;
        }

        inline bool in_sorted(const std::vector<NodeId>& v, NodeId x) { return std::binary_search(v.begin(), v.end(), x); }

        /// A = N(u) \ (N(v) ∪ {v}), B = N(u) ∩ N(v), C = N(v) \ (N(u) ∪ {u}),
        /// all sorted, never containing `skip`.
        inline std::vector<std::vector<NodeId>> pivot_groups(const Diagram& d, NodeId u, NodeId v,
                                                             std::optional<NodeId> skip = std::nullopt) {
            std::vector<NodeId> a, b, c;
            const auto          nu = neighbor_ids(d, u);
            const auto          nv = neighbor_ids(d, v);
            for (auto w: nu) {
                if (w == v || w == skip) continue;
                (in_sorted(nv, w) ? b : a).push_back(w);
            }
            for (auto w: nv) {
                if (w == u || w == skip || in_sorted(nu, w)) continue;
                c.push_back(w);
            }
            return {a, b, c};
        }

        inline std::vector<NodeId> pivot_footprint(const Diagram& d, std::vector<NodeId> core, NodeId u, NodeId v) {
            for (auto w: neighbor_ids(d, u)) core.push_back(w);
            for (auto w: neighbor_ids(d, v)) core.push_back(w);
            return sorted_unique(std::move(core));
        }

        struct Gadget {
            NodeId              hub;
            NodeId              axis;
            std::vector<NodeId> legs;
        };

        /// Reads a phase gadget off its axis, in either the X-axis / simple-edge
        /// form or the colour-changed Z-axis / Hadamard-edge form. The hub is the
        /// smallest-id degree-one Z neighbour.
        inline std::optional<Gadget> gadget_at_axis(const Diagram& d, NodeId axis) {
            const NodeKind ak = d.kind(axis);
            if (!is_spider(ak) || !d.phase(axis).is_zero() || d.degree(axis) < 2) {
                return std::nullopt;
            }
            const EdgeKind      want = ak == NodeKind::X ? EdgeKind::Simple : EdgeKind::Hadamard;
            std::optional<NodeId> hub;
            std::vector<NodeId> legs;
            for (const auto& inc: d.neighbors(axis)) {
                if (inc.kind != want || d.kind(inc.node) != NodeKind::Z) {
                    return std::nullopt;
                }
                if (!hub && d.degree(inc.node) == 1) {
                    hub = inc.node;
                } else {
                    legs.push_back(inc.node);
                }
            }
            if (!hub || legs.empty()) {
                return std::nullopt;
            }
            return Gadget{*hub, axis, std::move(legs)};
        }

    } // namespace detail

    // ---- per-rule matchers ------------------------------------------------

    inline std::optional<Match> identity_match_at(const Diagram& d, NodeId v) {
        if (!d.contains(v) || !is_spider(d.kind(v)) || !d.phase(v).is_zero() || d.degree(v) != 2) {
            return std::nullopt;
        }
        const auto     n    = d.neighbors(v);
        const NodeId   a    = n[0].node;
        const NodeId   b    = n[1].node;
        const EdgeKind join = n[0].kind == n[1].kind ? EdgeKind::Simple : EdgeKind::Hadamard;
        const bool     a_b  = detail::is_boundary(d, a);
        const bool     b_b  = detail::is_boundary(d, b);
        if (join == EdgeKind::Hadamard && (a_b || b_b)) {
            return std::nullopt;
        }
        if (auto existing = d.edge(a, b)) {
            const auto res = resolve_duplicate(d.kind(a), d.kind(b), *existing, join);
            if (res != Resolution::KeepOne && res != Resolution::RemoveBoth) {
                return std::nullopt;
            }
        }
        return Match{RuleId::IdentityRemoval, {v}, {{a, b}}, detail::sorted_unique({v, a, b})};
    }

    inline std::optional<Match> fusion_match_at(const Diagram& d, NodeId u, NodeId v) {
        if (u > v) std::swap(u, v);
        if (u == v || !d.contains(u) || !d.contains(v)) return std::nullopt;
        const NodeKind k = d.kind(u);
        if (!is_spider(k) || d.kind(v) != k || d.edge(u, v) != EdgeKind::Simple) {
            return std::nullopt;
        }
        std::vector<NodeId> fp{u, v};
        for (const auto& inc: d.neighbors(v)) {
            if (inc.node == u) continue;
            fp.push_back(inc.node);
            if (auto existing = d.edge(u, inc.node)) {
                const auto res = resolve_duplicate(k, d.kind(inc.node), *existing, inc.kind);
                if (res != Resolution::KeepOne && res != Resolution::RemoveBoth) {
                    return std::nullopt;
                }
            }
        }
        return Match{RuleId::SpiderFusion, {u, v}, {}, detail::sorted_unique(std::move(fp))};
    }

    /// Validates a complete-bipartite Z(0)/X(0) block where every spider has
    /// exactly one simple edge leaving the block.
    inline std::optional<Match> bialgebra_check(const Diagram& d, std::vector<NodeId> zs, std::vector<NodeId> xs) {
        zs = detail::sorted_unique(std::move(zs));
        xs = detail::sorted_unique(std::move(xs));
        if (zs.empty() || xs.empty()) return std::nullopt;
        std::vector<NodeId> block = zs;
        block.insert(block.end(), xs.begin(), xs.end());
        block = detail::sorted_unique(std::move(block));
        if (block.size() != zs.size() + xs.size()) return std::nullopt;

        auto external_of = [&](NodeId s, NodeKind want, const std::vector<NodeId>& other) -> std::optional<NodeId> {
            if (!d.contains(s) || d.kind(s) != want || !d.phase(s).is_zero() || d.degree(s) != other.size() + 1) {
                return std::nullopt;
            }
            std::optional<NodeId> ext;
            for (const auto& inc: d.neighbors(s)) {
                if (inc.kind != EdgeKind::Simple) return std::nullopt;
                if (detail::in_sorted(other, inc.node)) continue;
                if (ext || detail::in_sorted(block, inc.node)) return std::nullopt;
                ext = inc.node;
            }
            return ext;
        };
        std::vector<NodeId> zext, xext, fp = block;
        for (auto z: zs) {
            auto e = external_of(z, NodeKind::Z, xs);
            if (!e) return std::nullopt;
            zext.push_back(*e);
            fp.push_back(*e);
        }
        for (auto x: xs) {
            auto e = external_of(x, NodeKind::X, zs);
            if (!e) return std::nullopt;
            xext.push_back(*e);
            fp.push_back(*e);
        }
        return Match{RuleId::Bialgebra, block, {zs, xs, zext, xext}, detail::sorted_unique(std::move(fp))};
    }

    /// Finds a bipartite block of at least three spiders containing seed z (a
    /// Z(0) spider), trying each neighbour in turn as z's external wire.
    inline std::optional<Match> bialgebra_block(const Diagram& d, NodeId z) {
        if (!d.contains(z) || d.kind(z) != NodeKind::Z || !d.phase(z).is_zero() || d.degree(z) < 2) {
            return std::nullopt;
        }
        const auto nz = d.neighbors(z);
        for (std::size_t e = 0; e < nz.size(); ++e) {
            std::vector<NodeId> xs;
            bool                ok = true;
            for (std::size_t i = 0; i < nz.size() && ok; ++i) {
                if (i == e) continue;
                const auto& inc = nz[i];
                ok = inc.kind == EdgeKind::Simple && d.kind(inc.node) == NodeKind::X && d.phase(inc.node).is_zero();
                xs.push_back(inc.node);
            }
            if (!ok) continue;
            // Zs: Z(0) spiders simply connected to every member of xs
            std::vector<NodeId> zs;
            for (const auto& inc: d.neighbors(xs.front())) {
                const NodeId w = inc.node;
                if (inc.kind != EdgeKind::Simple || d.kind(w) != NodeKind::Z || !d.phase(w).is_zero()) continue;
                bool all = true;
                for (std::size_t i = 1; i < xs.size() && all; ++i) {
                    all = d.edge(xs[i], w) == EdgeKind::Simple;
                }
                if (all) zs.push_back(w);
            }
            // the 1x1 block is its own rewrite, so keep looking for a larger one
            if (auto m = bialgebra_check(d, zs, xs); m && m->bound.size() >= 3) {
                return m;
            }
            // with a single X, one of those Z(0) spiders may be that X's own external wire
            if (xs.size() == 1 && zs.size() > 2) {
                for (std::size_t skip = 0; skip < zs.size(); ++skip) {
                    if (zs[skip] == z) continue;
                    auto fewer = zs;
                    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(skip));
                    if (auto m = bialgebra_check(d, fewer, xs)) return m;
                }
            }
        }
        return std::nullopt;
    }

    inline std::optional<Match> gadget_match_at(const Diagram& d, NodeId axis1, NodeId axis2) {
        if (axis1 == axis2 || !d.contains(axis1) || !d.contains(axis2)) return std::nullopt;
        auto g1 = detail::gadget_at_axis(d, axis1);
        auto g2 = detail::gadget_at_axis(d, axis2);
        if (!g1 || !g2 || g1->legs != g2->legs) return std::nullopt;
        std::vector<NodeId> fp{g1->hub, g1->axis, g2->hub, g2->axis};
        fp.insert(fp.end(), g1->legs.begin(), g1->legs.end());
        return Match{RuleId::GadgetFusion,
                     {g1->hub, g1->axis, g2->hub, g2->axis},
                     {g1->legs},
                     detail::sorted_unique(std::move(fp))};
    }

    inline std::optional<Match> lcomp_match_at(const Diagram& d, NodeId u) {
        if (!d.contains(u) || !d.phase(u).is_half_pi() || !detail::is_interior(d, u)) {
            return std::nullopt;
        }
        auto ns = detail::neighbor_ids(d, u);
        auto fp = ns;
        fp.push_back(u);
        return Match{RuleId::LocalComplementation, {u}, {ns}, detail::sorted_unique(std::move(fp))};
    }

    inline std::optional<Match> pivot_match_at(const Diagram& d, NodeId u, NodeId v) {
        if (u > v) std::swap(u, v);
        if (u == v || !d.contains(u) || !d.contains(v) || d.edge(u, v) != EdgeKind::Hadamard) return std::nullopt;
        if (!d.phase(u).is_pi_multiple() || !d.phase(v).is_pi_multiple()) return std::nullopt;
        if (!detail::is_interior(d, u) || !detail::is_interior(d, v)) return std::nullopt;
        if (detail::has_leaf_neighbor(d, u, v) || detail::has_leaf_neighbor(d, v, u)) return std::nullopt;
        return Match{RuleId::Pivot, {u, v}, detail::pivot_groups(d, u, v), detail::pivot_footprint(d, {u, v}, u, v)};
    }

    /// u carries the non-Pauli phase that is moved out into a fresh gadget.
    inline std::optional<Match> pivot_gadget_match_at(const Diagram& d, NodeId u, NodeId v) {
        if (u == v || !d.contains(u) || !d.contains(v) || d.edge(u, v) != EdgeKind::Hadamard) return std::nullopt;
        if (d.phase(u).is_pi_multiple() || !d.phase(v).is_pi_multiple()) return std::nullopt;
        if (!detail::is_interior(d, u) || !detail::is_interior(d, v)) return std::nullopt;
        if (d.degree(u) < 2 || detail::has_leaf_neighbor(d, u) || detail::has_leaf_neighbor(d, v, u)) {
            return std::nullopt;
        }
        return Match{RuleId::PivotGadget, {u, v}, detail::pivot_groups(d, u, v),
                     detail::pivot_footprint(d, {u, v}, u, v)};
    }

    /// u is the interior Pauli spider, v the spider wired to boundary b.
    inline std::optional<Match> pivot_boundary_match_at(const Diagram& d, NodeId u, NodeId v) {
        if (u == v || !d.contains(u) || !d.contains(v) || d.edge(u, v) != EdgeKind::Hadamard) return std::nullopt;
        if (!d.phase(u).is_pi_multiple() || !detail::is_interior(d, u) || detail::has_leaf_neighbor(d, u)) {
            return std::nullopt;
        }
        if (d.kind(v) != NodeKind::Z || detail::is_buffer(d, v)) return std::nullopt;
        std::optional<NodeId> boundary;
        for (const auto& inc: d.neighbors(v)) {
            if (detail::is_boundary(d, inc.node)) {
                if (boundary || inc.kind != EdgeKind::Simple) return std::nullopt;
                boundary = inc.node;
            } else if (inc.kind != EdgeKind::Hadamard || d.kind(inc.node) != NodeKind::Z) {
                return std::nullopt;
            }
        }
        if (!boundary) return std::nullopt;
        return Match{RuleId::PivotBoundary, {u, v, *boundary}, detail::pivot_groups(d, u, v, *boundary),
                     detail::pivot_footprint(d, {u, v, *boundary}, u, v)};
    }

    /// Recomputes the match from its bound nodes; empty if it no longer holds.
    inline std::optional<Match> rematch(const Diagram& d, const Match& m) {
        for (auto id: m.bound) {
            if (!d.contains(id)) return std::nullopt;
        }
        switch (m.rule) {
            case RuleId::IdentityRemoval: return identity_match_at(d, m.bound.at(0));
            case RuleId::SpiderFusion: return fusion_match_at(d, m.bound.at(0), m.bound.at(1));
            case RuleId::Bialgebra:
                if (m.groups.size() != 4) return std::nullopt;
                return bialgebra_check(d, m.groups[0], m.groups[1]);
            case RuleId::GadgetFusion: return gadget_match_at(d, m.bound.at(1), m.bound.at(3));
            case RuleId::LocalComplementation: return lcomp_match_at(d, m.bound.at(0));
            case RuleId::Pivot: return pivot_match_at(d, m.bound.at(0), m.bound.at(1));
            case RuleId::PivotGadget: return pivot_gadget_match_at(d, m.bound.at(0), m.bound.at(1));
            case RuleId::PivotBoundary: return pivot_boundary_match_at(d, m.bound.at(0), m.bound.at(1));
        }
        return std::nullopt;
    }

    inline bool is_current(const Diagram& d, const Match& m) {
        auto now = rematch(d, m);
        return now && now->same_binding(m);
    }

    // ---- matching ---------------------------------------------------------

    /// Every occurrence of the rule's pattern, ordered by smallest bound id and
    /// then lexicographically on the bound ids.
    inline std::vector<Match> find_matches(RuleId rule, const Diagram& d) {
        if (requires_graph_like(rule) && !is_graph_like(d)) {
            throw GraphLikeRequired(std::string(rule_name(rule)) + " needs a graph-like diagram");
        }
        std::vector<Match> out;
        auto               push = [&](std::optional<Match> m) {
            if (m) out.push_back(std::move(*m));
        };
        switch (rule) {
            case RuleId::IdentityRemoval: d.for_each_node([&](NodeId v) { push(identity_match_at(d, v)); }); break;
            case RuleId::SpiderFusion:
                d.for_each_node([&](NodeId u) {
                    if (!is_spider(d.kind(u))) return;
                    for (const auto& inc: d.neighbors(u)) {
                        if (u < inc.node && inc.kind == EdgeKind::Simple) push(fusion_match_at(d, u, inc.node));
                    }
                });
                break;
            case RuleId::Bialgebra:
                d.for_each_node([&](NodeId z) {
                    auto m = bialgebra_block(d, z);
                    // each block once, from its smallest Z
                    if (m && m->groups[0].front() == z) push(std::move(m));
                });
                break;
            case RuleId::GadgetFusion: {
                std::map<std::vector<NodeId>, std::vector<detail::Gadget>> by_legs;
                d.for_each_node([&](NodeId a) {
                    if (auto g = detail::gadget_at_axis(d, a)) by_legs[g->legs].push_back(std::move(*g));
                });
                for (const auto& [legs, group]: by_legs) {
                    for (std::size_t i = 1; i < group.size(); ++i) {
                        push(gadget_match_at(d, group.front().axis, group[i].axis));
                    }
                }
                break;
            }
            case RuleId::LocalComplementation: d.for_each_node([&](NodeId u) { push(lcomp_match_at(d, u)); }); break;
            case RuleId::Pivot:
                d.for_each_node([&](NodeId u) {
                    if (!d.phase(u).is_pi_multiple() || d.kind(u) != NodeKind::Z) return;
                    for (const auto& inc: d.neighbors(u)) {
                        if (u < inc.node) push(pivot_match_at(d, u, inc.node));
                    }
                });
                break;
            case RuleId::PivotGadget:
                d.for_each_node([&](NodeId u) {
                    if (d.kind(u) != NodeKind::Z || d.phase(u).is_pi_multiple()) return;
                    for (const auto& inc: d.neighbors(u)) push(pivot_gadget_match_at(d, u, inc.node));
                });
                break;
            case RuleId::PivotBoundary:
                d.for_each_node([&](NodeId u) {
                    if (d.kind(u) != NodeKind::Z || !d.phase(u).is_pi_multiple()) return;
                    for (const auto& inc: d.neighbors(u)) push(pivot_boundary_match_at(d, u, inc.node));
                });
                break;
        }
        std::stable_sort(out.begin(), out.end(), [](const Match& a, const Match& b) {
            const NodeId ma = *std::min_element(a.bound.begin(), a.bound.end());
            const NodeId mb = *std::min_element(b.bound.begin(), b.bound.end());
            if (ma != mb) return ma < mb;
            return a.bound < b.bound;
        });
        return out;
    }

    // ---- rewriters --------------------------------------------------------

    namespace detail {

        inline void require_current(const Diagram& d, const Match& m, RuleId expected) {
            if (m.rule != expected) {
                throw std::invalid_argument(std::string("match for rule ") + rule_name(m.rule) + " passed to " +
                                            rule_name(expected) + " rewriter");
            }
            if (!is_current(d, m)) {
                throw StaleMatch(std::string(rule_name(m.rule)) + " match no longer holds");
            }
        }

        inline void toggle_all(Diagram& d, const std::vector<NodeId>& xs, const std::vector<NodeId>& ys) {
            for (auto x: xs) {
                for (auto y: ys) d.toggle_h_edge(x, y);
            }
        }

        /// Removes the Hadamard-connected Pauli pair (u, v), complementing the
        /// edges between the three neighbour groups and shifting their phases.
        inline void pivot_core(Diagram& d, NodeId u, NodeId v) {
            const auto  groups = pivot_groups(d, u, v);
            const auto& a      = groups[0];
            const auto& b      = groups[1];
            const auto& c      = groups[2];
            const Phase j      = d.phase(u);
            const Phase k      = d.phase(v);
            toggle_all(d, a, c);
            toggle_all(d, a, b);
            toggle_all(d, b, c);
            for (auto w: a) d.add_to_phase(w, k);
            for (auto w: c) d.add_to_phase(w, j);
            const Phase shared = j + k + Phase::pi();
            for (auto w: b) d.add_to_phase(w, shared);
            d.remove_spider(u);
            d.remove_spider(v);
        }

        /// Moves v's phase onto a fresh gadget hanging off v; v ends at phase 0.
        inline void unfuse_phase(Diagram& d, NodeId v) {
            const NodeId hub  = d.add_spider(NodeKind::Z, d.phase(v));
            const NodeId axis = d.add_spider(NodeKind::Z);
            d.connect(hub, axis, EdgeKind::Hadamard);
            d.connect(axis, v, EdgeKind::Hadamard);
            d.set_phase(v, Phase::zero());
        }

    } // namespace detail

    inline void apply_identity_removal(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::IdentityRemoval);
        const NodeId   v    = m.bound[0];
        const auto     n    = d.neighbors(v);
        const EdgeKind join = n[0].kind == n[1].kind ? EdgeKind::Simple : EdgeKind::Hadamard;
        const NodeId   a    = n[0].node;
        const NodeId   b    = n[1].node;
        d.remove_spider(v);
        d.connect(a, b, join);
    }

    inline void apply_spider_fusion(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::SpiderFusion);
        d.merge_spiders(m.bound[0], m.bound[1]);
    }

    inline void apply_bialgebra(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::Bialgebra);
        const auto& zext = m.groups[2];
        const auto& xext = m.groups[3];
        for (auto s: m.bound) d.remove_spider(s);
        const NodeId z = d.add_spider(NodeKind::Z);
        const NodeId x = d.add_spider(NodeKind::X);
        d.connect(z, x, EdgeKind::Simple);
        for (auto w: xext) d.connect(z, w, EdgeKind::Simple);
        for (auto w: zext) d.connect(x, w, EdgeKind::Simple);
    }

    inline void apply_gadget_fusion(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::GadgetFusion);
        const NodeId hub1 = m.bound[0];
        const NodeId hub2 = m.bound[2];
        d.add_to_phase(hub1, d.phase(hub2));
        d.remove_spider(hub2);
        d.remove_spider(m.bound[3]);
    }

    inline void apply_local_complementation(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::LocalComplementation);
        const NodeId u     = m.bound[0];
        const auto&  ns    = m.groups[0];
        const Phase  shift = -d.phase(u);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            for (std::size_t j = i + 1; j < ns.size(); ++j) d.toggle_h_edge(ns[i], ns[j]);
        }
        for (auto w: ns) d.add_to_phase(w, shift);
        d.remove_spider(u);
    }

    inline void apply_pivot(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::Pivot);
        detail::pivot_core(d, m.bound[0], m.bound[1]);
    }

    inline void apply_pivot_gadget(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::PivotGadget);
        const NodeId u = m.bound[0];
        detail::unfuse_phase(d, u);
        detail::pivot_core(d, u, m.bound[1]);
    }

    inline void apply_pivot_boundary(Diagram& d, const Match& m) {
        detail::require_current(d, m, RuleId::PivotBoundary);
        const NodeId u = m.bound[0];
        const NodeId v = m.bound[1];
        const NodeId b = m.bound[2];
        // v–S–b  ==  v–H–Z(0)–H–Z(0)–S–b, which leaves v with Hadamard edges only
        d.remove_edge(v, b);
        const NodeId near = d.add_spider(NodeKind::Z);
        const NodeId far  = d.add_spider(NodeKind::Z);
        d.connect(v, near, EdgeKind::Hadamard);
        d.connect(near, far, EdgeKind::Hadamard);
        d.connect(far, b, EdgeKind::Simple);
        if (!d.phase(v).is_pi_multiple()) {
            detail::unfuse_phase(d, v);
        }
        detail::pivot_core(d, u, v);
    }

    inline void apply_match(Diagram& d, const Match& m) {
        switch (m.rule) {
            case RuleId::IdentityRemoval: apply_identity_removal(d, m); return;
            case RuleId::SpiderFusion: apply_spider_fusion(d, m); return;
            case RuleId::Bialgebra: apply_bialgebra(d, m); return;
            case RuleId::GadgetFusion: apply_gadget_fusion(d, m); return;
            case RuleId::LocalComplementation: apply_local_complementation(d, m); return;
            case RuleId::Pivot: apply_pivot(d, m); return;
            case RuleId::PivotGadget: apply_pivot_gadget(d, m); return;
            case RuleId::PivotBoundary: apply_pivot_boundary(d, m); return;
        }
    }

    /// Applies m if it still holds; returns false (diagram untouched) otherwise.
    inline bool try_apply(Diagram& d, const Match& m) {
        if (!is_current(d, m)) {
            return false;
        }
        apply_match(d, m);
        return true;
    }

} // namespace zxdb
