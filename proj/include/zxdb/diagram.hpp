#pragma once

#include "zxdb/errors.hpp"
#include "zxdb/phase.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace zxdb {

    using NodeId = std::size_t;

    enum class NodeKind : std::uint8_t { Z, X, B };
    enum class EdgeKind : std::uint8_t { Simple, Hadamard };
    enum class BoundaryRole : std::uint8_t { Input, Output };

    inline constexpr EdgeKind toggled(EdgeKind k) {
        return k == EdgeKind::Simple ? EdgeKind::Hadamard : EdgeKind::Simple;
    }

    inline constexpr bool is_spider(NodeKind k) { return k != NodeKind::B; }

    inline const char* to_string(NodeKind k) {
        switch (k) {
            case NodeKind::Z: return "Z";
            case NodeKind::X: return "X";
            case NodeKind::B: return "B";
        }
        return "?";
    }

    inline const char* to_string(EdgeKind k) { return k == EdgeKind::Simple ? "S" : "H"; }

    struct Incidence {
        NodeId   node;
        EdgeKind kind;

        friend bool operator==(const Incidence&, const Incidence&) = default;
    };

    /// Outcome of adding an edge between two nodes that are already connected.
    enum class Resolution : std::uint8_t {
        KeepOne,     // parallel simple wires between same-coloured spiders
        RemoveBoth,  // Hopf: H+H between same colours, S+S between different colours
        MergeWithPi, // S+H between same colours: fuse, Hadamard self-loop adds pi
        Unsupported, // anything else, including boundary nodes
    };

    inline constexpr Resolution resolve_duplicate(NodeKind a, NodeKind b, EdgeKind existing, EdgeKind added) {
        if (!is_spider(a) || !is_spider(b)) {
            return Resolution::Unsupported;
        }
        const bool same_colour = a == b;
        if (same_colour) {
            if (existing != added) {
                return Resolution::MergeWithPi;
            }
            return existing == EdgeKind::Hadamard ? Resolution::RemoveBoth : Resolution::KeepOne;
        }
        if (existing == EdgeKind::Simple && added == EdgeKind::Simple) {
            return Resolution::RemoveBoth;
        }
        return Resolution::Unsupported;
    }

    /// A ZX-diagram stored as a simple undirected graph.
    ///
    /// Nodes are spiders (Z, X) carrying a phase, or boundary nodes (B) that
    /// terminate a dangling wire. Ids come from a monotone counter and are never
    /// reused. Parallel edges and self-loops are never stored: connect() resolves
    /// them on insertion with the standard ZX identities (see resolve_duplicate).
    /// Adjacency lists are kept sorted by neighbour id, so every traversal is
    /// deterministic.
    class Diagram {
    public:
        NodeId add_spider(NodeKind kind, Phase phase = {}) {
            if (!is_spider(kind)) {
                throw KindMismatch("add_spider: boundary nodes must be created with add_boundary");
            }
            return push_node(kind, phase);
        }

        NodeId add_boundary(BoundaryRole role, std::size_t position) {
            auto& list = role == BoundaryRole::Input ? inputs_ : outputs_;
            if (position > list.size()) {
                throw std::out_of_range("add_boundary: position " + std::to_string(position) +
                                        " past end of list of length " + std::to_string(list.size()));
            }
            const NodeId id = push_node(NodeKind::B, {});
            list.insert(list.begin() + static_cast<std::ptrdiff_t>(position), id);
            return id;
        }

        NodeId add_boundary(BoundaryRole role) {
            return add_boundary(role, role == BoundaryRole::Input ? inputs_.size() : outputs_.size());
        }

        /// Adds an edge, resolving duplicates and self-loops.
        ///
        /// Note that the S+H same-colour case fuses v into u, so v may no longer
        /// exist afterwards.
        void connect(NodeId u, NodeId v, EdgeKind kind) {
            require(u);
            require(v);
            if (u == v) {
                if (!is_spider(slots_[u].kind)) {
                    throw BoundaryDegreeViolation("self-loop on boundary node " + std::to_string(u));
                }
                if (kind == EdgeKind::Hadamard) {
                    slots_[u].phase += Phase::pi();
                }
                return;
            }
            const auto existing = edge(u, v);
            if (!existing) {
                if (slots_[u].kind == NodeKind::B && !slots_[u].adj.empty()) {
                    throw BoundaryDegreeViolation("boundary node " + std::to_string(u) + " already wired");
                }
                if (slots_[v].kind == NodeKind::B && !slots_[v].adj.empty()) {
                    throw BoundaryDegreeViolation("boundary node " + std::to_string(v) + " already wired");
                }
                insert_half(u, v, kind);
                insert_half(v, u, kind);
                ++edge_count_;
                return;
            }
            if (!is_spider(slots_[u].kind) || !is_spider(slots_[v].kind)) {
                throw BoundaryDegreeViolation("duplicate edge on boundary between " + std::to_string(u) + " and " +
                                              std::to_string(v));
            }
            switch (resolve_duplicate(slots_[u].kind, slots_[v].kind, *existing, kind)) {
                case Resolution::KeepOne: return;
                case Resolution::RemoveBoth: remove_edge(u, v); return;
                case Resolution::MergeWithPi:
                    // the existing edge becomes a self-loop inside merge_spiders;
                    // the new one is accounted for here
                    merge_spiders(u, v);
                    if (kind == EdgeKind::Hadamard) {
                        slots_[u].phase += Phase::pi();
                    }
                    return;
                case Resolution::Unsupported: break;
            }
            throw UnsupportedEdgeResolution("cannot resolve duplicate " + std::string(to_string(kind)) + " edge between " +
                                            to_string(slots_[u].kind) + std::to_string(u) + " and " +
                                            to_string(slots_[v].kind) + std::to_string(v));
        }

        void remove_edge(NodeId u, NodeId v) {
            require(u);
            require(v);
            if (!erase_half(u, v) || !erase_half(v, u)) {
                throw ZxError("remove_edge: no edge between " + std::to_string(u) + " and " + std::to_string(v));
            }
            --edge_count_;
        }

        void set_edge_kind(NodeId u, NodeId v, EdgeKind kind) {
            find_half(u, v).kind = kind;
            find_half(v, u).kind = kind;
        }

        /// Toggles a Hadamard edge between two Z spiders.
        void toggle_h_edge(NodeId u, NodeId v) {
            require(u);
            require(v);
            if (u == v || slots_[u].kind != NodeKind::Z || slots_[v].kind != NodeKind::Z) {
                throw KindMismatch("toggle_h_edge expects two distinct Z spiders");
            }
            const auto existing = edge(u, v);
            if (!existing) {
                insert_half(u, v, EdgeKind::Hadamard);
                insert_half(v, u, EdgeKind::Hadamard);
                ++edge_count_;
            } else if (*existing == EdgeKind::Hadamard) {
                remove_edge(u, v);
            } else {
                throw UnsupportedEdgeResolution("toggle_h_edge over a simple edge between " + std::to_string(u) +
                                                " and " + std::to_string(v));
            }
        }

        /// Fuses absorb into keep: phases add, absorb's edges are re-attached to
        /// keep through connect(), and edges between the two become self-loops.
        void merge_spiders(NodeId keep, NodeId absorb) {
            require(keep);
            require(absorb);
            if (keep == absorb) {
                throw std::invalid_argument("merge_spiders: keep and absorb are the same node");
            }
            if (slots_[keep].kind != slots_[absorb].kind || !is_spider(slots_[keep].kind)) {
                throw KindMismatch("merge_spiders: spiders " + std::to_string(keep) + " and " +
                                   std::to_string(absorb) + " have different kinds");
            }
            slots_[keep].phase += slots_[absorb].phase;
            const std::vector<Incidence> moved = slots_[absorb].adj;
            for (const auto& inc: moved) {
                erase_half(inc.node, absorb);
            }
            edge_count_ -= moved.size();
            kill(absorb);
            for (const auto& inc: moved) {
                // a neighbour that is gone was fused into keep by a cascading
                // merge, so this edge is a self-loop on keep now
                if (inc.node == keep || !contains(inc.node)) {
                    if (inc.kind == EdgeKind::Hadamard) {
                        slots_[keep].phase += Phase::pi();
                    }
                    continue;
                }
                connect(keep, inc.node, inc.kind);
            }
        }

        /// Deletes a spider and all its incident edges.
        void remove_spider(NodeId v) {
            require(v);
            if (!is_spider(slots_[v].kind)) {
                throw KindMismatch("remove_spider: node " + std::to_string(v) + " is a boundary");
            }
            for (const auto& inc: slots_[v].adj) {
                erase_half(inc.node, v);
            }
            edge_count_ -= slots_[v].adj.size();
            kill(v);
        }

        /// Colour change: Z <-> X with every incident edge kind toggled.
        void change_color(NodeId v) {
            require(v);
            auto& n = slots_[v];
            if (!is_spider(n.kind)) {
                throw KindMismatch("change_color on boundary node " + std::to_string(v));
            }
            n.kind = n.kind == NodeKind::Z ? NodeKind::X : NodeKind::Z;
            for (auto& inc: n.adj) {
                inc.kind = toggled(inc.kind);
                find_half(inc.node, v).kind = inc.kind;
            }
        }

        void set_phase(NodeId v, Phase p) {
            require(v);
            if (!is_spider(slots_[v].kind)) {
                throw KindMismatch("boundary nodes carry no phase");
            }
            slots_[v].phase = p;
        }

        void add_to_phase(NodeId v, const Phase& p) {
            require(v);
            if (!is_spider(slots_[v].kind)) {
                throw KindMismatch("boundary nodes carry no phase");
            }
            slots_[v].phase += p;
        }

        [[nodiscard]] bool contains(NodeId v) const { return v < slots_.size() && slots_[v].alive; }

        [[nodiscard]] NodeKind kind(NodeId v) const {
            require(v);
            return slots_[v].kind;
        }

        [[nodiscard]] const Phase& phase(NodeId v) const {
            require(v);
            return slots_[v].phase;
        }

        /// Neighbours sorted by id.
        [[nodiscard]] std::span<const Incidence> neighbors(NodeId v) const {
            require(v);
            return slots_[v].adj;
        }

        [[nodiscard]] std::size_t degree(NodeId v) const {
            require(v);
            return slots_[v].adj.size();
        }

        [[nodiscard]] std::optional<EdgeKind> edge(NodeId u, NodeId v) const {
            require(u);
            require(v);
            const auto& adj = slots_[u].adj;
            auto        it  = lower(adj, v);
            if (it != adj.end() && it->node == v) {
                return it->kind;
            }
            return std::nullopt;
        }

        [[nodiscard]] bool has_edge(NodeId u, NodeId v) const { return edge(u, v).has_value(); }

        [[nodiscard]] std::size_t node_count() const { return live_; }
        [[nodiscard]] std::size_t edge_count() const { return edge_count_; }
        [[nodiscard]] std::size_t spider_count() const { return live_ - inputs_.size() - outputs_.size(); }

        /// One past the largest id ever handed out.
        [[nodiscard]] NodeId id_bound() const { return slots_.size(); }

        [[nodiscard]] const std::vector<NodeId>& inputs() const { return inputs_; }
        [[nodiscard]] const std::vector<NodeId>& outputs() const { return outputs_; }

        /// Live node ids in ascending order.
        [[nodiscard]] std::vector<NodeId> nodes() const {
            std::vector<NodeId> out;
            out.reserve(live_);
            for (NodeId v = 0; v < slots_.size(); ++v) {
                if (slots_[v].alive) {
                    out.push_back(v);
                }
            }
            return out;
        }

        template<class F>
        void for_each_node(F&& f) const {
            for (NodeId v = 0; v < slots_.size(); ++v) {
                if (slots_[v].alive) {
                    f(v);
                }
            }
        }

        /// Edges as (s, t, kind) with s < t, sorted.
        [[nodiscard]] std::vector<std::pair<std::pair<NodeId, NodeId>, EdgeKind>> edges() const {
            std::vector<std::pair<std::pair<NodeId, NodeId>, EdgeKind>> out;
            out.reserve(edge_count_);
            for_each_node([&](NodeId u) {
                for (const auto& inc: slots_[u].adj) {
                    if (u < inc.node) {
                        out.push_back({{u, inc.node}, inc.kind});
                    }
                }
            });
            return out;
        }

        /// Non-increasing list of degrees of all non-boundary nodes.
        [[nodiscard]] std::vector<std::size_t> degree_sequence() const {
            std::vector<std::size_t> seq;
            for_each_node([&](NodeId v) {
                if (is_spider(slots_[v].kind)) {
                    seq.push_back(slots_[v].adj.size());
                }
            });
            std::sort(seq.begin(), seq.end(), std::greater<>());
            return seq;
        }

        /// Inserts a node under a caller-chosen unused id (deserialisation).
        /// Boundary nodes created this way must be registered with assign_boundaries.
        void emplace_node(NodeId id, NodeKind kind, Phase phase) {
            if (id < slots_.size() && (slots_[id].alive || slots_[id].retired)) {
                throw ZxError("emplace_node: id " + std::to_string(id) + " already used");
            }
            if (id >= max_emplace_id) {
                throw ZxError("emplace_node: id " + std::to_string(id) + " out of supported range");
            }
            if (id >= slots_.size()) {
                slots_.resize(id + 1);
            }
            slots_[id] = Slot{kind, true, false, is_spider(kind) ? phase : Phase{}, {}};
            ++live_;
        }

        void assign_boundaries(std::vector<NodeId> inputs, std::vector<NodeId> outputs) {
            std::vector<NodeId> listed = inputs;
            listed.insert(listed.end(), outputs.begin(), outputs.end());
            std::sort(listed.begin(), listed.end());
            if (std::adjacent_find(listed.begin(), listed.end()) != listed.end()) {
                throw ZxError("assign_boundaries: a boundary is listed twice");
            }
            std::vector<NodeId> actual;
            for_each_node([&](NodeId v) {
                if (slots_[v].kind == NodeKind::B) {
                    actual.push_back(v);
                }
            });
            if (listed != actual) {
                throw ZxError("assign_boundaries: inputs and outputs must list exactly the boundary nodes");
            }
            inputs_  = std::move(inputs);
            outputs_ = std::move(outputs);
        }

        /// Checks the structural invariants; returns a description of the first
        /// violation, or nothing. With wired_boundaries, every B node must have
        /// degree exactly one.
        [[nodiscard]] std::optional<std::string> check_invariants(bool wired_boundaries = true) const {
            std::size_t half_edges = 0;
            std::size_t live       = 0;
            for (NodeId v = 0; v < slots_.size(); ++v) {
                const auto& n = slots_[v];
                if (!n.alive) {
                    if (!n.adj.empty()) {
                        return "dead node " + std::to_string(v) + " still has edges";
                    }
                    continue;
                }
                ++live;
                half_edges += n.adj.size();
                for (std::size_t i = 0; i < n.adj.size(); ++i) {
                    const auto& inc = n.adj[i];
                    if (i > 0 && n.adj[i - 1].node >= inc.node) {
                        return "adjacency of " + std::to_string(v) + " not strictly sorted";
                    }
                    if (inc.node == v) {
                        return "self-loop on " + std::to_string(v);
                    }
                    if (!contains(inc.node)) {
                        return "edge to missing node " + std::to_string(inc.node);
                    }
                    auto back = edge(inc.node, v);
                    if (!back || *back != inc.kind) {
                        return "asymmetric edge " + std::to_string(v) + "-" + std::to_string(inc.node);
                    }
                }
                if (n.kind == NodeKind::B) {
                    if (n.adj.size() > 1 || (wired_boundaries && n.adj.size() != 1)) {
                        return "boundary " + std::to_string(v) + " has degree " + std::to_string(n.adj.size());
                    }
                    const bool in_in  = std::find(inputs_.begin(), inputs_.end(), v) != inputs_.end();
                    const bool in_out = std::find(outputs_.begin(), outputs_.end(), v) != outputs_.end();
                    if (in_in == in_out) {
                        return "boundary " + std::to_string(v) + " must be in exactly one of inputs/outputs";
                    }
                }
            }
            if (live != live_ || half_edges != 2 * edge_count_) {
                return std::string("node or edge counters out of sync");
            }
            for (auto b: inputs_) {
                if (!contains(b) || slots_[b].kind != NodeKind::B) {
                    return "input " + std::to_string(b) + " is not a boundary node";
                }
            }
            for (auto b: outputs_) {
                if (!contains(b) || slots_[b].kind != NodeKind::B) {
                    return "output " + std::to_string(b) + " is not a boundary node";
                }
            }
            return std::nullopt;
        }

        static constexpr NodeId max_emplace_id = NodeId{1} << 31;

    private:
        struct Slot {
            NodeKind               kind    = NodeKind::Z;
            bool                   alive   = false;
            bool                   retired = false;
            Phase                  phase   = {};
            std::vector<Incidence> adj     = {};
        };

        NodeId push_node(NodeKind kind, Phase phase) {
            const NodeId id = slots_.size();
            slots_.push_back(Slot{kind, true, false, phase, {}});
            ++live_;
            return id;
        }

        void require(NodeId v) const {
            if (!contains(v)) {
                throw UnknownNode(v);
            }
        }

        void kill(NodeId v) {
            auto& n   = slots_[v];
            n.alive   = false;
            n.retired = true;
            n.adj.clear();
            n.adj.shrink_to_fit();
            --live_;
        }

        static std::vector<Incidence>::const_iterator lower(const std::vector<Incidence>& adj, NodeId v) {
            return std::lower_bound(adj.begin(), adj.end(), v,
                                    [](const Incidence& inc, NodeId id) { return inc.node < id; });
        }

        static std::vector<Incidence>::iterator lower(std::vector<Incidence>& adj, NodeId v) {
            return std::lower_bound(adj.begin(), adj.end(), v,
                                    [](const Incidence& inc, NodeId id) { return inc.node < id; });
        }

        void insert_half(NodeId u, NodeId v, EdgeKind kind) {
            auto& adj = slots_[u].adj;
            adj.insert(lower(adj, v), Incidence{v, kind});
        }

        bool erase_half(NodeId u, NodeId v) {
            auto& adj = slots_[u].adj;
            auto  it  = lower(adj, v);
            if (it == adj.end() || it->node != v) {
                return false;
            }
            adj.erase(it);
            return true;
        }

        Incidence& find_half(NodeId u, NodeId v) {
            require(u);
            auto& adj = slots_[u].adj;
            auto  it  = lower(adj, v);
            if (it == adj.end() || it->node != v) {
                throw ZxError("no edge between " + std::to_string(u) + " and " + std::to_string(v));
            }
            return *it;
        }

        std::vector<Slot>   slots_;
        std::vector<NodeId> inputs_;
        std::vector<NodeId> outputs_;
        std::size_t         live_       = 0;
        std::size_t         edge_count_ = 0;
    };

    /// Hadamard-edge normal form: every spider is Z, every spider-spider edge
    /// is Hadamard, every boundary edge is simple.
    inline bool is_graph_like(const Diagram& d) {
        bool ok = true;
        d.for_each_node([&](NodeId v) {
            if (!ok) {
                return;
            }
            const NodeKind k = d.kind(v);
            if (k == NodeKind::X) {
                ok = false;
                return;
            }
            for (const auto& inc: d.neighbors(v)) {
                const bool boundary_edge = k == NodeKind::B || d.kind(inc.node) == NodeKind::B;
                if (boundary_edge ? inc.kind != EdgeKind::Simple : inc.kind != EdgeKind::Hadamard) {
                    ok = false;
                    return;
                }
            }
        });
        return ok;
    }

    /// Rewrites d in place into graph-like form; the linear map is preserved up
    /// to a global scalar.
    inline void make_graph_like(Diagram& d) {
        for (NodeId v: d.nodes()) {
            if (d.kind(v) == NodeKind::X) {
                d.change_color(v);
            }
        }
        for (NodeId v: d.nodes()) {
            while (d.contains(v) && d.kind(v) == NodeKind::Z) {
                std::optional<NodeId> partner;
                for (const auto& inc: d.neighbors(v)) {
                    if (inc.kind == EdgeKind::Simple && d.kind(inc.node) == NodeKind::Z) {
                        partner = inc.node;
                        break;
                    }
                }
                if (!partner) {
                    break;
                }
                d.merge_spiders(v, *partner);
            }
        }
        // Hadamard wires ending on a boundary get a Z(0) buffer, since H·H = I
        for (NodeId b: d.nodes()) {
            if (d.kind(b) != NodeKind::B || d.degree(b) != 1) {
                continue;
            }
            const Incidence inc = d.neighbors(b).front();
            if (inc.kind != EdgeKind::Hadamard) {
                continue;
            }
            const NodeId buffer = d.add_spider(NodeKind::Z);
            d.remove_edge(b, inc.node);
            d.connect(b, buffer, EdgeKind::Simple);
            if (d.kind(inc.node) == NodeKind::B) {
                // bare Hadamard wire between two boundaries needs a buffer on each end
                const NodeId other = d.add_spider(NodeKind::Z);
                d.connect(buffer, other, EdgeKind::Hadamard);
                d.connect(other, inc.node, EdgeKind::Simple);
            } else {
                d.connect(buffer, inc.node, EdgeKind::Hadamard);
            }
        }
    }

    inline Diagram to_graph_like(Diagram d) {
        make_graph_like(d);
        return d;
    }

} // namespace zxdb
