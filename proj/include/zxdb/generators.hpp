#pragma once

#include "zxdb/diagram.hpp"
#include "zxdb/phase.hpp"
#include "zxdb/rules.hpp"

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace zxdb {

    namespace detail {

        using Rng = std::mt19937_64;

        inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
            return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
        }

        inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

        /// k·pi/4 for uniform k in [0, 8).
        inline Phase quarter_phase(Rng& rng) { return Phase::fraction(static_cast<std::int64_t>(uniform(rng, 0, 7)), 4); }

        inline Phase nonzero_quarter_phase(Rng& rng) {
            return Phase::fraction(static_cast<std::int64_t>(uniform(rng, 1, 7)), 4);
        }

        /// A phase that is not a multiple of pi; occasionally inexact.
        inline Phase non_pauli_phase(Rng& rng) {
            if (coin(rng, 1.0 / 7.0)) {
                double r = 0;
                do {
                    r = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
                } while (std::fabs(std::remainder(r, std::numbers::pi)) < 1e-3);
                return Phase::radians(r);
            }
            static constexpr std::int64_t odd[] = {1, 2, 3, 5, 6, 7};
            return Phase::fraction(odd[uniform(rng, 0, 5)], 4);
        }

        inline Phase pauli_phase(Rng& rng) { return coin(rng) ? Phase::pi() : Phase::zero(); }

        /// in –S– spider –S– out on a fresh qubit.
        inline NodeId wire_spider(Diagram& d, NodeKind kind, Phase phase) {
            const NodeId in  = d.add_boundary(BoundaryRole::Input);
            const NodeId s   = d.add_spider(kind, phase);
            const NodeId out = d.add_boundary(BoundaryRole::Output);
            d.connect(in, s, EdgeKind::Simple);
            d.connect(s, out, EdgeKind::Simple);
            return s;
        }

        inline std::vector<NodeId> wire_spiders(Diagram& d, std::size_t n, Rng& rng) {
            std::vector<NodeId> out;
            for (std::size_t i = 0; i < n; ++i) out.push_back(wire_spider(d, NodeKind::Z, quarter_phase(rng)));
            return out;
        }

        inline void sprinkle_h_edges(Diagram& d, const std::vector<NodeId>& ns, Rng& rng, double p) {
            for (std::size_t i = 0; i < ns.size(); ++i) {
                for (std::size_t j = i + 1; j < ns.size(); ++j) {
                    if (coin(rng, p)) d.toggle_h_edge(ns[i], ns[j]);
                }
            }
        }

        inline void h_connect_all(Diagram& d, NodeId u, const std::vector<NodeId>& ns) {
            for (auto w: ns) d.connect(u, w, EdgeKind::Hadamard);
        }

        /// Three disjoint groups with sizes in [0, cap_each] and total in [lo, hi].
        inline std::array<std::size_t, 3> group_sizes(Rng& rng, std::size_t lo, std::size_t hi) {
            while (true) {
                std::array<std::size_t, 3> s{uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0, 2)};
                const std::size_t          t = s[0] + s[1] + s[2];
                if (t >= lo && t <= hi) return s;
            }
        }

        inline void pivot_pair(Diagram& d, Rng& rng, NodeId u, NodeId v, std::size_t na, std::size_t nb,
                               std::size_t nc) {
            const auto a = wire_spiders(d, na, rng);
            const auto b = wire_spiders(d, nb, rng);
            const auto c = wire_spiders(d, nc, rng);
            d.connect(u, v, EdgeKind::Hadamard);
            h_connect_all(d, u, a);
            h_connect_all(d, u, b);
            h_connect_all(d, v, b);
            h_connect_all(d, v, c);
            std::vector<NodeId> all = a;
            all.insert(all.end(), b.begin(), b.end());
            all.insert(all.end(), c.begin(), c.end());
            sprinkle_h_edges(d, all, rng, 1.0 / 3.0);
        }

        inline void instance(Diagram& d, RuleId rule, Rng& rng) {
            switch (rule) {
                case RuleId::IdentityRemoval: {
                    // in – X(a) – Z(0) – Z(0) – X(b) – out, both inner spiders match
                    const NodeId in  = d.add_boundary(BoundaryRole::Input);
                    const NodeId x1  = d.add_spider(NodeKind::X, nonzero_quarter_phase(rng));
                    const NodeId z1  = d.add_spider(NodeKind::Z);
                    const NodeId z2  = d.add_spider(NodeKind::Z);
                    const NodeId x2  = d.add_spider(NodeKind::X, nonzero_quarter_phase(rng));
                    const NodeId out = d.add_boundary(BoundaryRole::Output);
                    d.connect(in, x1, EdgeKind::Simple);
                    d.connect(x1, z1, EdgeKind::Simple);
                    d.connect(z1, z2, EdgeKind::Simple);
                    d.connect(z2, x2, EdgeKind::Simple);
                    d.connect(x2, out, EdgeKind::Simple);
                    return;
                }
                case RuleId::SpiderFusion: {
                    const NodeKind colour = coin(rng) ? NodeKind::Z : NodeKind::X;
                    const std::size_t run = uniform(rng, 2, 4);
                    NodeId prev = d.add_boundary(BoundaryRole::Input);
                    std::vector<NodeId> chain;
                    for (std::size_t i = 0; i < run; ++i) {
                        const NodeId s = d.add_spider(colour, quarter_phase(rng));
                        d.connect(prev, s, EdgeKind::Simple);
                        chain.push_back(s);
                        prev = s;
                    }
                    d.connect(prev, d.add_boundary(BoundaryRole::Output), EdgeKind::Simple);
                    if (coin(rng)) {
                        const NodeKind other = colour == NodeKind::Z ? NodeKind::X : NodeKind::Z;
                        const NodeId   t     = wire_spider(d, other, quarter_phase(rng));
                        d.connect(t, chain[uniform(rng, 0, run - 1)], EdgeKind::Simple);
                    }
                    return;
                }
                case RuleId::Bialgebra: {
                    std::size_t m = 0, n = 0;
                    do {
                        m = uniform(rng, 1, 3);
                        n = uniform(rng, 1, 3);
                    } while (m + n < 3);
                    std::vector<NodeId> zs, xs;
                    for (std::size_t i = 0; i < m; ++i) zs.push_back(d.add_spider(NodeKind::Z));
                    for (std::size_t i = 0; i < n; ++i) xs.push_back(d.add_spider(NodeKind::X));
                    for (auto z: zs) {
                        for (auto x: xs) d.connect(z, x, EdgeKind::Simple);
                    }
                    for (auto x: xs) {
                        const NodeId in = d.add_boundary(BoundaryRole::Input);
                        if (coin(rng)) {
                            d.connect(in, x, EdgeKind::Simple);
                        } else {
                            const NodeId s = d.add_spider(NodeKind::Z, quarter_phase(rng));
                            d.connect(in, s, EdgeKind::Simple);
                            d.connect(s, x, EdgeKind::Simple);
                        }
                    }
                    for (auto z: zs) {
                        const NodeId out = d.add_boundary(BoundaryRole::Output);
                        if (coin(rng)) {
                            d.connect(z, out, EdgeKind::Simple);
                        } else {
                            const NodeId s = d.add_spider(NodeKind::X, quarter_phase(rng));
                            d.connect(z, s, EdgeKind::Simple);
                            d.connect(s, out, EdgeKind::Simple);
                        }
                    }
                    return;
                }
                case RuleId::GadgetFusion: {
                    const auto legs = wire_spiders(d, uniform(rng, 2, 3), rng);
                    for (int g = 0; g < 2; ++g) {
                        const NodeId hub  = d.add_spider(NodeKind::Z, quarter_phase(rng));
                        const NodeId axis = d.add_spider(NodeKind::X);
                        d.connect(hub, axis, EdgeKind::Simple);
                        for (auto l: legs) d.connect(axis, l, EdgeKind::Simple);
                    }
                    return;
                }
                case RuleId::LocalComplementation: {
                    const NodeId u  = d.add_spider(NodeKind::Z, Phase::fraction(coin(rng) ? 1 : 3, 2));
                    const auto   ns = wire_spiders(d, uniform(rng, 1, 5), rng);
                    h_connect_all(d, u, ns);
                    sprinkle_h_edges(d, ns, rng, 0.5);
                    return;
                }
                case RuleId::Pivot: {
                    const NodeId u = d.add_spider(NodeKind::Z, pauli_phase(rng));
                    const NodeId v = d.add_spider(NodeKind::Z, pauli_phase(rng));
                    const auto   s = group_sizes(rng, 1, 6);
                    pivot_pair(d, rng, u, v, s[0], s[1], s[2]);
                    return;
                }
                case RuleId::PivotGadget: {
                    const NodeId u = d.add_spider(NodeKind::Z, non_pauli_phase(rng));
                    const NodeId v = d.add_spider(NodeKind::Z, pauli_phase(rng));
                    std::array<std::size_t, 3> s{};
                    do {
                        s = group_sizes(rng, 2, 6);
                    } while (s[0] + s[1] == 0 || s[1] + s[2] == 0);
                    pivot_pair(d, rng, u, v, s[0], s[1], s[2]);
                    return;
                }
                case RuleId::PivotBoundary: {
                    // in –S– v –H– w –S– out, with u an interior Pauli spider next to v
                    const NodeId in  = d.add_boundary(BoundaryRole::Input);
                    const NodeId v   = d.add_spider(NodeKind::Z, coin(rng) ? pauli_phase(rng) : non_pauli_phase(rng));
                    const NodeId w   = d.add_spider(NodeKind::Z, nonzero_quarter_phase(rng));
                    const NodeId out = d.add_boundary(BoundaryRole::Output);
                    d.connect(in, v, EdgeKind::Simple);
                    d.connect(v, w, EdgeKind::Hadamard);
                    d.connect(w, out, EdgeKind::Simple);
                    const NodeId u = d.add_spider(NodeKind::Z, pauli_phase(rng));
                    const auto   s = group_sizes(rng, 0, 5);
                    pivot_pair(d, rng, u, v, s[0], s[1], s[2]);
                    return;
                }
            }
        }

    } // namespace detail

    /// A diagram with `size` disjoint copies of a random instance of the rule's
    /// left-hand side. Each copy carries at most six boundary pairs, so size-1
    /// instances stay within tensor verification caps.
    inline Diagram gen_rule_instance(RuleId rule, std::size_t size, std::uint64_t seed) {
        detail::Rng rng(seed);
        Diagram     d;
        for (std::size_t i = 0; i < size; ++i) {
            detail::instance(d, rule, rng);
        }
        return d;
    }

    /// in – X(a) – Z(0) – Z(0) – X(b) – out: both Z spiders are identity
    /// candidates whose footprints overlap.
    inline Diagram identity_conflict_chain(Phase a = Phase::fraction(1, 4), Phase b = Phase::fraction(1, 4)) {
        Diagram      d;
        const NodeId in  = d.add_boundary(BoundaryRole::Input);
        const NodeId x1  = d.add_spider(NodeKind::X, a);
        const NodeId z1  = d.add_spider(NodeKind::Z);
        const NodeId z2  = d.add_spider(NodeKind::Z);
        const NodeId x2  = d.add_spider(NodeKind::X, b);
        const NodeId out = d.add_boundary(BoundaryRole::Output);
        d.connect(in, x1, EdgeKind::Simple);
        d.connect(x1, z1, EdgeKind::Simple);
        d.connect(z1, z2, EdgeKind::Simple);
        d.connect(z2, x2, EdgeKind::Simple);
        d.connect(x2, out, EdgeKind::Simple);
        return d;
    }

} // namespace zxdb
