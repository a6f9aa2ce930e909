#include "oracle.hpp"

#include "zxdb/diagram.hpp"
#include "zxdb/generators.hpp"
#include "zxdb/tensor.hpp"

#include <gtest/gtest.h>
#include <random>
#include <set>

namespace zxdb {

    namespace {

        /// b_in –S– u ... v –S– b_out, so the pair can be compared as an operator.
        struct Embedded {
            Diagram d;
            NodeId  u, v;
        };

        Embedded two_spiders(NodeKind ku, Phase pu, NodeKind kv, Phase pv) {
            Embedded e;
            const NodeId in  = e.d.add_boundary(BoundaryRole::Input);
            e.u              = e.d.add_spider(ku, pu);
            e.v              = e.d.add_spider(kv, pv);
            const NodeId out = e.d.add_boundary(BoundaryRole::Output);
            e.d.connect(in, e.u, EdgeKind::Simple);
            e.d.connect(e.v, out, EdgeKind::Simple);
            return e;
        }

        Eigen::MatrixXcd op(const Diagram& d) { return diagram_to_operator(d).matrix; }

    } // namespace

    TEST(Diagram, AddSpider) {
        Diagram      d;
        const NodeId a = d.add_spider(NodeKind::Z);
        EXPECT_EQ(d.node_count(), 1U);
        EXPECT_EQ(d.edge_count(), 0U);
        const NodeId b = d.add_spider(NodeKind::X, Phase::pi());
        EXPECT_NE(a, b);
        EXPECT_EQ(d.kind(b), NodeKind::X);
        EXPECT_EQ(d.phase(b), Phase::pi());
        EXPECT_EQ(d.degree(a), 0U);
        EXPECT_THROW(d.add_spider(NodeKind::B), KindMismatch);
    }

    TEST(Diagram, IdsStrictlyIncreaseAndAreNeverReused) {
        Diagram          d;
        std::set<NodeId> seen;
        NodeId           last = 0;
        for (int i = 0; i < 1000000; ++i) {
            const NodeId v = d.add_spider(NodeKind::Z);
            if (i > 0) {
                ASSERT_GT(v, last);
            }
            last = v;
            if (i % 3 == 0) d.remove_spider(v);
        }
        for (int i = 0; i < 1000; ++i) seen.insert(d.add_spider(NodeKind::X));
        EXPECT_EQ(seen.size(), 1000U);
        EXPECT_GT(*seen.begin(), last);
    }

    TEST(Diagram, AddBoundaryPositions) {
        Diagram      d;
        const NodeId b0 = d.add_boundary(BoundaryRole::Input, 0);
        EXPECT_EQ(d.inputs(), std::vector<NodeId>{b0});
        const NodeId b1 = d.add_boundary(BoundaryRole::Input, 0);
        EXPECT_EQ(d.inputs(), (std::vector<NodeId>{b1, b0}));
        EXPECT_THROW(d.add_boundary(BoundaryRole::Output, 1), std::out_of_range);
    }

    TEST(Diagram, DoubleHadamardBetweenZSpidersCancels) {
        auto e = two_spiders(NodeKind::Z, Phase::fraction(1, 4), NodeKind::Z, Phase::fraction(1, 2));
        e.d.connect(e.u, e.v, EdgeKind::Hadamard);
        e.d.connect(e.u, e.v, EdgeKind::Hadamard);
        EXPECT_FALSE(e.d.has_edge(e.u, e.v));
        // reference: Hopf law says two H wires between Z spiders disconnect them
        auto ref = two_spiders(NodeKind::Z, Phase::fraction(1, 4), NodeKind::Z, Phase::fraction(1, 2));
        EXPECT_TRUE(oracle::proportional(op(e.d), op(ref.d)));
    }

    TEST(Diagram, DoubleSimpleBetweenSameColourKeepsOne) {
        auto e = two_spiders(NodeKind::X, Phase::fraction(1, 4), NodeKind::X, Phase::zero());
        e.d.connect(e.u, e.v, EdgeKind::Simple);
        e.d.connect(e.u, e.v, EdgeKind::Simple);
        EXPECT_EQ(e.d.edge(e.u, e.v), EdgeKind::Simple);
        EXPECT_EQ(e.d.edge_count(), 3U);
    }

    TEST(Diagram, DoubleSimpleBetweenColoursCancels) {
        auto e = two_spiders(NodeKind::Z, Phase::zero(), NodeKind::X, Phase::fraction(3, 4));
        e.d.connect(e.u, e.v, EdgeKind::Simple);
        e.d.connect(e.u, e.v, EdgeKind::Simple);
        EXPECT_FALSE(e.d.has_edge(e.u, e.v));
        auto ref = two_spiders(NodeKind::Z, Phase::zero(), NodeKind::X, Phase::fraction(3, 4));
        EXPECT_TRUE(oracle::proportional(op(e.d), op(ref.d)));
    }

    TEST(Diagram, SimplePlusHadamardMergesWithPi) {
        auto e = two_spiders(NodeKind::Z, Phase::fraction(1, 4), NodeKind::Z, Phase::fraction(1, 2));
        e.d.connect(e.u, e.v, EdgeKind::Simple);
        const auto before = op(e.d);
        e.d.connect(e.u, e.v, EdgeKind::Hadamard);
        EXPECT_FALSE(e.d.contains(e.v));
        EXPECT_EQ(e.d.phase(e.u), Phase::fraction(7, 4));
        // independent check: a Z(α) wire with an H self-loop is Z(α+π), i.e. diag(1, -e^{iα})
        const auto after = op(e.d);
        Eigen::MatrixXcd expect = oracle::phase_gate(std::numbers::pi * 7 / 4);
        EXPECT_TRUE(oracle::proportional(after, expect));
        EXPECT_FALSE(oracle::proportional(after, before));
    }

    TEST(Diagram, UnsupportedDuplicates) {
        auto e = two_spiders(NodeKind::Z, Phase::zero(), NodeKind::X, Phase::zero());
        e.d.connect(e.u, e.v, EdgeKind::Hadamard);
        EXPECT_THROW(e.d.connect(e.u, e.v, EdgeKind::Hadamard), UnsupportedEdgeResolution);
        EXPECT_THROW(e.d.connect(e.u, e.v, EdgeKind::Simple), UnsupportedEdgeResolution);
    }

    TEST(Diagram, BoundaryDegreeIsOne) {
        Diagram      d;
        const NodeId b = d.add_boundary(BoundaryRole::Input);
        const NodeId z = d.add_spider(NodeKind::Z);
        const NodeId x = d.add_spider(NodeKind::X);
        d.connect(b, z, EdgeKind::Simple);
        EXPECT_THROW(d.connect(b, x, EdgeKind::Simple), BoundaryDegreeViolation);
        EXPECT_THROW(d.connect(b, b, EdgeKind::Simple), BoundaryDegreeViolation);
    }

    TEST(Diagram, SelfLoops) {
        Diagram      d;
        const NodeId z = d.add_spider(NodeKind::Z, Phase::fraction(1, 4));
        d.connect(z, z, EdgeKind::Simple);
        EXPECT_EQ(d.phase(z), Phase::fraction(1, 4));
        d.connect(z, z, EdgeKind::Hadamard);
        EXPECT_EQ(d.phase(z), Phase::fraction(5, 4));
        EXPECT_EQ(d.edge_count(), 0U);
    }

    TEST(Diagram, ToggleHEdge) {
        Diagram      d;
        const NodeId a = d.add_spider(NodeKind::Z);
        const NodeId b = d.add_spider(NodeKind::Z);
        d.toggle_h_edge(a, b);
        EXPECT_EQ(d.edge(a, b), EdgeKind::Hadamard);
        d.toggle_h_edge(a, b);
        EXPECT_FALSE(d.has_edge(a, b));
        d.connect(a, b, EdgeKind::Simple);
        EXPECT_THROW(d.toggle_h_edge(a, b), UnsupportedEdgeResolution);
    }

    TEST(Diagram, MergeSpiders) {
        Diagram      d;
        const NodeId a = d.add_spider(NodeKind::Z, Phase::fraction(1, 4));
        const NodeId b = d.add_spider(NodeKind::Z, Phase::fraction(1, 2));
        d.connect(a, b, EdgeKind::Simple);
        d.merge_spiders(a, b);
        EXPECT_EQ(d.node_count(), 1U);
        EXPECT_EQ(d.phase(a), Phase::fraction(3, 4));
        EXPECT_EQ(d.edge_count(), 0U);

        const NodeId c = d.add_spider(NodeKind::Z);
        const NodeId e = d.add_spider(NodeKind::Z);
        d.connect(c, e, EdgeKind::Hadamard);
        d.merge_spiders(c, e);
        EXPECT_EQ(d.phase(c), Phase::pi());
        EXPECT_EQ(d.degree(c), 0U);

        const NodeId x = d.add_spider(NodeKind::X);
        EXPECT_THROW(d.merge_spiders(c, x), KindMismatch);
    }

    TEST(Diagram, MergeHadamardPairIsZPi) {
        // Z(0)–H–Z(0) between two boundaries, fused, against diag(1, -1)
        Diagram      d;
        const NodeId in  = d.add_boundary(BoundaryRole::Input);
        const NodeId a   = d.add_spider(NodeKind::Z);
        const NodeId b   = d.add_spider(NodeKind::Z);
        const NodeId out = d.add_boundary(BoundaryRole::Output);
        d.connect(in, a, EdgeKind::Simple);
        d.connect(a, b, EdgeKind::Hadamard);
        d.connect(a, out, EdgeKind::Simple);
        d.merge_spiders(a, b);
        EXPECT_TRUE(oracle::proportional(op(d), oracle::pauli_z()));
    }

    TEST(Diagram, NeighborsAndDegree) {
        Diagram      d      = identity_conflict_chain();
        const NodeId left_z = 2;
        ASSERT_EQ(d.kind(left_z), NodeKind::Z);
        const auto n = d.neighbors(left_z);
        ASSERT_EQ(n.size(), 2U);
        EXPECT_EQ(d.kind(n[0].node), NodeKind::X);
        EXPECT_EQ(n[0].kind, EdgeKind::Simple);
        EXPECT_EQ(d.kind(n[1].node), NodeKind::Z);
        EXPECT_EQ(d.degree(left_z), 2U);
        EXPECT_THROW((void)d.degree(999), UnknownNode);

        Diagram      star;
        const NodeId c = star.add_spider(NodeKind::Z);
        for (int i = 0; i < 6; ++i) star.connect(c, star.add_spider(NodeKind::Z), EdgeKind::Hadamard);
        EXPECT_EQ(star.degree(c), 6U);
        EXPECT_EQ(star.degree(star.add_spider(NodeKind::X)), 0U);
    }

    TEST(Diagram, DegreeSequence) {
        EXPECT_TRUE(Diagram{}.degree_sequence().empty());
        EXPECT_EQ(identity_conflict_chain().degree_sequence(), (std::vector<std::size_t>{2, 2, 2, 2}));
        std::mt19937_64 rng(3);
        const auto      g = gen_rule_instance(RuleId::Pivot, 3, 5);
        EXPECT_EQ(oracle::relabel(g, rng).first.degree_sequence(), g.degree_sequence());
    }

    TEST(Diagram, ChangeColorTogglesEdges) {
        auto         e = two_spiders(NodeKind::X, Phase::fraction(1, 4), NodeKind::Z, Phase::zero());
        const NodeId u = e.u;
        e.d.connect(e.u, e.v, EdgeKind::Simple);
        const auto before = op(e.d);
        e.d.change_color(u);
        EXPECT_EQ(e.d.kind(u), NodeKind::Z);
        EXPECT_EQ(e.d.edge(u, e.v), EdgeKind::Hadamard);
        EXPECT_TRUE(oracle::proportional(op(e.d), before));
    }

    TEST(GraphLike, SingleXSpiderGetsBuffers) {
        Diagram      d;
        const NodeId in  = d.add_boundary(BoundaryRole::Input);
        const NodeId x   = d.add_spider(NodeKind::X, Phase::fraction(1, 4));
        const NodeId out = d.add_boundary(BoundaryRole::Output);
        d.connect(in, x, EdgeKind::Simple);
        d.connect(x, out, EdgeKind::Simple);
        const Diagram g = to_graph_like(d);
        EXPECT_TRUE(is_graph_like(g));
        EXPECT_EQ(g.kind(x), NodeKind::Z);
        EXPECT_EQ(g.phase(x), Phase::fraction(1, 4));
        EXPECT_EQ(g.spider_count(), 3U);
        EXPECT_TRUE(oracle::proportional(op(g), oracle::rx(std::numbers::pi / 4)));
    }

    TEST(GraphLike, CnotEncoding) {
        Diagram      d;
        const NodeId i0 = d.add_boundary(BoundaryRole::Input);
        const NodeId i1 = d.add_boundary(BoundaryRole::Input);
        const NodeId z  = d.add_spider(NodeKind::Z);
        const NodeId x  = d.add_spider(NodeKind::X);
        const NodeId o0 = d.add_boundary(BoundaryRole::Output);
        const NodeId o1 = d.add_boundary(BoundaryRole::Output);
        d.connect(i0, z, EdgeKind::Simple);
        d.connect(z, o0, EdgeKind::Simple);
        d.connect(i1, x, EdgeKind::Simple);
        d.connect(x, o1, EdgeKind::Simple);
        d.connect(z, x, EdgeKind::Simple);
        EXPECT_TRUE(oracle::proportional(op(d), oracle::cnot(true)));
        const Diagram g = to_graph_like(d);
        EXPECT_TRUE(is_graph_like(g));
        EXPECT_TRUE(oracle::proportional(op(g), oracle::cnot(true)));
    }

    TEST(GraphLike, IdempotentOnGraphLikeInput) {
        const Diagram g  = gen_rule_instance(RuleId::LocalComplementation, 2, 9);
        ASSERT_TRUE(is_graph_like(g));
        const Diagram g2 = to_graph_like(g);
        EXPECT_EQ(g2.edges(), g.edges());
        EXPECT_EQ(g2.nodes(), g.nodes());
    }

    TEST(GraphLike, BareHadamardWireBetweenBoundaries) {
        Diagram      d;
        const NodeId in  = d.add_boundary(BoundaryRole::Input);
        const NodeId out = d.add_boundary(BoundaryRole::Output);
        d.connect(in, out, EdgeKind::Hadamard);
        const Diagram g = to_graph_like(d);
        EXPECT_TRUE(is_graph_like(g));
        EXPECT_TRUE(oracle::proportional(op(g), oracle::hadamard()));
    }

    TEST(GraphLikeProperty, PreservesOperatorOnRandomCircuits) {
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            const auto c = gen_random_circuit(1 + seed % 6, 4 + seed % 25, seed);
            const auto d = circuit_to_diagram(c);
            const auto g = to_graph_like(d);
            ASSERT_TRUE(is_graph_like(g)) << "seed " << seed;
            ASSERT_TRUE(oracle::proportional(op(g), oracle::circuit_unitary(c))) << "seed " << seed;
        }
    }

    TEST(DiagramProperty, InvariantsSurviveRandomMutationScripts) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            std::mt19937_64 rng(seed);
            Diagram         d;
            auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
            for (int step = 0; step < 200; ++step) {
                const auto ids = d.nodes();
                try {
                    switch (pick(8)) {
                        case 0: d.add_spider(pick(2) ? NodeKind::Z : NodeKind::X, Phase::fraction(pick(8), 4)); break;
                        case 1: d.add_boundary(pick(2) ? BoundaryRole::Input : BoundaryRole::Output); break;
                        case 2:
                        case 3:
                            if (!ids.empty()) {
                                d.connect(ids[pick(ids.size())], ids[pick(ids.size())],
                                          pick(2) ? EdgeKind::Simple : EdgeKind::Hadamard);
                            }
                            break;
                        case 4:
                            if (!ids.empty()) {
                                const NodeId v = ids[pick(ids.size())];
                                if (is_spider(d.kind(v))) d.remove_spider(v);
                            }
                            break;
                        case 5:
                            if (ids.size() > 1) {
                                const std::size_t before = d.node_count();
                                d.merge_spiders(ids[pick(ids.size())], ids[pick(ids.size())]);
                                ASSERT_LT(d.node_count(), before);
                            }
                            break;
                        case 6:
                            if (ids.size() > 1) d.toggle_h_edge(ids[pick(ids.size())], ids[pick(ids.size())]);
                            break;
                        case 7:
                            if (!ids.empty()) {
                                const NodeId v = ids[pick(ids.size())];
                                if (is_spider(d.kind(v))) d.change_color(v);
                            }
                            break;
                    }
                } catch (const ZxError&) {
                    // rejected operations must leave the diagram consistent too
                } catch (const std::invalid_argument&) {
                }
                const auto problem = d.check_invariants(false);
                ASSERT_FALSE(problem.has_value()) << "seed " << seed << " step " << step << ": " << *problem;
            }
        }
    }

} // namespace zxdb
