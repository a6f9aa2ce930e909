#pragma once

#include "zxdb/diagram.hpp"
#include "zxdb/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace zxdb {

    using cplx = std::complex<double>;

    /// Dense linear map of a diagram: rows indexed by output bits, columns by
    /// input bits, the first listed boundary being the most significant bit.
    struct DenseOperator {
        Eigen::MatrixXcd    matrix;
        std::vector<NodeId> inputs;
        std::vector<NodeId> outputs;
    };

    /// Limits for dense extraction. max_rank bounds every intermediate tensor
    /// (2^max_rank complex entries).
    struct TensorCaps {
        std::size_t max_boundaries = 12;
        std::size_t max_nodes      = 200;
        std::size_t max_rank       = 26;

        /// Defaults, overridden by ZXDB_TENSOR_CAP as "BOUNDARIES:NODES" or a
        /// single node count.
        static TensorCaps from_env() {
            TensorCaps  caps;
            const char* env = std::getenv("ZXDB_TENSOR_CAP");
            if (env == nullptr || *env == '\0') return caps;
            const std::string s(env);
            try {
                const auto colon = s.find(':');
                if (colon == std::string::npos) {
                    caps.max_nodes = std::stoul(s);
                } else {
                    caps.max_boundaries = std::stoul(s.substr(0, colon));
                    caps.max_nodes      = std::stoul(s.substr(colon + 1));
                }
            } catch (const std::exception&) {
                throw std::invalid_argument("ZXDB_TENSOR_CAP must be N or B:N, got '" + s + "'");
            }
            return caps;
        }

        [[nodiscard]] bool admits(const Diagram& d) const {
            return d.inputs().size() + d.outputs().size() <= max_boundaries && d.node_count() <= max_nodes;
        }
    };

    namespace detail {

        /// Tensor over binary indices; labels[0] is the most significant index.
        struct Tensor {
            std::vector<int>  labels;
            std::vector<cplx> data;
        };

        /// offs[i] = flat offset contributed by assigning bits of i (MSB first)
        /// to the given index positions of a rank-`rank` tensor.
        inline std::vector<std::size_t> offsets(std::size_t rank, const std::vector<std::size_t>& positions) {
            const std::size_t        n = positions.size();
            std::vector<std::size_t> offs(std::size_t{1} << n, 0);
            for (std::size_t i = 0; i < offs.size(); ++i) {
                std::size_t o = 0;
                for (std::size_t t = 0; t < n; ++t) {
                    if ((i >> (n - 1 - t)) & 1U) o |= std::size_t{1} << (rank - 1 - positions[t]);
                }
                offs[i] = o;
            }
            return offs;
        }

        /// Sums over every label the two tensors share; the result's labels are
        /// a's free labels followed by b's.
        inline Tensor contract(const Tensor& a, const Tensor& b) {
            std::vector<std::size_t> a_free, a_shared, b_free, b_shared;
            for (std::size_t i = 0; i < a.labels.size(); ++i) {
                bool shared = false;
                for (std::size_t j = 0; j < b.labels.size(); ++j) {
                    if (a.labels[i] == b.labels[j]) {
                        a_shared.push_back(i);
                        b_shared.push_back(j);
                        shared = true;
                        break;
                    }
                }
                if (!shared) a_free.push_back(i);
            }
            for (std::size_t j = 0; j < b.labels.size(); ++j) {
                bool shared = false;
                for (auto s: b_shared) shared = shared || s == j;
                if (!shared) b_free.push_back(j);
            }
            const auto af = offsets(a.labels.size(), a_free);
            const auto as = offsets(a.labels.size(), a_shared);
            const auto bs = offsets(b.labels.size(), b_shared);
            const auto bf = offsets(b.labels.size(), b_free);

            Tensor out;
            for (auto i: a_free) out.labels.push_back(a.labels[i]);
            for (auto j: b_free) out.labels.push_back(b.labels[j]);
            out.data.assign(af.size() * bf.size(), cplx{0, 0});
            for (std::size_t i = 0; i < af.size(); ++i) {
                for (std::size_t s = 0; s < as.size(); ++s) {
                    const cplx x = a.data[af[i] + as[s]];
                    if (x == cplx{0, 0}) continue;
                    const std::size_t base = bs[s];
                    cplx*             row  = &out.data[i * bf.size()];
                    for (std::size_t j = 0; j < bf.size(); ++j) row[j] += x * b.data[base + bf[j]];
                }
            }
            return out;
        }

        inline Tensor z_tensor(std::vector<int> labels, double alpha) {
            Tensor t;
            t.labels = std::move(labels);
            t.data.assign(std::size_t{1} << t.labels.size(), cplx{0, 0});
            const cplx phase = std::polar(1.0, alpha);
            if (t.labels.empty()) {
                t.data[0] = 1.0 + phase;
            } else {
                t.data.front() = 1.0;
                t.data.back() += phase;
            }
            return t;
        }

        inline Tensor hadamard_tensor(int a, int b) {
            const double h = 1.0 / std::numbers::sqrt2;
            return Tensor{{a, b}, {h, h, h, -h}};
        }

        inline Tensor delta_tensor(int a, int b) { return Tensor{{a, b}, {1.0, 0.0, 0.0, 1.0}}; }

    } // namespace detail

    /// Contracts the diagram's tensor network into a dense operator.
    ///
    /// Z spiders are copy tensors with e^{iα} on the all-ones entry; X spiders
    /// are Z tensors with a Hadamard on every leg, and Hadamard edges add one
    /// more, so each edge carries a Hadamard iff it has an odd count of them.
    /// Contraction is greedy: always the connected pair whose result has the
    /// smallest rank.
    inline DenseOperator diagram_to_operator(const Diagram& d, const TensorCaps& caps = TensorCaps::from_env()) {
        using detail::Tensor;
        const std::size_t nb = d.inputs().size() + d.outputs().size();
        if (nb > caps.max_boundaries || d.node_count() > caps.max_nodes) {
            throw CapExceeded("diagram has " + std::to_string(nb) + " boundaries and " +
                              std::to_string(d.node_count()) + " nodes; caps are " +
                              std::to_string(caps.max_boundaries) + " and " + std::to_string(caps.max_nodes));
        }

        int                                  next_label = 0;
        std::unordered_map<NodeId, std::vector<int>> legs; // node -> its leg labels, in neighbour order
        std::unordered_map<NodeId, int>      open;          // boundary node -> open label
        std::vector<Tensor>                  tensors;

        d.for_each_node([&](NodeId v) { legs[v]; });
        for (const auto& [uv, kind]: d.edges()) {
            const auto [u, v] = uv;
            int hadamards     = kind == EdgeKind::Hadamard ? 1 : 0;
            hadamards += d.kind(u) == NodeKind::X ? 1 : 0;
            hadamards += d.kind(v) == NodeKind::X ? 1 : 0;
            const int lu = next_label++;
            int       lv = lu;
            if (hadamards % 2 == 1) {
                lv = next_label++;
                tensors.push_back(detail::hadamard_tensor(lu, lv));
            }
            legs[u].push_back(lu);
            legs[v].push_back(lv);
        }
        std::string cap_error;
        d.for_each_node([&](NodeId v) {
            auto& l = legs[v];
            if (d.kind(v) == NodeKind::B) {
                if (l.size() != 1) {
                    cap_error = "boundary node " + std::to_string(v) + " is not wired";
                    return;
                }
                const int o = next_label++;
                open[v]     = o;
                tensors.push_back(detail::delta_tensor(o, l.front()));
                return;
            }
            if (l.size() > caps.max_rank) {
                cap_error = "spider " + std::to_string(v) + " has degree " + std::to_string(l.size());
                return;
            }
            tensors.push_back(detail::z_tensor(l, d.phase(v).to_radians()));
        });
        if (!cap_error.empty()) {
            throw CapExceeded(cap_error);
        }

        // greedy contraction
        std::vector<std::optional<Tensor>>     live(tensors.begin(), tensors.end());
        std::unordered_map<int, std::vector<std::size_t>> holders;
        for (std::size_t i = 0; i < live.size(); ++i) {
            for (int l: live[i]->labels) holders[l].push_back(i);
        }
        auto shared_count = [&](std::size_t i, std::size_t j) {
            std::size_t n = 0;
            for (int a: live[i]->labels) {
                for (int b: live[j]->labels) n += a == b ? 1 : 0;
            }
            return n;
        };
        auto merge_into = [&](std::size_t i, std::size_t j) {
            Tensor t = detail::contract(*live[i], *live[j]);
            if (t.labels.size() > caps.max_rank) {
                throw CapExceeded("intermediate tensor of rank " + std::to_string(t.labels.size()));
            }
            for (int l: live[j]->labels) {
                auto& h = holders[l];
                for (auto& x: h) {
                    if (x == j) x = i;
                }
            }
            for (int l: live[i]->labels) {
                auto& h = holders[l];
                if (h.size() == 2 && h[0] == i && h[1] == i) holders.erase(l);
            }
            live[i] = std::move(t);
            live[j].reset();
        };
        std::size_t remaining = live.size();
        while (remaining > 1) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            std::size_t                                        best_rank = 0;
            for (const auto& [label, h]: holders) {
                if (h.size() != 2 || h[0] == h[1]) continue;
                const std::size_t i    = std::min(h[0], h[1]);
                const std::size_t j    = std::max(h[0], h[1]);
                const std::size_t rank = live[i]->labels.size() + live[j]->labels.size() - 2 * shared_count(i, j);
                if (!best || rank < best_rank || (rank == best_rank && std::make_pair(i, j) < *best)) {
                    best      = std::make_pair(i, j);
                    best_rank = rank;
                }
            }
            if (!best) {
                // disconnected pieces: outer product of the two smallest
                std::vector<std::size_t> idx;
                for (std::size_t i = 0; i < live.size(); ++i) {
                    if (live[i]) idx.push_back(i);
                }
                std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                    return live[a]->labels.size() < live[b]->labels.size();
                });
                best = std::make_pair(std::min(idx[0], idx[1]), std::max(idx[0], idx[1]));
            }
            merge_into(best->first, best->second);
            --remaining;
        }

        Tensor result = Tensor{{}, {1.0}};
        for (auto& t: live) {
            if (t) result = std::move(*t);
        }

        DenseOperator op;
        op.inputs  = d.inputs();
        op.outputs = d.outputs();
        const std::size_t no = op.outputs.size();
        const std::size_t ni = op.inputs.size();
        std::vector<std::size_t> out_pos, in_pos;
        auto position_of = [&](NodeId b) {
            const int l = open.at(b);
            for (std::size_t p = 0; p < result.labels.size(); ++p) {
                if (result.labels[p] == l) return p;
            }
            throw ZxError("open index of boundary " + std::to_string(b) + " lost during contraction");
        };
        for (auto b: op.outputs) out_pos.push_back(position_of(b));
        for (auto b: op.inputs) in_pos.push_back(position_of(b));
        const auto rows = detail::offsets(result.labels.size(), out_pos);
        const auto cols = detail::offsets(result.labels.size(), in_pos);
        op.matrix.resize(static_cast<Eigen::Index>(std::size_t{1} << no), static_cast<Eigen::Index>(std::size_t{1} << ni));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                op.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = result.data[rows[r] + cols[c]];
            }
        }
        return op;
    }

} // namespace zxdb
