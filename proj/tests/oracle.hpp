#pragma once

// Independent reference implementations for the tests. Nothing here goes
// through the ZX machinery: gate matrices are written out by hand and circuit
// unitaries are built by Kronecker products.

#include "zxdb/zxdb.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

    using zxdb::cplx;
    using Mat = Eigen::MatrixXcd;

    inline const cplx I{0.0, 1.0};

    inline Mat mat2(cplx a, cplx b, cplx c, cplx d) {
        Mat m(2, 2);
        m << a, b, c, d;
        return m;
    }

    inline Mat hadamard() {
        const double h = 1.0 / std::numbers::sqrt2;
        return mat2(h, h, h, -h);
    }
    inline Mat pauli_x() { return mat2(0, 1, 1, 0); }
    inline Mat pauli_z() { return mat2(1, 0, 0, -1); }
    inline Mat phase_gate(double theta) { return mat2(1, 0, 0, std::exp(I * theta)); }
    inline Mat rz(double theta) { return mat2(std::exp(-I * theta / 2.0), 0, 0, std::exp(I * theta / 2.0)); }
    inline Mat rx(double theta) {
        const double c = std::cos(theta / 2.0);
        const double s = std::sin(theta / 2.0);
        return mat2(c, -I * s, -I * s, c);
    }

    /// 4x4 CNOT with qubit 0 as the most significant bit.
    inline Mat cnot(bool control_is_first) {
        Mat m = Mat::Zero(4, 4);
        if (control_is_first) {
            m(0, 0) = m(1, 1) = 1;
            m(2, 3) = m(3, 2) = 1;
        } else {
            m(0, 0) = m(2, 2) = 1;
            m(1, 3) = m(3, 1) = 1;
        }
        return m;
    }

    inline Mat cz() {
        Mat m = Mat::Identity(4, 4);
        m(3, 3) = -1;
        return m;
    }

    /// Embeds a one-qubit matrix on qubit q of n (qubit 0 most significant).
    inline Mat on_qubit(const Mat& g, std::size_t q, std::size_t n) {
        const std::size_t dim = std::size_t{1} << n;
        Mat               out = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        const std::size_t bit = n - 1 - q;
        for (std::size_t col = 0; col < dim; ++col) {
            const std::size_t in = (col >> bit) & 1U;
            for (std::size_t o = 0; o < 2; ++o) {
                const std::size_t row = (col & ~(std::size_t{1} << bit)) | (o << bit);
                out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                    g(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(in));
            }
        }
        return out;
    }

    inline Mat controlled(bool z_type, std::size_t c, std::size_t t, std::size_t n) {
        const std::size_t dim = std::size_t{1} << n;
        Mat               out = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t col = 0; col < dim; ++col) {
            const bool cb = (col >> (n - 1 - c)) & 1U;
            const bool tb = (col >> (n - 1 - t)) & 1U;
            if (z_type) {
                out(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = cb && tb ? -1.0 : 1.0;
            } else {
                const std::size_t row = cb ? col ^ (std::size_t{1} << (n - 1 - t)) : col;
                out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
            }
        }
        return out;
    }

    inline Mat gate_matrix(const zxdb::Gate& g) {
        using zxdb::GateName;
        const double pi = std::numbers::pi;
        switch (g.name) {
            case GateName::H: return hadamard();
            case GateName::X: return pauli_x();
            case GateName::Z: return pauli_z();
            case GateName::S: return phase_gate(pi / 2);
            case GateName::Sdg: return phase_gate(-pi / 2);
            case GateName::T: return phase_gate(pi / 4);
            case GateName::Tdg: return phase_gate(-pi / 4);
            case GateName::Rz: return rz(g.angle->to_radians());
            case GateName::Rx: return rx(g.angle->to_radians());
            default: break;
        }
        throw std::invalid_argument("not a one-qubit gate");
    }

    /// Unitary of a circuit by direct matrix multiplication.
    inline Mat circuit_unitary(const zxdb::Circuit& c) {
        const std::size_t n   = c.num_qubits;
        const auto        dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        Mat               u   = Mat::Identity(dim, dim);
        for (const auto& g: c.gates) {
            Mat step;
            if (g.name == zxdb::GateName::Cx) {
                step = controlled(false, g.qubits[0], g.qubits[1], n);
            } else if (g.name == zxdb::GateName::Cz) {
                step = controlled(true, g.qubits[0], g.qubits[1], n);
            } else {
                step = on_qubit(gate_matrix(g), g.qubits[0], n);
            }
            u = step * u;
        }
        return u;
    }

    /// Independent scalar-equivalence check: normalise both by their largest
    /// entry's phase and magnitude, compare entrywise.
    inline bool proportional(const Mat& a, const Mat& b, double tol = 1e-8) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
        Eigen::Index r = 0, c = 0;
        const double na = a.cwiseAbs().maxCoeff(&r, &c);
        if (na == 0.0) return b.cwiseAbs().maxCoeff() == 0.0;
        if (std::abs(b(r, c)) == 0.0) return false;
        const Mat an = a / a(r, c);
        const Mat bn = b / b(r, c);
        return (an - bn).cwiseAbs().maxCoeff() <= tol;
    }

    /// Applies every candidate of a snapshot blindly, without conflict checks:
    /// each identity match plans its bypass edge from the snapshot, then all
    /// matched spiders are deleted and planned edges whose endpoints survive
    /// are added.
    inline void naive_identity_pass(zxdb::Diagram& d) {
        using namespace zxdb;
        const auto matches = find_matches(RuleId::IdentityRemoval, d);
        struct Planned {
            NodeId   a, b;
            EdgeKind k;
        };
        std::vector<Planned> plan;
        for (const auto& m: matches) {
            const auto     n = d.neighbors(m.bound[0]);
            const EdgeKind k = n[0].kind == n[1].kind ? EdgeKind::Simple : EdgeKind::Hadamard;
            plan.push_back({n[0].node, n[1].node, k});
        }
        for (const auto& m: matches) d.remove_spider(m.bound[0]);
        for (const auto& p: plan) {
            if (d.contains(p.a) && d.contains(p.b)) d.connect(p.a, p.b, p.k);
        }
    }

    /// Same diagram with node ids shuffled (and shifted, so no id is kept).
    inline std::pair<zxdb::Diagram, std::map<zxdb::NodeId, zxdb::NodeId>> relabel(const zxdb::Diagram& d,
                                                                                    std::mt19937_64& rng) {
        using namespace zxdb;
        auto ids = d.nodes();
        auto shuffled = ids;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::map<NodeId, NodeId> to;
        for (std::size_t i = 0; i < ids.size(); ++i) to[ids[i]] = shuffled[i] + d.id_bound();
        Diagram out;
        for (auto v: ids) out.emplace_node(to[v], d.kind(v), d.phase(v));
        for (const auto& [uv, k]: d.edges()) out.connect(to[uv.first], to[uv.second], k);
        std::vector<NodeId> ins, outs;
        for (auto b: d.inputs()) ins.push_back(to[b]);
        for (auto b: d.outputs()) outs.push_back(to[b]);
        out.assign_boundaries(ins, outs);
        return {out, to};
    }

    /// Cycle of n Z(0) spiders joined by Hadamard edges, optionally split into
    /// `parts` disjoint cycles of equal length.
    inline zxdb::Diagram cycles(std::size_t n, std::size_t parts) {
        using namespace zxdb;
        Diagram           d;
        const std::size_t len = n / parts;
        for (std::size_t p = 0; p < parts; ++p) {
            std::vector<NodeId> vs;
            for (std::size_t i = 0; i < len; ++i) vs.push_back(d.add_spider(NodeKind::Z));
            for (std::size_t i = 0; i < len; ++i) d.connect(vs[i], vs[(i + 1) % len], EdgeKind::Hadamard);
        }
        return d;
    }

    inline Mat random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
        std::normal_distribution<double> g(0.0, 1.0);
        Mat                              m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx{g(rng), g(rng)};
        }
        return m;
    }

} // namespace oracle
