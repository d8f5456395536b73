// Copyright 2026 The qcut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qcut/gates.hpp"
#include "qcut/zx.hpp"

namespace qcut::zx {

using std::numbers::pi;

inline Diagram wire(std::size_t n = 1) {
    Diagram d;
    std::vector<NodeId> in(n);
    for (auto &i : in) i = d.add_input();
    for (std::size_t q = 0; q < n; ++q) d.connect(in[q], d.add_output());
    return d;
}

/// One-output spider: X eigenstates are Z spiders, Z eigenstates X spiders,
/// Y eigenstates Z(±π/2). Contracts to √2 times the normalized ket.
inline Diagram pauli_state_diagram(Pauli p, int mu) {
    Diagram d;
    const double s = mu == 0 ? 0.0 : pi;
    NodeId n = 0;
    switch (p) {
    case Pauli::X: n = d.add_z(s); break;
    case Pauli::Z: n = d.add_x(s); break;
    case Pauli::I:
    case Pauli::Y: n = d.add_z(mu == 0 ? pi / 2 : -pi / 2); break;
    }
    d.connect(n, d.add_output());
    return d;
}

/// One-input spider for outcome b of a Pauli measurement; contracts to √2
/// times the bra of the corresponding eigenstate.
inline Diagram pauli_effect_diagram(Pauli p, int b) {
    Diagram d;
    const NodeId in = d.add_input();
    NodeId n = 0;
    switch (p) {
    case Pauli::X: n = d.add_z(b == 0 ? 0.0 : pi); break;
    case Pauli::Z: n = d.add_x(b == 0 ? 0.0 : pi); break;
    case Pauli::I:
    case Pauli::Y: n = d.add_z(b == 0 ? -pi / 2 : pi / 2); break;
    }
    d.connect(in, n);
    return d;
}

namespace detail {

/// One Z spider per qubit carrying (in, out, extra leg).
inline std::vector<NodeId> qubit_spiders(Diagram &d, std::size_t n) {
    std::vector<NodeId> in(n), z(n);
    for (auto &i : in) i = d.add_input();
    for (std::size_t q = 0; q < n; ++q) {
        z[q] = d.add_z();
        d.connect(in[q], z[q]);
    }
    for (std::size_t q = 0; q < n; ++q) d.connect(z[q], d.add_output());
    return z;
}

} // namespace detail

inline Diagram mcp_diagram(std::size_t n, double theta) {
    if (n == 0) throw InvariantError("mcp_diagram needs at least one qubit");
    Diagram d;
    const auto z = detail::qubit_spiders(d, n);
    const NodeId h = d.add_h(std::exp(imag_unit * theta));
    for (auto q : z) d.connect(q, h);
    return d;
}

inline Diagram mcz_diagram(std::size_t n) {
    if (n == 0) throw InvariantError("mcz_diagram needs at least one qubit");
    Diagram d;
    const auto z = detail::qubit_spiders(d, n);
    const NodeId h = d.add_h();
    for (auto q : z) d.connect(q, h);
    return d;
}

/// MCZ on n qubits rewritten as H_A(m+1) - H(2) - H_B(n-m+1) with the fusion
/// scalar 1/2. The edge between H_A and the middle box is named "scissor".
inline Diagram split_mcz_three_hboxes(std::size_t n, std::size_t m) {
    if (m < 1 || m >= n) {
        throw InvariantError("split_mcz_three_hboxes requires 1 <= m < n, got m=" +
                             std::to_string(m) + " n=" + std::to_string(n));
    }
    Diagram d;
    const auto z = detail::qubit_spiders(d, n);
    const NodeId ha = d.add_h();
    const NodeId mid = d.add_h();
    const NodeId hb = d.add_h();
    for (std::size_t q = 0; q < m; ++q) d.connect(z[q], ha);
    for (std::size_t q = m; q < n; ++q) d.connect(z[q], hb);
    d.connect(ha, mid, "scissor");
    d.connect(mid, hb);
    d.set_scalar(0.5);
    return d;
}

/// Phase gadget for exp(-iθ/2 Z⊗Z). The scalar √2 e^{-iθ/2} makes the
/// contraction exact. The edge from qubit 0 into the gadget is "scissor".
inline Diagram rzz_diagram(double theta) {
    Diagram d;
    const auto z = detail::qubit_spiders(d, 2);
    const NodeId g = d.add_x();
    const NodeId t = d.add_z(theta);
    d.connect(z[0], g, "scissor");
    d.connect(z[1], g);
    d.connect(g, t);
    d.set_scalar(std::sqrt(2.0) * std::exp(-imag_unit * (theta / 2)));
    return d;
}

/// Common forms of CNOT (control qubit 0): direct Z-X pair, the connecting
/// wire bent through a cap and a cup, unfused spiders, and the
/// Hadamard-conjugated CZ form.
inline std::vector<std::pair<std::string, Diagram>> cnot_variants() {
    std::vector<std::pair<std::string, Diagram>> out;
    const double r2 = std::sqrt(2.0);
    {
        Diagram d;
        const NodeId i0 = d.add_input(), i1 = d.add_input();
        const NodeId c = d.add_z(), t = d.add_x();
        d.connect(i0, c);
        d.connect(i1, t);
        d.connect(c, t);
        d.connect(c, d.add_output());
        d.connect(t, d.add_output());
        d.set_scalar(r2);
        out.emplace_back("direct", std::move(d));
    }
    {
        Diagram d;
        const NodeId i0 = d.add_input(), i1 = d.add_input();
        const NodeId c = d.add_z(), t = d.add_x();
        const NodeId cap = d.add_cap(), cup = d.add_cup();
        d.connect(i0, c);
        d.connect(i1, t);
        d.connect(c, cap);
        d.connect(cap, cup);
        d.connect(cup, t);
        d.connect(c, d.add_output());
        d.connect(t, d.add_output());
        d.set_scalar(r2);
        out.emplace_back("bent", std::move(d));
    }
    {
        Diagram d;
        const NodeId i0 = d.add_input(), i1 = d.add_input();
        const NodeId c0 = d.add_z(), c1 = d.add_z(), t0 = d.add_x(), t1 = d.add_x();
        d.connect(i0, c0);
        d.connect(c0, c1);
        d.connect(i1, t0);
        d.connect(t0, t1);
        d.connect(c1, t0);
        d.connect(c1, d.add_output());
        d.connect(t1, d.add_output());
        d.set_scalar(r2);
        out.emplace_back("unfused", std::move(d));
    }
    {
        Diagram d;
        const NodeId i0 = d.add_input(), i1 = d.add_input();
        const NodeId c = d.add_z(), t = d.add_z();
        const NodeId h_in = d.add_h(), h_mid = d.add_h(), h_out = d.add_h();
        d.connect(i0, c);
        d.connect(i1, h_in);
        d.connect(h_in, t);
        d.connect(c, h_mid);
        d.connect(h_mid, t);
        d.connect(c, d.add_output());
        d.connect(t, h_out);
        d.connect(h_out, d.add_output());
        d.set_scalar(0.5);
        out.emplace_back("hadamard", std::move(d));
    }
    return out;
}

/// Measure-then-prepare spider pair replacing one wire.
struct CutFragment {
    std::string name;
    NodeKind effect_kind = NodeKind::Z;
    double effect_phase = 0.0;
    NodeKind state_kind = NodeKind::Z;
    double state_phase = 0.0;
    cplx scalar{0.5, 0.0};
};

namespace detail {

inline void pauli_spider(Pauli p, int mu, bool effect, bool y_as_z, NodeKind &kind, double &phase) {
    switch (p) {
    case Pauli::X:
        kind = NodeKind::Z;
        phase = mu == 0 ? 0.0 : pi;
        return;
    case Pauli::Z:
        kind = NodeKind::X;
        phase = mu == 0 ? 0.0 : pi;
        return;
    case Pauli::I:
    case Pauli::Y:
        if (effect) {
            kind = NodeKind::Z;
            phase = mu == 0 ? -pi / 2 : pi / 2;
        } else if (y_as_z) {
            kind = NodeKind::Z;
            phase = mu == 0 ? pi / 2 : -pi / 2;
        } else {
            kind = NodeKind::X;
            phase = mu == 0 ? -pi / 2 : pi / 2;
        }
        return;
    }
}

} // namespace detail

/// Fragment measuring P with outcome b and preparing eigenstate μ of R.
inline CutFragment make_fragment(Pauli measured, int b, Pauli prepared, int mu, bool y_as_z = false) {
    CutFragment f;
    f.name = std::string(1, to_char(measured)) + std::to_string(b) + "->" + to_char(prepared) +
             std::to_string(mu);
    detail::pauli_spider(measured, b, true, y_as_z, f.effect_kind, f.effect_phase);
    detail::pauli_spider(prepared, mu, false, y_as_z, f.state_kind, f.state_phase);
    return f;
}

struct ProtocolBranch {
    int sign;
    CutFragment fragment;
};

struct ProtocolTerm {
    std::string name;
    double q;
    bool needs_cc;
    std::vector<ProtocolBranch> branches;
};

/// Wire cut with classical communication on `cc`. The cc term re-prepares
/// the measured eigenstate; each other Pauli P contributes P0 (q = 1/2) and
/// P1 (q = -1/2), measuring P and preparing a fixed eigenstate.
inline std::vector<ProtocolTerm> wire_cut_protocol(Pauli cc = Pauli::Y, bool y_as_z = false) {
    if (cc == Pauli::I) throw InvariantError("classical-communication basis must be X, Y or Z");
    std::vector<ProtocolTerm> terms;
    terms.push_back({std::string(1, to_char(cc)), 1.0, true,
                     {{1, make_fragment(cc, 0, cc, 0, y_as_z)},
                      {1, make_fragment(cc, 1, cc, 1, y_as_z)}}});
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        if (p == cc) continue;
        for (int mu = 0; mu < 2; ++mu) {
            terms.push_back({std::string(1, to_char(p)) + std::to_string(mu), mu == 0 ? 0.5 : -0.5,
                             false,
                             {{1, make_fragment(p, 0, p, mu, y_as_z)},
                              {-1, make_fragment(p, 1, p, mu, y_as_z)}}});
        }
    }
    return terms;
}

/// The ten fragments of the Y-communicating wire cut.
inline std::vector<CutFragment> table_fragments() {
    std::vector<CutFragment> out;
    for (const auto &t : wire_cut_protocol(Pauli::Y)) {
        for (const auto &b : t.branches) out.push_back(b.fragment);
    }
    return out;
}

/// Replace edge `e` (a, b) by effect spider at a and state spider at b.
inline Diagram insert_cut_fragment(const Diagram &d, EdgeId e, const CutFragment &f) {
    if (e >= d.edges().size()) throw InvariantError("edge " + std::to_string(e) + " not found");
    Diagram out = d;
    const NodeId b = out.edge(e).b;
    const NodeId eff = out.add_node({f.effect_kind, f.effect_phase, {-1.0, 0.0}, {}});
    const NodeId st = out.add_node({f.state_kind, f.state_phase, {-1.0, 0.0}, {}});
    out.mutable_edge(e).b = eff;
    out.mutable_node(eff).legs.push_back(e);
    const EdgeId e2 = out.connect(st, b);
    auto &legs = out.mutable_node(b).legs;
    legs.pop_back();
    const auto it = std::find(legs.rbegin(), legs.rend(), e);
    *it = e2;
    out.multiply_scalar(f.scalar);
    return out;
}

inline Diagram insert_cut_fragment(const Diagram &d, const std::string &edge_name,
                                   const CutFragment &f) {
    const auto e = d.find_edge(edge_name);
    if (!e) throw InvariantError("edge '" + edge_name + "' not found");
    return insert_cut_fragment(d, *e, f);
}

/// Σ_b sign_b · PTM(D_b ρ D_b†) for one protocol term (without q).
inline Superoperator term_channel(const Diagram &d, EdgeId e, const ProtocolTerm &t) {
    const std::size_t n = d.inputs().size();
    Superoperator acc = Superoperator::zero(n);
    for (const auto &br : t.branches) {
        acc = acc + static_cast<double>(br.sign) * doubled(insert_cut_fragment(d, e, br.fragment));
    }
    return acc;
}

/// q-weighted channel sum over a full protocol.
inline Superoperator protocol_channel(const Diagram &d, EdgeId e,
                                      const std::vector<ProtocolTerm> &protocol) {
    Superoperator acc = Superoperator::zero(d.inputs().size());
    for (const auto &t : protocol) acc = acc + t.q * term_channel(d, e, t);
    return acc;
}

struct Rule {
    std::string name;
    Diagram lhs;
    Diagram rhs;
    bool up_to_scalar = false;
    cplx expected_ratio{1.0, 0.0};
};

/// Rewrite rules used by the decompositions, each as a concrete instance.
inline std::vector<Rule> rule_corpus() {
    std::vector<Rule> rules;
    const double a = 0.7, b = -1.9;
    auto chain = [](std::vector<std::pair<NodeKind, double>> nodes) {
        Diagram d;
        NodeId prev = d.add_input();
        for (auto [k, ph] : nodes) {
            const NodeId n = d.add_node({k, ph, {-1.0, 0.0}, {}});
            d.connect(prev, n);
            prev = n;
        }
        d.connect(prev, d.add_output());
        return d;
    };
    for (auto kind : {NodeKind::Z, NodeKind::X}) {
        const std::string c = kind == NodeKind::Z ? "z" : "x";
        // Two inputs, one output, fused along one edge.
        Diagram lhs;
        const NodeId i0 = lhs.add_input(), i1 = lhs.add_input();
        const NodeId s0 = lhs.add_node({kind, a, {-1.0, 0.0}, {}});
        const NodeId s1 = lhs.add_node({kind, b, {-1.0, 0.0}, {}});
        lhs.connect(i0, s0);
        lhs.connect(i1, s1);
        lhs.connect(s0, s1);
        lhs.connect(s1, lhs.add_output());
        Diagram rhs;
        const NodeId j0 = rhs.add_input(), j1 = rhs.add_input();
        const NodeId s = rhs.add_node({kind, a + b, {-1.0, 0.0}, {}});
        rhs.connect(j0, s);
        rhs.connect(j1, s);
        rhs.connect(s, rhs.add_output());
        rules.push_back({c + "-spider-fusion", std::move(lhs), std::move(rhs), false, 1.0});
        rules.push_back({c + "-identity-removal", chain({{kind, 0.0}}), wire(), false, 1.0});
    }
    {
        // Z spider with a Hadamard box on each of its three legs.
        Diagram lhs;
        const NodeId i0 = lhs.add_input(), i1 = lhs.add_input();
        const NodeId z = lhs.add_z(a);
        std::vector<NodeId> h{lhs.add_h(), lhs.add_h(), lhs.add_h()};
        lhs.connect(i0, h[0]);
        lhs.connect(i1, h[1]);
        for (auto x : h) lhs.connect(x, z);
        lhs.connect(h[2], lhs.add_output());
        lhs.set_scalar(std::pow(std::sqrt(0.5), 3));
        Diagram rhs;
        const NodeId j0 = rhs.add_input(), j1 = rhs.add_input();
        const NodeId x = rhs.add_x(a);
        rhs.connect(j0, x);
        rhs.connect(j1, x);
        rhs.connect(x, rhs.add_output());
        rules.push_back({"color-change", std::move(lhs), std::move(rhs), false, 1.0});
    }
    rules.push_back({"h-box-fusion", split_mcz_three_hboxes(4, 2), mcz_diagram(4), false, 1.0});
    rules.push_back({"pi-commutation", chain({{NodeKind::X, pi}, {NodeKind::Z, a}}),
                     chain({{NodeKind::Z, -a}, {NodeKind::X, pi}}), true,
                     std::exp(imag_unit * a)});
    {
        // cap ∘ (I ⊗ cup) = I.
        Diagram lhs;
        const NodeId in = lhs.add_input();
        const NodeId cup = lhs.add_cup(), cap = lhs.add_cap();
        lhs.connect(in, cap);
        lhs.connect(cup, cap);
        lhs.connect(cup, lhs.add_output());
        rules.push_back({"yanking", std::move(lhs), wire(), false, 1.0});
    }
    {
        // Two arity-2 H-boxes compose to 2·I, i.e. H·H = I.
        Diagram lhs;
        const NodeId in = lhs.add_input();
        const NodeId h0 = lhs.add_h(), h1 = lhs.add_h();
        lhs.connect(in, h0);
        lhs.connect(h0, h1);
        lhs.connect(h1, lhs.add_output());
        lhs.set_scalar(0.5);
        rules.push_back({"hadamard-involution", std::move(lhs), wire(), false, 1.0});
    }
    return rules;
}

struct CheckResult {
    std::string name;
    double deviation;
    bool passed;
};

inline CheckResult check_against(std::string name, const Matrix &got, const Matrix &want,
                                 double tolerance = tol::structural) {
    if (got.rows() != want.rows() || got.cols() != want.cols()) {
        return {std::move(name), std::numeric_limits<double>::infinity(), false};
    }
    const double dev = (got - want).cwiseAbs().maxCoeff();
    return {std::move(name), dev, dev <= tolerance};
}

inline std::vector<CheckResult> check_cnot_variants() {
    std::vector<CheckResult> out;
    const Matrix cnot = gates::cnot().matrix();
    for (const auto &[name, d] : cnot_variants()) {
        out.push_back(check_against("cnot/" + name, contract(d), cnot));
    }
    return out;
}

inline std::vector<CheckResult> check_pauli_states() {
    std::vector<CheckResult> out;
    const double r2 = std::sqrt(2.0);
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        for (int mu = 0; mu < 2; ++mu) {
            const Vector ket = PauliEigenbasis::ket(p, mu);
            const Matrix s = contract(pauli_state_diagram(p, mu));
            // Spiders fix the ket only up to a global phase.
            Eigen::Index k = 0;
            ket.cwiseAbs().maxCoeff(&k);
            const cplx ph = s(k, 0) / std::abs(s(k, 0));
            const cplx ref = ket(k) / std::abs(ket(k));
            out.push_back(check_against(std::string("state/") + to_char(p) + std::to_string(mu),
                                        s * (ref / ph), r2 * ket));
            const Matrix e = contract(pauli_effect_diagram(p, mu));
            out.push_back(check_against(std::string("effect/") + to_char(p) + std::to_string(mu),
                                        e, r2 * ket.adjoint()));
        }
    }
    return out;
}

inline std::vector<CheckResult> check_gate_diagrams(std::size_t max_n = 4) {
    std::vector<CheckResult> out;
    for (std::size_t n = 1; n <= max_n; ++n) {
        out.push_back(check_against("mcz/" + std::to_string(n), contract(mcz_diagram(n)),
                                    gates::mcz(n).matrix()));
        for (double th : {pi / 3, -1.234}) {
            out.push_back(check_against("mcp/" + std::to_string(n) + "/" + std::to_string(th),
                                        contract(mcp_diagram(n, th)), gates::mcp(n, th).matrix()));
        }
        for (std::size_t m = 1; m < n; ++m) {
            out.push_back(check_against("mcz-fusion/" + std::to_string(n) + "/" + std::to_string(m),
                                        contract(split_mcz_three_hboxes(n, m)),
                                        contract(mcz_diagram(n))));
        }
    }
    for (double th : {0.0, pi / 6, pi / 4, pi / 2, 1.234, pi}) {
        out.push_back(check_against("rzz/" + std::to_string(th), contract(rzz_diagram(th)),
                                    gates::rzz(th).matrix()));
    }
    return out;
}

inline std::vector<CheckResult> check_rules() {
    std::vector<CheckResult> out;
    for (const auto &r : rule_corpus()) {
        const RuleReport rep = verify_rule(r.lhs, r.rhs, r.up_to_scalar);
        double dev = r.up_to_scalar ? std::max(rep.residual, std::abs(rep.ratio - r.expected_ratio))
                                    : rep.max_abs_deviation;
        out.push_back({"rule/" + r.name, dev, dev <= tol::structural});
    }
    return out;
}

inline std::vector<CheckResult> check_wire_cut() {
    std::vector<CheckResult> out;
    const Diagram w = wire();
    for (auto cc : {Pauli::X, Pauli::Y, Pauli::Z}) {
        for (bool yz : {false, true}) {
            const Superoperator s = protocol_channel(w, 0, wire_cut_protocol(cc, yz));
            const double dev = max_abs_diff(s, Superoperator::identity(1));
            out.push_back({std::string("wire-cut/") + to_char(cc) + (yz ? "/yz" : ""), dev,
                           dev <= tol::structural});
        }
    }
    return out;
}

} // namespace qcut::zx
