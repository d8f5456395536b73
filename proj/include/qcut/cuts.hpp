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

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcut/channel.hpp"

namespace qcut {

struct RegisterPartition {
    std::vector<std::size_t> sizes;

    [[nodiscard]] std::size_t total() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }
    [[nodiscard]] std::size_t offset(std::size_t reg) const {
        return std::accumulate(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(reg), std::size_t{0});
    }
    void validate() const {
        if (sizes.empty()) throw InvariantError("partition needs at least one register");
        for (auto s : sizes) {
            if (s == 0) throw InvariantError("register sizes must be at least 1");
        }
    }
    [[nodiscard]] std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? "," : "") + std::to_string(sizes[i]);
        return s + "]";
    }
};

/// One map per register; a factor may span several consecutive registers,
/// which means the term needs a joint operation across them.
struct DecompositionTerm {
    double q = 0.0;
    std::vector<MapPtr> factors;
    std::vector<std::size_t> spans;
    bool needs_cc = false;
    std::string label;
};

struct Decomposition {
    std::string name;
    std::string parameters;
    RegisterPartition partition;
    std::vector<DecompositionTerm> terms;
    /// Channel being decomposed, as a unitary on partition.total() qubits.
    Operator target;

    /// PTM of the target; computed once and shared between copies.
    [[nodiscard]] const Superoperator &target_ptm() const {
        std::call_once(cache_->flag, [&] { cache_->ptm = ptm_of_unitary(target); });
        return *cache_->ptm;
    }

  private:
    struct Cache {
        std::once_flag flag;
        std::optional<Superoperator> ptm;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

namespace detail {

inline void check_term(const RegisterPartition &p, const DecompositionTerm &t) {
    if (t.factors.size() != t.spans.size()) throw InvariantError("term '" + t.label + "' spans/factors mismatch");
    std::size_t reg = 0;
    for (std::size_t f = 0; f < t.factors.size(); ++f) {
        std::size_t qubits = 0;
        for (std::size_t k = 0; k < t.spans[f]; ++k) {
            if (reg >= p.sizes.size()) throw InvariantError("term '" + t.label + "' covers too many registers");
            qubits += p.sizes[reg++];
        }
        if (t.spans[f] == 0 || t.factors[f]->num_qubits() != qubits) {
            throw DimensionError("term '" + t.label + "' factor " + std::to_string(f) + " acts on " +
                                 std::to_string(t.factors[f]->num_qubits()) + " qubits, register block has " +
                                 std::to_string(qubits));
        }
    }
    if (reg != p.sizes.size()) throw InvariantError("term '" + t.label + "' does not cover the partition");
}

inline std::string join_labels(const std::vector<MapPtr> &f) {
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? " ⊗ " : "") + f[i]->label();
    return s;
}

inline DecompositionTerm term(double q, std::vector<MapPtr> factors, bool needs_cc = false,
                              std::string label = {}) {
    DecompositionTerm t;
    t.q = q;
    t.spans.assign(factors.size(), 1);
    t.label = label.empty() ? join_labels(factors) : std::move(label);
    t.factors = std::move(factors);
    t.needs_cc = needs_cc;
    return t;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

inline void check_dense_cap(std::size_t n) {
    const std::size_t cap = limits::dense_qubit_cap();
    if (n > cap) {
        throw SizeError("decomposition on " + std::to_string(n) + " qubits exceeds dense cap of " +
                        std::to_string(cap) + " (QCUT_MAX_QUBITS)");
    }
}

} // namespace detail

inline void validate(const Decomposition &d) {
    d.partition.validate();
    if (d.terms.empty()) throw InvariantError("decomposition '" + d.name + "' has no terms");
    if (d.target.num_qubits() != d.partition.total()) throw DimensionError("target does not match partition");
    for (const auto &t : d.terms) detail::check_term(d.partition, t);
}

inline double one_norm(const Decomposition &d) {
    double g = 0.0;
    for (const auto &t : d.terms) g += std::abs(t.q);
    return g;
}

inline std::vector<double> sampling_probabilities(const Decomposition &d) {
    if (d.terms.empty()) throw InvariantError("decomposition has no terms");
    const double g = one_norm(d);
    std::vector<double> p;
    p.reserve(d.terms.size());
    for (const auto &t : d.terms) p.push_back(std::abs(t.q) / g);
    return p;
}

/// Σ q_ν ⊗ PTM(factors). Factor PTMs are shared across terms by identity.
inline Superoperator reconstruct(const Decomposition &d) {
    validate(d);
    const std::size_t n = d.partition.total();
    const auto dim = Eigen::Index{1} << (2 * n);
    std::map<const GeneralizedMap *, Superoperator> cache;
    auto ptm = [&](const MapPtr &m) -> const Superoperator & {
        auto it = cache.find(m.get());
        if (it == cache.end()) it = cache.emplace(m.get(), m->to_superoperator()).first;
        return it->second;
    };
    RealMatrix acc = RealMatrix::Zero(dim, dim);
    for (const auto &t : d.terms) {
        if (t.q == 0.0) continue;
        if (t.factors.size() == 1) {
            acc += t.q * ptm(t.factors[0]).matrix();
            continue;
        }
        // Kron all but the last factor, then expand the last one blockwise.
        Superoperator head = ptm(t.factors[0]);
        for (std::size_t f = 1; f + 1 < t.factors.size(); ++f) head = kron(head, ptm(t.factors[f]));
        const RealMatrix &tail = ptm(t.factors.back()).matrix();
        const Eigen::Index tb = tail.rows();
        const RealMatrix &h = head.matrix();
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            for (Eigen::Index j = 0; j < h.cols(); ++j) {
                const double c = t.q * h(i, j);
                if (c != 0.0) acc.block(i * tb, j * tb, tb, tb) += c * tail;
            }
        }
    }
    return {n, std::move(acc)};
}

struct VerifyReport {
    std::string name;
    std::string parameters;
    double max_deviation = 0.0;
    double gamma = 0.0;
    double sum_q = 0.0;
    std::size_t terms = 0;
    bool passed = false;
};

inline VerifyReport verify(const Decomposition &d, double tolerance = tol::reconstruction) {
    VerifyReport r;
    r.name = d.name;
    r.parameters = d.parameters;
    r.max_deviation = max_abs_diff(reconstruct(d), d.target_ptm());
    r.gamma = one_norm(d);
    for (const auto &t : d.terms) r.sum_q += t.q;
    r.terms = d.terms.size();
    r.passed = r.max_deviation < tolerance;
    return r;
}

/// CPTP flag of a term: every factor physical and q > 0 is not required.
inline bool term_is_cptp(const DecompositionTerm &t) {
    for (const auto &f : t.factors) {
        if (!f->is_cptp().cptp) return false;
    }
    return true;
}

inline bool any_needs_cc(const Decomposition &d) {
    for (const auto &t : d.terms) if (t.needs_cc) return true;
    return false;
}

namespace cuts {

using std::numbers::pi;

/// Peng et al. wire cut: q_{Pμ} = a_{Pμ}/2 over the eight Pauli eigenstates.
inline Decomposition wire_cut_ncc() {
    Decomposition d;
    d.name = "wire_ncc";
    d.parameters = "-";
    d.partition = {{1}};
    d.target = Operator::identity(1);
    for (auto p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
        for (int mu = 0; mu < 2; ++mu) {
            d.terms.push_back(detail::term(0.5 * PauliEigenbasis::get(p, mu).sign, {maps::peng(p, mu)}));
        }
    }
    return d;
}

/// Wire cut with classical communication on the `cc` term.
inline Decomposition wire_cut_cc(Pauli cc = Pauli::Y) {
    if (cc == Pauli::I) throw InvariantError("cc basis must be X, Y or Z");
    Decomposition d;
    d.name = "wire_cc";
    d.parameters = std::string("cc=") + to_char(cc);
    d.partition = {{1}};
    d.target = Operator::identity(1);
    d.terms.push_back(detail::term(1.0, {maps::grouped(cc)}, true));
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        if (p == cc) continue;
        d.terms.push_back(detail::term(0.5, {maps::peng(p, 0)}));
        d.terms.push_back(detail::term(-0.5, {maps::peng(p, 1)}));
    }
    return d;
}

inline Decomposition mcz_decomposition(std::size_t m, std::size_t mp) {
    if (m < 1 || mp < 1) throw InvariantError("mcz_decomposition requires m, m' >= 1");
    detail::check_dense_cap(m + mp);
    Decomposition d;
    d.name = "mcz";
    d.parameters = "m=" + std::to_string(m) + ";m'=" + std::to_string(mp);
    d.partition = {{m, mp}};
    d.target = gates::mcz(m + mp);
    auto mcp = [](std::size_t k, double t, const char *s) {
        return maps::unitary(gates::mcp(k, t), std::string("MCP^(") + std::to_string(k) + ")(" + s + ")");
    };
    auto mcz = [](std::size_t k) { return maps::unitary(gates::mcz(k), "MCZ^(" + std::to_string(k) + ")"); };
    const MapPtr ea = maps::mcz_mx(m), eb = maps::mcz_mx(mp);
    d.terms.push_back(detail::term(0.5, {mcp(m, pi / 2, "pi/2"), mcp(mp, pi / 2, "pi/2")}));
    d.terms.push_back(detail::term(0.5, {mcp(m, -pi / 2, "-pi/2"), mcp(mp, -pi / 2, "-pi/2")}));
    d.terms.push_back(detail::term(0.5, {ea, maps::identity(mp)}));
    d.terms.push_back(detail::term(-0.5, {ea, mcz(mp)}));
    d.terms.push_back(detail::term(0.5, {maps::identity(m), eb}));
    d.terms.push_back(detail::term(-0.5, {mcz(m), eb}));
    return d;
}

inline Decomposition rzz_decomposition_a(double theta) {
    Decomposition d;
    d.name = "rzz_a";
    d.parameters = "theta=" + detail::fmt(theta);
    d.partition = {{1, 1}};
    d.target = gates::rzz(theta);
    const MapPtr i = maps::identity(1), zpi = maps::rz(pi, "R_Z(pi)");
    const MapPtr zp = maps::rz(pi / 2, "R_Z(pi/2)"), zm = maps::rz(-pi / 2, "R_Z(-pi/2)");
    const MapPtr my = maps::rzz_my(theta), ez = maps::ez_bar();
    d.terms.push_back(detail::term(0.5 * (1 + std::cos(theta)), {i, i}));
    d.terms.push_back(detail::term(0.5 * (1 - std::cos(theta)), {zpi, zpi}));
    d.terms.push_back(detail::term(0.5, {zp, my}));
    d.terms.push_back(detail::term(-0.5, {zm, my}));
    d.terms.push_back(detail::term(0.5, {ez, maps::rz(theta, "R_Z(theta)")}));
    d.terms.push_back(detail::term(-0.5, {ez, maps::rz(-theta, "R_Z(-theta)")}));
    return d;
}

inline Decomposition rzz_decomposition_b(double theta) {
    Decomposition d;
    d.name = "rzz_b";
    d.parameters = "theta=" + detail::fmt(theta);
    d.partition = {{1, 1}};
    d.target = gates::rzz(theta);
    const double s = std::sin(theta);
    const MapPtr i = maps::identity(1), zpi = maps::rz(pi, "R_Z(pi)");
    const MapPtr zp = maps::rz(pi / 2, "R_Z(pi/2)"), zm = maps::rz(-pi / 2, "R_Z(-pi/2)");
    const MapPtr ez = maps::ez_bar();
    d.terms.push_back(detail::term(0.5 * (1 + std::cos(theta)), {i, i}));
    d.terms.push_back(detail::term(0.5 * (1 - std::cos(theta)), {zpi, zpi}));
    d.terms.push_back(detail::term(0.5 * s, {zp, ez}));
    d.terms.push_back(detail::term(-0.5 * s, {zm, ez}));
    d.terms.push_back(detail::term(0.5 * s, {ez, zp}));
    d.terms.push_back(detail::term(-0.5 * s, {ez, zm}));
    return d;
}

namespace detail {

/// CNOT ladder collecting the register parity on `parity_qubit` (the last
/// qubit for the upper register, the first for the lower one).
inline Operator parity_ladder(std::size_t size, bool upper) {
    Operator l = Operator::identity(size);
    for (std::size_t k = 0; k + 1 < size; ++k) {
        const Operator c = upper ? gates::cnot(k, k + 1, size) : gates::cnot(size - 1 - k, size - 2 - k, size);
        l = c * l;
    }
    return l;
}

/// Lift a single-qubit rzz_b factor to a register through its ladder.
inline MapPtr lift_factor(const MapPtr &f, std::size_t size, bool upper) {
    if (size == 1) return f;
    const std::size_t q = upper ? size - 1 : 0;
    const Operator l = parity_ladder(size, upper);
    if (const auto *u = f->get_if<UnitaryChannel>()) {
        return maps::unitary(l.adjoint() * embed(u->u, {q}, size) * l, "L†·" + f->label() + "·L");
    }
    // Signed Z dephasing of the parity qubit, realized by copying the parity
    // into a |0⟩ ancilla and measuring it in Z.
    const Operator lx = kron(l, Operator::identity(1));
    const Operator w = lx.adjoint() * embed(gates::cnot(), {q, size}, size + 1) * lx;
    return std::make_shared<const GeneralizedMap>(
        AncillaCircuit{size, PauliEigenbasis::get(Pauli::Z, 0).state, w, Pauli::Z, {1, -1}, std::nullopt},
        "L†·" + f->label() + "·L");
}

} // namespace detail

inline Decomposition multi_z_rotation_decomposition(std::size_t m, std::size_t mp, double theta) {
    if (m < 1 || mp < 1) throw InvariantError("multi_z_rotation_decomposition requires m, m' >= 1");
    qcut::detail::check_dense_cap(m + mp);
    const Decomposition b = rzz_decomposition_b(theta);
    Decomposition d;
    d.name = "multi_z";
    d.parameters = "m=" + std::to_string(m) + ";m'=" + std::to_string(mp) + ";theta=" + qcut::detail::fmt(theta);
    d.partition = {{m, mp}};
    d.target = gates::multi_z_rotation(m + mp, theta);
    std::map<const GeneralizedMap *, MapPtr> lifted_a, lifted_b;
    auto lift = [](std::map<const GeneralizedMap *, MapPtr> &c, const MapPtr &f, std::size_t size, bool upper) {
        auto it = c.find(f.get());
        if (it == c.end()) it = c.emplace(f.get(), detail::lift_factor(f, size, upper)).first;
        return it->second;
    };
    for (const auto &t : b.terms) {
        d.terms.push_back(qcut::detail::term(
            t.q, {lift(lifted_a, t.factors[0], m, true), lift(lifted_b, t.factors[1], mp, false)}, false,
            m == 1 && mp == 1 ? t.label : "ladder(" + t.label + ")"));
    }
    return d;
}

/// Controlled unitaries sharing control qubit 0; targets are global qubit
/// indices in [1, num_qubits).
struct SequenceOp {
    std::vector<std::size_t> qubits;
    Operator u;
};

inline Decomposition controlled_sequence_decomposition(const std::vector<SequenceOp> &ops, std::size_t num_qubits) {
    if (num_qubits < 2) throw InvariantError("controlled sequence needs a control and at least one target");
    qcut::detail::check_dense_cap(num_qubits);
    if (ops.empty()) throw InvariantError("controlled sequence needs at least one unitary");
    const std::size_t t = num_qubits - 1;
    std::vector<maps::ControlledOp> rel;
    for (const auto &op : ops) {
        maps::ControlledOp r{{}, op.u};
        for (auto q : op.qubits) {
            if (q == 0) throw InvariantError("controlled op overlaps the control qubit");
            if (q >= num_qubits) throw InvariantError("controlled op qubit " + std::to_string(q) + " out of range");
            r.targets.push_back(q - 1);
        }
        if (r.u.num_qubits() != r.targets.size()) throw DimensionError("controlled op size mismatch");
        rel.push_back(std::move(r));
    }
    Decomposition d;
    d.name = "controlled_sequence";
    d.parameters = "n=" + std::to_string(num_qubits) + ";M=" + std::to_string(ops.size());
    d.partition = {{1, t}};
    d.target = gates::controlled(maps::sequence_unitary(rel, t));
    const MapPtr rzv = maps::e_rzv(rel, t), vmx = maps::e_v_mx(rel, t), vmz = maps::e_v_mz(rel, t);
    DecompositionTerm first;
    first.q = 1.0;
    first.factors = {rzv};
    first.spans = {2};
    first.needs_cc = true;
    first.label = rzv->label();
    d.terms.push_back(std::move(first));
    d.terms.push_back(qcut::detail::term(0.5, {maps::identity(1), vmx}));
    d.terms.push_back(qcut::detail::term(-0.5, {maps::rz(pi, "R_Z(pi)"), vmx}));
    d.terms.push_back(qcut::detail::term(1.0, {maps::ez_bar(), vmz}, false, "Ebar_Z ⊗ I ⊗ E_V-MZ"));
    return d;
}

} // namespace cuts

} // namespace qcut
