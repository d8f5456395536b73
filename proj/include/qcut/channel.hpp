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

#include <array>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcut/gates.hpp"
#include "qcut/tensor.hpp"

namespace qcut {

struct UnitaryChannel {
    Operator u;
};

struct MeasurePrepareTerm {
    int sign;
    Operator effect;
    Operator state;
};

struct SignedMeasurePrepare {
    std::vector<MeasurePrepareTerm> terms;
};

struct KrausTerm {
    int sign;
    Operator k;
};

struct SignedKraus {
    std::vector<KrausTerm> terms;
};

/// Local unitary applied to one system qubit after ancilla outcome 0 or 1.
struct OutcomeFeedback {
    std::size_t qubit;
    std::array<Operator, 2> unitary;
};

/// Extend with an ancilla (last tensor factor), evolve jointly, measure the
/// ancilla in a Pauli basis and weight outcome μ by signs[μ].
struct AncillaCircuit {
    std::size_t system_qubits;
    Operator ancilla_init;
    Operator joint_unitary;
    Pauli measure_basis;
    std::array<int, 2> signs;
    std::optional<OutcomeFeedback> feedback;
};

using MapVariant = std::variant<UnitaryChannel, SignedMeasurePrepare, SignedKraus, AncillaCircuit>;

struct CptpReport {
    bool cptp = false;
    bool signs_positive = false;
    double choi_min_eigenvalue = 0.0;
    double trace_deviation = 0.0;
};

/// Projector onto eigenstate μ of a single-qubit Pauli measurement.
inline const Operator &outcome_projector(Pauli basis, int mu) {
    if (basis == Pauli::I) throw InvariantError("measurement basis must be X, Y or Z");
    return PauliEigenbasis::get(basis, mu).state;
}

namespace detail {

inline void require_sign(int s) {
    if (s != 1 && s != -1) throw InvariantError("signs must be +1 or -1, got " + std::to_string(s));
}

inline bool is_psd(const Operator &a, double tolerance) {
    if (!a.is_hermitian(tolerance)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tolerance;
}

inline void check_completeness(const Matrix &sum, const char *what) {
    const double d = (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
    if (d > tol::structural) {
        throw InvariantError(std::string(what) + " completeness violated by " + std::to_string(d));
    }
}

/// Tr over the last qubit of (I ⊗ Π) σ (I ⊗ Π) = Tr_a[(I ⊗ Π) σ].
inline Matrix project_trace_ancilla(const Matrix &sigma, const Matrix &proj) {
    const Eigen::Index d = sigma.rows() / 2;
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            cplx acc = 0.0;
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    acc += proj(b, a) * sigma(2 * i + a, 2 * j + b);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

} // namespace detail

/// Tagged union of the map families used by the decompositions, validated
/// at construction. Immutable.
class GeneralizedMap {
  public:
    GeneralizedMap(UnitaryChannel m, std::string label = "U") : label_(std::move(label)) {
        if (!m.u.is_unitary(tol::structural)) throw InvariantError("unitary channel requires a unitary");
        n_ = m.u.num_qubits();
        v_ = std::move(m);
    }

    GeneralizedMap(SignedMeasurePrepare m, std::string label = "MP") : label_(std::move(label)) {
        if (m.terms.empty()) throw InvariantError("measure-and-prepare map needs at least one term");
        n_ = m.terms.front().effect.num_qubits();
        Matrix sum = Matrix::Zero(Eigen::Index{1} << n_, Eigen::Index{1} << n_);
        for (const auto &t : m.terms) {
            detail::require_sign(t.sign);
            if (t.effect.num_qubits() != n_ || t.state.num_qubits() != n_) {
                throw DimensionError("measure-and-prepare terms must share a qubit count");
            }
            if (!detail::is_psd(t.effect, tol::structural)) throw InvariantError("POVM element is not PSD");
            if (!t.state.is_density_matrix(tol::structural)) {
                throw InvariantError("prepared state is not a density matrix");
            }
            sum += t.effect.matrix();
        }
        detail::check_completeness(sum, "POVM");
        v_ = std::move(m);
    }

    GeneralizedMap(SignedKraus m, std::string label = "K") : label_(std::move(label)) {
        if (m.terms.empty()) throw InvariantError("Kraus map needs at least one term");
        n_ = m.terms.front().k.num_qubits();
        Matrix sum = Matrix::Zero(Eigen::Index{1} << n_, Eigen::Index{1} << n_);
        for (const auto &t : m.terms) {
            detail::require_sign(t.sign);
            if (t.k.num_qubits() != n_) throw DimensionError("Kraus operators must share a qubit count");
            sum += t.k.matrix().adjoint() * t.k.matrix();
        }
        detail::check_completeness(sum, "Kraus");
        v_ = std::move(m);
    }

    GeneralizedMap(AncillaCircuit m, std::string label = "A") : label_(std::move(label)) {
        n_ = m.system_qubits;
        if (n_ == 0) throw InvariantError("ancilla circuit needs at least one system qubit");
        if (m.ancilla_init.num_qubits() != 1 || !m.ancilla_init.is_density_matrix(tol::structural)) {
            throw InvariantError("ancilla_init must be a single-qubit density matrix");
        }
        if (m.joint_unitary.num_qubits() != n_ + 1) {
            throw DimensionError("joint unitary must act on system + ancilla (" + std::to_string(n_ + 1) +
                                 " qubits)");
        }
        if (!m.joint_unitary.is_unitary(tol::structural)) throw InvariantError("joint operator is not unitary");
        if (m.measure_basis == Pauli::I) throw InvariantError("measurement basis must be X, Y or Z");
        detail::require_sign(m.signs[0]);
        detail::require_sign(m.signs[1]);
        if (m.feedback) {
            if (m.feedback->qubit >= n_) throw InvariantError("feedback qubit out of range");
            for (const auto &u : m.feedback->unitary) {
                if (u.num_qubits() != 1 || !u.is_unitary(tol::structural)) {
                    throw InvariantError("feedback must be a single-qubit unitary");
                }
            }
        }
        v_ = std::move(m);
    }

    [[nodiscard]] std::size_t num_qubits() const { return n_; }
    [[nodiscard]] const MapVariant &variant() const { return v_; }
    [[nodiscard]] const std::string &label() const { return label_; }

    template <class T>
    [[nodiscard]] const T *get_if() const {
        return std::get_if<T>(&v_);
    }

    /// Exact action on an operator.
    [[nodiscard]] Operator apply(const Operator &rho) const {
        if (rho.num_qubits() != n_) {
            throw DimensionError("map on " + std::to_string(n_) + " qubits applied to " +
                                 std::to_string(rho.num_qubits()) + "-qubit operator");
        }
        return std::visit([&](const auto &m) { return apply_impl(m, rho); }, v_);
    }

    [[nodiscard]] Superoperator to_superoperator() const {
        return ptm_of_map(n_, [this](const Operator &a) { return apply(a); });
    }

    /// Outcome branch μ of an ancilla circuit including feedback, unsigned.
    [[nodiscard]] Operator ancilla_branch(const AncillaCircuit &m, const Operator &rho, int mu) const {
        const Matrix &u = m.joint_unitary.matrix();
        const Matrix sigma = u * kron(rho, m.ancilla_init).matrix() * u.adjoint();
        Matrix out = detail::project_trace_ancilla(sigma, outcome_projector(m.measure_basis, mu).matrix());
        if (m.feedback) {
            const Matrix f = embed(m.feedback->unitary[static_cast<std::size_t>(mu)], {m.feedback->qubit}, n_).matrix();
            out = f * out * f.adjoint();
        }
        return Operator(std::move(out));
    }

    [[nodiscard]] CptpReport is_cptp() const {
        CptpReport r;
        r.signs_positive = std::visit([](const auto &m) { return all_positive(m); }, v_);
        const std::size_t d = std::size_t{1} << n_;
        Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
        double tdev = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
                const Operator out = apply(Operator(std::move(e)));
                choi.block(static_cast<Eigen::Index>(i * d), static_cast<Eigen::Index>(j * d),
                           static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) = out.matrix();
                tdev = std::max(tdev, std::abs(out.trace() - (i == j ? 1.0 : 0.0)));
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(choi, Eigen::EigenvaluesOnly);
        r.choi_min_eigenvalue = es.eigenvalues().minCoeff();
        r.trace_deviation = tdev;
        r.cptp = r.signs_positive && r.choi_min_eigenvalue >= -tol::choi && tdev <= tol::choi;
        return r;
    }

  private:
    static bool all_positive(const UnitaryChannel &) { return true; }
    static bool all_positive(const SignedMeasurePrepare &m) {
        for (const auto &t : m.terms) if (t.sign < 0) return false;
        return true;
    }
    static bool all_positive(const SignedKraus &m) {
        for (const auto &t : m.terms) if (t.sign < 0) return false;
        return true;
    }
    static bool all_positive(const AncillaCircuit &m) { return m.signs[0] > 0 && m.signs[1] > 0; }

    Operator apply_impl(const UnitaryChannel &m, const Operator &rho) const {
        return Operator(Matrix(m.u.matrix() * rho.matrix() * m.u.matrix().adjoint()));
    }
    Operator apply_impl(const SignedMeasurePrepare &m, const Operator &rho) const {
        Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
        for (const auto &t : m.terms) {
            out += static_cast<double>(t.sign) * hs_inner(t.effect, rho) * t.state.matrix();
        }
        return Operator(std::move(out));
    }
    Operator apply_impl(const SignedKraus &m, const Operator &rho) const {
        Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
        for (const auto &t : m.terms) {
            out += static_cast<double>(t.sign) * (t.k.matrix() * rho.matrix() * t.k.matrix().adjoint());
        }
        return Operator(std::move(out));
    }
    Operator apply_impl(const AncillaCircuit &m, const Operator &rho) const {
        Matrix out = static_cast<double>(m.signs[0]) * ancilla_branch(m, rho, 0).matrix();
        out += static_cast<double>(m.signs[1]) * ancilla_branch(m, rho, 1).matrix();
        return Operator(std::move(out));
    }

    MapVariant v_;
    std::size_t n_ = 0;
    std::string label_;
};

using MapPtr = std::shared_ptr<const GeneralizedMap>;

namespace maps {

using std::numbers::pi;

inline MapPtr unitary(const Operator &u, std::string label) {
    return std::make_shared<const GeneralizedMap>(UnitaryChannel{u}, std::move(label));
}

inline MapPtr identity(std::size_t n) {
    return unitary(Operator::identity(n), n == 1 ? "I" : "I^" + std::to_string(n));
}

inline MapPtr rz(double t, std::string label) { return unitary(gates::Rz(t), std::move(label)); }

/// A ↦ Tr(P A) ρ_{Pμ}; for P = I, A ↦ Tr(A) ρ_{Yμ}.
inline MapPtr peng(Pauli p, int mu) {
    const Operator &rho = PauliEigenbasis::get(p, mu).state;
    SignedMeasurePrepare m;
    if (p == Pauli::I) {
        m.terms.push_back({1, Operator::identity(1), rho});
    } else {
        m.terms.push_back({1, PauliEigenbasis::get(p, 0).state, rho});
        m.terms.push_back({-1, PauliEigenbasis::get(p, 1).state, rho});
    }
    return std::make_shared<const GeneralizedMap>(std::move(m), std::string("E_") + to_char(p) + std::to_string(mu));
}

/// Measure P and re-prepare the observed eigenstate (CPTP).
inline MapPtr grouped(Pauli p) {
    if (p == Pauli::I) throw InvariantError("grouped map needs X, Y or Z");
    SignedMeasurePrepare m;
    for (int mu = 0; mu < 2; ++mu) {
        const Operator &s = PauliEigenbasis::get(p, mu).state;
        m.terms.push_back({1, s, s});
    }
    return std::make_shared<const GeneralizedMap>(std::move(m), std::string("E_") + to_char(p));
}

/// |ρ_Z0⟫⟪ρ_Z0| - |ρ_Z1⟫⟪ρ_Z1|.
inline MapPtr ez_bar() {
    SignedMeasurePrepare m;
    for (int mu = 0; mu < 2; ++mu) {
        const Operator &s = PauliEigenbasis::get(Pauli::Z, mu).state;
        m.terms.push_back({mu == 0 ? 1 : -1, s, s});
    }
    return std::make_shared<const GeneralizedMap>(std::move(m), "Ebar_Z");
}

inline Operator plus_state() { return PauliEigenbasis::get(Pauli::X, 0).state; }

inline MapPtr mcz_mx(std::size_t m) {
    if (m < 1) throw InvariantError("mcz_mx_map requires m >= 1");
    return std::make_shared<const GeneralizedMap>(
        AncillaCircuit{m, plus_state(), gates::mcz(m + 1), Pauli::X, {1, -1}, std::nullopt},
        "E_MCZ-MX^(" + std::to_string(m) + ")");
}

inline MapPtr rzz_my(double theta) {
    return std::make_shared<const GeneralizedMap>(
        AncillaCircuit{1, plus_state(), gates::rzz(theta), Pauli::Y, {1, -1}, std::nullopt}, "E_RZZ-MY");
}

/// One unitary of a controlled sequence, acting on `targets` (indices into
/// the target register, first index most significant for `u`).
struct ControlledOp {
    std::vector<std::size_t> targets;
    Operator u;
};

/// W = U_M ⋯ U_1 on the target register.
inline Operator sequence_unitary(const std::vector<ControlledOp> &ops, std::size_t num_targets) {
    if (num_targets == 0) throw InvariantError("controlled sequence needs at least one target qubit");
    Operator w = Operator::identity(num_targets);
    for (const auto &op : ops) {
        if (!op.u.is_unitary(tol::structural)) throw InvariantError("controlled op is not unitary");
        for (auto t : op.targets) {
            if (t >= num_targets) {
                throw InvariantError("controlled op target " + std::to_string(t) + " outside target register of size " +
                                     std::to_string(num_targets));
            }
        }
        w = embed(op.u, op.targets, num_targets) * w;
    }
    return w;
}

/// Controlled-W with the control on the last qubit.
inline Operator ancilla_controlled(const Operator &w) {
    const std::size_t t = w.num_qubits();
    std::vector<std::size_t> order{t};
    for (std::size_t q = 0; q < t; ++q) order.push_back(q);
    return embed(gates::controlled(w), order, t + 1);
}

inline MapPtr e_v_mx(const std::vector<ControlledOp> &ops, std::size_t num_targets) {
    return std::make_shared<const GeneralizedMap>(
        AncillaCircuit{num_targets, plus_state(), ancilla_controlled(sequence_unitary(ops, num_targets)), Pauli::X,
                       {1, -1}, std::nullopt},
        "E_V-MX");
}

inline MapPtr e_v_mz(const std::vector<ControlledOp> &ops, std::size_t num_targets) {
    return std::make_shared<const GeneralizedMap>(
        AncillaCircuit{num_targets, plus_state(), ancilla_controlled(sequence_unitary(ops, num_targets)), Pauli::Z,
                       {1, -1}, std::nullopt},
        "E_V-MZ");
}

/// Acts on control (qubit 0) plus targets; Y-basis ancilla measurement with
/// R_Z(±π/2) feedback on the control.
inline MapPtr e_rzv(const std::vector<ControlledOp> &ops, std::size_t num_targets) {
    const Operator cw = ancilla_controlled(sequence_unitary(ops, num_targets));
    return std::make_shared<const GeneralizedMap>(
        AncillaCircuit{num_targets + 1, plus_state(), kron(Operator::identity(1), cw), Pauli::Y, {1, 1},
                       OutcomeFeedback{0, {gates::Rz(pi / 2), gates::Rz(-pi / 2)}}},
        "E_RZV");
}

} // namespace maps

} // namespace qcut
