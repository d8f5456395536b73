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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "qcut/channel.hpp"

namespace qcut {
namespace {

using std::numbers::pi;

const std::vector<double> kThetas{0.0, pi / 6, -pi / 6, pi / 4, -pi / 4, pi / 2, -pi / 2, 1.234};

Operator proj(const Vector &v) { return Operator::projector(v); }

Vector basis_ket(std::size_t n, std::size_t idx) {
    Vector v = Vector::Zero(Eigen::Index{1} << n);
    v(static_cast<Eigen::Index>(idx)) = 1.0;
    return v;
}

// Tr_a(Π_a σ) by explicit index summation, ancilla last.
Operator oracle_trace_out_ancilla(const Matrix &sigma, const Matrix &pa) {
    const Eigen::Index d = sigma.rows() / 2;
    const Matrix big = Eigen::kroneckerProduct(Matrix::Identity(d, d), pa);
    const Matrix m = big * sigma;
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    return Operator(out);
}

// Direct formula Σ_μ s_μ Tr_a(Π_μ U (ρ ⊗ |+⟩⟨+|) U†).
Operator oracle_ancilla_map(const Operator &u, const Operator &rho, Pauli basis, std::array<int, 2> s) {
    const Matrix sigma = u.matrix() * kron(rho, maps::plus_state()).matrix() * u.matrix().adjoint();
    Matrix out = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (int mu = 0; mu < 2; ++mu) {
        out += s[static_cast<std::size_t>(mu)] *
               oracle_trace_out_ancilla(sigma, PauliEigenbasis::get(basis, mu).state.matrix()).matrix();
    }
    return Operator(out);
}

RealMatrix outer(const Operator &a, const Operator &b) {
    return real_vectorize(a) * real_vectorize(b).transpose();
}

TEST(GeneralizedMap, UnitaryIdentityPtm) {
    EXPECT_LT(max_abs_diff(maps::identity(1)->to_superoperator(), Superoperator::identity(1)), 1e-15);
    EXPECT_THROW(GeneralizedMap(UnitaryChannel{Operator(Matrix::Zero(2, 2))}), InvariantError);
}

TEST(GeneralizedMap, PengMapIsOuterProduct) {
    // Ê_{Z0} = |ρ_Z0⟫⟪Z| where ⟪Z| = ⟪ρ_Z0| - ⟪ρ_Z1|.
    const auto &z0 = PauliEigenbasis::get(Pauli::Z, 0).state;
    const auto &z1 = PauliEigenbasis::get(Pauli::Z, 1).state;
    const RealMatrix want = outer(z0, z0) - outer(z0, z1);
    EXPECT_LT((maps::peng(Pauli::Z, 0)->to_superoperator().matrix() - want).cwiseAbs().maxCoeff(), 1e-15);
    for (auto p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        for (int mu = 0; mu < 2; ++mu) {
            const RealMatrix w = real_vectorize(PauliEigenbasis::get(p, mu).state) *
                                 real_vectorize(pauli_matrix(p)).transpose();
            EXPECT_LT((maps::peng(p, mu)->to_superoperator().matrix() - w).cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

TEST(GeneralizedMap, EzBarOuterProducts) {
    const auto &z0 = PauliEigenbasis::get(Pauli::Z, 0).state;
    const auto &z1 = PauliEigenbasis::get(Pauli::Z, 1).state;
    const RealMatrix want = outer(z0, z0) - outer(z1, z1);
    const RealMatrix got = maps::ez_bar()->to_superoperator().matrix();
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-15);
    // Nonzero only in the I<->Z block: (I,Z) and (Z,I) entries equal 1.
    EXPECT_NEAR(got(0, 3), 1.0, 1e-15);
    EXPECT_NEAR(got(3, 0), 1.0, 1e-15);
    EXPECT_NEAR(got.cwiseAbs().sum(), 2.0, 1e-14);
}

TEST(GeneralizedMap, InvariantsRejected) {
    SignedMeasurePrepare bad;
    bad.terms.push_back({1, PauliEigenbasis::get(Pauli::Z, 0).state, PauliEigenbasis::get(Pauli::Z, 0).state});
    EXPECT_THROW(GeneralizedMap{bad}, InvariantError);
    SignedMeasurePrepare badsign;
    badsign.terms.push_back({2, Operator::identity(1), PauliEigenbasis::get(Pauli::Z, 0).state});
    EXPECT_THROW(GeneralizedMap{badsign}, InvariantError);
    SignedKraus k;
    k.terms.push_back({1, gates::X()});
    k.terms.push_back({-1, gates::Z()});
    EXPECT_THROW(GeneralizedMap{k}, InvariantError);
    AncillaCircuit a{1, maps::plus_state(), gates::cz(), Pauli::X, {1, -1}, std::nullopt};
    a.joint_unitary = gates::mcz(3);
    EXPECT_THROW(GeneralizedMap{a}, DimensionError);
}

TEST(GeneralizedMap, SignFlipNegatesOneContribution) {
    SignedMeasurePrepare m;
    const auto &x0 = PauliEigenbasis::get(Pauli::X, 0).state;
    const auto &x1 = PauliEigenbasis::get(Pauli::X, 1).state;
    const auto &y0 = PauliEigenbasis::get(Pauli::Y, 0).state;
    m.terms = {{1, x0, y0}, {1, x1, x0}};
    SignedMeasurePrepare f = m;
    f.terms[1].sign = -1;
    const RealMatrix diff = GeneralizedMap(m).to_superoperator().matrix() - GeneralizedMap(f).to_superoperator().matrix();
    EXPECT_LT((diff - 2.0 * outer(x0, x1)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GeneralizedMap, SignedKrausMatchesConjugationSum) {
    SignedKraus k;
    const double c = std::sqrt(0.3), s = std::sqrt(0.7);
    k.terms.push_back({1, Operator(c * gates::I().matrix())});
    k.terms.push_back({-1, Operator(s * gates::X().matrix())});
    const GeneralizedMap m(k);
    const RealMatrix want =
        0.3 * RealMatrix::Identity(4, 4) - 0.7 * ptm_of_unitary(gates::X()).matrix();
    EXPECT_LT((m.to_superoperator().matrix() - want).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_FALSE(m.is_cptp().cptp);
}

TEST(MczMx, MatchesDirectFormula) {
    std::mt19937_64 rng(21);
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto map = maps::mcz_mx(m);
        for (int trial = 0; trial < 3; ++trial) {
            const Operator rho = gates::random_density(m, rng);
            const Operator want = oracle_ancilla_map(gates::mcz(m + 1), rho, Pauli::X, {1, -1});
            EXPECT_LT(max_abs_diff(map->apply(rho), want), 1e-12);
        }
    }
}

TEST(MczMx, BasisStateActions) {
    const Operator z0 = proj(basis_ket(1, 0));
    EXPECT_LT(max_abs_diff(maps::mcz_mx(1)->apply(z0), z0), 1e-15);
    const Operator z1 = proj(basis_ket(1, 1));
    EXPECT_LT(max_abs_diff(maps::mcz_mx(1)->apply(z1), cplx(-1.0) * z1), 1e-15);
    const Operator s11 = proj(basis_ket(2, 3));
    EXPECT_LT(max_abs_diff(maps::mcz_mx(2)->apply(s11), cplx(-1.0) * s11), 1e-15);
}

TEST(RzzMy, SinThetaTimesEzBar) {
    const RealMatrix ez = maps::ez_bar()->to_superoperator().matrix();
    for (double th : kThetas) {
        const RealMatrix got = maps::rzz_my(th)->to_superoperator().matrix();
        EXPECT_LT((got - std::sin(th) * ez).cwiseAbs().maxCoeff(), 1e-10) << th;
    }
    EXPECT_LT(maps::rzz_my(0.0)->to_superoperator().matrix().cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((maps::rzz_my(pi / 4)->to_superoperator().matrix() - std::sqrt(0.5) * ez).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RzReshuffle, DifferenceIdentity) {
    const RealMatrix base = ptm_of_unitary(gates::Rz(pi / 2)).matrix() - ptm_of_unitary(gates::Rz(-pi / 2)).matrix();
    for (double th : kThetas) {
        const RealMatrix lhs = ptm_of_unitary(gates::Rz(th)).matrix() - ptm_of_unitary(gates::Rz(-th)).matrix();
        EXPECT_LT((lhs - std::sin(th) * base).cwiseAbs().maxCoeff(), 1e-10) << th;
    }
}

TEST(ControlledSequence, VMxMatchesDirectFormulaForCnot) {
    const std::vector<maps::ControlledOp> ops{{{0}, gates::X()}};
    const auto map = maps::e_v_mx(ops, 1);
    const Operator cu = maps::ancilla_controlled(gates::X());
    // Oracle controlled-X with control last, built from projectors.
    const Matrix p0 = proj(basis_ket(1, 0)).matrix(), p1 = proj(basis_ket(1, 1)).matrix();
    const Matrix oracle = Eigen::kroneckerProduct(Matrix::Identity(2, 2), p0) +
                          Eigen::kroneckerProduct(gates::X().matrix(), p1);
    EXPECT_LT((cu.matrix() - oracle).cwiseAbs().maxCoeff(), 1e-15);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 3; ++t) {
        const Operator rho = gates::random_density(1, rng);
        EXPECT_LT(max_abs_diff(map->apply(rho), oracle_ancilla_map(Operator(oracle), rho, Pauli::X, {1, -1})), 1e-10);
    }
}

TEST(ControlledSequence, VMzOfIdentityIsZero) {
    const std::vector<maps::ControlledOp> ops{{{0}, gates::I()}};
    EXPECT_LT(maps::e_v_mz(ops, 2)->to_superoperator().matrix().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ControlledSequence, RzvFeedbackOnControl) {
    const std::vector<maps::ControlledOp> ops{{{0}, gates::X()}, {{1}, gates::Z()}};
    const auto map = maps::e_rzv(ops, 2);
    EXPECT_EQ(map->num_qubits(), 3U);
    EXPECT_TRUE(map->is_cptp().cptp);
    // Direct formula with R_Z(±π/2) on the control after the Y outcome.
    std::mt19937_64 rng(31);
    const Operator rho = gates::random_density(3, rng);
    const Operator joint = kron(gates::I(), maps::ancilla_controlled(maps::sequence_unitary(ops, 2)));
    const Matrix sigma = joint.matrix() * kron(rho, maps::plus_state()).matrix() * joint.matrix().adjoint();
    Matrix want = Matrix::Zero(8, 8);
    for (int mu = 0; mu < 2; ++mu) {
        const Matrix b = oracle_trace_out_ancilla(sigma, PauliEigenbasis::get(Pauli::Y, mu).state.matrix()).matrix();
        const Matrix f = kron(gates::Rz(mu == 0 ? pi / 2 : -pi / 2), gates::I(2)).matrix();
        want += f * b * f.adjoint();
    }
    EXPECT_LT(max_abs_diff(map->apply(rho), Operator(want)), 1e-12);
}

TEST(ControlledSequence, RegisterMismatch) {
    const std::vector<maps::ControlledOp> ops{{{2}, gates::X()}};
    EXPECT_THROW(maps::e_v_mx(ops, 2), InvariantError);
}

TEST(IsCptp, Flags) {
    std::mt19937_64 rng(1);
    EXPECT_TRUE(maps::unitary(gates::random_unitary(2, rng), "U")->is_cptp().cptp);
    EXPECT_FALSE(maps::ez_bar()->is_cptp().cptp);
    EXPECT_TRUE(maps::grouped(Pauli::Y)->is_cptp().cptp);
    for (auto p : {Pauli::X, Pauli::Z}) {
        EXPECT_FALSE(maps::peng(p, 0)->is_cptp().cptp);
        EXPECT_FALSE(maps::peng(p, 1)->is_cptp().cptp);
    }
    EXPECT_TRUE(maps::peng(Pauli::I, 0)->is_cptp().cptp);
    EXPECT_FALSE(maps::mcz_mx(2)->is_cptp().cptp);
    EXPECT_FALSE(maps::rzz_my(0.3)->is_cptp().cptp);
    // Sign structure alone decides even when the Choi test is borderline.
    const auto r = maps::rzz_my(0.0)->is_cptp();
    EXPECT_FALSE(r.signs_positive);
}

TEST(IsCptp, ChoiDiagnosticsForPhysicalMap) {
    const auto r = maps::grouped(Pauli::X)->is_cptp();
    EXPECT_TRUE(r.signs_positive);
    EXPECT_GE(r.choi_min_eigenvalue, -1e-12);
    EXPECT_LT(r.trace_deviation, 1e-12);
}

} // namespace
} // namespace qcut
