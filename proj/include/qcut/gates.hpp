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

#include <cmath>
#include <numbers>
#include <random>

#include "qcut/operator.hpp"
#include "qcut/pauli.hpp"

namespace qcut::gates {

inline Operator I(std::size_t n = 1) { return Operator::identity(n); }
inline Operator X() { return pauli_matrix(Pauli::X); }
inline Operator Y() { return pauli_matrix(Pauli::Y); }
inline Operator Z() { return pauli_matrix(Pauli::Z); }

inline Operator H() {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << r, r, r, -r;
    return Operator(std::move(m));
}

inline Operator S() {
    Matrix m(2, 2);
    m << 1, 0, 0, imag_unit;
    return Operator(std::move(m));
}

/// exp(-i t Z / 2).
inline Operator Rz(double t) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::exp(-imag_unit * (t / 2));
    m(1, 1) = std::exp(imag_unit * (t / 2));
    return Operator(std::move(m));
}

inline Operator Rx(double t) {
    Matrix m(2, 2);
    m << std::cos(t / 2), -imag_unit * std::sin(t / 2), -imag_unit * std::sin(t / 2),
        std::cos(t / 2);
    return Operator(std::move(m));
}

inline Operator Ry(double t) {
    Matrix m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return Operator(std::move(m));
}

inline Operator diagonal(const Vector &d) { return Operator(Matrix(d.asDiagonal())); }

/// diag(1, ..., 1, e^{iθ}) on n qubits.
inline Operator mcp(std::size_t n, double theta) {
    Vector d = Vector::Ones(Eigen::Index{1} << n);
    d(d.size() - 1) = std::exp(imag_unit * theta);
    return diagonal(d);
}

/// diag(1, ..., 1, -1) on n qubits.
inline Operator mcz(std::size_t n) {
    Vector d = Vector::Ones(Eigen::Index{1} << n);
    d(d.size() - 1) = -1.0;
    return diagonal(d);
}

inline Operator cz() { return mcz(2); }
inline Operator cphase(double theta) { return mcp(2, theta); }

/// exp(-i θ/2 Z⊗...⊗Z) on n qubits.
inline Operator multi_z_rotation(std::size_t n, double theta) {
    const auto d = Eigen::Index{1} << n;
    Vector v(d);
    for (Eigen::Index s = 0; s < d; ++s) {
        const double parity = (std::popcount(static_cast<std::size_t>(s)) & 1) ? -1.0 : 1.0;
        v(s) = std::exp(-imag_unit * (theta / 2 * parity));
    }
    return diagonal(v);
}

inline Operator rzz(double theta) { return multi_z_rotation(2, theta); }

/// |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U with the control as qubit 0.
inline Operator controlled(const Operator &u) {
    const auto d = static_cast<Eigen::Index>(u.dim());
    Matrix m = Matrix::Zero(2 * d, 2 * d);
    m.topLeftCorner(d, d) = Matrix::Identity(d, d);
    m.bottomRightCorner(d, d) = u.matrix();
    return Operator(std::move(m));
}

/// CNOT with control qubit `c` and target `t` inside an n-qubit register.
inline Operator cnot(std::size_t c, std::size_t t, std::size_t n) {
    return embed(controlled(X()), {c, t}, n);
}

inline Operator cnot() { return controlled(X()); }

inline Operator swap() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return Operator(std::move(m));
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
inline Operator random_unitary(std::size_t n, std::mt19937_64 &rng) {
    const auto d = Eigen::Index{1} << n;
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const cplx rii = r(i, i);
        q.col(i) *= rii / std::abs(rii);
    }
    return Operator(std::move(q));
}

/// Random density matrix of full rank (normalized G G†).
inline Operator random_density(std::size_t n, std::mt19937_64 &rng) {
    const auto d = Eigen::Index{1} << n;
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return Operator(std::move(rho));
}

} // namespace qcut::gates
