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

#include <functional>

#include "qcut/pauli.hpp"

namespace qcut {

/// Pauli transfer matrix of a Hermiticity-preserving linear map, stored real.
class Superoperator {
  public:
    Superoperator() : n_(0), m_(RealMatrix::Identity(1, 1)) {}

    Superoperator(std::size_t num_qubits, RealMatrix m) : n_(num_qubits), m_(std::move(m)) {
        if (n_ > limits::max_superoperator_qubits) {
            throw SizeError("superoperator on " + std::to_string(n_) + " qubits exceeds cap of " +
                            std::to_string(limits::max_superoperator_qubits));
        }
        const auto d = Eigen::Index{1} << (2 * n_);
        if (m_.rows() != d || m_.cols() != d) {
            throw DimensionError("superoperator on " + std::to_string(n_) + " qubits must be " +
                                 std::to_string(d) + "x" + std::to_string(d));
        }
    }

    static Superoperator identity(std::size_t n) {
        const auto d = Eigen::Index{1} << (2 * n);
        return {n, RealMatrix::Identity(d, d)};
    }

    static Superoperator zero(std::size_t n) {
        const auto d = Eigen::Index{1} << (2 * n);
        return {n, RealMatrix::Zero(d, d)};
    }

    [[nodiscard]] std::size_t num_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] const RealMatrix &matrix() const { return m_; }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    /// Action on an operator through its Pauli coefficients.
    [[nodiscard]] Operator apply(const Operator &a) const {
        if (a.num_qubits() != n_) {
            throw DimensionError("superoperator/operator qubit count mismatch");
        }
        const Vector v = m_.cast<cplx>() * vectorize(a);
        return devectorize(v);
    }

    /// Composition: (a * b) applies b first.
    friend Superoperator operator*(const Superoperator &a, const Superoperator &b) {
        check_same(a, b);
        return {a.n_, a.m_ * b.m_};
    }
    friend Superoperator operator+(const Superoperator &a, const Superoperator &b) {
        check_same(a, b);
        return {a.n_, a.m_ + b.m_};
    }
    friend Superoperator operator-(const Superoperator &a, const Superoperator &b) {
        check_same(a, b);
        return {a.n_, a.m_ - b.m_};
    }
    friend Superoperator operator*(double s, const Superoperator &a) { return {a.n_, s * a.m_}; }

  private:
    static void check_same(const Superoperator &a, const Superoperator &b) {
        if (a.n_ != b.n_) {
            throw DimensionError("superoperator qubit count mismatch: " + std::to_string(a.n_) +
                                 " vs " + std::to_string(b.n_));
        }
    }

    std::size_t n_;
    RealMatrix m_;
};

inline double max_abs_diff(const Superoperator &a, const Superoperator &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError("max_abs_diff qubit count mismatch");
    }
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

inline Superoperator kron(const Superoperator &a, const Superoperator &b) {
    const std::size_t n = a.num_qubits() + b.num_qubits();
    if (n > limits::max_superoperator_qubits) {
        throw SizeError("superoperator kron on " + std::to_string(n) + " qubits exceeds cap of " +
                        std::to_string(limits::max_superoperator_qubits));
    }
    return {n, RealMatrix(Eigen::kroneckerProduct(a.matrix(), b.matrix()))};
}

using OperatorMap = std::function<Operator(const Operator &)>;

/// PTM of the linear map `f` on n qubits. Column j is vec(f(P̄_j)); throws
/// InvariantError if any entry has an imaginary part above tolerance.
inline Superoperator ptm_of_map(std::size_t n, const OperatorMap &f) {
    if (n > limits::max_superoperator_qubits) {
        throw SizeError("superoperator on " + std::to_string(n) + " qubits exceeds cap of " +
                        std::to_string(limits::max_superoperator_qubits));
    }
    const std::size_t d2 = std::size_t{1} << (2 * n);
    RealMatrix m(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2));
    for (std::size_t j = 0; j < d2; ++j) {
        const Operator out = f(pauli_basis_element(j, n));
        if (out.num_qubits() != n) {
            throw DimensionError("map changed the qubit count");
        }
        const Vector col = vectorize(out);
        const double im = col.imag().cwiseAbs().maxCoeff();
        if (im > tol::structural) {
            throw InvariantError("map is not Hermiticity preserving (imaginary PTM entry " +
                                 std::to_string(im) + ")");
        }
        m.col(static_cast<Eigen::Index>(j)) = col.real();
    }
    return {n, std::move(m)};
}

/// PTM of A -> K A K† without a unitarity check.
inline Superoperator ptm_of_conjugation(const Operator &k) {
    const Matrix km = k.matrix();
    const Matrix kd = km.adjoint();
    return ptm_of_map(k.num_qubits(), [&](const Operator &a) {
        return Operator(Matrix(km * a.matrix() * kd));
    });
}

inline Superoperator ptm_of_unitary(const Operator &u) {
    if (!u.is_unitary(tol::structural)) {
        throw InvariantError("ptm_of_unitary requires a unitary operator");
    }
    return ptm_of_conjugation(u);
}

/// Column vector |A⟫ as real coefficients; A must be Hermitian.
inline RealVector real_vectorize(const Operator &a) {
    const Vector v = vectorize(a);
    if (v.imag().cwiseAbs().maxCoeff() > tol::structural) {
        throw InvariantError("operator is not Hermitian");
    }
    return v.real();
}

} // namespace qcut
