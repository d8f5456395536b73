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

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "qcut/error.hpp"

namespace qcut {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double structural = 1e-10;
inline constexpr double round_trip = 1e-12;
inline constexpr double choi = 1e-9;
inline constexpr double reconstruction = 1e-9;
} // namespace tol

namespace limits {
inline constexpr std::size_t max_state_qubits = 14;
inline constexpr std::size_t max_superoperator_qubits = 7;
inline constexpr std::size_t default_dense_qubits = 6;

/// Qubit cap for dense verification (decomposition targets, exact
/// expectation values). Overridden by QCUT_MAX_QUBITS, clamped to [1, 7].
inline std::size_t dense_qubit_cap() {
    if (const char *env = std::getenv("QCUT_MAX_QUBITS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return std::min<std::size_t>(static_cast<std::size_t>(v),
                                         max_superoperator_qubits);
        }
    }
    return default_dense_qubits;
}
} // namespace limits

inline constexpr cplx imag_unit{0.0, 1.0};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::size_t log2_exact(std::size_t v) {
    if (!is_power_of_two(v)) {
        throw DimensionError("dimension " + std::to_string(v) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(v));
}

/// Dense square complex matrix on n qubits. Qubit 0 is the most significant
/// bit of the row/column index.
class Operator {
  public:
    Operator() : m_(Matrix::Identity(1, 1)) {}

    explicit Operator(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) {
            throw DimensionError("operator must be square, got " + std::to_string(m_.rows()) +
                                 "x" + std::to_string(m_.cols()));
        }
        const auto n = log2_exact(static_cast<std::size_t>(m_.rows()));
        if (n > limits::max_state_qubits) {
            throw SizeError("operator on " + std::to_string(n) + " qubits exceeds cap of " +
                            std::to_string(limits::max_state_qubits));
        }
    }

    static Operator zero(std::size_t num_qubits) {
        const auto d = Eigen::Index{1} << num_qubits;
        return Operator(Matrix::Zero(d, d));
    }

    static Operator identity(std::size_t num_qubits) {
        const auto d = Eigen::Index{1} << num_qubits;
        return Operator(Matrix::Identity(d, d));
    }

    /// Throws InvariantError unless U†U = I within `tolerance`.
    static Operator unitary(Matrix m, double tolerance = tol::structural) {
        Operator u(std::move(m));
        if (!u.is_unitary(tolerance)) {
            throw InvariantError("matrix is not unitary within " + std::to_string(tolerance));
        }
        return u;
    }

    /// |v><v| / <v|v>.
    static Operator projector(const Vector &ket) {
        const double norm2 = ket.squaredNorm();
        if (norm2 == 0.0) {
            throw InvariantError("cannot build a projector from the zero vector");
        }
        return Operator(ket * ket.adjoint() / norm2);
    }

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    [[nodiscard]] std::size_t num_qubits() const { return log2_exact(dim()); }
    [[nodiscard]] const Matrix &matrix() const { return m_; }
    [[nodiscard]] cplx operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    [[nodiscard]] Operator adjoint() const { return Operator(m_.adjoint()); }
    [[nodiscard]] cplx trace() const { return m_.trace(); }

    [[nodiscard]] bool is_unitary(double tolerance = tol::structural) const {
        const Matrix d = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
        return d.cwiseAbs().maxCoeff() <= tolerance;
    }

    [[nodiscard]] bool is_hermitian(double tolerance = tol::structural) const {
        return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
    }

    /// Hermitian, positive semidefinite and unit trace.
    [[nodiscard]] bool is_density_matrix(double tolerance = tol::structural) const {
        if (!is_hermitian(tolerance) || std::abs(trace() - 1.0) > tolerance) {
            return false;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -tolerance;
    }

    friend Operator operator*(const Operator &a, const Operator &b) {
        if (a.dim() != b.dim()) {
            throw DimensionError("operator product dimension mismatch");
        }
        return Operator(a.m_ * b.m_);
    }
    friend Operator operator+(const Operator &a, const Operator &b) {
        if (a.dim() != b.dim()) {
            throw DimensionError("operator sum dimension mismatch");
        }
        return Operator(a.m_ + b.m_);
    }
    friend Operator operator-(const Operator &a, const Operator &b) {
        if (a.dim() != b.dim()) {
            throw DimensionError("operator difference dimension mismatch");
        }
        return Operator(a.m_ - b.m_);
    }
    friend Operator operator*(cplx s, const Operator &a) { return Operator(s * a.m_); }

  private:
    Matrix m_;
};

inline double max_abs_diff(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("max_abs_diff dimension mismatch");
    }
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Kronecker product; `a` acts on the high-order (upper) qubits.
inline Operator kron(const Operator &a, const Operator &b) {
    const auto n = a.num_qubits() + b.num_qubits();
    if (n > limits::max_state_qubits) {
        throw SizeError("kron result on " + std::to_string(n) + " qubits exceeds cap of " +
                        std::to_string(limits::max_state_qubits));
    }
    return Operator(Matrix(Eigen::kroneckerProduct(a.matrix(), b.matrix())));
}

inline Operator kron_all(std::span<const Operator> ops) {
    Operator out;
    for (const auto &op : ops) {
        out = kron(out, op);
    }
    return out;
}

/// Hilbert-Schmidt inner product Tr(a† b).
inline cplx hs_inner(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("hs_inner dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    return (a.matrix().conjugate().cwiseProduct(b.matrix())).sum();
}

namespace detail {

inline std::vector<std::size_t> checked_qubit_set(std::span<const std::size_t> qubits,
                                                  std::size_t n, bool sort) {
    std::vector<std::size_t> q(qubits.begin(), qubits.end());
    for (auto k : q) {
        if (k >= n) {
            throw InvariantError("qubit index " + std::to_string(k) + " out of range for " +
                                 std::to_string(n) + " qubits");
        }
    }
    std::vector<std::size_t> s = q;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw InvariantError("repeated qubit index");
    }
    return sort ? s : q;
}

/// Scatter the bits of `value` (most significant first) onto `positions`,
/// where a position p is qubit p of an n-qubit index.
inline std::size_t scatter_bits(std::size_t value, std::span<const std::size_t> positions,
                                std::size_t n) {
    std::size_t out = 0;
    const std::size_t k = positions.size();
    for (std::size_t i = 0; i < k; ++i) {
        if ((value >> (k - 1 - i)) & 1U) {
            out |= std::size_t{1} << (n - 1 - positions[i]);
        }
    }
    return out;
}

} // namespace detail

/// Partial trace keeping qubits `keep` (any order; result uses ascending
/// qubit order).
inline Operator partial_trace(const Operator &a, std::span<const std::size_t> keep) {
    const std::size_t n = a.num_qubits();
    const auto kept = detail::checked_qubit_set(keep, n, true);
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) {
            traced.push_back(q);
        }
    }
    const std::size_t dk = std::size_t{1} << kept.size();
    const std::size_t dt = std::size_t{1} << traced.size();
    std::vector<std::size_t> kept_idx(dk), traced_idx(dt);
    for (std::size_t i = 0; i < dk; ++i) {
        kept_idx[i] = detail::scatter_bits(i, kept, n);
    }
    for (std::size_t t = 0; t < dt; ++t) {
        traced_idx[t] = detail::scatter_bits(t, traced, n);
    }
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t r = 0; r < dk; ++r) {
        for (std::size_t c = 0; c < dk; ++c) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                acc += a(kept_idx[r] | traced_idx[t], kept_idx[c] | traced_idx[t]);
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return Operator(std::move(out));
}

inline Operator partial_trace(const Operator &a, std::initializer_list<std::size_t> keep) {
    return partial_trace(a, std::span<const std::size_t>(keep.begin(), keep.size()));
}

/// Embed `u` acting on `targets` (targets[0] is u's most significant qubit)
/// into an n-qubit operator that is the identity elsewhere.
inline Operator embed(const Operator &u, std::span<const std::size_t> targets, std::size_t n) {
    const auto t = detail::checked_qubit_set(targets, n, false);
    if (u.num_qubits() != t.size()) {
        throw DimensionError("embed: operator acts on " + std::to_string(u.num_qubits()) +
                             " qubits but " + std::to_string(t.size()) + " targets given");
    }
    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < n; ++q) {
        if (std::find(t.begin(), t.end(), q) == t.end()) {
            rest.push_back(q);
        }
    }
    const std::size_t du = u.dim();
    const std::size_t dr = std::size_t{1} << rest.size();
    const auto d = Eigen::Index{1} << n;
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t e = 0; e < dr; ++e) {
        const std::size_t base = detail::scatter_bits(e, rest, n);
        for (std::size_t r = 0; r < du; ++r) {
            const auto row = static_cast<Eigen::Index>(base | detail::scatter_bits(r, t, n));
            for (std::size_t c = 0; c < du; ++c) {
                const auto col = static_cast<Eigen::Index>(base | detail::scatter_bits(c, t, n));
                out(row, col) = u(r, c);
            }
        }
    }
    return Operator(std::move(out));
}

inline Operator embed(const Operator &u, std::initializer_list<std::size_t> targets,
                      std::size_t n) {
    return embed(u, std::span<const std::size_t>(targets.begin(), targets.size()), n);
}

} // namespace qcut
