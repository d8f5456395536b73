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
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "qcut/operator.hpp"

namespace qcut {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
    switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw ParseError(std::string("invalid Pauli letter '") + c + "'");
    }
}

inline bool pauli_x_bit(Pauli p) { return p == Pauli::X || p == Pauli::Y; }
inline bool pauli_z_bit(Pauli p) { return p == Pauli::Y || p == Pauli::Z; }

inline Operator pauli_matrix(Pauli p) {
    Matrix m(2, 2);
    switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -imag_unit, imag_unit, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return Operator(std::move(m));
}

namespace detail {

/// Index of the Pauli string with bit masks (x, z) in the lexicographic
/// (I, X, Y, Z) basis. Mask bit n-1-q belongs to qubit q.
inline std::size_t pauli_index(std::size_t x, std::size_t z, std::size_t n) {
    static constexpr std::array<std::size_t, 4> letter{0, 3, 1, 2}; // (x,z) -> I,Z,X,Y
    std::size_t idx = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t bit = n - 1 - q;
        const std::size_t code = (((x >> bit) & 1U) << 1) | ((z >> bit) & 1U);
        idx = idx * 4 + letter[code];
    }
    return idx;
}

inline void pauli_masks(std::size_t idx, std::size_t n, std::size_t &x, std::size_t &z) {
    x = 0;
    z = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t l = (idx >> (2 * (n - 1 - q))) & 3U;
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        if (l == 1 || l == 2) x |= bit;
        if (l == 2 || l == 3) z |= bit;
    }
}

/// Lookup from (x << n | z) to Pauli index; cached per qubit count.
inline const std::vector<std::uint32_t> &pauli_index_table(std::size_t n) {
    static const auto tables = [] {
        std::array<std::vector<std::uint32_t>, limits::max_superoperator_qubits + 1> t;
        for (std::size_t k = 0; k <= limits::max_superoperator_qubits; ++k) {
            const std::size_t d = std::size_t{1} << k;
            t[k].resize(d * d);
            for (std::size_t x = 0; x < d; ++x) {
                for (std::size_t z = 0; z < d; ++z) {
                    t[k][(x << k) | z] = static_cast<std::uint32_t>(pauli_index(x, z, k));
                }
            }
        }
        return t;
    }();
    if (n > limits::max_superoperator_qubits) {
        throw SizeError("Pauli basis on " + std::to_string(n) + " qubits exceeds cap of " +
                        std::to_string(limits::max_superoperator_qubits));
    }
    return tables[n];
}

inline cplx i_power(unsigned k) {
    switch (k & 3U) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

inline void walsh_hadamard(cplx *v, std::size_t d) {
    for (std::size_t h = 1; h < d; h <<= 1) {
        for (std::size_t i = 0; i < d; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const cplx a = v[j];
                const cplx b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

} // namespace detail

class PauliString {
  public:
    explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {
        if (letters_.empty()) {
            throw InvariantError("Pauli string must have at least one letter");
        }
    }

    static PauliString parse(std::string_view s) {
        std::vector<Pauli> l;
        l.reserve(s.size());
        for (char c : s) {
            l.push_back(pauli_from_char(c));
        }
        if (l.empty()) {
            throw ParseError("empty Pauli string");
        }
        return PauliString(std::move(l));
    }

    static PauliString from_index(std::size_t idx, std::size_t n) {
        std::vector<Pauli> l(n);
        for (std::size_t q = 0; q < n; ++q) {
            l[q] = static_cast<Pauli>((idx >> (2 * (n - 1 - q))) & 3U);
        }
        return PauliString(std::move(l));
    }

    [[nodiscard]] std::size_t size() const { return letters_.size(); }
    [[nodiscard]] const std::vector<Pauli> &letters() const { return letters_; }
    [[nodiscard]] Pauli operator[](std::size_t q) const { return letters_.at(q); }

    [[nodiscard]] std::size_t index() const {
        std::size_t idx = 0;
        for (auto p : letters_) {
            idx = idx * 4 + static_cast<std::size_t>(p);
        }
        return idx;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s;
        for (auto p : letters_) {
            s.push_back(to_char(p));
        }
        return s;
    }

    [[nodiscard]] Operator to_operator() const {
        Operator out;
        for (auto p : letters_) {
            out = kron(out, pauli_matrix(p));
        }
        return out;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;

  private:
    std::vector<Pauli> letters_;
};

/// Normalized Pauli basis element P / sqrt(2^n) with basis index `idx`.
inline Operator pauli_basis_element(std::size_t idx, std::size_t n) {
    std::size_t x = 0, z = 0;
    detail::pauli_masks(idx, n, x, z);
    const std::size_t d = std::size_t{1} << n;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    const cplx phase = detail::i_power(static_cast<unsigned>(std::popcount(x & z)));
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < d; ++s) {
        const double sign = (std::popcount(z & s) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(s ^ x), static_cast<Eigen::Index>(s)) = phase * sign * norm;
    }
    return Operator(std::move(m));
}

/// Coefficients Tr(P̄_i A) in the normalized Pauli basis; O(n 4^n).
inline Vector vectorize(const Operator &a) {
    const std::size_t n = a.num_qubits();
    const auto &table = detail::pauli_index_table(n);
    const std::size_t d = a.dim();
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    Vector out(static_cast<Eigen::Index>(d * d));
    std::vector<cplx> v(d);
    for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t t = 0; t < d; ++t) {
            v[t] = a(t, t ^ x);
        }
        detail::walsh_hadamard(v.data(), d);
        for (std::size_t z = 0; z < d; ++z) {
            const cplx phase = detail::i_power(static_cast<unsigned>(std::popcount(x & z)));
            out(table[(x << n) | z]) = phase * v[z] * norm;
        }
    }
    return out;
}

inline Operator devectorize(const Vector &c) {
    const auto len = static_cast<std::size_t>(c.size());
    if (!is_power_of_two(len) || (std::countr_zero(len) & 1) != 0) {
        throw DimensionError("Pauli coefficient vector length " + std::to_string(len) +
                             " is not a power of four");
    }
    const std::size_t n = static_cast<std::size_t>(std::countr_zero(len)) / 2;
    const auto &table = detail::pauli_index_table(n);
    const std::size_t d = std::size_t{1} << n;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    std::vector<cplx> u(d);
    for (std::size_t x = 0; x < d; ++x) {
        for (std::size_t z = 0; z < d; ++z) {
            u[z] = c(table[(x << n) | z]) *
                   detail::i_power(static_cast<unsigned>(std::popcount(x & z)));
        }
        detail::walsh_hadamard(u.data(), d);
        for (std::size_t t = 0; t < d; ++t) {
            m(static_cast<Eigen::Index>(t ^ x), static_cast<Eigen::Index>(t)) = u[t] * norm;
        }
    }
    return Operator(std::move(m));
}

struct PauliEigenstate {
    int sign;
    Operator state;
};

/// Single-qubit Pauli eigenstates ρ_{Pμ} with eigenvalue signs a_{Pμ}.
/// The I entries reuse the Y eigenstates with sign +1.
class PauliEigenbasis {
  public:
    static const PauliEigenstate &get(Pauli p, int mu) {
        if (mu != 0 && mu != 1) {
            throw InvariantError("eigenstate index must be 0 or 1");
        }
        static const std::array<PauliEigenstate, 8> table = build();
        return table[static_cast<std::size_t>(p) * 2 + static_cast<std::size_t>(mu)];
    }

    static Vector ket(Pauli p, int mu) {
        const double r = 1.0 / std::sqrt(2.0);
        Vector v(2);
        const cplx s = (mu == 0) ? 1.0 : -1.0;
        switch (p) {
        case Pauli::X: v << r, s * r; break;
        case Pauli::I:
        case Pauli::Y: v << r, s * imag_unit * r; break;
        case Pauli::Z:
            if (mu == 0) v << 1, 0;
            else v << 0, 1;
            break;
        }
        return v;
    }

  private:
    static std::array<PauliEigenstate, 8> build() {
        std::array<PauliEigenstate, 8> t{};
        for (int p = 0; p < 4; ++p) {
            for (int mu = 0; mu < 2; ++mu) {
                const auto pp = static_cast<Pauli>(p);
                const int sign = (pp == Pauli::I || mu == 0) ? 1 : -1;
                t[static_cast<std::size_t>(p * 2 + mu)] =
                    PauliEigenstate{sign, Operator::projector(ket(pp, mu))};
            }
        }
        return t;
    }
};

} // namespace qcut
