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
#include <random>
#include <string>
#include <vector>

#include "qcut/cuts.hpp"

namespace qcut::suite {

using std::numbers::pi;

inline const std::vector<double> &theta_grid() {
    static const std::vector<double> g{0.0, pi / 6, -pi / 6, pi / 4, -pi / 4, pi / 2, -pi / 2, 1.234, pi};
    return g;
}

inline std::vector<Decomposition> wire_cuts() {
    return {cuts::wire_cut_ncc(), cuts::wire_cut_cc(Pauli::X), cuts::wire_cut_cc(Pauli::Y),
            cuts::wire_cut_cc(Pauli::Z)};
}

inline std::vector<Decomposition> mcz_grid(std::size_t max_n = limits::dense_qubit_cap()) {
    std::vector<Decomposition> out;
    for (std::size_t n = 2; n <= max_n; ++n) {
        for (std::size_t m = 1; m < n; ++m) out.push_back(cuts::mcz_decomposition(m, n - m));
    }
    return out;
}

inline std::vector<Decomposition> rzz_grid() {
    std::vector<Decomposition> out;
    for (double t : theta_grid()) {
        out.push_back(cuts::rzz_decomposition_a(t));
        out.push_back(cuts::rzz_decomposition_b(t));
    }
    return out;
}

inline std::vector<Decomposition> multi_z_grid(std::size_t max_n = 5) {
    std::vector<Decomposition> out;
    for (std::size_t n = 2; n <= std::min(max_n, limits::dense_qubit_cap()); ++n) {
        for (std::size_t m = 1; m < n; ++m) {
            for (double t : theta_grid()) out.push_back(cuts::multi_z_rotation_decomposition(m, n - m, t));
        }
    }
    return out;
}

/// CNOT(0→1) then CPHASE(θ) on (0, 2), control on qubit 0.
inline Decomposition cnot_cphase_sequence(double theta) {
    return cuts::controlled_sequence_decomposition({{{1}, gates::X()}, {{2}, gates::mcp(1, theta)}}, 3);
}

/// Seeded Haar-random controlled sequences.
inline Decomposition random_sequence(std::uint64_t seed, std::size_t num_qubits, std::size_t length) {
    std::mt19937_64 rng(seed);
    std::vector<cuts::SequenceOp> ops;
    for (std::size_t k = 0; k < length; ++k) {
        std::vector<std::size_t> qs;
        for (std::size_t q = 1; q < num_qubits; ++q) {
            if ((rng() & 1U) != 0U) qs.push_back(q);
        }
        if (qs.empty()) qs.push_back(1 + rng() % (num_qubits - 1));
        if (qs.size() > 2) qs.resize(2);
        if ((rng() & 1U) != 0U) std::swap(qs.front(), qs.back());
        ops.push_back({qs, gates::random_unitary(qs.size(), rng)});
    }
    return cuts::controlled_sequence_decomposition(ops, num_qubits);
}

inline std::vector<Decomposition> controlled_grid() {
    return {cnot_cphase_sequence(pi / 5), cnot_cphase_sequence(pi / 2), random_sequence(101, 4, 3),
            random_sequence(202, 3, 2)};
}

inline std::vector<Decomposition> all(std::size_t max_n = limits::dense_qubit_cap()) {
    std::vector<Decomposition> out;
    for (auto &&part : {wire_cuts(), mcz_grid(max_n), rzz_grid(), multi_z_grid(std::min<std::size_t>(max_n, 5)),
                        controlled_grid()}) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

/// Expected per-term CPTP flags for the built-in decompositions.
inline std::vector<bool> expected_cptp(const Decomposition &d) {
    const std::size_t n = d.terms.size();
    if (d.name == "wire_ncc") return {true, true, false, false, false, false, false, false};
    if (d.name == "wire_cc") return {true, false, false, false, false};
    if (d.name == "controlled_sequence") return {true, false, false, false};
    std::vector<bool> v(n, false);
    v[0] = v[1] = true;
    return v;
}

struct IdentityCheck {
    std::string name;
    double deviation;
    bool passed;
};

/// E_{RZZ-MY}(θ) = sinθ·Ē_Z and R_Z(θ) - R_Z(-θ) = sinθ·(R_Z(π/2) - R_Z(-π/2)).
inline std::vector<IdentityCheck> map_identities(double tolerance = tol::structural) {
    std::vector<IdentityCheck> out;
    const Superoperator ez = maps::ez_bar()->to_superoperator();
    const Superoperator zdiff =
        ptm_of_unitary(gates::Rz(pi / 2)) - ptm_of_unitary(gates::Rz(-pi / 2));
    for (double t : theta_grid()) {
        const double s = std::sin(t);
        const double d1 = max_abs_diff(maps::rzz_my(t)->to_superoperator(), s * ez);
        const double d2 = max_abs_diff(ptm_of_unitary(gates::Rz(t)) - ptm_of_unitary(gates::Rz(-t)), s * zdiff);
        const std::string th = qcut::detail::fmt(t);
        out.push_back({"E_RZZ-MY = sin*Ebar_Z theta=" + th, d1, d1 < tolerance});
        out.push_back({"R_Z reshuffle theta=" + th, d2, d2 < tolerance});
    }
    return out;
}

} // namespace qcut::suite
