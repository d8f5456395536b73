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

#include "qcut/cuts.hpp"
#include "qcut/zx_builders.hpp"

namespace {

using namespace qcut;
using namespace qcut::zx;

Superoperator partial(const Decomposition &d, std::initializer_list<std::size_t> idx) {
    Decomposition e = d;
    e.terms.clear();
    for (auto i : idx) e.terms.push_back(d.terms[i]);
    return reconstruct(e);
}

// Protocol groups: the cc term, then (P0, P1) pairs in X, Y, Z order.
std::vector<Superoperator> groups(const Diagram &dg, const std::vector<ProtocolTerm> &pr) {
    const EdgeId e = *dg.find_edge("scissor");
    std::vector<Superoperator> g{pr[0].q * term_channel(dg, e, pr[0])};
    for (std::size_t k = 1; k + 1 < pr.size(); k += 2) {
        g.push_back(pr[k].q * term_channel(dg, e, pr[k]) + pr[k + 1].q * term_channel(dg, e, pr[k + 1]));
    }
    return g;
}

TEST(ZxCuts, MczGroupsMatchDecomposition) {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::size_t m = 1; m < n; ++m) {
            const auto g = groups(split_mcz_three_hboxes(n, m), wire_cut_protocol(Pauli::Y));
            const auto d = cuts::mcz_decomposition(m, n - m);
            EXPECT_LT(max_abs_diff(g[0], partial(d, {0, 1})), 1e-10) << n << m;
            EXPECT_LT(max_abs_diff(g[1], partial(d, {2, 3})), 1e-10) << n << m;
            EXPECT_LT(max_abs_diff(g[2], partial(d, {4, 5})), 1e-10) << n << m;
        }
    }
}

TEST(ZxCuts, RzzGroupsMatchBothVariants) {
    for (double t : {0.0, 0.5, -1.1, 1.234, 3.0}) {
        const auto g = groups(rzz_diagram(t), wire_cut_protocol(Pauli::X, true));
        for (const auto &d : {cuts::rzz_decomposition_a(t), cuts::rzz_decomposition_b(t)}) {
            EXPECT_LT(max_abs_diff(g[0], partial(d, {0, 1})), 1e-10) << d.name << t;
            EXPECT_LT(max_abs_diff(g[1], partial(d, {2, 3})), 1e-10) << d.name << t;
            EXPECT_LT(max_abs_diff(g[2], partial(d, {4, 5})), 1e-10) << d.name << t;
        }
    }
}

TEST(ZxCuts, WireGroupsMatchDecomposition) {
    for (auto cc : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const auto g = groups(wire(), wire_cut_protocol(cc));
        const auto d = cuts::wire_cut_cc(cc);
        EXPECT_LT(max_abs_diff(g[0], partial(d, {0})), 1e-10);
        EXPECT_LT(max_abs_diff(g[1], partial(d, {1, 2})), 1e-10);
        EXPECT_LT(max_abs_diff(g[2], partial(d, {3, 4})), 1e-10);
    }
}

} // namespace
