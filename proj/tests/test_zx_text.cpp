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

#include "qcut/gates.hpp"
#include "qcut/zx_text.hpp"

namespace qcut::zx {
namespace {

TEST(Expression, Arithmetic) {
    EXPECT_NEAR(parse_real("pi/2"), pi / 2, 1e-15);
    EXPECT_NEAR(parse_real("-pi/4"), -pi / 4, 1e-15);
    EXPECT_NEAR(parse_real("sqrt2/2"), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(parse_real("2*(1+3)^2"), 32.0, 1e-12);
    EXPECT_NEAR(parse_real("1.5e-3"), 1.5e-3, 1e-18);
    EXPECT_LT(std::abs(parse_complex("exp(i*pi)") + 1.0), 1e-15);
    EXPECT_LT(std::abs(parse_complex("1-2*i") - cplx(1, -2)), 1e-15);
    EXPECT_THROW(parse_real("i"), ParseError);
    EXPECT_THROW(parse_real("2*"), ParseError);
    EXPECT_THROW(parse_real("foo"), ParseError);
    EXPECT_THROW(parse_real("(1"), ParseError);
}

TEST(DiagramText, CnotWithGoldenMatrix) {
    const char *src = R"(
# CNOT as a Z-X pair
diagram cnot
in a
in b
z c
x t
out oa
out ob
edge a c
edge b t
edge c t
edge c oa
edge t ob
scalar sqrt2
matrix 4 4
1 0 0 0
0 1 0 0
0 0 0 1
0 0 1 0
)";
    const DiagramFile f = parse_diagram_text(src);
    ASSERT_EQ(f.diagrams.size(), 1U);
    const auto res = run_checks(f);
    ASSERT_EQ(res.size(), 1U);
    EXPECT_TRUE(res[0].passed) << res[0].deviation;
}

TEST(DiagramText, PairComparisonUpToScalar) {
    const char *src = R"(
diagram lhs
in a
h h1
out b
edge a h1
edge h1 b
diagram rhs
in a
z z1 0
x x1 pi/2
z z2 0
out b
edge a z1
edge z1 x1
edge x1 z2
edge z2 b
compare scalar
expect lhs
)";
    // Euler decomposition of H up to a global scalar.
    const DiagramFile f = parse_diagram_text(src);
    const auto res = run_checks(f);
    ASSERT_EQ(res.size(), 1U);
    EXPECT_FALSE(res[0].passed);
}

TEST(DiagramText, EulerHadamard) {
    const char *src = R"(
diagram h
in a
h h1
out b
edge a h1
edge h1 b
diagram euler
in a
z z1 pi/2
x x1 pi/2
z z2 pi/2
out b
edge a z1
edge z1 x1
edge x1 z2
edge z2 b
compare scalar
expect h
)";
    const auto res = run_checks(parse_diagram_text(src));
    ASSERT_EQ(res.size(), 1U);
    EXPECT_TRUE(res[0].passed) << res[0].deviation;
}

TEST(DiagramText, Errors) {
    try {
        parse_diagram_text("in a\nout b\nedge a c\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3U);
    }
    EXPECT_THROW(parse_diagram_text("z a\nz a\n"), ParseError);
    EXPECT_THROW(parse_diagram_text("blob a\n"), ParseError);
    EXPECT_THROW(parse_diagram_text("in a\nz b\n"), ParseError);
    EXPECT_THROW(parse_diagram_text("z a pi/\n"), ParseError);
    EXPECT_THROW(parse_diagram_text("in a\nout b\nedge a b\nmatrix 2 2\n1 0\n"), ParseError);
    EXPECT_THROW(parse_diagram_text("expect other\n"), ParseError);
}

} // namespace
} // namespace qcut::zx
