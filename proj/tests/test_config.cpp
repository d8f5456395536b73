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

#include "qcut/qcut.hpp"

namespace {

using namespace qcut;
using std::numbers::pi;

const char *kRzz = R"({
  "decomposition": {"name": "rzz_b", "theta": "pi/2"},
  "state": "plus",
  "observable": "XX",
  "shots": 2000
})";

TEST(Config, ParsesAndBuilds) {
    const auto c = parse_config(kRzz);
    EXPECT_EQ(c.decomposition.name, "rzz_b");
    EXPECT_DOUBLE_EQ(c.decomposition.theta, pi / 2);
    const auto s = make_spec(c, 4);
    EXPECT_EQ(s.seed, 4u);
    EXPECT_EQ(s.shots, 2000u);
    EXPECT_NEAR(one_norm(s.decomposition), 3.0, 1e-12);
    EXPECT_LT(max_abs_diff(s.initial_state[0], PauliEigenbasis::get(Pauli::X, 0).state), 1e-15);
    EXPECT_LT(max_abs_diff(s.observable[1], gates::X()), 1e-15);
}

TEST(Config, AllSelectors) {
    const char *docs[] = {
        R"({"decomposition": {"name": "wire_ncc"}, "observable": "Z", "shots": 1})",
        R"({"decomposition": {"name": "wire_cc", "cc_basis": "X"}, "observable": "Z", "shots": 1})",
        R"({"decomposition": {"name": "mcz", "m": 2, "mprime": 1}, "state": "110", "observable": "ZZZ", "shots": 1})",
        R"({"decomposition": {"name": "rzz_a", "theta": 0.3}, "observable": "ZZ", "shots": 1, "pre": "HS"})",
        R"({"decomposition": {"name": "multi_z", "m": 1, "mprime": 2, "theta": 1.1}, "observable": "XZZ", "shots": 1})",
        R"({"decomposition": {"name": "controlled_sequence", "num_qubits": 3,
            "ops": [{"qubits": [1], "gate": "X"}, {"qubits": [2], "gate": "phase", "theta": "pi/5"},
                    {"qubits": [2, 1], "random": 7},
                    {"qubits": [1], "matrix": [[0, 1], [1, 0]]}]},
           "state": [[[1, 0], [0, 0]], [[0.5, 0.5], [0.5, 0.5]], [[0.5, [0, -0.5]], [[0, 0.5], 0.5]]],
           "observable": "XZY", "shots": 1})",
    };
    for (const char *d : docs) {
        const auto s = make_spec(parse_config(d), 1);
        EXPECT_TRUE(verify(s.decomposition).passed) << d;
        EXPECT_NO_THROW(validate(s));
    }
}

std::string error_of(const std::string &doc) {
    try {
        make_spec(parse_config(doc), 1);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

TEST(Config, FieldAnchoredErrors) {
    EXPECT_EQ(error_of("{\n  \"decomposition\": {\"name\": \"rzz_b\"},\n  \"colour\": 3\n}"),
              "line 3: field 'colour': unknown field");
    EXPECT_NE(error_of(R"({"decomposition": {"name": "rzz_b", "thetta": 1}})").find("decomposition.thetta"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "nope"}, "observable": "Z", "shots": 1})")
                  .find("decomposition.name"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "rzz_b", "theta": "pi/"}})").find("decomposition.theta"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "rzz_b"}, "observable": "XX", "shots": 0})").find("shots"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "rzz_b"}, "observable": "XX", "shots": -4})").find("shots"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "rzz_b"}, "observable": "XQ", "shots": 1})").find("observable"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "rzz_b"}, "observable": "XX", "state": "0x", "shots": 1})")
                  .find("state"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"decomposition": {"name": "controlled_sequence", "num_qubits": 3,
                            "ops": [{"qubits": [1], "gate": "X", "random": 2}]}})")
                  .find("decomposition.ops[0]"),
              std::string::npos);
}

TEST(Config, SyntaxErrorLine) {
    try {
        parse_config("{\n  \"shots\": 3,\n  oops\n}");
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Report, TwelveDigitsAndSchema) {
    EXPECT_EQ(fmt12(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(round12(2.0 / 3.0), 0.666666666667);
    auto s = make_spec(parse_config(kRzz), 9);
    const auto r = run(s);
    const auto j = nlohmann::json::parse(report_text(r));
    for (const char *k : {"schema", "decomposition", "parameters", "seed", "shots", "batch_size", "sign_tracking",
                          "gamma", "estimate", "standard_error", "variance", "max_abs_contribution", "exact_value",
                          "terms"}) {
        EXPECT_TRUE(j.contains(k)) << k;
    }
    EXPECT_EQ(j["gamma"].get<double>(), 3.0);
    EXPECT_EQ(j["terms"].size(), 6u);
    EXPECT_EQ(report_text(r), report_text(run(s)));
    const std::string csv = batches_csv(r);
    EXPECT_EQ(csv.rfind("batch,shots,partial_mean\n", 0), 0u);
}

TEST(Report, NormsRowsHaveFiveColumns) {
    for (const auto &d : suite::all(4)) {
        const std::string row = norms_row(d);
        EXPECT_EQ(std::count(row.begin(), row.end(), ','), 4) << row;
    }
    EXPECT_EQ(norms_row(cuts::wire_cut_ncc()), "wire_ncc,-,4,8,no\n");
    EXPECT_EQ(norms_row(cuts::wire_cut_cc()), "wire_cc,cc=Y,3,5,yes\n");
    EXPECT_EQ(norms_row(cuts::rzz_decomposition_b(pi / 6)), "rzz_b,theta=0.523598775598,2,6,no\n");
}

TEST(Suite, ExpectedCptpFlags) {
    for (const auto &d : suite::all(3)) {
        const auto want = suite::expected_cptp(d);
        ASSERT_EQ(want.size(), d.terms.size()) << d.name;
        for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(term_is_cptp(d.terms[i]), want[i]) << d.name << i;
    }
}

TEST(Suite, MapIdentities) {
    for (const auto &c : suite::map_identities()) EXPECT_TRUE(c.passed) << c.name << " " << c.deviation;
}

TEST(Suite, RandomSequencesAreSeeded) {
    const auto a = suite::random_sequence(5, 4, 3), b = suite::random_sequence(5, 4, 3);
    EXPECT_EQ(max_abs_diff(a.target, b.target), 0.0);
    EXPECT_TRUE(verify(a).passed);
}

TEST(Suite, SmallGridVerifies) {
    for (const auto &d : suite::all(4)) EXPECT_TRUE(verify(d).passed) << d.name << " " << d.parameters;
}

} // namespace
