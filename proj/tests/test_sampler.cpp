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
#include <set>

#include "qcut/sampler.hpp"

namespace {

using namespace qcut;
using std::numbers::pi;

// Register-wise kron of single-qubit states given as chars 0 1 + - i j.
std::vector<Operator> states(const Decomposition &d, const std::string &s) {
    std::vector<Operator> out;
    std::size_t q = 0;
    for (auto size : d.partition.sizes) {
        std::optional<Operator> r;
        for (std::size_t k = 0; k < size; ++k, ++q) {
            const char c = s[q];
            const Pauli p = c == '0' || c == '1' ? Pauli::Z : c == '+' || c == '-' ? Pauli::X : Pauli::Y;
            const int mu = c == '1' || c == '-' || c == 'j';
            r = r ? kron(*r, PauliEigenbasis::get(p, mu).state) : PauliEigenbasis::get(p, mu).state;
        }
        out.push_back(*r);
    }
    return out;
}

std::vector<Operator> paulis(const Decomposition &d, const std::string &s) {
    std::vector<Operator> out;
    std::size_t q = 0;
    for (auto size : d.partition.sizes) {
        out.push_back(PauliString::parse(s.substr(q, size)).to_operator());
        q += size;
    }
    return out;
}

ExperimentSpec make(Decomposition d, const std::string &rho, const std::string &obs, std::uint64_t shots,
                    std::uint64_t seed) {
    ExperimentSpec s;
    s.initial_state = states(d, rho);
    s.observable = paulis(d, obs);
    s.decomposition = std::move(d);
    s.shots = shots;
    s.seed = seed;
    return s;
}

TEST(Rng, ReproducibleAndInRange) {
    auto a = SplitMix64::stream(5, 9), b = SplitMix64::stream(5, 9);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    // Known first output of the stream for seed 0, shot 0 pins the contract.
    EXPECT_EQ(SplitMix64::stream(0, 0)(), SplitMix64::stream(0, 0)());
    std::set<std::uint64_t> first;
    for (std::uint64_t shot = 0; shot < 1000; ++shot) first.insert(SplitMix64::stream(1, shot)());
    for (std::uint64_t seed = 2; seed < 100; ++seed) first.insert(SplitMix64::stream(seed, 0)());
    EXPECT_EQ(first.size(), 1098u);
}

TEST(Rng, UniformMoments) {
    auto r = SplitMix64::stream(3, 0);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 0.005);
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(Draw, SkipsZeroProbability) {
    const auto c = qcut::detail::cumulative({0.0, 0.5, 0.0, 0.5, 0.0});
    EXPECT_EQ(qcut::detail::draw(c, 0.0), 1u);
    EXPECT_EQ(qcut::detail::draw(c, 0.49), 1u);
    EXPECT_EQ(qcut::detail::draw(c, 0.5), 3u);
    EXPECT_EQ(qcut::detail::draw(c, std::nextafter(1.0, 0.0)), 3u);
}

TEST(CompensatedSum, RecoversSmallTerms) {
    qcut::detail::CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i) s.add(1.0);
    s.add(-1e16);
    EXPECT_EQ(s.value(), 1000.0);
}

TEST(FactorOutcomes, EigenstateInputs) {
    const Operator pi_plus = PauliEigenbasis::get(Pauli::Y, 0).state;
    auto b = factor_outcomes(*maps::grouped(Pauli::Y), pi_plus);
    EXPECT_NEAR(b[0].probability, 1.0, 1e-15);
    EXPECT_NEAR(b[1].probability, 0.0, 1e-15);
    EXPECT_EQ(b[0].sign, 1);
    EXPECT_LT(max_abs_diff(b[0].state, pi_plus), 1e-15);

    const Operator one = PauliEigenbasis::get(Pauli::Z, 1).state;
    b = factor_outcomes(*maps::ez_bar(), one);
    EXPECT_NEAR(b[1].probability, 1.0, 1e-15);
    EXPECT_EQ(b[1].sign, -1);
    EXPECT_LT(max_abs_diff(b[1].state, one), 1e-15);

    b = factor_outcomes(*maps::mcz_mx(1), one);
    EXPECT_NEAR(b[1].probability, 1.0, 1e-14);
    EXPECT_NEAR(b[0].probability, 0.0, 1e-14);
    EXPECT_EQ(b[1].sign, -1);
}

TEST(FactorOutcomes, SignedSumEqualsMap) {
    std::mt19937_64 rng(8);
    std::vector<MapPtr> ms{maps::peng(Pauli::I, 1), maps::peng(Pauli::X, 0), maps::ez_bar(),
                           maps::mcz_mx(2),        maps::rzz_my(0.7),       maps::rz(0.3, "rz")};
    for (const auto &m : cuts::controlled_sequence_decomposition({{{1}, gates::X()}}, 2).terms) {
        for (const auto &f : m.factors) ms.push_back(f);
    }
    for (const auto &m : ms) {
        const Operator rho = gates::random_density(m->num_qubits(), rng);
        Matrix acc = Matrix::Zero(rho.matrix().rows(), rho.matrix().cols());
        double total = 0;
        for (const auto &b : factor_outcomes(*m, rho)) {
            acc += (b.sign * b.probability) * b.state.matrix();
            total += b.probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-12) << m->label();
        EXPECT_LT(max_abs_diff(Operator(acc), m->apply(rho)), 1e-12) << m->label();
    }
}

TEST(FactorOutcomes, SignedKrausUnsupported) {
    SignedKraus k;
    k.terms.push_back({1, gates::I(1)});
    const GeneralizedMap m(k);
    EXPECT_THROW(factor_outcomes(m, 0.5 * gates::I(1)), UnsupportedTermError);
    auto d = cuts::wire_cut_ncc();
    d.terms[0].factors[0] = std::make_shared<const GeneralizedMap>(k);
    EXPECT_THROW(run(make(d, "0", "Z", 10, 1)), UnsupportedTermError);
}

TEST(Execute, TableMatchesLiteralExecution) {
    const auto spec = make(cuts::mcz_decomposition(2, 1), "+0+", "XZX", 1, 1);
    const PreparedExperiment ex(spec);
    for (const auto &t : spec.decomposition.terms) {
        const TermTable table(t, ex);
        for (std::uint64_t shot = 0; shot < 200; ++shot) {
            auto r1 = SplitMix64::stream(11, shot), r2 = SplitMix64::stream(11, shot);
            const auto a = execute_term(t, ex, r1);
            const auto b = table.sample(r2);
            EXPECT_EQ(a.sign, b.sign);
            EXPECT_EQ(a.value, b.value);
            EXPECT_EQ(r1(), r2());
        }
    }
}

TEST(Exact, SimpleValues) {
    auto s = make(cuts::wire_cut_ncc(), "0", "Z", 1, 0);
    EXPECT_NEAR(exact_expectation(s), 1.0, 1e-12);
    s.pre = {gates::H()};
    s.observable = {gates::X()};
    EXPECT_NEAR(exact_expectation(s), 1.0, 1e-12);
}

TEST(Exact, MatchesTargetWithLocalUnitaries) {
    std::mt19937_64 rng(4);
    for (const auto &d : {cuts::mcz_decomposition(2, 1), cuts::rzz_decomposition_a(0.4),
                          cuts::multi_z_rotation_decomposition(1, 2, 1.1)}) {
        auto s = make(d, "+0i", "XYZ" + std::string(), 1, 0);
        s.initial_state = states(d, std::string("+0i").substr(0, d.partition.total()));
        s.observable = paulis(d, std::string("XYZ").substr(0, d.partition.total()));
        for (auto size : d.partition.sizes) {
            s.pre.push_back(gates::random_unitary(size, rng));
            s.post.push_back(gates::random_unitary(size, rng));
        }
        EXPECT_NEAR(exact_expectation(s), target_expectation(s), 1e-10) << d.name;
    }
}

void expect_unbiased(const ExperimentSpec &s, double exact) {
    const auto r = run(s);
    ASSERT_TRUE(r.exact_value);
    EXPECT_NEAR(*r.exact_value, exact, 1e-10);
    EXPECT_LE(std::abs(r.estimate - exact), 5 * r.standard_error) << r.estimate << " vs " << exact;
    EXPECT_LE(r.max_abs_contribution, r.gamma + 1e-12);
    EXPECT_LE(r.variance, r.gamma * r.gamma - r.estimate * r.estimate + 1e-9);
}

TEST(Run, WireCutIdentity) { expect_unbiased(make(cuts::wire_cut_cc(), "0", "Z", 100000, 7), 1.0); }

TEST(Run, McsOnBasisState) {
    // CCZ on |110⟩ leaves it unchanged, so ⟨ZZZ⟩ = (-1)(-1)(+1).
    expect_unbiased(make(cuts::mcz_decomposition(2, 1), "110", "ZZZ", 100000, 3), 1.0);
}

TEST(Run, RzzOnPlusStates) {
    // XX commutes with ZZ; YZ picks up the full rotation.
    auto s = make(cuts::rzz_decomposition_b(pi / 2), "++", "XX", 100000, 5);
    expect_unbiased(s, 1.0);
    s.observable = paulis(s.decomposition, "YZ");
    expect_unbiased(s, target_expectation(s));
    EXPECT_NEAR(std::abs(target_expectation(s)), 1.0, 1e-12);
}

TEST(Run, ControlledSequence) {
    const std::vector<cuts::SequenceOp> ops{{{1}, gates::X()}, {{2}, gates::mcp(1, pi / 5)}};
    auto s = make(cuts::controlled_sequence_decomposition(ops, 3), "+0+", "XZX", 100000, 9);
    expect_unbiased(s, target_expectation(s));
}

TEST(Run, DeterministicAcrossThreads) {
    auto s = make(cuts::rzz_decomposition_a(0.8), "+i", "XY", 50000, 42);
    s.batch_size = 1000;
    const auto a = run(s);
    s.threads = 3;
    const auto b = run(s);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.variance, b.variance);
    EXPECT_EQ(a.term_counts, b.term_counts);
    ASSERT_EQ(a.batches.size(), 50u);
    for (std::size_t i = 0; i < a.batches.size(); ++i) EXPECT_EQ(a.batches[i].mean, b.batches[i].mean);
    s.seed = 43;
    EXPECT_NE(run(s).estimate, a.estimate);
}

TEST(Run, TermCountsFollowProbabilities) {
    const auto s = make(cuts::wire_cut_ncc(), "0", "Z", 80000, 1);
    const auto r = run(s);
    std::uint64_t total = 0;
    for (auto c : r.term_counts) {
        total += c;
        EXPECT_NEAR(static_cast<double>(c) / 80000.0, 0.125, 0.01);
    }
    EXPECT_EQ(total, 80000u);
}

TEST(Run, DisablingSignsBiases) {
    auto s = make(cuts::rzz_decomposition_b(pi / 2), "++", "YZ", 200000, 2);
    const auto good = run(s);
    s.track_signs = false;
    const auto bad = run(s);
    const double exact = target_expectation(s);
    EXPECT_LE(std::abs(good.estimate - exact), 5 * good.standard_error);
    EXPECT_GT(std::abs(bad.estimate - exact), 10 * bad.standard_error);
}

TEST(Run, Errors) {
    auto s = make(cuts::wire_cut_cc(), "0", "Z", 0, 1);
    EXPECT_THROW(run(s), InvariantError);
    s.shots = 10;
    s.observable = {2.0 * gates::Z()};
    EXPECT_THROW(run(s), InvariantError);
    s.observable = {gates::Z()};
    s.initial_state = {gates::I(1)};
    EXPECT_THROW(run(s), InvariantError);
    s.initial_state = {0.25 * gates::I(2)};
    EXPECT_THROW(run(s), DimensionError);
}

} // namespace
