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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "qcut/cuts.hpp"
#include "qcut/rng.hpp"

namespace qcut {

struct ExperimentSpec {
    Decomposition decomposition;
    /// One density matrix per register.
    std::vector<Operator> initial_state;
    /// Optional local unitaries before and after the cut channel; empty means none.
    std::vector<Operator> pre;
    std::vector<Operator> post;
    /// Product observable, one Hermitian factor per register, spectrum in [-1, 1].
    std::vector<Operator> observable;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::uint64_t batch_size = 10000;
    bool track_signs = true;
    unsigned threads = 1;
};

struct BatchRecord {
    std::uint64_t index = 0;
    std::uint64_t shots = 0;
    double mean = 0.0;
};

struct SamplingReport {
    std::string decomposition;
    std::string parameters;
    double estimate = 0.0;
    double standard_error = 0.0;
    double variance = 0.0;
    std::uint64_t shots = 0;
    double gamma = 0.0;
    std::optional<double> exact_value;
    std::vector<std::string> term_labels;
    std::vector<double> term_q;
    std::vector<std::uint64_t> term_counts;
    std::uint64_t seed = 0;
    bool sign_tracking = true;
    std::uint64_t batch_size = 0;
    double max_abs_contribution = 0.0;
    std::vector<BatchRecord> batches;
};

/// One measurement branch of a factor: probability, sign and the
/// normalized post-branch state.
struct FactorOutcome {
    double probability = 0.0;
    int sign = 1;
    Operator state;
};

struct TermSample {
    int sign = 1;
    double value = 1.0;
};

namespace detail {

inline double clamp_probability(double p) { return p < 0.0 ? 0.0 : p; }

inline std::vector<double> cumulative(const std::vector<double> &p) {
    std::vector<double> c(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = (s += p[i]);
    return c;
}

inline std::size_t draw(const std::vector<double> &cdf, double u) {
    const double target = u * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it != cdf.end()) return static_cast<std::size_t>(it - cdf.begin());
    // u * total rounded up to the total: take the last nonzero branch
    std::size_t i = cdf.size() - 1;
    while (i > 0 && cdf[i] == cdf[i - 1]) --i;
    return i;
}

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    void merge(const CompensatedSum &o) {
        add(o.sum);
        add(o.comp);
    }
    [[nodiscard]] double value() const { return sum + comp; }
};

inline Operator block_kron(const std::vector<Operator> &ops, std::size_t first, std::size_t count) {
    Operator out = ops[first];
    for (std::size_t k = 1; k < count; ++k) out = kron(out, ops[first + k]);
    return out;
}

inline Operator conjugate(const Operator &u, const Operator &rho) {
    return Operator(Matrix(u.matrix() * rho.matrix() * u.matrix().adjoint()));
}

} // namespace detail

/// Eigen-decomposition of a block observable.
struct ObservableBasis {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;

    explicit ObservableBasis(const Operator &o) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(o.matrix());
        eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        eigenvectors = es.eigenvectors();
    }

    [[nodiscard]] std::vector<double> probabilities(const Operator &sigma) const {
        std::vector<double> p(eigenvalues.size());
        const Matrix sv = sigma.matrix() * eigenvectors;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p.size()); ++j) {
            p[static_cast<std::size_t>(j)] =
                detail::clamp_probability(eigenvectors.col(j).dot(sv.col(j)).real());
        }
        return p;
    }
};

/// Physical branches of a map applied to rho (Born probabilities).
inline std::vector<FactorOutcome> factor_outcomes(const GeneralizedMap &map, const Operator &rho) {
    std::vector<FactorOutcome> out;
    if (const auto *u = map.get_if<UnitaryChannel>()) {
        out.push_back({1.0, 1, detail::conjugate(u->u, rho)});
    } else if (const auto *mp = map.get_if<SignedMeasurePrepare>()) {
        for (const auto &t : mp->terms) {
            out.push_back({detail::clamp_probability(hs_inner(t.effect, rho).real()), t.sign, t.state});
        }
    } else if (const auto *a = map.get_if<AncillaCircuit>()) {
        for (int mu = 0; mu < 2; ++mu) {
            Operator branch = map.ancilla_branch(*a, rho, mu);
            const double p = detail::clamp_probability(branch.trace().real());
            if (p > 0.0) branch = (1.0 / p) * branch;
            out.push_back({p, a->signs[static_cast<std::size_t>(mu)], std::move(branch)});
        }
    } else {
        throw UnsupportedTermError("map '" + map.label() + "' has no physical realization (signed Kraus)");
    }
    return out;
}

/// Per-register inputs with pre/post unitaries folded into blocks.
struct PreparedExperiment {
    std::vector<Operator> input;   // per register, after the pre unitary
    std::vector<Operator> post;    // per register
    std::vector<Operator> observable;

    explicit PreparedExperiment(const ExperimentSpec &s) {
        const std::size_t r = s.decomposition.partition.sizes.size();
        for (std::size_t k = 0; k < r; ++k) {
            const Operator &rho = s.initial_state[k];
            input.push_back(s.pre.empty() ? rho : detail::conjugate(s.pre[k], rho));
            post.push_back(s.post.empty() ? Operator::identity(rho.num_qubits()) : s.post[k]);
        }
        observable = s.observable;
    }
};

inline void validate(const ExperimentSpec &s) {
    validate(s.decomposition);
    const auto &sizes = s.decomposition.partition.sizes;
    if (s.shots == 0) throw InvariantError("shots must be positive");
    if (s.batch_size == 0) throw InvariantError("batch_size must be positive");
    auto check_list = [&](const std::vector<Operator> &v, const char *what, bool optional) {
        if (optional && v.empty()) return;
        if (v.size() != sizes.size()) {
            throw DimensionError(std::string(what) + ": expected " + std::to_string(sizes.size()) +
                                 " register entries, got " + std::to_string(v.size()));
        }
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k].num_qubits() != sizes[k]) {
                throw DimensionError(std::string(what) + "[" + std::to_string(k) + "] acts on " +
                                     std::to_string(v[k].num_qubits()) + " qubits, register has " +
                                     std::to_string(sizes[k]));
            }
        }
    };
    check_list(s.initial_state, "initial_state", false);
    check_list(s.pre, "pre", true);
    check_list(s.post, "post", true);
    check_list(s.observable, "observable", false);
    for (const auto &rho : s.initial_state) {
        if (!rho.is_density_matrix(tol::structural)) throw InvariantError("initial state is not a density matrix");
    }
    for (const auto &u : s.pre) if (!u.is_unitary(tol::structural)) throw InvariantError("pre is not unitary");
    for (const auto &u : s.post) if (!u.is_unitary(tol::structural)) throw InvariantError("post is not unitary");
    for (const auto &o : s.observable) {
        if (!o.is_hermitian(tol::structural)) throw InvariantError("observable is not Hermitian");
        const ObservableBasis b(o);
        for (double l : b.eigenvalues) {
            if (std::abs(l) > 1.0 + 1e-12) throw InvariantError("observable eigenvalue outside [-1, 1]");
        }
    }
    for (const auto &t : s.decomposition.terms) {
        for (const auto &f : t.factors) {
            if (f->get_if<SignedKraus>()) {
                throw UnsupportedTermError("term '" + t.label + "' contains a signed Kraus map");
            }
        }
    }
}

/// Execute one term physically: for each factor block, sample a branch,
/// apply the post unitary, then sample an eigenvalue of the block observable.
inline TermSample execute_term(const DecompositionTerm &term, const PreparedExperiment &ex, SplitMix64 &rng) {
    TermSample out;
    std::size_t reg = 0;
    for (std::size_t f = 0; f < term.factors.size(); ++f) {
        const std::size_t span = term.spans[f];
        const Operator rho = detail::block_kron(ex.input, reg, span);
        const auto branches = factor_outcomes(*term.factors[f], rho);
        std::vector<double> p;
        for (const auto &b : branches) p.push_back(b.probability);
        const auto &b = branches[detail::draw(detail::cumulative(p), rng.uniform())];
        const Operator sigma = detail::conjugate(detail::block_kron(ex.post, reg, span), b.state);
        const ObservableBasis basis(detail::block_kron(ex.observable, reg, span));
        const auto lp = basis.probabilities(sigma);
        out.sign *= b.sign;
        out.value *= basis.eigenvalues[detail::draw(detail::cumulative(lp), rng.uniform())];
        reg += span;
    }
    return out;
}

/// Precomputed branch and eigenvalue tables; sampling from them replays
/// execute_term exactly.
class TermTable {
  public:
    TermTable(const DecompositionTerm &term, const PreparedExperiment &ex) {
        std::size_t reg = 0;
        for (std::size_t f = 0; f < term.factors.size(); ++f) {
            const std::size_t span = term.spans[f];
            const auto branches = factor_outcomes(*term.factors[f], detail::block_kron(ex.input, reg, span));
            const Operator post = detail::block_kron(ex.post, reg, span);
            const ObservableBasis basis(detail::block_kron(ex.observable, reg, span));
            Factor t;
            std::vector<double> p;
            for (const auto &b : branches) {
                p.push_back(b.probability);
                t.sign.push_back(b.sign);
                t.lambda_cdf.push_back(detail::cumulative(basis.probabilities(detail::conjugate(post, b.state))));
            }
            t.branch_cdf = detail::cumulative(p);
            t.eigenvalues = basis.eigenvalues;
            factors_.push_back(std::move(t));
            reg += span;
        }
    }

    TermSample sample(SplitMix64 &rng) const {
        TermSample out;
        for (const auto &f : factors_) {
            const std::size_t k = detail::draw(f.branch_cdf, rng.uniform());
            out.sign *= f.sign[k];
            out.value *= f.eigenvalues[detail::draw(f.lambda_cdf[k], rng.uniform())];
        }
        return out;
    }

  private:
    struct Factor {
        std::vector<double> branch_cdf;
        std::vector<int> sign;
        std::vector<std::vector<double>> lambda_cdf;
        std::vector<double> eigenvalues;
    };
    std::vector<Factor> factors_;
};

/// ⟪O| Û₂ · reconstruct · Û₁ |ρ⟫ on the full register.
inline double exact_expectation(const ExperimentSpec &s) {
    validate(s);
    const std::size_t n = s.decomposition.partition.total();
    qcut::detail::check_dense_cap(n);
    const PreparedExperiment ex(s);
    const std::size_t r = ex.input.size();
    const Operator rho = detail::block_kron(ex.input, 0, r);
    const Operator u2 = detail::block_kron(ex.post, 0, r);
    const Operator o = detail::block_kron(ex.observable, 0, r);
    const Operator heis(Matrix(u2.matrix().adjoint() * o.matrix() * u2.matrix()));
    return real_vectorize(heis).dot(reconstruct(s.decomposition).matrix() * real_vectorize(rho));
}

/// Same quantity from the target unitary directly.
inline double target_expectation(const ExperimentSpec &s) {
    const PreparedExperiment ex(s);
    const std::size_t r = ex.input.size();
    const Operator rho = detail::block_kron(ex.input, 0, r);
    const Operator sigma = detail::conjugate(detail::block_kron(ex.post, 0, r) * s.decomposition.target, rho);
    return hs_inner(detail::block_kron(ex.observable, 0, r), sigma).real();
}

namespace detail {

struct BatchResult {
    CompensatedSum sum, sum_sq;
    std::uint64_t shots = 0;
    double max_abs = 0.0;
    std::vector<std::uint64_t> counts;

    void merge(const BatchResult &o) {
        sum.merge(o.sum);
        sum_sq.merge(o.sum_sq);
        shots += o.shots;
        max_abs = std::max(max_abs, o.max_abs);
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }
};

/// Fixed-shape pairwise reduction over [lo, hi).
inline BatchResult reduce(const std::vector<BatchResult> &b, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return b[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    BatchResult left = reduce(b, lo, mid);
    left.merge(reduce(b, mid, hi));
    return left;
}

} // namespace detail

/// Quasiprobability Monte Carlo estimate of ⟨O⟩. Each shot draws its own
/// stream from (seed, shot index); batches are reduced in a fixed order so
/// the report does not depend on the thread count.
inline SamplingReport run(const ExperimentSpec &s) {
    validate(s);
    const Decomposition &d = s.decomposition;
    const PreparedExperiment ex(s);
    const double gamma = one_norm(d);
    const auto term_cdf = detail::cumulative(sampling_probabilities(d));
    std::vector<TermTable> tables;
    std::vector<double> scale;
    for (const auto &t : d.terms) {
        tables.emplace_back(t, ex);
        scale.push_back(t.q < 0 ? -gamma : gamma);
    }

    const std::uint64_t nb = (s.shots + s.batch_size - 1) / s.batch_size;
    std::vector<detail::BatchResult> results(nb);
    auto run_batch = [&](std::uint64_t b) {
        detail::BatchResult &r = results[b];
        r.counts.assign(d.terms.size(), 0);
        const std::uint64_t lo = b * s.batch_size, hi = std::min(s.shots, lo + s.batch_size);
        for (std::uint64_t shot = lo; shot < hi; ++shot) {
            SplitMix64 rng = SplitMix64::stream(s.seed, shot);
            const std::size_t nu = detail::draw(term_cdf, rng.uniform());
            const TermSample ts = tables[nu].sample(rng);
            const double x = scale[nu] * (s.track_signs ? ts.sign : 1) * ts.value;
            r.sum.add(x);
            r.sum_sq.add(x * x);
            r.max_abs = std::max(r.max_abs, std::abs(x));
            ++r.counts[nu];
        }
        r.shots = hi - lo;
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(s.threads, static_cast<unsigned>(nb)));
    if (nt == 1) {
        for (std::uint64_t b = 0; b < nb; ++b) run_batch(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) {
            pool.emplace_back([&] {
                for (std::uint64_t b; (b = next.fetch_add(1)) < nb;) run_batch(b);
            });
        }
        for (auto &th : pool) th.join();
    }

    const detail::BatchResult total = detail::reduce(results, 0, results.size());
    SamplingReport rep;
    rep.decomposition = d.name;
    rep.parameters = d.parameters;
    rep.shots = s.shots;
    rep.gamma = gamma;
    rep.seed = s.seed;
    rep.sign_tracking = s.track_signs;
    rep.batch_size = s.batch_size;
    const double n = static_cast<double>(s.shots);
    rep.estimate = total.sum.value() / n;
    rep.variance = std::max(0.0, total.sum_sq.value() / n - rep.estimate * rep.estimate);
    rep.standard_error = std::sqrt(rep.variance / n);
    rep.max_abs_contribution = total.max_abs;
    rep.term_counts = total.counts;
    for (const auto &t : d.terms) {
        rep.term_labels.push_back(t.label);
        rep.term_q.push_back(t.q);
    }
    for (std::uint64_t b = 0; b < nb; ++b) {
        rep.batches.push_back({b, results[b].shots, results[b].sum.value() / static_cast<double>(results[b].shots)});
    }
    if (d.partition.total() <= limits::dense_qubit_cap()) rep.exact_value = exact_expectation(s);
    return rep;
}

} // namespace qcut
