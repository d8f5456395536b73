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

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qcut/sampler.hpp"
#include "qcut/zx_text.hpp"

namespace qcut {

/// Config error anchored to a JSON field (dotted path) and, when it can be
/// located, a source line.
class ConfigError : public ParseError {
  public:
    ConfigError(const std::string &field, const std::string &what, std::size_t line = 0)
        : ParseError((field.empty() ? "" : "field '" + field + "': ") + what, line), field_(field) {}
    [[nodiscard]] const std::string &field() const { return field_; }

  private:
    std::string field_;
};

struct OpSelector {
    std::vector<std::size_t> qubits;
    std::string gate;
    double theta = 0.0;
    std::optional<Matrix> matrix;
    std::optional<std::uint64_t> random_seed;
};

struct DecompositionSelector {
    std::string name;
    std::size_t m = 1;
    std::size_t mprime = 1;
    double theta = 0.0;
    Pauli cc_basis = Pauli::Y;
    std::size_t num_qubits = 0;
    std::vector<OpSelector> ops;
};

struct ExperimentConfig {
    DecompositionSelector decomposition;
    /// "zero", "plus", a string over {0,1,+,-}, or explicit per-qubit matrices.
    std::string state = "zero";
    std::vector<Operator> state_matrices;
    std::string observable;
    std::string pre;
    std::string post;
    std::uint64_t shots = 0;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string csv;
    std::uint64_t batch_size = 10000;
    bool track_signs = true;
    unsigned threads = 1;
};

namespace detail {

using nlohmann::json;

struct ConfigReader {
    std::string_view text;

    [[nodiscard]] std::size_t line_of(const std::string &key) const {
        const auto pos = text.find("\"" + key + "\"");
        if (pos == std::string_view::npos) return 0;
        return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
    }

    [[noreturn]] void fail(const std::string &path, const std::string &what) const {
        const auto dot = path.find_last_of('.');
        std::string key = dot == std::string::npos ? path : path.substr(dot + 1);
        if (const auto br = key.find('['); br != std::string::npos) key.resize(br);
        throw ConfigError(path, what, line_of(key));
    }

    void only(const json &obj, const std::string &path, std::initializer_list<const char *> keys) const {
        if (!obj.is_object()) fail(path, "expected an object");
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto &[k, v] : obj.items()) {
            if (!allowed.count(k)) fail(path.empty() ? k : path + "." + k, "unknown field");
        }
    }

    [[nodiscard]] std::string str(const json &v, const std::string &path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    [[nodiscard]] std::uint64_t uint(const json &v, const std::string &path) const {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(path, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    [[nodiscard]] double real(const json &v, const std::string &path) const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) {
            try {
                return zx::parse_real(v.get<std::string>());
            } catch (const ParseError &e) {
                fail(path, e.what());
            }
        }
        fail(path, "expected a number or an expression string");
    }

    [[nodiscard]] cplx complex(const json &v, const std::string &path) const {
        if (v.is_array()) {
            if (v.size() != 2) fail(path, "complex entries are [re, im]");
            return {real(v[0], path), real(v[1], path)};
        }
        if (v.is_string()) {
            try {
                return zx::parse_complex(v.get<std::string>());
            } catch (const ParseError &e) {
                fail(path, e.what());
            }
        }
        return real(v, path);
    }

    [[nodiscard]] Matrix matrix(const json &v, const std::string &path) const {
        if (!v.is_array() || v.empty()) fail(path, "expected a non-empty list of rows");
        const auto n = static_cast<Eigen::Index>(v.size());
        Matrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto &row = v[static_cast<std::size_t>(r)];
            const std::string rp = path + "[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(rp, "matrix must be square");
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex(row[static_cast<std::size_t>(c)], rp);
        }
        return m;
    }

    [[nodiscard]] OpSelector op(const json &v, const std::string &path) const {
        only(v, path, {"qubits", "gate", "theta", "matrix", "random"});
        OpSelector o;
        if (!v.contains("qubits") || !v["qubits"].is_array() || v["qubits"].empty()) {
            fail(path + ".qubits", "expected a non-empty list of qubit indices");
        }
        for (std::size_t i = 0; i < v["qubits"].size(); ++i) {
            o.qubits.push_back(uint(v["qubits"][i], path + ".qubits[" + std::to_string(i) + "]"));
        }
        const int kinds = v.contains("gate") + v.contains("matrix") + v.contains("random");
        if (kinds != 1) fail(path, "give exactly one of gate, matrix or random");
        if (v.contains("gate")) o.gate = str(v["gate"], path + ".gate");
        if (v.contains("theta")) o.theta = real(v["theta"], path + ".theta");
        if (v.contains("matrix")) o.matrix = matrix(v["matrix"], path + ".matrix");
        if (v.contains("random")) o.random_seed = uint(v["random"], path + ".random");
        return o;
    }

    [[nodiscard]] DecompositionSelector selector(const json &v, const std::string &path) const {
        only(v, path, {"name", "m", "mprime", "theta", "cc_basis", "num_qubits", "ops"});
        DecompositionSelector s;
        if (!v.contains("name")) fail(path + ".name", "missing");
        s.name = str(v["name"], path + ".name");
        if (v.contains("m")) s.m = uint(v["m"], path + ".m");
        if (v.contains("mprime")) s.mprime = uint(v["mprime"], path + ".mprime");
        if (v.contains("theta")) s.theta = real(v["theta"], path + ".theta");
        if (v.contains("cc_basis")) {
            const std::string c = str(v["cc_basis"], path + ".cc_basis");
            if (c.size() != 1 || std::string("XYZ").find(c[0]) == std::string::npos) {
                fail(path + ".cc_basis", "expected X, Y or Z");
            }
            s.cc_basis = pauli_from_char(c[0]);
        }
        if (v.contains("num_qubits")) s.num_qubits = uint(v["num_qubits"], path + ".num_qubits");
        if (v.contains("ops")) {
            if (!v["ops"].is_array()) fail(path + ".ops", "expected a list");
            for (std::size_t i = 0; i < v["ops"].size(); ++i) {
                s.ops.push_back(op(v["ops"][i], path + ".ops[" + std::to_string(i) + "]"));
            }
        }
        return s;
    }
};

inline Operator named_gate(const OpSelector &o, const std::string &path) {
    if (o.matrix) return Operator(*o.matrix);
    if (o.random_seed) {
        std::mt19937_64 rng(*o.random_seed);
        return gates::random_unitary(o.qubits.size(), rng);
    }
    const std::string &g = o.gate;
    if (g == "X") return gates::X();
    if (g == "Y") return gates::Y();
    if (g == "Z") return gates::Z();
    if (g == "H") return gates::H();
    if (g == "S") return gates::S();
    if (g == "phase") return gates::mcp(1, o.theta);
    if (g == "rz") return gates::Rz(o.theta);
    if (g == "rx") return gates::Rx(o.theta);
    if (g == "ry") return gates::Ry(o.theta);
    if (g == "cz") return gates::cz();
    if (g == "cnot") return gates::cnot();
    if (g == "cphase") return gates::cphase(o.theta);
    if (g == "swap") return gates::swap();
    throw ConfigError(path + ".gate", "unknown gate '" + g + "'");
}

inline Operator local_gate(char c) {
    switch (c) {
    case 'I': return gates::I(1);
    case 'H': return gates::H();
    case 'S': return gates::S();
    case 'X': return gates::X();
    case 'Y': return gates::Y();
    case 'Z': return gates::Z();
    default: throw ConfigError("", std::string("unknown local gate '") + c + "'");
    }
}

} // namespace detail

inline ExperimentConfig parse_config(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        // e.byte is one past the offending character
        const auto upto = static_cast<std::ptrdiff_t>(std::min<std::size_t>(e.byte, text.size() + 1)) - 1;
        const auto line = static_cast<std::size_t>(std::count(text.begin(), text.begin() + std::max<std::ptrdiff_t>(upto, 0), '\n')) + 1;
        throw ConfigError("", std::string("invalid JSON: ") + e.what(), line);
    }
    const detail::ConfigReader rd{text};
    rd.only(doc, "", {"decomposition", "state", "observable", "pre", "post", "shots", "seed", "output", "csv",
                      "batch_size", "track_signs", "threads"});
    ExperimentConfig c;
    if (!doc.contains("decomposition")) rd.fail("decomposition", "missing");
    c.decomposition = rd.selector(doc["decomposition"], "decomposition");
    if (doc.contains("state")) {
        const auto &s = doc["state"];
        if (s.is_string()) {
            c.state = s.get<std::string>();
        } else if (s.is_array()) {
            c.state.clear();
            for (std::size_t i = 0; i < s.size(); ++i) {
                c.state_matrices.emplace_back(rd.matrix(s[i], "state[" + std::to_string(i) + "]"));
            }
        } else {
            rd.fail("state", "expected a string or a list of 2x2 density matrices");
        }
    }
    if (doc.contains("observable")) c.observable = rd.str(doc["observable"], "observable");
    if (doc.contains("pre")) c.pre = rd.str(doc["pre"], "pre");
    if (doc.contains("post")) c.post = rd.str(doc["post"], "post");
    if (doc.contains("shots")) c.shots = rd.uint(doc["shots"], "shots");
    if (doc.contains("seed")) c.seed = rd.uint(doc["seed"], "seed");
    if (doc.contains("output")) c.output = rd.str(doc["output"], "output");
    if (doc.contains("csv")) c.csv = rd.str(doc["csv"], "csv");
    if (doc.contains("batch_size")) c.batch_size = rd.uint(doc["batch_size"], "batch_size");
    if (doc.contains("track_signs")) {
        if (!doc["track_signs"].is_boolean()) rd.fail("track_signs", "expected true or false");
        c.track_signs = doc["track_signs"].get<bool>();
    }
    if (doc.contains("threads")) c.threads = static_cast<unsigned>(rd.uint(doc["threads"], "threads"));
    return c;
}

inline Decomposition build_decomposition(const DecompositionSelector &s) {
    const std::string &n = s.name;
    if (n == "wire_ncc") return cuts::wire_cut_ncc();
    if (n == "wire_cc") return cuts::wire_cut_cc(s.cc_basis);
    if (n == "mcz") return cuts::mcz_decomposition(s.m, s.mprime);
    if (n == "rzz_a") return cuts::rzz_decomposition_a(s.theta);
    if (n == "rzz_b") return cuts::rzz_decomposition_b(s.theta);
    if (n == "multi_z") return cuts::multi_z_rotation_decomposition(s.m, s.mprime, s.theta);
    if (n == "controlled_sequence") {
        std::vector<cuts::SequenceOp> ops;
        for (std::size_t i = 0; i < s.ops.size(); ++i) {
            const std::string path = "decomposition.ops[" + std::to_string(i) + "]";
            Operator u = detail::named_gate(s.ops[i], path);
            if (u.num_qubits() != s.ops[i].qubits.size()) {
                throw ConfigError(path, "gate acts on " + std::to_string(u.num_qubits()) + " qubits, " +
                                            std::to_string(s.ops[i].qubits.size()) + " given");
            }
            ops.push_back({s.ops[i].qubits, std::move(u)});
        }
        return cuts::controlled_sequence_decomposition(ops, s.num_qubits);
    }
    throw ConfigError("decomposition.name", "unknown decomposition '" + n + "'");
}

/// Resolve a parsed config into a runnable spec.
inline ExperimentSpec make_spec(const ExperimentConfig &c, std::uint64_t seed) {
    ExperimentSpec s;
    s.decomposition = build_decomposition(c.decomposition);
    const auto &sizes = s.decomposition.partition.sizes;
    const std::size_t n = s.decomposition.partition.total();

    std::vector<Operator> qubit_states;
    if (!c.state_matrices.empty()) {
        qubit_states = c.state_matrices;
    } else {
        std::string bits = c.state;
        if (bits == "zero") bits.assign(n, '0');
        if (bits == "plus") bits.assign(n, '+');
        for (char ch : bits) {
            switch (ch) {
            case '0': qubit_states.push_back(PauliEigenbasis::get(Pauli::Z, 0).state); break;
            case '1': qubit_states.push_back(PauliEigenbasis::get(Pauli::Z, 1).state); break;
            case '+': qubit_states.push_back(PauliEigenbasis::get(Pauli::X, 0).state); break;
            case '-': qubit_states.push_back(PauliEigenbasis::get(Pauli::X, 1).state); break;
            default: throw ConfigError("state", "expected zero, plus or a string over 0 1 + -");
            }
        }
    }
    if (qubit_states.size() != n) {
        throw ConfigError("state", "expected " + std::to_string(n) + " qubits, got " + std::to_string(qubit_states.size()));
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (qubit_states[q].num_qubits() != 1 || !qubit_states[q].is_density_matrix(tol::structural)) {
            throw ConfigError("state[" + std::to_string(q) + "]", "not a single-qubit density matrix");
        }
    }
    if (c.observable.size() != n) {
        throw ConfigError("observable", "expected a Pauli string of length " + std::to_string(n));
    }
    const PauliString obs = [&] {
        try {
            return PauliString::parse(c.observable);
        } catch (const ParseError &e) {
            throw ConfigError("observable", e.what());
        }
    }();
    auto local = [&](const std::string &letters, const char *field) {
        std::vector<Operator> out;
        if (letters.empty()) return out;
        if (letters.size() != n) throw ConfigError(field, "expected " + std::to_string(n) + " gate letters");
        std::size_t q = 0;
        for (auto size : sizes) {
            std::optional<Operator> u;
            for (std::size_t k = 0; k < size; ++k, ++q) {
                Operator g = Operator::identity(1);
                try {
                    g = detail::local_gate(letters[q]);
                } catch (const ConfigError &e) {
                    throw ConfigError(field, e.what());
                }
                u = u ? kron(*u, g) : g;
            }
            out.push_back(*u);
        }
        return out;
    };
    std::size_t q = 0;
    for (auto size : sizes) {
        Operator rho = qubit_states[q];
        Operator o = pauli_matrix(obs.letters()[q]);
        for (std::size_t k = 1; k < size; ++k) {
            rho = kron(rho, qubit_states[q + k]);
            o = kron(o, pauli_matrix(obs.letters()[q + k]));
        }
        s.initial_state.push_back(rho);
        s.observable.push_back(o);
        q += size;
    }
    s.pre = local(c.pre, "pre");
    s.post = local(c.post, "post");
    if (c.shots == 0) throw ConfigError("shots", "must be a positive integer");
    s.shots = c.shots;
    s.seed = seed;
    s.batch_size = c.batch_size;
    if (c.batch_size == 0) throw ConfigError("batch_size", "must be a positive integer");
    s.track_signs = c.track_signs;
    s.threads = std::max(1u, c.threads);
    return s;
}

} // namespace qcut
