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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qcut/qcut.hpp"

namespace {

using namespace qcut;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
    using Error::Error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

struct Tally {
    std::size_t passed = 0, failed = 0;
    void line(bool ok, const std::string &what) {
        (ok ? passed : failed) += 1;
        std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    }
    [[nodiscard]] int exit_code() const {
        std::cout << passed << " passed, " << failed << " failed\n";
        return failed ? kCheckFailed : kOk;
    }
};

void verify_one(Tally &t, const Decomposition &d, bool cptp) {
    const VerifyReport r = verify(d);
    t.line(r.passed, d.name + " " + d.parameters + " gamma=" + fmt12(r.gamma) + " terms=" +
                         std::to_string(r.terms) + " max_dev=" + fmt12(r.max_deviation));
    if (!cptp) return;
    const auto want = suite::expected_cptp(d);
    std::string got;
    bool ok = want.size() == d.terms.size();
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
        const bool c = term_is_cptp(d.terms[i]);
        got += c ? 'Y' : 'N';
        ok = ok && i < want.size() && want[i] == c;
    }
    t.line(ok, d.name + " " + d.parameters + " cptp=" + got);
}

struct VerifyOptions {
    bool all = false;
    std::string deco, config, cc = "Y";
    std::size_t m = 1, mprime = 1;
    std::string theta = "0";
    bool json = false;
};

int cmd_verify(const VerifyOptions &o) {
    const int modes = o.all + !o.deco.empty() + !o.config.empty();
    if (modes != 1) throw UsageError("verify needs exactly one of --all, --deco or --config");
    Tally t;
    if (o.all) {
        for (const auto &d : suite::all()) verify_one(t, d, true);
        for (const auto &c : suite::map_identities()) t.line(c.passed, c.name + " max_dev=" + fmt12(c.deviation));
        return t.exit_code();
    }
    Decomposition d;
    if (!o.config.empty()) {
        d = build_decomposition(parse_config(read_file(o.config)).decomposition);
    } else {
        DecompositionSelector s;
        s.name = o.deco;
        s.m = o.m;
        s.mprime = o.mprime;
        s.theta = zx::parse_real(o.theta);
        if (o.cc.size() != 1 || std::string("XYZ").find(o.cc[0]) == std::string::npos) {
            throw UsageError("--cc must be X, Y or Z");
        }
        s.cc_basis = pauli_from_char(o.cc[0]);
        d = s.name == "controlled_sequence" ? suite::cnot_cphase_sequence(s.theta) : build_decomposition(s);
    }
    if (o.json) {
        const VerifyReport r = verify(d);
        ojson j = to_json(d, true);
        j["verify"] = to_json(r);
        std::cout << j.dump(2) << "\n";
        return r.passed ? kOk : kCheckFailed;
    }
    verify_one(t, d, true);
    return t.exit_code();
}

struct SampleOptions {
    std::string config, out, csv;
    std::optional<std::uint64_t> seed, shots;
    std::optional<unsigned> threads;
    bool no_signs = false;
};

int cmd_sample(const SampleOptions &o) {
    const ExperimentConfig c = parse_config(read_file(o.config));
    ExperimentConfig cfg = c;
    if (o.shots) cfg.shots = *o.shots;
    if (o.threads) cfg.threads = *o.threads;
    if (o.no_signs) cfg.track_signs = false;
    const ExperimentSpec spec = make_spec(cfg, *o.seed);
    const SamplingReport r = run(spec);
    const std::string out = o.out.empty() ? cfg.output : o.out;
    const std::string csv = o.csv.empty() ? cfg.csv : o.csv;
    std::ostream &echo = out.empty() ? std::cerr : std::cout;
    if (out.empty()) {
        std::cout << report_text(r);
    } else {
        write_file(out, report_text(r));
    }
    if (!csv.empty()) write_file(csv, batches_csv(r));
    echo << "estimate = " << fmt12(r.estimate) << " +/- " << fmt12(r.standard_error) << " (gamma " << fmt12(r.gamma)
         << ", " << r.shots << " shots)";
    if (r.exact_value) echo << ", exact = " << fmt12(*r.exact_value);
    echo << "\n";
    return kOk;
}

int cmd_norms(std::size_t sweep) {
    std::cout << norms_header();
    for (const auto &d : suite::all()) std::cout << norms_row(d);
    for (std::size_t k = 0; k < sweep; ++k) {
        const double t = sweep == 1 ? 0.0 : suite::pi / 2 * static_cast<double>(k) / static_cast<double>(sweep - 1);
        std::cout << norms_row(cuts::rzz_decomposition_b(t));
    }
    return kOk;
}

struct ZxOptions {
    std::string builtin, file;
    std::size_t n = 4, m = 2;
};

int cmd_zx_check(const ZxOptions &o) {
    if (o.builtin.empty() == o.file.empty()) throw UsageError("zx-check needs exactly one of --builtin or --file");
    std::vector<zx::CheckResult> res;
    auto add = [&](std::vector<zx::CheckResult> v) { res.insert(res.end(), v.begin(), v.end()); };
    if (!o.file.empty()) {
        add(zx::run_checks(zx::parse_diagram_text(read_file(o.file))));
        if (res.empty()) throw UsageError("diagram file has no checks");
    } else if (o.builtin == "cnot-variants") {
        add(zx::check_cnot_variants());
    } else if (o.builtin == "mcz-fusion") {
        res.push_back(zx::check_against("mcz-fusion/" + std::to_string(o.n) + "/" + std::to_string(o.m),
                                        zx::contract(zx::split_mcz_three_hboxes(o.n, o.m)),
                                        zx::contract(zx::mcz_diagram(o.n))));
    } else if (o.builtin == "pauli-states") {
        add(zx::check_pauli_states());
    } else if (o.builtin == "gates") {
        add(zx::check_gate_diagrams());
    } else if (o.builtin == "rules") {
        add(zx::check_rules());
    } else if (o.builtin == "wire-cut") {
        add(zx::check_wire_cut());
    } else if (o.builtin == "all") {
        add(zx::check_cnot_variants());
        add(zx::check_pauli_states());
        add(zx::check_gate_diagrams());
        add(zx::check_rules());
        add(zx::check_wire_cut());
    } else {
        throw UsageError("unknown builtin '" + o.builtin + "'");
    }
    Tally t;
    for (const auto &r : res) t.line(r.passed, r.name + " max_dev=" + fmt12(r.deviation));
    return t.exit_code();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qcut: gate and wire cutting via ZX-calculus"};
    app.require_subcommand(1);

    VerifyOptions vo;
    auto *verify_cmd = app.add_subcommand("verify", "Check decompositions against their target channels");
    verify_cmd->add_flag("--all", vo.all, "Verify the built-in suite");
    verify_cmd->add_option("--deco", vo.deco, "wire_ncc|wire_cc|mcz|rzz_a|rzz_b|multi_z|controlled_sequence");
    verify_cmd->add_option("--config", vo.config, "Take the decomposition from a config file");
    verify_cmd->add_option("--m", vo.m, "Upper register size");
    verify_cmd->add_option("--mprime", vo.mprime, "Lower register size");
    verify_cmd->add_option("--theta", vo.theta, "Angle (number or expression such as pi/4)");
    verify_cmd->add_option("--cc", vo.cc, "Communicating basis of wire_cc");
    verify_cmd->add_flag("--json", vo.json, "Print the decomposition and result as JSON");

    SampleOptions so;
    auto *sample_cmd = app.add_subcommand("sample", "Quasiprobability Monte Carlo estimate");
    sample_cmd->add_option("--config", so.config, "Experiment config (JSON)")->required();
    sample_cmd->add_option("--seed", so.seed, "64-bit seed")->required();
    sample_cmd->add_option("--out", so.out, "Report path (default: config output, else stdout)");
    sample_cmd->add_option("--csv", so.csv, "Per-batch CSV path");
    sample_cmd->add_option("--shots", so.shots, "Override the config shot count");
    sample_cmd->add_option("--threads", so.threads, "Worker threads");
    sample_cmd->add_flag("--no-sign-tracking", so.no_signs, "Force every outcome sign to +1");

    std::size_t sweep = 0;
    auto *norms_cmd = app.add_subcommand("norms", "CSV of 1-norms of the built-in decompositions");
    norms_cmd->add_option("--sweep", sweep, "Extra rzz_b rows for theta evenly spaced in [0, pi/2]");

    ZxOptions zo;
    auto *zx_cmd = app.add_subcommand("zx-check", "Contract diagrams and compare");
    zx_cmd->add_option("--builtin", zo.builtin, "cnot-variants|mcz-fusion|pauli-states|gates|rules|wire-cut|all");
    zx_cmd->add_option("--file", zo.file, "Diagram text file");
    zx_cmd->add_option("--n", zo.n, "Qubits for mcz-fusion");
    zx_cmd->add_option("--m", zo.m, "Split point for mcz-fusion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (verify_cmd->parsed()) return cmd_verify(vo);
        if (sample_cmd->parsed()) return cmd_sample(so);
        if (norms_cmd->parsed()) return cmd_norms(sweep);
        if (zx_cmd->parsed()) return cmd_zx_check(zo);
    } catch (const Error &e) {
        // anything rejected by the library is an input problem
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kUsage;
}
