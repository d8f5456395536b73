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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "qcut/sampler.hpp"

namespace qcut {

using ojson = nlohmann::ordered_json;

/// Round to 12 significant digits so the shortest round-trip form printed
/// by the JSON writer has at most 12 digits.
inline double round12(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline std::string fmt12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline ojson to_json(const SamplingReport &r) {
    ojson j;
    j["schema"] = "qcut.sampling_report.v1";
    j["decomposition"] = r.decomposition;
    j["parameters"] = r.parameters;
    j["seed"] = r.seed;
    j["shots"] = r.shots;
    j["batch_size"] = r.batch_size;
    j["sign_tracking"] = r.sign_tracking;
    j["gamma"] = round12(r.gamma);
    j["estimate"] = round12(r.estimate);
    j["standard_error"] = round12(r.standard_error);
    j["variance"] = round12(r.variance);
    j["max_abs_contribution"] = round12(r.max_abs_contribution);
    j["exact_value"] = r.exact_value ? ojson(round12(*r.exact_value)) : ojson(nullptr);
    ojson terms = ojson::array();
    for (std::size_t i = 0; i < r.term_labels.size(); ++i) {
        terms.push_back({{"label", r.term_labels[i]}, {"q", round12(r.term_q[i])}, {"shots", r.term_counts[i]}});
    }
    j["terms"] = std::move(terms);
    return j;
}

inline std::string report_text(const SamplingReport &r) { return to_json(r).dump(2) + "\n"; }

inline std::string batches_csv(const SamplingReport &r) {
    std::string out = "batch,shots,partial_mean\n";
    for (const auto &b : r.batches) {
        out += std::to_string(b.index) + "," + std::to_string(b.shots) + "," + fmt12(b.mean) + "\n";
    }
    return out;
}

inline std::string norms_header() { return "name,parameters,gamma,terms,needs_cc\n"; }

inline std::string norms_row(const Decomposition &d) {
    std::size_t cc = 0;
    for (const auto &t : d.terms) cc += t.needs_cc;
    return d.name + "," + d.parameters + "," + fmt12(one_norm(d)) + "," + std::to_string(d.terms.size()) + "," +
           (cc ? "yes" : "no") + "\n";
}

/// Structured export of a decomposition; CPTP flags are optional because
/// they need a Choi eigen-decomposition per factor.
inline ojson to_json(const Decomposition &d, bool with_cptp) {
    ojson j;
    j["name"] = d.name;
    j["parameters"] = d.parameters;
    j["partition"] = d.partition.sizes;
    j["gamma"] = round12(one_norm(d));
    ojson terms = ojson::array();
    for (const auto &t : d.terms) {
        ojson e{{"label", t.label}, {"q", round12(t.q)}, {"needs_cc", t.needs_cc}};
        if (with_cptp) e["cptp"] = term_is_cptp(t);
        terms.push_back(std::move(e));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline ojson to_json(const VerifyReport &r) {
    return {{"name", r.name},           {"parameters", r.parameters}, {"gamma", round12(r.gamma)},
            {"terms", r.terms},         {"sum_q", round12(r.sum_q)},  {"max_deviation", round12(r.max_deviation)},
            {"passed", r.passed}};
}

} // namespace qcut
