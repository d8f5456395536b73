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

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcut/zx_builders.hpp"

namespace qcut::zx {

/// Complex-valued expression: numbers, `pi`, `sqrt2`, `i`, + - * / ^,
/// parentheses and the functions sqrt, exp, cos, sin.
class ExpressionParser {
  public:
    explicit ExpressionParser(std::string_view s, std::size_t line = 0) : s_(s), line_(line) {}

    cplx parse() {
        const cplx v = sum();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

  private:
    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError("bad expression '" + std::string(s_) + "': " + what, line_);
    }
    bool eat(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    cplx sum() {
        cplx v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }
    cplx product() {
        cplx v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }
    cplx unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    cplx power() {
        const cplx base = atom();
        if (eat('^')) return std::pow(base, unary());
        return base;
    }
    cplx atom() {
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            const cplx v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
                (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+')) {
                pos_ += 2;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
            const std::string num(s_.substr(start, pos_ - start));
            try {
                std::size_t used = 0;
                const double v = std::stod(num, &used);
                if (used != num.size()) fail("bad number '" + num + "'");
                return v;
            } catch (const std::logic_error &) {
                fail("bad number '" + num + "'");
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if (id == "pi") return std::numbers::pi;
            if (id == "sqrt2") return std::sqrt(2.0);
            if (id == "i") return imag_unit;
            if (id == "sqrt" || id == "exp" || id == "cos" || id == "sin") {
                if (!eat('(')) fail("expected '(' after " + std::string(id));
                const cplx a = sum();
                if (!eat(')')) fail("missing ')'");
                if (id == "sqrt") return std::sqrt(a);
                if (id == "exp") return std::exp(a);
                if (id == "cos") return std::cos(a);
                return std::sin(a);
            }
            fail("unknown identifier '" + std::string(id) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

inline cplx parse_complex(std::string_view s, std::size_t line = 0) {
    return ExpressionParser(s, line).parse();
}

inline double parse_real(std::string_view s, std::size_t line = 0) {
    const cplx v = parse_complex(s, line);
    if (std::abs(v.imag()) > 0.0) {
        throw ParseError("expected a real value, got '" + std::string(s) + "'", line);
    }
    return v.real();
}

struct DiagramCheck {
    enum class Kind { Golden, Pair };
    std::string diagram;
    Kind kind = Kind::Golden;
    Matrix golden;
    std::string other;
    bool up_to_scalar = false;
    std::size_t line = 0;
};

struct DiagramFile {
    std::vector<std::pair<std::string, Diagram>> diagrams;
    std::vector<DiagramCheck> checks;

    [[nodiscard]] const Diagram *find(const std::string &name) const {
        for (const auto &[n, d] : diagrams) {
            if (n == name) return &d;
        }
        return nullptr;
    }
};

/// Parse the line-oriented diagram format documented in the README.
inline DiagramFile parse_diagram_text(std::string_view text) {
    DiagramFile file;
    std::map<std::string, NodeId> ids;
    bool compare_scalar = false;
    bool open = false;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;

    auto current = [&]() -> Diagram & {
        if (!open) {
            file.diagrams.emplace_back("main", Diagram{});
            open = true;
        }
        return file.diagrams.back().second;
    };
    auto lookup = [&](const std::string &id) {
        const auto it = ids.find(id);
        if (it == ids.end()) throw ParseError("unknown node '" + id + "'", lineno);
        return it->second;
    };
    auto declare = [&](const std::string &id, NodeId n) {
        if (!ids.emplace(id, n).second) throw ParseError("duplicate node id '" + id + "'", lineno);
    };

    while (std::getline(in, raw)) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string &kw = tok[0];
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (tok.size() < lo || tok.size() > hi) {
                throw ParseError("'" + kw + "' takes " + std::to_string(lo - 1) +
                                     (hi != lo ? "-" + std::to_string(hi - 1) : "") + " arguments",
                                 lineno);
            }
        };
        if (kw == "diagram") {
            need(2, 2);
            if (file.find(tok[1])) throw ParseError("duplicate diagram '" + tok[1] + "'", lineno);
            file.diagrams.emplace_back(tok[1], Diagram{});
            open = true;
            ids.clear();
            compare_scalar = false;
        } else if (kw == "z" || kw == "x") {
            need(2, 3);
            const double ph = tok.size() == 3 ? parse_real(tok[2], lineno) : 0.0;
            Diagram &d = current();
            declare(tok[1], kw == "z" ? d.add_z(ph) : d.add_x(ph));
        } else if (kw == "h") {
            need(2, 4);
            cplx label{-1.0, 0.0};
            if (tok.size() >= 3) label = parse_complex(tok[2], lineno);
            if (tok.size() == 4) label += imag_unit * parse_real(tok[3], lineno);
            declare(tok[1], current().add_h(label));
        } else if (kw == "cup" || kw == "cap" || kw == "swap") {
            need(2, 2);
            Diagram &d = current();
            declare(tok[1], kw == "cup" ? d.add_cup() : kw == "cap" ? d.add_cap() : d.add_swap());
        } else if (kw == "in" || kw == "out") {
            need(2, 2);
            Diagram &d = current();
            declare(tok[1], kw == "in" ? d.add_input() : d.add_output());
        } else if (kw == "edge") {
            need(3, 4);
            Diagram &d = current();
            try {
                d.connect(lookup(tok[1]), lookup(tok[2]), tok.size() == 4 ? tok[3] : std::string{});
            } catch (const InvariantError &e) {
                throw ParseError(e.what(), lineno);
            }
        } else if (kw == "scalar") {
            need(2, 3);
            cplx s = parse_complex(tok[1], lineno);
            if (tok.size() == 3) s += imag_unit * parse_real(tok[2], lineno);
            current().multiply_scalar(s);
        } else if (kw == "compare") {
            need(2, 2);
            if (tok[1] == "exact") compare_scalar = false;
            else if (tok[1] == "scalar") compare_scalar = true;
            else throw ParseError("compare mode must be 'exact' or 'scalar'", lineno);
        } else if (kw == "expect") {
            need(2, 2);
            current();
            if (!file.find(tok[1])) throw ParseError("unknown diagram '" + tok[1] + "'", lineno);
            DiagramCheck c;
            c.diagram = file.diagrams.back().first;
            c.kind = DiagramCheck::Kind::Pair;
            c.other = tok[1];
            c.up_to_scalar = compare_scalar;
            c.line = lineno;
            file.checks.push_back(std::move(c));
        } else if (kw == "matrix") {
            need(3, 3);
            current();
            const double r = parse_real(tok[1], lineno), cc = parse_real(tok[2], lineno);
            if (r < 1 || cc < 1 || r != std::floor(r) || cc != std::floor(cc) || r > 4096 || cc > 4096) {
                throw ParseError("bad matrix shape", lineno);
            }
            DiagramCheck c;
            c.diagram = file.diagrams.back().first;
            c.kind = DiagramCheck::Kind::Golden;
            c.up_to_scalar = compare_scalar;
            c.line = lineno;
            c.golden.resize(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cc));
            for (Eigen::Index row = 0; row < c.golden.rows(); ++row) {
                if (!std::getline(in, raw)) throw ParseError("matrix ended early", lineno);
                ++lineno;
                std::istringstream rs(raw);
                std::vector<std::string> vals;
                for (std::string t; rs >> t;) vals.push_back(t);
                if (vals.size() != static_cast<std::size_t>(c.golden.cols())) {
                    throw ParseError("matrix row has " + std::to_string(vals.size()) + " entries, expected " +
                                         std::to_string(c.golden.cols()),
                                     lineno);
                }
                for (Eigen::Index col = 0; col < c.golden.cols(); ++col) {
                    c.golden(row, col) = parse_complex(vals[static_cast<std::size_t>(col)], lineno);
                }
            }
            file.checks.push_back(std::move(c));
        } else {
            throw ParseError("unknown keyword '" + kw + "'", lineno);
        }
    }
    for (const auto &[name, d] : file.diagrams) {
        try {
            d.validate();
        } catch (const Error &e) {
            throw ParseError("diagram '" + name + "': " + e.what());
        }
    }
    return file;
}

inline std::vector<CheckResult> run_checks(const DiagramFile &file,
                                           double tolerance = tol::structural) {
    std::vector<CheckResult> out;
    for (const auto &c : file.checks) {
        const Diagram &d = *file.find(c.diagram);
        const std::string label = c.diagram + (c.kind == DiagramCheck::Kind::Pair ? " vs " + c.other : " vs matrix");
        Matrix want;
        if (c.kind == DiagramCheck::Kind::Pair) {
            const Diagram &o = *file.find(c.other);
            if (o.inputs().size() != d.inputs().size() || o.outputs().size() != d.outputs().size()) {
                out.push_back({label, std::numeric_limits<double>::infinity(), false});
                continue;
            }
            want = contract(o);
        } else {
            want = c.golden;
        }
        Matrix got = contract(d);
        if (got.rows() != want.rows() || got.cols() != want.cols()) {
            out.push_back({label, std::numeric_limits<double>::infinity(), false});
            continue;
        }
        if (c.up_to_scalar) {
            const double wn = want.squaredNorm();
            const cplx r = wn > 0 ? (want.conjugate().cwiseProduct(got)).sum() / wn : cplx(0.0);
            if (std::abs(r) > 0) got /= r;
        }
        out.push_back(check_against(label, got, want, tolerance));
    }
    return out;
}

} // namespace qcut::zx
