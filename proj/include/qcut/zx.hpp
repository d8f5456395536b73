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
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qcut/pauli.hpp"
#include "qcut/superoperator.hpp"

namespace qcut::zx {

using NodeId = std::size_t;
using EdgeId = std::size_t;

enum class NodeKind { Z, X, H, Cup, Cap, Swap, Input, Output };

inline const char *kind_name(NodeKind k) {
    switch (k) {
    case NodeKind::Z: return "z";
    case NodeKind::X: return "x";
    case NodeKind::H: return "h";
    case NodeKind::Cup: return "cup";
    case NodeKind::Cap: return "cap";
    case NodeKind::Swap: return "swap";
    case NodeKind::Input: return "in";
    case NodeKind::Output: return "out";
    }
    return "?";
}

struct Node {
    NodeKind kind = NodeKind::Z;
    double phase = 0.0;
    cplx label{-1.0, 0.0};
    /// Incident edges in leg order. Leg order matters only for swaps.
    std::vector<EdgeId> legs;
};

struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    std::string name;
};

inline constexpr std::size_t max_tensor_legs = 28;

/// Open tensor network of spiders, H-boxes, cups/caps and swaps with an
/// explicit global scalar. Value type.
class Diagram {
  public:
    NodeId add_z(double phase = 0.0) { return add_node({NodeKind::Z, phase, {-1.0, 0.0}, {}}); }
    NodeId add_x(double phase = 0.0) { return add_node({NodeKind::X, phase, {-1.0, 0.0}, {}}); }
    NodeId add_h(cplx label = {-1.0, 0.0}) { return add_node({NodeKind::H, 0.0, label, {}}); }
    NodeId add_cup() { return add_node({NodeKind::Cup, 0.0, {-1.0, 0.0}, {}}); }
    NodeId add_cap() { return add_node({NodeKind::Cap, 0.0, {-1.0, 0.0}, {}}); }
    NodeId add_swap() { return add_node({NodeKind::Swap, 0.0, {-1.0, 0.0}, {}}); }

    NodeId add_input() {
        const NodeId id = add_node({NodeKind::Input, 0.0, {-1.0, 0.0}, {}});
        inputs_.push_back(id);
        return id;
    }
    NodeId add_output() {
        const NodeId id = add_node({NodeKind::Output, 0.0, {-1.0, 0.0}, {}});
        outputs_.push_back(id);
        return id;
    }

    NodeId add_node(Node n) {
        n.legs.clear();
        nodes_.push_back(std::move(n));
        return nodes_.size() - 1;
    }

    EdgeId connect(NodeId a, NodeId b, std::string name = {}) {
        check_node(a);
        check_node(b);
        if (!name.empty() && find_edge(name)) {
            throw InvariantError("duplicate edge name '" + name + "'");
        }
        edges_.push_back({a, b, std::move(name)});
        const EdgeId e = edges_.size() - 1;
        nodes_[a].legs.push_back(e);
        nodes_[b].legs.push_back(e);
        return e;
    }

    void multiply_scalar(cplx s) { scalar_ *= s; }
    void set_scalar(cplx s) { scalar_ = s; }
    [[nodiscard]] cplx scalar() const { return scalar_; }

    [[nodiscard]] const std::vector<Node> &nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<Edge> &edges() const { return edges_; }
    [[nodiscard]] const std::vector<NodeId> &inputs() const { return inputs_; }
    [[nodiscard]] const std::vector<NodeId> &outputs() const { return outputs_; }
    [[nodiscard]] const Node &node(NodeId id) const { check_node(id); return nodes_[id]; }
    [[nodiscard]] const Edge &edge(EdgeId e) const {
        if (e >= edges_.size()) throw InvariantError("edge " + std::to_string(e) + " not found");
        return edges_[e];
    }

    [[nodiscard]] std::optional<EdgeId> find_edge(const std::string &name) const {
        for (EdgeId e = 0; e < edges_.size(); ++e) {
            if (edges_[e].name == name) return e;
        }
        return std::nullopt;
    }

    /// Throws InvariantError on malformed structure.
    void validate() const {
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            const auto &n = nodes_[i];
            const auto deg = n.legs.size();
            const auto where = std::string(kind_name(n.kind)) + " node " + std::to_string(i);
            switch (n.kind) {
            case NodeKind::Input:
            case NodeKind::Output:
                if (deg != 1) throw InvariantError(where + " must have degree 1, has " + std::to_string(deg));
                break;
            case NodeKind::Cup:
            case NodeKind::Cap:
                if (deg != 2) throw InvariantError(where + " must have degree 2, has " + std::to_string(deg));
                break;
            case NodeKind::Swap:
                if (deg != 4) throw InvariantError(where + " must have degree 4, has " + std::to_string(deg));
                break;
            default:
                if (deg > max_tensor_legs) throw SizeError(where + " has too many legs");
                break;
            }
        }
        if (inputs_.size() + outputs_.size() > max_tensor_legs) {
            throw SizeError("diagram has " + std::to_string(inputs_.size() + outputs_.size()) +
                            " open legs, cap is " + std::to_string(max_tensor_legs));
        }
    }

    // Low-level editing used by composition and cut insertion.
    Node &mutable_node(NodeId id) { check_node(id); return nodes_[id]; }
    Edge &mutable_edge(EdgeId e) {
        if (e >= edges_.size()) throw InvariantError("edge " + std::to_string(e) + " not found");
        return edges_[e];
    }
    std::vector<NodeId> &mutable_inputs() { return inputs_; }
    std::vector<NodeId> &mutable_outputs() { return outputs_; }

  private:
    void check_node(NodeId id) const {
        if (id >= nodes_.size()) throw InvariantError("node " + std::to_string(id) + " not found");
    }

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<NodeId> inputs_;
    std::vector<NodeId> outputs_;
    cplx scalar_{1.0, 0.0};
};

namespace detail {

struct Tensor {
    std::vector<std::size_t> labels; // leg 0 is the most significant bit
    std::vector<cplx> data;
};

inline Tensor spider_tensor(double phase, std::size_t k, std::vector<std::size_t> labels) {
    const std::size_t d = std::size_t{1} << k;
    Tensor t{std::move(labels), std::vector<cplx>(d, 0.0)};
    t.data[0] += 1.0;
    t.data[d - 1] += std::exp(imag_unit * phase);
    return t;
}

inline Tensor node_tensor(const Node &n, std::vector<std::size_t> labels) {
    const std::size_t k = labels.size();
    const std::size_t d = std::size_t{1} << k;
    switch (n.kind) {
    case NodeKind::Z: return spider_tensor(n.phase, k, std::move(labels));
    case NodeKind::X: {
        Tensor t = spider_tensor(n.phase, k, std::move(labels));
        qcut::detail::walsh_hadamard(t.data.data(), d);
        const double s = std::pow(std::sqrt(0.5), static_cast<double>(k));
        for (auto &v : t.data) v *= s;
        return t;
    }
    case NodeKind::H: {
        Tensor t{std::move(labels), std::vector<cplx>(d, 1.0)};
        t.data[d - 1] = n.label;
        return t;
    }
    case NodeKind::Cup:
    case NodeKind::Cap:
    case NodeKind::Input:
    case NodeKind::Output: return Tensor{std::move(labels), {1.0, 0.0, 0.0, 1.0}};
    case NodeKind::Swap: {
        Tensor t{std::move(labels), std::vector<cplx>(16, 0.0)};
        for (std::size_t i = 0; i < 16; ++i) {
            const std::size_t l0 = (i >> 3) & 1U, l1 = (i >> 2) & 1U, l2 = (i >> 1) & 1U,
                              l3 = i & 1U;
            if (l0 == l3 && l1 == l2) t.data[i] = 1.0;
        }
        return t;
    }
    }
    throw InvariantError("unknown node kind");
}

/// Sum over repeated labels (self-loops).
inline Tensor trace_repeated(Tensor t) {
    const std::size_t k = t.labels.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (t.labels[i] != t.labels[j]) continue;
            std::vector<std::size_t> keep;
            for (std::size_t p = 0; p < k; ++p) {
                if (p != i && p != j) keep.push_back(p);
            }
            Tensor out;
            for (auto p : keep) out.labels.push_back(t.labels[p]);
            out.data.assign(std::size_t{1} << keep.size(), 0.0);
            for (std::size_t src = 0; src < t.data.size(); ++src) {
                const std::size_t bi = (src >> (k - 1 - i)) & 1U;
                const std::size_t bj = (src >> (k - 1 - j)) & 1U;
                if (bi != bj) continue;
                std::size_t dst = 0;
                for (auto p : keep) dst = (dst << 1) | ((src >> (k - 1 - p)) & 1U);
                out.data[dst] += t.data[src];
            }
            return trace_repeated(std::move(out));
        }
    }
    return t;
}

inline Tensor permute(const Tensor &t, const std::vector<std::size_t> &order) {
    const std::size_t k = t.labels.size();
    std::vector<std::size_t> src_bit(k);
    for (std::size_t p = 0; p < k; ++p) {
        const auto it = std::find(t.labels.begin(), t.labels.end(), order[p]);
        src_bit[p] = k - 1 - static_cast<std::size_t>(it - t.labels.begin());
    }
    bool identity = true;
    for (std::size_t p = 0; p < k; ++p) identity = identity && src_bit[p] == k - 1 - p;
    if (identity) return Tensor{order, t.data};
    Tensor out{order, std::vector<cplx>(t.data.size())};
    for (std::size_t dst = 0; dst < out.data.size(); ++dst) {
        std::size_t src = 0;
        for (std::size_t p = 0; p < k; ++p) {
            src |= ((dst >> (k - 1 - p)) & 1U) << src_bit[p];
        }
        out.data[dst] = t.data[src];
    }
    return out;
}

inline Tensor contract_pair(const Tensor &a, const Tensor &b) {
    std::vector<std::size_t> shared, fa, fb;
    for (auto l : a.labels) {
        if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) shared.push_back(l);
        else fa.push_back(l);
    }
    for (auto l : b.labels) {
        if (std::find(shared.begin(), shared.end(), l) == shared.end()) fb.push_back(l);
    }
    if (fa.size() + fb.size() > max_tensor_legs) {
        throw SizeError("intermediate tensor exceeds " + std::to_string(max_tensor_legs) + " legs");
    }
    std::vector<std::size_t> oa = fa, ob = shared;
    oa.insert(oa.end(), shared.begin(), shared.end());
    ob.insert(ob.end(), fb.begin(), fb.end());
    const Tensor pa = permute(a, oa);
    const Tensor pb = permute(b, ob);
    const auto ra = Eigen::Index{1} << fa.size();
    const auto rs = Eigen::Index{1} << shared.size();
    const auto rb = Eigen::Index{1} << fb.size();
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> ma(pa.data.data(), ra, rs);
    Eigen::Map<const RowMat> mb(pb.data.data(), rs, rb);
    Tensor out;
    out.labels = fa;
    out.labels.insert(out.labels.end(), fb.begin(), fb.end());
    out.data.resize(static_cast<std::size_t>(ra * rb));
    Eigen::Map<RowMat> mo(out.data.data(), ra, rb);
    mo.noalias() = ma * mb;
    return out;
}

inline std::size_t result_rank(const Tensor &a, const Tensor &b, std::size_t &shared) {
    shared = 0;
    for (auto l : a.labels) {
        if (std::find(b.labels.begin(), b.labels.end(), l) != b.labels.end()) ++shared;
    }
    return a.labels.size() + b.labels.size() - 2 * shared;
}

} // namespace detail

/// Contract to a matrix M[out, in]; the first boundary in each list is the
/// most significant bit. Includes the diagram scalar.
inline Matrix contract(const Diagram &d) {
    d.validate();
    const std::size_t ne = d.edges().size();
    std::vector<detail::Tensor> ts;
    std::vector<std::size_t> open_in, open_out;
    std::vector<std::size_t> boundary_label(d.nodes().size(), 0);
    std::size_t next = ne;
    for (auto id : d.inputs()) { boundary_label[id] = next; open_in.push_back(next++); }
    for (auto id : d.outputs()) { boundary_label[id] = next; open_out.push_back(next++); }
    for (NodeId i = 0; i < d.nodes().size(); ++i) {
        const auto &n = d.nodes()[i];
        std::vector<std::size_t> labels(n.legs.begin(), n.legs.end());
        if (n.kind == NodeKind::Input || n.kind == NodeKind::Output) {
            labels.insert(labels.begin(), boundary_label[i]);
        }
        ts.push_back(detail::trace_repeated(detail::node_tensor(n, std::move(labels))));
    }
    if (ts.empty()) {
        ts.push_back(detail::Tensor{{}, {1.0}});
    }
    while (ts.size() > 1) {
        std::size_t bi = 0, bj = 1, best = std::numeric_limits<std::size_t>::max();
        bool best_shares = false;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            for (std::size_t j = i + 1; j < ts.size(); ++j) {
                std::size_t sh = 0;
                const std::size_t r = detail::result_rank(ts[i], ts[j], sh);
                const bool shares = sh > 0;
                if ((shares && !best_shares) || (shares == best_shares && r < best)) {
                    best = r;
                    bi = i;
                    bj = j;
                    best_shares = shares;
                }
            }
        }
        detail::Tensor c = detail::contract_pair(ts[bi], ts[bj]);
        ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(bj));
        ts[bi] = std::move(c);
    }
    std::vector<std::size_t> order = open_out;
    order.insert(order.end(), open_in.begin(), open_in.end());
    const detail::Tensor fin = detail::permute(ts[0], order);
    const auto rows = Eigen::Index{1} << open_out.size();
    const auto cols = Eigen::Index{1} << open_in.size();
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = d.scalar() * fin.data[static_cast<std::size_t>(r * cols + c)];
        }
    }
    return m;
}

inline Operator contract_operator(const Diagram &d) {
    if (d.inputs().size() != d.outputs().size()) {
        throw DimensionError("diagram with " + std::to_string(d.inputs().size()) + " inputs and " +
                             std::to_string(d.outputs().size()) + " outputs is not an operator");
    }
    return Operator(contract(d));
}

/// Sequential composition: d1 first, then d2.
inline Diagram compose(const Diagram &d1, const Diagram &d2) {
    if (d1.outputs().size() != d2.inputs().size()) {
        throw DimensionError("compose: " + std::to_string(d1.outputs().size()) + " outputs vs " +
                             std::to_string(d2.inputs().size()) + " inputs");
    }
    Diagram out = d1;
    const std::size_t off = d1.nodes().size();
    for (const auto &n : d2.nodes()) {
        out.add_node(n);
    }
    for (const auto &e : d2.edges()) {
        const std::string name = (e.name.empty() || !out.find_edge(e.name)) ? e.name : e.name + "'";
        out.connect(e.a + off, e.b + off, name);
    }
    const std::vector<NodeId> joins = d1.outputs();
    for (std::size_t i = 0; i < joins.size(); ++i) {
        const NodeId o = joins[i];
        const NodeId p = d2.inputs()[i] + off;
        out.mutable_node(o).kind = NodeKind::Z;
        out.mutable_node(p).kind = NodeKind::Z;
        out.connect(o, p);
    }
    out.mutable_outputs().clear();
    for (auto id : d2.outputs()) out.mutable_outputs().push_back(id + off);
    out.multiply_scalar(d2.scalar());
    return out;
}

/// Parallel composition; d1 occupies the upper (high-order) wires.
inline Diagram tensor(const Diagram &d1, const Diagram &d2) {
    Diagram out = d1;
    const std::size_t off = d1.nodes().size();
    for (const auto &n : d2.nodes()) out.add_node(n);
    for (const auto &e : d2.edges()) {
        const std::string name = (e.name.empty() || !out.find_edge(e.name)) ? e.name : e.name + "'";
        out.connect(e.a + off, e.b + off, name);
    }
    for (auto id : d2.inputs()) out.mutable_inputs().push_back(id + off);
    for (auto id : d2.outputs()) out.mutable_outputs().push_back(id + off);
    out.multiply_scalar(d2.scalar());
    return out;
}

/// Rebuild with node i renamed to node_perm[i] and edges inserted in
/// edge_order. Per-node leg order is preserved.
inline Diagram relabel(const Diagram &d, const std::vector<NodeId> &node_perm,
                       const std::vector<EdgeId> &edge_order) {
    const std::size_t nn = d.nodes().size();
    const std::size_t ne = d.edges().size();
    auto is_perm = [](std::vector<std::size_t> v, std::size_t n) {
        if (v.size() != n) return false;
        std::sort(v.begin(), v.end());
        for (std::size_t i = 0; i < n; ++i) if (v[i] != i) return false;
        return true;
    };
    if (!is_perm(node_perm, nn) || !is_perm(edge_order, ne)) {
        throw InvariantError("relabel requires permutations of nodes and edges");
    }
    std::vector<NodeId> inv(nn);
    for (NodeId i = 0; i < nn; ++i) inv[node_perm[i]] = i;
    std::vector<EdgeId> new_id(ne);
    for (EdgeId k = 0; k < ne; ++k) new_id[edge_order[k]] = k;

    Diagram out;
    for (NodeId j = 0; j < nn; ++j) out.add_node(d.nodes()[inv[j]]);
    for (EdgeId k = 0; k < ne; ++k) {
        const Edge &e = d.edges()[edge_order[k]];
        out.connect(node_perm[e.a], node_perm[e.b], e.name);
    }
    // connect() appended legs in edge order; restore each node's own order.
    for (NodeId i = 0; i < nn; ++i) {
        auto &legs = out.mutable_node(node_perm[i]).legs;
        legs.clear();
        for (auto e : d.nodes()[i].legs) legs.push_back(new_id[e]);
    }
    for (auto id : d.inputs()) out.mutable_inputs().push_back(node_perm[id]);
    for (auto id : d.outputs()) out.mutable_outputs().push_back(node_perm[id]);
    out.set_scalar(d.scalar());
    return out;
}

/// PTM of ρ ↦ M ρ M† for a square contraction result.
inline Superoperator doubled(const Matrix &m) { return ptm_of_conjugation(Operator(m)); }

inline Superoperator doubled(const Diagram &d) { return doubled(contract(d)); }

struct RuleReport {
    double max_abs_deviation = 0.0;
    cplx ratio{1.0, 0.0};
    double residual = 0.0;
    bool passed = false;
};

/// Compare contractions of lhs and rhs. With up_to_scalar, fits lhs = r·rhs.
inline RuleReport verify_rule(const Diagram &lhs, const Diagram &rhs, bool up_to_scalar,
                              double tolerance = tol::structural) {
    if (lhs.inputs().size() != rhs.inputs().size() ||
        lhs.outputs().size() != rhs.outputs().size()) {
        throw DimensionError("boundary signature mismatch: (" + std::to_string(lhs.inputs().size()) +
                             "," + std::to_string(lhs.outputs().size()) + ") vs (" +
                             std::to_string(rhs.inputs().size()) + "," +
                             std::to_string(rhs.outputs().size()) + ")");
    }
    const Matrix l = contract(lhs);
    const Matrix r = contract(rhs);
    RuleReport rep;
    rep.max_abs_deviation = (l - r).cwiseAbs().maxCoeff();
    const double rn = r.squaredNorm();
    rep.ratio = rn > 0.0 ? (r.conjugate().cwiseProduct(l)).sum() / rn : cplx(0.0);
    rep.residual = (l - rep.ratio * r).cwiseAbs().maxCoeff();
    rep.passed = (up_to_scalar ? rep.residual : rep.max_abs_deviation) <= tolerance;
    return rep;
}

} // namespace qcut::zx
