#pragma once

// DAG skeleton of a causal model: construction, ancestry queries,
// d-separation and graph surgery.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalinfo/errors.hpp"

namespace causalinfo {

using Vertex = std::size_t;

/// Sorted set of vertex indices.
class VertexSet {
public:
    VertexSet() = default;
    VertexSet(std::initializer_list<Vertex> members) : members_(members) { normalize(); }
    explicit VertexSet(std::vector<Vertex> members) : members_(std::move(members)) { normalize(); }

    static VertexSet range(std::size_t n) {
        std::vector<Vertex> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return VertexSet(std::move(all));
    }

    bool contains(Vertex v) const { return std::binary_search(members_.begin(), members_.end(), v); }
    void insert(Vertex v) {
        auto it = std::lower_bound(members_.begin(), members_.end(), v);
        if (it == members_.end() || *it != v) members_.insert(it, v);
    }
    void erase(Vertex v) {
        auto it = std::lower_bound(members_.begin(), members_.end(), v);
        if (it != members_.end() && *it == v) members_.erase(it);
    }

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }
    Vertex operator[](std::size_t i) const { return members_[i]; }
    const std::vector<Vertex>& members() const { return members_; }

    bool is_subset_of(const VertexSet& other) const {
        return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
    }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;

    /// Orders by size first, then lexicographically.
    friend bool shortlex_less(const VertexSet& a, const VertexSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members_ < b.members_;
    }

private:
    void normalize() {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    std::vector<Vertex> members_;
};

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
    std::vector<Vertex> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    std::vector<Vertex> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    std::vector<Vertex> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

inline bool disjoint(const VertexSet& a, const VertexSet& b) { return set_intersection(a, b).empty(); }

/// Immutable directed acyclic graph over vertices 0..n-1, stored as parent sets.
class Dag {
public:
    Dag() = default;

    std::size_t size() const { return parents_.size(); }
    const VertexSet& parents(Vertex v) const { return parents_.at(v); }
    const VertexSet& children(Vertex v) const { return children_.at(v); }
    const std::vector<VertexSet>& parent_sets() const { return parents_; }
    const std::vector<Vertex>& topological_order() const { return order_; }
    const std::string& label(Vertex v) const { return labels_.at(v); }
    const std::vector<std::string>& labels() const { return labels_; }

    bool has_edge(Vertex from, Vertex to) const { return to < size() && parents_[to].contains(from); }

    std::size_t edge_count() const {
        std::size_t count = 0;
        for (const auto& p : parents_) count += p.size();
        return count;
    }

    std::optional<Vertex> find(std::string_view label) const {
        for (Vertex v = 0; v < labels_.size(); ++v)
            if (labels_[v] == label) return v;
        return std::nullopt;
    }

    /// True when every parent index is smaller than its child.
    bool index_order_is_topological() const {
        for (Vertex v = 0; v < size(); ++v)
            if (!parents_[v].empty() && parents_[v].members().back() >= v) return false;
        return true;
    }

    friend bool operator==(const Dag& a, const Dag& b) {
        return a.parents_ == b.parents_ && a.labels_ == b.labels_;
    }

    friend Dag validate_dag(std::size_t n, std::vector<VertexSet> parents, std::vector<std::string> labels);

private:
    std::vector<VertexSet> parents_;
    std::vector<VertexSet> children_;
    std::vector<Vertex> order_;
    std::vector<std::string> labels_;
};

inline std::string default_label(Vertex v) { return "X" + std::to_string(v); }

namespace detail {

// Returns one directed cycle among the vertices Kahn's algorithm could not order.
inline std::vector<Vertex> find_cycle(const std::vector<VertexSet>& parents, const std::vector<bool>& ordered) {
    // Every unordered vertex has an unordered parent, so walking parents must revisit a vertex.
    Vertex start = 0;
    while (ordered[start]) ++start;
    std::vector<std::size_t> seen_at(parents.size(), static_cast<std::size_t>(-1));
    std::vector<Vertex> walk;
    Vertex v = start;
    while (seen_at[v] == static_cast<std::size_t>(-1)) {
        seen_at[v] = walk.size();
        walk.push_back(v);
        for (Vertex p : parents[v]) {
            if (!ordered[p]) {
                v = p;
                break;
            }
        }
    }
    std::vector<Vertex> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[v]), walk.end());
    std::reverse(cycle.begin(), cycle.end());  // parent walk runs against edge direction
    return cycle;
}

}  // namespace detail

/// Builds a Dag from per-vertex parent sets, rejecting self-loops, out-of-range
/// indices and cycles. Labels default to "X<i>".
inline Dag validate_dag(std::size_t n, std::vector<VertexSet> parents, std::vector<std::string> labels = {}) {
    if (parents.size() != n)
        throw Error(ErrorKind::IndexOutOfRange,
                    "expected " + std::to_string(n) + " parent sets, got " + std::to_string(parents.size()));
    if (labels.empty()) {
        labels.reserve(n);
        for (Vertex v = 0; v < n; ++v) labels.push_back(default_label(v));
    }
    if (labels.size() != n) throw Error(ErrorKind::IndexOutOfRange, "label count does not match vertex count");

    Dag dag;
    dag.children_.assign(n, VertexSet{});
    for (Vertex v = 0; v < n; ++v) {
        for (Vertex p : parents[v]) {
            if (p >= n)
                throw Error(ErrorKind::IndexOutOfRange,
                            "parent " + std::to_string(p) + " of vertex " + std::to_string(v) + " is out of range");
            if (p == v) throw Error(ErrorKind::SelfParent, "vertex " + labels[v] + " lists itself as a parent");
            dag.children_[p].insert(v);
        }
    }

    // Kahn's algorithm; ties broken by smallest index so the order is deterministic.
    std::vector<std::size_t> pending(n);
    for (Vertex v = 0; v < n; ++v) pending[v] = parents[v].size();
    std::vector<Vertex> ready;
    for (Vertex v = n; v-- > 0;)
        if (pending[v] == 0) ready.push_back(v);
    std::vector<bool> ordered(n, false);
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        Vertex v = ready.back();
        ready.pop_back();
        ordered[v] = true;
        dag.order_.push_back(v);
        for (Vertex c : dag.children_[v])
            if (--pending[c] == 0) ready.push_back(c);
    }
    if (dag.order_.size() != n) {
        auto cycle = detail::find_cycle(parents, ordered);
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
        std::string text;
        for (Vertex v : cycle) text += labels[v] + " -> ";
        text += labels[cycle.front()];
        throw Error(ErrorKind::CycleDetected, text);
    }
    dag.parents_ = std::move(parents);
    dag.labels_ = std::move(labels);
    return dag;
}

inline void check_vertices(const Dag& dag, const VertexSet& set) {
    if (!set.empty() && set.members().back() >= dag.size())
        throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(set.members().back()) +
                                                    " is outside a graph of " + std::to_string(dag.size()) +
                                                    " vertices");
}

namespace detail {

template <class Next>
VertexSet reach(const Dag& dag, const VertexSet& from, Next&& next) {
    std::vector<bool> seen(dag.size(), false);
    std::deque<Vertex> queue;
    for (Vertex s : from)
        for (Vertex v : next(s))
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : next(v))
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
    }
    std::vector<Vertex> out;
    for (Vertex v = 0; v < dag.size(); ++v)
        if (seen[v]) out.push_back(v);
    return VertexSet(std::move(out));
}

}  // namespace detail

/// Vertices reachable from S by a directed path of length at least one.
inline VertexSet descendants_of(const Dag& dag, const VertexSet& s) {
    check_vertices(dag, s);
    return detail::reach(dag, s, [&](Vertex v) -> const VertexSet& { return dag.children(v); });
}

inline VertexSet ancestors_of(const Dag& dag, const VertexSet& s) {
    check_vertices(dag, s);
    return detail::reach(dag, s, [&](Vertex v) -> const VertexSet& { return dag.parents(v); });
}

/// [n] minus S and its descendants.
inline VertexSet nondescendants_of(const Dag& dag, const VertexSet& s) {
    return set_difference(VertexSet::range(dag.size()), set_union(descendants_of(dag, s), s));
}

/// Union of the parent sets of S with S itself removed. When a member of S is
/// an ancestor of one of these parents, the parents are not all nondescendants
/// of S; callers relying on Pi_S being a subset of N_S must check that.
inline VertexSet parents_of_set(const Dag& dag, const VertexSet& s) {
    check_vertices(dag, s);
    VertexSet out;
    for (Vertex v : s)
        for (Vertex p : dag.parents(v)) out.insert(p);
    return set_difference(out, s);
}

/// d-separation of A and B given Z, by reachability over (vertex, direction)
/// states ("Bayes ball").
inline bool d_separated(const Dag& dag, const VertexSet& a, const VertexSet& b, const VertexSet& z) {
    check_vertices(dag, a);
    check_vertices(dag, b);
    check_vertices(dag, z);
    if (!disjoint(a, b) || !disjoint(a, z) || !disjoint(b, z))
        throw Error(ErrorKind::SetsNotDisjoint, "d-separation needs pairwise disjoint sets");
    if (a.empty() || b.empty()) return true;

    const std::size_t n = dag.size();
    // Z together with its ancestors: colliders in this set are open.
    std::vector<bool> opens_collider(n, false);
    for (Vertex v : set_union(z, ancestors_of(dag, z))) opens_collider[v] = true;

    enum Direction : std::size_t { FromChild = 0, FromParent = 1 };
    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::deque<std::pair<Vertex, Direction>> queue;
    for (Vertex v : a) queue.emplace_back(v, FromChild);

    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[v][dir]) continue;
        visited[v][dir] = true;
        const bool observed = z.contains(v);
        if (!observed && b.contains(v)) return false;
        if (dir == FromChild) {
            if (observed) continue;
            for (Vertex p : dag.parents(v)) queue.emplace_back(p, FromChild);
            for (Vertex c : dag.children(v)) queue.emplace_back(c, FromParent);
        } else {
            if (!observed)
                for (Vertex c : dag.children(v)) queue.emplace_back(c, FromParent);
            if (opens_collider[v])
                for (Vertex p : dag.parents(v)) queue.emplace_back(p, FromChild);
        }
    }
    return true;
}

/// Removes every edge entering S.
inline Dag surgery(const Dag& dag, const VertexSet& s) {
    check_vertices(dag, s);
    auto parents = dag.parent_sets();
    for (Vertex v : s) parents[v] = VertexSet{};
    return validate_dag(dag.size(), std::move(parents), dag.labels());
}

/// Removes every edge leaving S.
inline Dag remove_outgoing(const Dag& dag, const VertexSet& s) {
    check_vertices(dag, s);
    auto parents = dag.parent_sets();
    for (auto& p : parents)
        for (Vertex v : s) p.erase(v);
    return validate_dag(dag.size(), std::move(parents), dag.labels());
}

namespace detail {

inline std::string dot_quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

inline std::string lowercase(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

}  // namespace detail

/// Graphviz rendering. Intervened vertices lose their incoming edges, are drawn
/// as boxes and receive a circled source node holding the assigned value
/// (`assigned_labels[v]`, or the lowercased vertex label when none is given).
inline std::string to_dot(const Dag& dag, const VertexSet& intervened = {},
                          const std::vector<std::string>& assigned_labels = {}) {
    check_vertices(dag, intervened);
    std::ostringstream out;
    out << "digraph causal {\n";
    for (Vertex v = 0; v < dag.size(); ++v) {
        out << "  n" << v << " [label=" << detail::dot_quote(dag.label(v));
        if (intervened.contains(v)) out << ", shape=box";
        out << "];\n";
    }
    for (Vertex v : intervened) {
        const std::string value = v < assigned_labels.size() && !assigned_labels[v].empty()
                                      ? assigned_labels[v]
                                      : detail::lowercase(dag.label(v));
        out << "  do" << v << " [label=" << detail::dot_quote(value) << ", shape=circle];\n";
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex v = 0; v < dag.size(); ++v) {
        if (intervened.contains(v)) continue;
        for (Vertex p : dag.parents(v)) edges.emplace_back(p, v);
    }
    std::sort(edges.begin(), edges.end());
    for (auto [from, to] : edges) out << "  n" << from << " -> n" << to << ";\n";
    for (Vertex v : intervened) out << "  do" << v << " -> n" << v << " [label=\"=\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace causalinfo
