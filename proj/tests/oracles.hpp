#pragma once

// Reference computations for the test suites. Everything here works on
// laws keyed by full-length assignment vectors and enumerates cells directly,
// so it shares no table layout, regrouping or conditioning code with the
// library under test. Coordinates outside a projection are zeroed.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causalinfo/distribution.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/model.hpp"
#include "causalinfo/rng.hpp"

namespace oracle {

using causalinfo::CptModel;
using causalinfo::FunctionalModel;
using causalinfo::PartialAssignment;
using causalinfo::Vertex;
using causalinfo::VertexSet;

using Cell = std::vector<std::size_t>;
using Law = std::map<Cell, double>;

inline std::vector<Cell> all_cells(const std::vector<std::size_t>& cards) {
    std::vector<Cell> out;
    Cell x(cards.size(), 0);
    while (true) {
        out.push_back(x);
        std::size_t k = cards.size();
        while (k > 0) {
            if (++x[k - 1] < cards[k - 1]) break;
            x[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
    return out;
}

// Row index over the parents of v, first parent most significant.
inline std::size_t row_of(const causalinfo::Dag& dag, const std::vector<std::size_t>& cards, Vertex v,
                          const Cell& x) {
    std::size_t r = 0;
    for (Vertex p : dag.parents(v)) r = r * cards[p] + x[p];
    return r;
}

inline double cpt_entry(const CptModel& m, Vertex v, const Cell& x) {
    return m.cpt(v)(row_of(m.dag(), m.cardinalities(), v, x), x[v]);
}

inline bool pinned(const Cell& x, const PartialAssignment& spec) {
    for (const auto& [v, value] : spec)
        if (x[v] != value) return false;
    return true;
}

/// Truncated product over cells agreeing with `spec`; the empty spec gives
/// the observational joint.
inline Law do_law(const CptModel& m, const PartialAssignment& spec = {}) {
    Law law;
    for (const auto& x : all_cells(m.cardinalities())) {
        if (!pinned(x, spec)) continue;
        double p = 1.0;
        for (Vertex v = 0; v < m.size(); ++v)
            if (!spec.count(v)) p *= cpt_entry(m, v, x);
        law[x] = p;
    }
    return law;
}

inline Law joint(const CptModel& m) { return do_law(m); }

// Evaluation order found by repeated sweeps, independent of Dag's own order.
inline std::vector<Vertex> sweep_order(const causalinfo::Dag& dag) {
    std::vector<Vertex> order;
    std::vector<bool> done(dag.size(), false);
    while (order.size() < dag.size()) {
        for (Vertex v = 0; v < dag.size(); ++v) {
            if (done[v]) continue;
            bool ready = true;
            for (Vertex p : dag.parents(v)) ready = ready && done[p];
            if (ready) {
                done[v] = true;
                order.push_back(v);
            }
        }
    }
    return order;
}

/// Pushes every noise combination through the equations, with the equations
/// of intervened variables replaced by constants.
inline Law functional_law(const FunctionalModel& fm, const PartialAssignment& spec = {}) {
    std::vector<std::size_t> noise_cards;
    for (Vertex v = 0; v < fm.size(); ++v) noise_cards.push_back(fm.noise_cardinality(v));
    const auto order = sweep_order(fm.dag());
    Law law;
    for (const auto& u : all_cells(noise_cards)) {
        // noise of an intervened variable is still drawn, then ignored
        double p = 1.0;
        for (Vertex v = 0; v < fm.size(); ++v) p *= fm.noise(v)[u[v]];
        Cell x(fm.size(), 0);
        for (Vertex v : order) {
            if (auto it = spec.find(v); it != spec.end()) {
                x[v] = it->second;
                continue;
            }
            const std::size_t r = row_of(fm.dag(), fm.cardinalities(), v, x);
            x[v] = fm.function(v)[r * fm.noise_cardinality(v) + u[v]];
        }
        law[x] += p;
    }
    return law;
}

inline Cell restrict(const Cell& x, const VertexSet& vars) {
    Cell out(x.size(), 0);
    for (Vertex v : vars) out[v] = x[v];
    return out;
}

inline Law project(const Law& law, const VertexSet& vars) {
    Law out;
    for (const auto& [x, p] : law) out[restrict(x, vars)] += p;
    return out;
}

inline double lookup(const Law& law, const Cell& key) {
    auto it = law.find(key);
    return it == law.end() ? 0.0 : it->second;
}

/// Largest |table(x) - law(x)| over the table's cells, plus any law mass the
/// table does not cover. `law` must already be projected onto the table scope.
inline double max_abs_diff(const causalinfo::JointTable& table, const Law& law, std::size_t n) {
    double worst = 0.0;
    double covered = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto values = table.decode(i);
        Cell key(n, 0);
        for (std::size_t k = 0; k < values.size(); ++k) key[table.scope()[k].id] = values[k];
        const double q = lookup(law, key);
        covered += q;
        worst = std::max(worst, std::abs(table[i] - q));
    }
    double total = 0.0;
    for (const auto& [x, p] : law) total += p;
    return std::max(worst, std::abs(total - covered));
}

/// Renormalized slice of `law` at the evidence, over all coordinates.
inline Law condition(const Law& law, const PartialAssignment& evidence) {
    Law out;
    double mass = 0.0;
    for (const auto& [x, p] : law)
        if (pinned(x, evidence)) {
            out[x] = p;
            mass += p;
        }
    for (auto& [x, p] : out) p /= mass;
    return out;
}

inline double entropy(const Law& law) {
    double h = 0.0;
    for (const auto& [x, p] : law)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

/// I(A;B|Z) = H(AZ) + H(BZ) - H(ABZ) - H(Z).
inline double cmi(const Law& law, const VertexSet& a, const VertexSet& b, const VertexSet& z = {}) {
    using causalinfo::set_union;
    return entropy(project(law, set_union(a, z))) + entropy(project(law, set_union(b, z))) -
           entropy(project(law, set_union(set_union(a, b), z))) - entropy(project(law, z));
}

inline PartialAssignment assignment_on(const Cell& x, const VertexSet& vars) {
    PartialAssignment out;
    for (Vertex v : vars) out[v] = x[v];
    return out;
}

/// I(T -> S | Z): average over P(x^T, x^S, x^Z) of
/// log2 P(x^T | x^S, x^Z) / P(x^T | do x^S, x^Z).
inline double cdi(const CptModel& m, const VertexSet& t, const VertexSet& s, const VertexSet& z = {}) {
    using causalinfo::set_union;
    const Law p = joint(m);
    const VertexSet tsz = set_union(set_union(t, s), z);
    const Law p_tsz = project(p, tsz);
    const Law p_sz = project(p, set_union(s, z));
    std::map<Cell, std::pair<Law, Law>> cache;
    double total = 0.0;
    for (const auto& [key, mass] : p_tsz) {
        if (mass <= 0.0) continue;
        const Cell ks = restrict(key, s);
        auto it = cache.find(ks);
        if (it == cache.end()) {
            const Law q = do_law(m, assignment_on(key, s));
            it = cache.emplace(ks, std::make_pair(project(q, set_union(t, z)), project(q, z))).first;
        }
        const double observed = mass / lookup(p_sz, restrict(key, set_union(s, z)));
        const double qz = lookup(it->second.second, restrict(key, z));
        const double causal = qz > 0.0 ? lookup(it->second.first, restrict(key, set_union(t, z))) / qz : 0.0;
        if (causal <= 0.0) return INFINITY;
        total += mass * std::log2(observed / causal);
    }
    return total;
}

/// x^S -> sum_z P(x^T | x^S, x^Z) P(x^Z), keyed by restrict(., S ∪ T).
inline Law adjustment(const CptModel& m, const VertexSet& s, const VertexSet& t, const VertexSet& z) {
    using causalinfo::set_union;
    const Law p = joint(m);
    const Law p_stz = project(p, set_union(set_union(s, t), z));
    const Law p_sz = project(p, set_union(s, z));
    const Law p_z = project(p, z);
    Law out;
    for (const auto& [key, mass] : p_stz) {
        const double denom = lookup(p_sz, restrict(key, set_union(s, z)));
        if (denom <= 0.0) continue;
        out[restrict(key, set_union(s, t))] += mass / denom * lookup(p_z, restrict(key, z));
    }
    return out;
}

inline std::set<Vertex> descendants(const causalinfo::Dag& dag, Vertex v) {
    std::set<Vertex> out;
    std::function<void(Vertex)> visit = [&](Vertex u) {
        for (Vertex w = 0; w < dag.size(); ++w)
            if (dag.parents(w).contains(u) && out.insert(w).second) visit(w);
    };
    visit(v);
    return out;
}

/// d-separation by enumerating every simple path of the skeleton.
inline bool d_separated_by_paths(const causalinfo::Dag& dag, const VertexSet& a, const VertexSet& b,
                                 const VertexSet& z) {
    const std::size_t n = dag.size();
    auto edge = [&](Vertex u, Vertex w) { return dag.parents(w).contains(u); };
    auto opens = [&](Vertex m) {
        if (z.contains(m)) return true;
        for (Vertex d : descendants(dag, m))
            if (z.contains(d)) return true;
        return false;
    };
    std::vector<Vertex> path;
    std::vector<bool> on_path(n, false);
    bool active_found = false;
    std::function<void(Vertex)> extend = [&](Vertex u) {
        if (active_found) return;
        if (path.size() > 1 && b.contains(u)) {
            bool active = true;
            for (std::size_t i = 1; i + 1 < path.size() && active; ++i) {
                const Vertex prev = path[i - 1], m = path[i], next = path[i + 1];
                const bool collider = edge(prev, m) && edge(next, m);
                active = collider ? opens(m) : !z.contains(m);
            }
            if (active) active_found = true;
            return;
        }
        for (Vertex w = 0; w < n; ++w) {
            if (on_path[w] || !(edge(u, w) || edge(w, u))) continue;
            on_path[w] = true;
            path.push_back(w);
            extend(w);
            path.pop_back();
            on_path[w] = false;
        }
    };
    for (Vertex start : a) {
        path = {start};
        std::fill(on_path.begin(), on_path.end(), false);
        on_path[start] = true;
        extend(start);
        if (active_found) return false;
    }
    return true;
}

inline double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace oracle

namespace testing_support {

using causalinfo::PartialAssignment;
using causalinfo::Vertex;
using causalinfo::VertexSet;

/// Fixed seeds, plus CAUSALINFO_SEED when set so CI can rotate one in.
inline std::vector<std::uint64_t> property_seeds() {
    std::vector<std::uint64_t> seeds = {1, 2, 3, 17, 2024};
    if (const char* extra = std::getenv("CAUSALINFO_SEED")) seeds.push_back(std::strtoull(extra, nullptr, 10));
    return seeds;
}

inline VertexSet random_subset(causalinfo::CounterRng& rng, const VertexSet& pool, double p = 0.5) {
    std::vector<Vertex> out;
    for (Vertex v : pool)
        if (rng.bernoulli(p)) out.push_back(v);
    return VertexSet(std::move(out));
}

inline PartialAssignment random_assignment(causalinfo::CounterRng& rng, const std::vector<std::size_t>& cards,
                                           const VertexSet& vars) {
    PartialAssignment out;
    for (Vertex v : vars) out[v] = rng.below(cards[v]);
    return out;
}

}  // namespace testing_support
