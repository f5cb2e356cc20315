#pragma once

// Hard interventions X^S <- x^S: truncated factorization, intervention
// followed by observation, directed stochastic kernels, and surgery on
// structural equations.

#include <string>
#include <utility>
#include <vector>

#include "causalinfo/distribution.hpp"
#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/model.hpp"

namespace causalinfo {

/// The do-assignment: intervened vertices and their forced values. An empty
/// spec means no intervention.
struct InterventionSpec {
    PartialAssignment values;

    VertexSet targets() const {
        std::vector<Vertex> ids;
        for (const auto& [id, value] : values) ids.push_back(id);
        return VertexSet(std::move(ids));
    }
    bool empty() const { return values.empty(); }
};

namespace detail {

inline void check_assignment(std::span<const std::size_t> cards, const PartialAssignment& values, ErrorKind kind) {
    for (const auto& [id, value] : values) {
        if (id >= cards.size())
            throw Error(kind, "vertex " + std::to_string(id) + " is not a model variable");
        if (value >= cards[id])
            throw Error(kind, "value " + std::to_string(value) + " is outside the alphabet of vertex " +
                                  std::to_string(id));
    }
}

inline VertexSet keys_of(const PartialAssignment& values) {
    std::vector<Vertex> ids;
    for (const auto& [id, value] : values) ids.push_back(id);
    return VertexSet(std::move(ids));
}

}  // namespace detail

/// Law of X^{S^c} after X^S <- x^S: the product of the CPTs of the
/// non-intervened variables with x^S substituted. Scope is S^c in index order.
inline JointTable interventional_global(const CptModel& model, const InterventionSpec& spec) {
    detail::check_assignment(model.cardinalities(), spec.values, ErrorKind::InvalidSpec);
    const VertexSet s = spec.targets();
    const VertexSet rest = set_difference(VertexSet::range(model.size()), s);

    std::vector<Variable> scope;
    std::vector<std::size_t> radices;
    for (Vertex v : rest) {
        scope.push_back({v, model.cardinality(v)});
        radices.push_back(model.cardinality(v));
    }
    const std::size_t size = table_size(scope);
    table_size(model.scope());  // the full assignment space obeys the same guard

    Assignment x(model.size(), 0);
    for (const auto& [id, value] : spec.values) x[id] = value;
    std::vector<double> probs(size);
    Odometer odo(radices);
    for (std::size_t cell = 0; cell < size; ++cell, odo.next()) {
        for (std::size_t k = 0; k < rest.size(); ++k) x[rest[k]] = odo.digits()[k];
        double p = 1.0;
        for (Vertex v : rest) {
            p *= model.conditional(v, x);
            if (p == 0.0) break;
        }
        probs[cell] = p;
    }
    return JointTable(std::move(scope), std::move(probs));
}

/// P_{X^T | X^S <- x^S}.
inline JointTable interventional_marginal(const CptModel& model, const InterventionSpec& spec, const VertexSet& t) {
    check_vertices(model.dag(), t);
    if (!disjoint(t, spec.targets()))
        throw Error(ErrorKind::OverlappingSets, "target set overlaps the intervened variables");
    return marginal(interventional_global(model, spec), t);
}

/// P_{X^T | X^S <- x^S, X^{S'} = x^{S'}}: intervene first, then condition.
inline JointTable interventional_conditional(const CptModel& model, const InterventionSpec& spec,
                                             const PartialAssignment& evidence, const VertexSet& t) {
    check_vertices(model.dag(), t);
    const VertexSet s = spec.targets();
    const VertexSet e = detail::keys_of(evidence);
    check_vertices(model.dag(), e);  // values outside an alphabet surface as zero-probability evidence
    detail::require_disjoint({&s, &e, &t}, ErrorKind::OverlappingSets);
    return condition(interventional_marginal(model, spec, set_union(e, t)), evidence);
}

/// Channel x^S -> P_{X^T | X^S <- x^S}, one row per x^S in mixed-radix order.
inline Kernel interventional_kernel(const CptModel& model, const VertexSet& s, const VertexSet& t) {
    check_vertices(model.dag(), s);
    check_vertices(model.dag(), t);
    if (!disjoint(s, t)) throw Error(ErrorKind::OverlappingSets, "cause and effect sets overlap");
    std::vector<Variable> input, output;
    std::vector<std::size_t> radices;
    for (Vertex v : s) {
        input.push_back({v, model.cardinality(v)});
        radices.push_back(model.cardinality(v));
    }
    for (Vertex v : t) output.push_back({v, model.cardinality(v)});
    const std::size_t rows = table_size(input);
    const std::size_t cols = table_size(output);
    std::vector<double> probs;
    probs.reserve(rows * cols);
    Odometer odo(radices);
    for (std::size_t r = 0; r < rows; ++r, odo.next()) {
        InterventionSpec spec;
        for (std::size_t k = 0; k < s.size(); ++k) spec.values[s[k]] = odo.digits()[k];
        const auto row = interventional_marginal(model, spec, t);
        probs.insert(probs.end(), row.probs().begin(), row.probs().end());
    }
    return Kernel(std::move(input), std::move(output), std::move(probs), std::vector<bool>(rows, true));
}

/// Directed stochastic kernel: the product over i outside S of the
/// full-history conditionals P(x_i | x^{i-1}), all derived from the joint in
/// the model's declared order. The joint must have full support.
inline JointTable dsk(const CptModel& model, const InterventionSpec& spec) {
    detail::check_assignment(model.cardinalities(), spec.values, ErrorKind::InvalidSpec);
    if (!model.dag().index_order_is_topological())
        throw Error(ErrorKind::UnsupportedModel, "variables are not listed in a causal order");
    const JointTable joint = joint_from_cpts(model);
    for (double p : joint.probs())
        if (!(p > 0.0))
            throw Error(ErrorKind::UnsupportedModel, "directed stochastic kernel needs a full-support joint");

    const std::size_t n = model.size();
    const auto& cards = model.cardinalities();
    // prefix[k][index of x_0..x_{k-1}] = P(x^{k}); the last variable is fastest,
    // so each step sums contiguous blocks.
    std::vector<std::vector<double>> prefix(n + 1);
    prefix[n].assign(joint.probs().begin(), joint.probs().end());
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t c = cards[k];
        prefix[k].assign(prefix[k + 1].size() / c, 0.0);
        for (std::size_t i = 0; i < prefix[k].size(); ++i)
            prefix[k][i] = accurate_sum(std::span<const double>(prefix[k + 1]).subspan(i * c, c));
    }

    const VertexSet s = spec.targets();
    const VertexSet rest = set_difference(VertexSet::range(n), s);
    std::vector<Variable> scope;
    std::vector<std::size_t> radices;
    for (Vertex v : rest) {
        scope.push_back({v, cards[v]});
        radices.push_back(cards[v]);
    }
    const std::size_t size = table_size(scope);
    Assignment x(n, 0);
    for (const auto& [id, value] : spec.values) x[id] = value;
    std::vector<double> probs(size);
    Odometer odo(radices);
    for (std::size_t cell = 0; cell < size; ++cell, odo.next()) {
        for (std::size_t k = 0; k < rest.size(); ++k) x[rest[k]] = odo.digits()[k];
        double p = 1.0;
        std::size_t history = 0;  // index of x_0..x_{i-1}
        for (Vertex i = 0; i < n; ++i) {
            const std::size_t extended = history * cards[i] + x[i];
            if (!s.contains(i)) p *= prefix[i + 1][extended] / prefix[i][history];
            history = extended;
        }
        probs[cell] = p;
    }
    return JointTable(std::move(scope), std::move(probs));
}

/// Replaces the equation of every intervened variable by the constant x_j
/// with a one-symbol noise table and no parents. Other equations and noise
/// tables are untouched, so children read the constant.
inline FunctionalModel functional_surgery(const FunctionalModel& fm, const InterventionSpec& spec) {
    detail::check_assignment(fm.cardinalities(), spec.values, ErrorKind::InvalidSpec);
    const VertexSet s = spec.targets();
    Dag dag = surgery(fm.dag(), s);
    std::vector<std::vector<double>> noise;
    std::vector<std::vector<std::size_t>> functions;
    for (Vertex v = 0; v < fm.size(); ++v) {
        if (auto it = spec.values.find(v); it != spec.values.end()) {
            noise.push_back({1.0});
            functions.push_back({it->second});
        } else {
            noise.push_back(fm.noise(v));
            functions.push_back(fm.function(v));
        }
    }
    return FunctionalModel(std::move(dag), fm.cardinalities(), std::move(noise), std::move(functions));
}

}  // namespace causalinfo
