#pragma once

// Markovian causal models in two equivalent forms: per-variable conditional
// probability tables (Markov factorization) and structural equations
// X_i = f_i(X^{Pi_i}, U_i) with independent finite noise.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "causalinfo/distribution.hpp"
#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/rng.hpp"

namespace causalinfo {

/// One value per model variable, indexed by vertex.
using Assignment = std::vector<std::size_t>;

namespace detail {

/// Row of a parent assignment: parents in ascending order, last fastest.
inline std::size_t parent_row(const VertexSet& parents, std::span<const std::size_t> cards,
                              std::span<const std::size_t> values) {
    std::size_t row = 0;
    for (Vertex p : parents) row = row * cards[p] + values[p];
    return row;
}

inline std::vector<Variable> parent_scope(const VertexSet& parents, std::span<const std::size_t> cards) {
    std::vector<Variable> scope;
    for (Vertex p : parents) scope.push_back({p, cards[p]});
    return scope;
}

}  // namespace detail

/// DAG plus one CPT per variable. Construction does not validate; use
/// validate_model (or CptModel::checked) before handing a model to queries.
class CptModel {
public:
    CptModel(Dag dag, std::vector<std::size_t> cardinalities, std::vector<Kernel> cpts)
        : dag_(std::move(dag)), cards_(std::move(cardinalities)), cpts_(std::move(cpts)) {}

    static CptModel checked(Dag dag, std::vector<std::size_t> cardinalities, std::vector<Kernel> cpts);

    /// Builds CPT kernels from raw rows: rows[i] is row-major over parent
    /// assignments of vertex i, each row of length cardinalities[i]. Row
    /// lengths must match the parent scopes even when `check` is off.
    static CptModel from_rows(Dag dag, std::vector<std::size_t> cardinalities,
                              std::vector<std::vector<double>> rows, bool check = true) {
        std::vector<Kernel> cpts;
        for (Vertex i = 0; i < dag.size(); ++i) {
            auto input = detail::parent_scope(dag.parents(i), cardinalities);
            const std::size_t row_count = table_size(input);
            cpts.emplace_back(std::move(input), std::vector<Variable>{{i, cardinalities.at(i)}}, std::move(rows.at(i)),
                              std::vector<bool>(row_count, true));
        }
        if (!check) return CptModel(std::move(dag), std::move(cardinalities), std::move(cpts));
        return checked(std::move(dag), std::move(cardinalities), std::move(cpts));
    }

    const Dag& dag() const { return dag_; }
    std::size_t size() const { return dag_.size(); }
    const std::vector<std::size_t>& cardinalities() const { return cards_; }
    std::size_t cardinality(Vertex v) const { return cards_.at(v); }
    const Kernel& cpt(Vertex v) const { return cpts_.at(v); }
    const std::vector<Kernel>& cpts() const { return cpts_; }

    std::vector<Variable> scope() const {
        std::vector<Variable> out;
        for (Vertex v = 0; v < size(); ++v) out.push_back({v, cards_[v]});
        return out;
    }

    /// P(X_v = x_v | X^{Pi_v} = x^{Pi_v}) read from a full assignment.
    double conditional(Vertex v, std::span<const std::size_t> x) const {
        return cpts_[v](detail::parent_row(dag_.parents(v), cards_, x), x[v]);
    }

private:
    Dag dag_;
    std::vector<std::size_t> cards_;
    std::vector<Kernel> cpts_;
};

/// Structural equations with explicit noise tables. functions[i] is a lookup
/// table indexed by parent_row * noise_cardinality + u.
class FunctionalModel {
public:
    FunctionalModel(Dag dag, std::vector<std::size_t> cardinalities, std::vector<std::vector<double>> noise,
                    std::vector<std::vector<std::size_t>> functions)
        : dag_(std::move(dag)), cards_(std::move(cardinalities)), noise_(std::move(noise)),
          functions_(std::move(functions)) {}

    static FunctionalModel checked(Dag dag, std::vector<std::size_t> cardinalities,
                                   std::vector<std::vector<double>> noise,
                                   std::vector<std::vector<std::size_t>> functions);

    const Dag& dag() const { return dag_; }
    std::size_t size() const { return dag_.size(); }
    const std::vector<std::size_t>& cardinalities() const { return cards_; }
    std::size_t cardinality(Vertex v) const { return cards_.at(v); }
    const std::vector<double>& noise(Vertex v) const { return noise_.at(v); }
    std::size_t noise_cardinality(Vertex v) const { return noise_.at(v).size(); }
    const std::vector<std::size_t>& function(Vertex v) const { return functions_.at(v); }

    /// f_v(x^{Pi_v}, u) with the parent values read from a full assignment.
    std::size_t evaluate(Vertex v, std::span<const std::size_t> x, std::size_t u) const {
        return functions_[v][detail::parent_row(dag_.parents(v), cards_, x) * noise_[v].size() + u];
    }

private:
    Dag dag_;
    std::vector<std::size_t> cards_;
    std::vector<std::vector<double>> noise_;
    std::vector<std::vector<std::size_t>> functions_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    OrderViolation,
    CardinalityViolation,
    ScopeViolation,
    ShapeViolation,
    NegativeEntry,
    NormalizationViolation,
    FunctionRangeViolation,
};

constexpr std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
    case ViolationKind::OrderViolation: return "OrderViolation";
    case ViolationKind::CardinalityViolation: return "CardinalityViolation";
    case ViolationKind::ScopeViolation: return "ScopeViolation";
    case ViolationKind::ShapeViolation: return "ShapeViolation";
    case ViolationKind::NegativeEntry: return "NegativeEntry";
    case ViolationKind::NormalizationViolation: return "NormalizationViolation";
    case ViolationKind::FunctionRangeViolation: return "FunctionRangeViolation";
    }
    return "Unknown";
}

struct Violation {
    ViolationKind kind;
    Vertex variable;
    std::optional<std::size_t> row;
    std::string message;
};

using ValidationReport = std::vector<Violation>;

namespace detail {

inline void check_common(const Dag& dag, const std::vector<std::size_t>& cards, ValidationReport& report) {
    if (cards.size() != dag.size()) {
        report.push_back({ViolationKind::ShapeViolation, 0, std::nullopt,
                          "cardinality list has " + std::to_string(cards.size()) + " entries for " +
                              std::to_string(dag.size()) + " variables"});
        return;
    }
    for (Vertex v = 0; v < dag.size(); ++v) {
        if (cards[v] == 0)
            report.push_back({ViolationKind::CardinalityViolation, v, std::nullopt, "cardinality must be at least 1"});
        for (Vertex p : dag.parents(v))
            if (p > v)
                report.push_back({ViolationKind::OrderViolation, v, std::nullopt,
                                  "parent " + dag.label(p) + " is declared after " + dag.label(v)});
    }
}

inline void check_distribution(std::span<const double> row, Vertex v, std::optional<std::size_t> r,
                               ValidationReport& report) {
    for (double p : row)
        if (!(p >= 0.0) || !std::isfinite(p)) {
            report.push_back({ViolationKind::NegativeEntry, v, r, "entry is negative or not finite"});
            return;
        }
    const double sum = accurate_sum(row);
    if (std::abs(sum - 1.0) > normalization_tolerance)
        report.push_back({ViolationKind::NormalizationViolation, v, r, "row sums to " + std::to_string(sum)});
}

inline std::string describe(const ValidationReport& report, const Dag& dag) {
    std::string text;
    for (const auto& v : report) {
        if (!text.empty()) text += "; ";
        text += std::string(to_string(v.kind)) + " at ";
        text += v.variable < dag.size() ? dag.label(v.variable) : std::to_string(v.variable);
        if (v.row) text += " row " + std::to_string(*v.row);
        text += ": " + v.message;
    }
    return text;
}

}  // namespace detail

/// Lists every invariant violation; an empty report means the model is valid.
inline ValidationReport validate_model(const CptModel& model) {
    ValidationReport report;
    const Dag& dag = model.dag();
    detail::check_common(dag, model.cardinalities(), report);
    if (!report.empty() && report.front().kind == ViolationKind::ShapeViolation) return report;
    if (model.cpts().size() != dag.size()) {
        report.push_back({ViolationKind::ShapeViolation, 0, std::nullopt, "one CPT per variable required"});
        return report;
    }
    for (Vertex v = 0; v < dag.size(); ++v) {
        const Kernel& cpt = model.cpt(v);
        if (cpt.input_scope() != detail::parent_scope(dag.parents(v), model.cardinalities())) {
            report.push_back({ViolationKind::ScopeViolation, v, std::nullopt, "CPT input scope differs from parents"});
            continue;
        }
        if (cpt.output_scope() != std::vector<Variable>{{v, model.cardinality(v)}}) {
            report.push_back({ViolationKind::ScopeViolation, v, std::nullopt, "CPT output scope must be the variable"});
            continue;
        }
        for (std::size_t r = 0; r < cpt.row_count(); ++r) detail::check_distribution(cpt.row(r), v, r, report);
    }
    return report;
}

inline ValidationReport validate_model(const FunctionalModel& model) {
    ValidationReport report;
    const Dag& dag = model.dag();
    detail::check_common(dag, model.cardinalities(), report);
    if (!report.empty() && report.front().kind == ViolationKind::ShapeViolation) return report;
    for (Vertex v = 0; v < dag.size(); ++v) {
        if (model.noise_cardinality(v) == 0) {
            report.push_back({ViolationKind::CardinalityViolation, v, std::nullopt, "noise alphabet is empty"});
            continue;
        }
        detail::check_distribution(model.noise(v), v, std::nullopt, report);
        std::size_t rows = 1;
        for (Vertex p : dag.parents(v)) rows *= model.cardinality(p);
        const auto& f = model.function(v);
        if (f.size() != rows * model.noise_cardinality(v)) {
            report.push_back({ViolationKind::ShapeViolation, v, std::nullopt,
                              "function table needs one entry per (parent assignment, noise value)"});
            continue;
        }
        for (std::size_t k = 0; k < f.size(); ++k)
            if (f[k] >= model.cardinality(v))
                report.push_back({ViolationKind::FunctionRangeViolation, v, k / model.noise_cardinality(v),
                                  "function value " + std::to_string(f[k]) + " outside the alphabet"});
    }
    return report;
}

inline CptModel CptModel::checked(Dag dag, std::vector<std::size_t> cardinalities, std::vector<Kernel> cpts) {
    CptModel model(std::move(dag), std::move(cardinalities), std::move(cpts));
    if (auto report = validate_model(model); !report.empty())
        throw Error(ErrorKind::InvalidModel, detail::describe(report, model.dag()));
    return model;
}

inline FunctionalModel FunctionalModel::checked(Dag dag, std::vector<std::size_t> cardinalities,
                                                std::vector<std::vector<double>> noise,
                                                std::vector<std::vector<std::size_t>> functions) {
    FunctionalModel model(std::move(dag), std::move(cardinalities), std::move(noise), std::move(functions));
    if (auto report = validate_model(model); !report.empty())
        throw Error(ErrorKind::InvalidModel, detail::describe(report, model.dag()));
    return model;
}

// ---------------------------------------------------------------------------
// Operations

/// Markov factorization: the product of all CPTs over every assignment.
inline JointTable joint_from_cpts(const CptModel& model) {
    const auto scope = model.scope();
    const std::size_t size = table_size(scope);
    std::vector<double> probs(size);
    Odometer odo(model.cardinalities());
    for (std::size_t cell = 0; cell < size; ++cell, odo.next()) {
        double p = 1.0;
        for (Vertex v = 0; v < model.size() && p > 0.0; ++v) p *= model.conditional(v, odo.digits());
        probs[cell] = p;
    }
    return JointTable(scope, std::move(probs));
}

/// CPT rows as pushforwards of the noise law through each equation.
inline CptModel cpt_from_functional(const FunctionalModel& fm) {
    std::vector<std::vector<double>> rows(fm.size());
    for (Vertex v = 0; v < fm.size(); ++v) {
        const auto& noise = fm.noise(v);
        const auto& f = fm.function(v);
        const std::size_t card = fm.cardinality(v);
        const std::size_t row_count = f.size() / noise.size();
        rows[v].assign(row_count * card, 0.0);
        for (std::size_t r = 0; r < row_count; ++r)
            for (std::size_t u = 0; u < noise.size(); ++u) rows[v][r * card + f[r * noise.size() + u]] += noise[u];
    }
    return CptModel::from_rows(fm.dag(), fm.cardinalities(), std::move(rows));
}

namespace detail {

// Inverse-CDF pick from a finite distribution; falls back to the last
// positive-mass symbol when rounding leaves the cumulative sum below u.
inline std::size_t pick(std::span<const double> probs, double u) {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        cumulative += probs[k];
        last_positive = k;
        if (u < cumulative) return k;
    }
    return last_positive;
}

}  // namespace detail

/// One draw from a functional model. Noise U_v of sample `index` uses counter
/// index * n + v of the seed's stream; equations are evaluated in topological
/// order.
inline Assignment sample(const FunctionalModel& fm, std::uint64_t seed, std::uint64_t index = 0) {
    Assignment x(fm.size(), 0);
    for (Vertex v : fm.dag().topological_order()) {
        const double u = counter_uniform(seed, index * fm.size() + v);
        x[v] = fm.evaluate(v, x, detail::pick(fm.noise(v), u));
    }
    return x;
}

/// Same draw convention for CPT models: the uniform picks X_v directly from
/// its CPT row by inverse CDF.
inline Assignment sample(const CptModel& model, std::uint64_t seed, std::uint64_t index = 0) {
    Assignment x(model.size(), 0);
    for (Vertex v : model.dag().topological_order()) {
        const double u = counter_uniform(seed, index * model.size() + v);
        const auto row = model.cpt(v).row(detail::parent_row(model.dag().parents(v), model.cardinalities(), x));
        x[v] = detail::pick(row, u);
    }
    return x;
}

}  // namespace causalinfo
