#pragma once

// Seeded random model generators used by the property suites and by the
// CLI `generate` subcommand. All draws go through CounterRng, so a given seed
// produces the same model on every platform.

#include <cstdint>
#include <string>
#include <vector>

#include "causalinfo/graph.hpp"
#include "causalinfo/information.hpp"
#include "causalinfo/model.hpp"
#include "causalinfo/rng.hpp"

namespace causalinfo {

struct RandomModelOptions {
    std::size_t variables = 4;
    std::size_t min_cardinality = 2;
    std::size_t max_cardinality = 3;
    double edge_probability = 0.5;
    /// Smallest unnormalized CPT weight; positive values give full support.
    double min_weight = 0.05;
};

inline std::size_t draw_cardinality(CounterRng& rng, const RandomModelOptions& opt) {
    return opt.min_cardinality + rng.below(opt.max_cardinality - opt.min_cardinality + 1);
}

/// Random DAG over 0..n-1 whose index order is topological.
inline Dag random_dag(CounterRng& rng, std::size_t n, double edge_probability) {
    std::vector<VertexSet> parents(n);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex p = 0; p < v; ++p)
            if (rng.bernoulli(edge_probability)) parents[v].insert(p);
    return validate_dag(n, std::move(parents));
}

inline std::vector<double> random_distribution(CounterRng& rng, std::size_t size, double min_weight) {
    std::vector<double> w(size);
    double total = 0.0;
    for (auto& x : w) {
        x = rng.uniform(min_weight, 1.0);
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

/// Random CPTs on a given DAG.
inline CptModel random_cpts(CounterRng& rng, const Dag& dag, std::vector<std::size_t> cards, double min_weight) {
    std::vector<std::vector<double>> rows(dag.size());
    for (Vertex v = 0; v < dag.size(); ++v) {
        std::size_t row_count = 1;
        for (Vertex p : dag.parents(v)) row_count *= cards[p];
        for (std::size_t r = 0; r < row_count; ++r) {
            auto row = random_distribution(rng, cards[v], min_weight);
            rows[v].insert(rows[v].end(), row.begin(), row.end());
        }
    }
    return CptModel::from_rows(dag, std::move(cards), std::move(rows));
}

inline CptModel random_cpt_model(CounterRng& rng, const RandomModelOptions& opt = {}) {
    Dag dag = random_dag(rng, opt.variables, opt.edge_probability);
    std::vector<std::size_t> cards;
    for (std::size_t v = 0; v < opt.variables; ++v) cards.push_back(draw_cardinality(rng, opt));
    return random_cpts(rng, dag, std::move(cards), opt.min_weight);
}

/// Random structural equations: noise alphabets of 1..max_noise symbols and
/// uniformly random function tables.
inline FunctionalModel random_functional_model(CounterRng& rng, const RandomModelOptions& opt = {},
                                               std::size_t max_noise = 4) {
    Dag dag = random_dag(rng, opt.variables, opt.edge_probability);
    std::vector<std::size_t> cards;
    for (std::size_t v = 0; v < opt.variables; ++v) cards.push_back(draw_cardinality(rng, opt));
    std::vector<std::vector<double>> noise;
    std::vector<std::vector<std::size_t>> functions;
    for (Vertex v = 0; v < dag.size(); ++v) {
        const std::size_t noise_card = 1 + rng.below(max_noise);
        noise.push_back(random_distribution(rng, noise_card, opt.min_weight));
        std::size_t rows = 1;
        for (Vertex p : dag.parents(v)) rows *= cards[p];
        std::vector<std::size_t> f(rows * noise_card);
        for (auto& value : f) value = rng.below(cards[v]);
        functions.push_back(std::move(f));
    }
    return FunctionalModel::checked(std::move(dag), std::move(cards), std::move(noise), std::move(functions));
}

/// Three binary-or-ternary variables X, Y, Z (vertices listed in a causal
/// order) wired as the requested canonical structure.
inline CptModel random_canonical_model(CounterRng& rng, CanonicalKind kind, const RandomModelOptions& opt = {}) {
    std::vector<VertexSet> parents(3);
    std::vector<std::string> labels;
    switch (kind) {
    case CanonicalKind::Chain:  // X -> Y -> Z
        labels = {"X", "Y", "Z"};
        parents[1] = {0};
        parents[2] = {1};
        break;
    case CanonicalKind::Fork:  // X <- Y -> Z, with Y listed first
        labels = {"Y", "X", "Z"};
        parents[1] = {0};
        parents[2] = {0};
        break;
    case CanonicalKind::Collider:  // X -> Y <- Z, with Y listed last
        labels = {"X", "Z", "Y"};
        parents[2] = {0, 1};
        break;
    }
    Dag dag = validate_dag(3, std::move(parents), std::move(labels));
    std::vector<std::size_t> cards;
    for (int i = 0; i < 3; ++i) cards.push_back(draw_cardinality(rng, opt));
    return random_cpts(rng, dag, std::move(cards), opt.min_weight);
}

}  // namespace causalinfo
