#pragma once

// Small hand-built graphs and models shared by the suites.

#include <string>
#include <vector>

#include "causalinfo/graph.hpp"
#include "causalinfo/model.hpp"
#include "causalinfo/random_models.hpp"

namespace fixtures {

using namespace causalinfo;

/// X1..X6 with parents {}, {}, {X1,X2}, {X1}, {X3}, {X3,X4,X5}.
inline Dag six_node_dag() {
    return validate_dag(6, {{}, {}, {0, 1}, {0}, {2}, {2, 3, 4}}, {"X1", "X2", "X3", "X4", "X5", "X6"});
}

/// Feedback channel of length n: X_i <- {X_{i-1}, Y_{i-1}}, Y_i <- X_i.
/// Listed as X1, Y1, X2, Y2, ...
inline Dag feedback_dag(std::size_t n) {
    std::vector<VertexSet> parents(2 * n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("X" + std::to_string(i + 1));
        labels.push_back("Y" + std::to_string(i + 1));
        if (i > 0) parents[2 * i] = {2 * i - 2, 2 * i - 1};
        parents[2 * i + 1] = {2 * i};
    }
    return validate_dag(2 * n, std::move(parents), std::move(labels));
}

inline Dag chain_dag() { return validate_dag(3, {{}, {0}, {1}}, {"X", "Y", "Z"}); }
// Models list variables in a causal order, so the fork starts with its hub
// and the collider ends with it.
inline Dag fork_dag() { return validate_dag(3, {{}, {0}, {0}}, {"Y", "X", "Z"}); }
inline Dag collider_dag() { return validate_dag(3, {{}, {}, {0, 1}}, {"X", "Z", "Y"}); }

/// Message W (P_W = 0.5, 0.3, 0.2), encoder X = W + 1, channel Y = X + U and
/// decoder W~ = Y - 1, all mod 3. U is (0.8, 0.1, 0.1) for the noisy channel and
/// a point mass for the identity channel.
inline FunctionalModel comm_system(bool noisy) {
    Dag dag = validate_dag(4, {{}, {0}, {1}, {2}}, {"W", "X", "Y", "Wtilde"});
    std::vector<std::vector<double>> noise = {{0.5, 0.3, 0.2}, {1.0}, noisy ? std::vector<double>{0.8, 0.1, 0.1}
                                                                            : std::vector<double>{1.0},
                                              {1.0}};
    std::vector<std::vector<std::size_t>> f(4);
    f[0] = {0, 1, 2};
    for (std::size_t w = 0; w < 3; ++w) f[1].push_back((w + 1) % 3);
    for (std::size_t x = 0; x < 3; ++x)
        for (std::size_t u = 0; u < noise[2].size(); ++u) f[2].push_back((x + u) % 3);
    for (std::size_t y = 0; y < 3; ++y) f[3].push_back((y + 2) % 3);
    return FunctionalModel::checked(std::move(dag), {3, 3, 3, 3}, std::move(noise), std::move(f));
}

inline CptModel random_on(const Dag& dag, std::uint64_t seed, std::size_t max_card = 3) {
    CounterRng rng(seed);
    std::vector<std::size_t> cards;
    for (std::size_t v = 0; v < dag.size(); ++v) cards.push_back(2 + rng.below(max_card - 1));
    return random_cpts(rng, dag, std::move(cards), 0.05);
}

/// Random model with 2..max_n variables and cardinalities 2..3.
inline CptModel random_model(CounterRng& rng, std::size_t max_n = 6, double min_weight = 0.05) {
    RandomModelOptions opt;
    opt.variables = 2 + rng.below(max_n - 1);
    opt.min_weight = min_weight;
    return random_cpt_model(rng, opt);
}

}  // namespace fixtures
