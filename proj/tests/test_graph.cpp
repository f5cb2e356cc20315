#include "doctest.h"

#include "causalinfo/graph.hpp"
#include "causalinfo/random_models.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace causalinfo;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidSpec;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("vertex sets stay sorted and unique") {
    VertexSet s{3, 1, 3, 2};
    CHECK(s.members() == std::vector<Vertex>{1, 2, 3});
    s.insert(0);
    s.erase(2);
    CHECK(s == VertexSet{0, 1, 3});
    CHECK(set_union(VertexSet{0, 2}, VertexSet{1, 2}) == VertexSet{0, 1, 2});
    CHECK(set_intersection(VertexSet{0, 2}, VertexSet{1, 2}) == VertexSet{2});
    CHECK(set_difference(VertexSet{0, 1, 2}, VertexSet{1}) == VertexSet{0, 2});
    CHECK(disjoint(VertexSet{0}, VertexSet{1}));
    CHECK(VertexSet{1}.is_subset_of(VertexSet{0, 1}));
    CHECK(shortlex_less(VertexSet{5}, VertexSet{0, 1}));
    CHECK(shortlex_less(VertexSet{0, 2}, VertexSet{1, 2}));
}

TEST_CASE("construction") {
    const Dag chain = validate_dag(3, {{}, {0}, {1}});
    CHECK(chain.edge_count() == 2);
    CHECK(chain.label(2) == "X2");
    CHECK(chain.topological_order() == std::vector<Vertex>{0, 1, 2});

    CHECK(kind_of([] { validate_dag(2, {{1}, {0}}); }) == ErrorKind::CycleDetected);
    CHECK(kind_of([] { validate_dag(2, {{0}, {}}); }) == ErrorKind::SelfParent);
    CHECK(kind_of([] { validate_dag(2, {{5}, {}}); }) == ErrorKind::IndexOutOfRange);

    try {
        validate_dag(3, {{2}, {0}, {1}}, {"A", "B", "C"});
        FAIL("cycle accepted");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "CycleDetected: A -> B -> C -> A");
    }
}

TEST_CASE("topological order prefers small indices") {
    const Dag g = validate_dag(4, {{3}, {}, {1}, {}});
    CHECK(g.topological_order() == std::vector<Vertex>{1, 2, 3, 0});
    CHECK_FALSE(g.index_order_is_topological());
}

TEST_CASE("six-node example") {
    const Dag g = fixtures::six_node_dag();
    CHECK(g.parents(2) == VertexSet{0, 1});
    CHECK(g.parents(3) == VertexSet{0});
    CHECK(g.parents(4) == VertexSet{2});
    CHECK(g.parents(5) == VertexSet{2, 3, 4});
    CHECK(descendants_of(g, {2}) == VertexSet{4, 5});
    CHECK(nondescendants_of(g, {2}) == VertexSet{0, 1, 3});
    CHECK(ancestors_of(g, {5}) == VertexSet{0, 1, 2, 3, 4});
    CHECK(parents_of_set(g, {5}) == VertexSet{2, 3, 4});
    CHECK(d_separated(g, {2}, {3}, {0}));
    CHECK_FALSE(d_separated(g, {2}, {3}, {}));
    CHECK(g.find("X4") == Vertex{3});
    CHECK_FALSE(g.find("X9").has_value());
}

TEST_CASE("small structures") {
    const Dag chain = validate_dag(3, {{}, {0}, {1}});
    const Dag collider = validate_dag(3, {{}, {0, 2}, {}});
    const Dag fork = validate_dag(3, {{1}, {}, {1}});
    CHECK(descendants_of(chain, {0}) == VertexSet{1, 2});
    CHECK(descendants_of(collider, {0}) == VertexSet{1});
    CHECK(nondescendants_of(chain, {2}) == VertexSet{0, 1});
    CHECK(nondescendants_of(chain, {0}).empty());
    CHECK(ancestors_of(chain, {2}) == VertexSet{0, 1});
    CHECK(ancestors_of(fork, {0}) == VertexSet{1});
    CHECK(parents_of_set(chain, {1, 2}) == VertexSet{0});
    CHECK(parents_of_set(collider, {0, 2}).empty());

    CHECK(d_separated(chain, {0}, {2}, {1}));
    CHECK_FALSE(d_separated(chain, {0}, {2}, {}));
    CHECK(d_separated(collider, {0}, {2}, {}));
    CHECK_FALSE(d_separated(collider, {0}, {2}, {1}));
    CHECK(d_separated(fork, {0}, {2}, {1}));
    CHECK(d_separated(chain, {}, {2}, {}));
    CHECK(kind_of([&] { d_separated(chain, {0}, {0, 2}, {}); }) == ErrorKind::SetsNotDisjoint);
    CHECK(kind_of([&] { d_separated(chain, {0}, {2}, {0}); }) == ErrorKind::SetsNotDisjoint);
    CHECK(kind_of([&] { descendants_of(chain, {7}); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("collider descendant opens the path") {
    // 0 -> 1 <- 2, 1 -> 3
    const Dag g = validate_dag(4, {{}, {0, 2}, {}, {1}});
    CHECK(d_separated(g, {0}, {2}, {}));
    CHECK_FALSE(d_separated(g, {0}, {2}, {3}));
}

TEST_CASE("surgery") {
    const Dag g = fixtures::six_node_dag();
    const Dag cut = surgery(g, {2});
    CHECK(cut.parents(2).empty());
    for (Vertex v : {0, 1, 3, 4, 5}) CHECK(cut.parents(v) == g.parents(v));
    CHECK(surgery(cut, {2}) == cut);
    CHECK(surgery(g, {}) == g);

    const Dag fb = fixtures::feedback_dag(3);
    const Dag cut_fb = surgery(fb, {1, 3, 5});
    for (Vertex y : {1, 3, 5}) CHECK(cut_fb.parents(y).empty());
    CHECK(cut_fb.parents(2) == VertexSet{0, 1});
    CHECK(cut_fb.parents(4) == VertexSet{2, 3});

    const Dag out = remove_outgoing(g, {2});
    CHECK(out.children(2).empty());
    CHECK(out.parents(2) == g.parents(2));
    CHECK(out.parents(5) == VertexSet{3, 4});
}

TEST_CASE("dot output") {
    const Dag chain = validate_dag(3, {{}, {0}, {1}}, {"X", "Y", "Z"});
    CHECK(to_dot(chain) ==
          "digraph causal {\n"
          "  n0 [label=\"X\"];\n"
          "  n1 [label=\"Y\"];\n"
          "  n2 [label=\"Z\"];\n"
          "  n0 -> n1;\n"
          "  n1 -> n2;\n"
          "}\n");
    CHECK(to_dot(Dag{}) == "digraph causal {\n}\n");

    const std::string six = to_dot(fixtures::six_node_dag(), {2});
    CHECK(six.find("n2 [label=\"X3\", shape=box];") != std::string::npos);
    CHECK(six.find("do2 [label=\"x3\", shape=circle];") != std::string::npos);
    CHECK(six.find("do2 -> n2 [label=\"=\"];") != std::string::npos);
    CHECK(six.find("n0 -> n2;") == std::string::npos);
    CHECK(six.find("n2 -> n4;") != std::string::npos);
}

TEST_CASE("random graph properties") {
    for (auto seed : testing_support::property_seeds()) {
        CAPTURE(seed);
        CounterRng rng(seed);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t n = 1 + rng.below(8);
            const Dag g = random_dag(rng, n, rng.uniform(0.1, 0.7));
            const VertexSet all = VertexSet::range(n);
            for (Vertex i = 0; i < n; ++i) {
                // nondescendants are closed under ancestry
                const VertexSet ni = nondescendants_of(g, {i});
                for (Vertex j : ni) CHECK(ancestors_of(g, {j}).is_subset_of(ni));
                for (Vertex j = 0; j < n; ++j)
                    CHECK(descendants_of(g, {i}).contains(j) == ancestors_of(g, {j}).contains(i));
            }
            const VertexSet s = testing_support::random_subset(rng, all, 0.3);
            const Dag cut = surgery(g, s);
            for (Vertex v = 0; v < n; ++v) CHECK(cut.parents(v) == (s.contains(v) ? VertexSet{} : g.parents(v)));
            CHECK(surgery(cut, s) == cut);
        }
    }
}

TEST_CASE("d-separation agrees with path enumeration") {
    for (auto seed : testing_support::property_seeds()) {
        CAPTURE(seed);
        CounterRng rng(seed + 100);
        for (int trial = 0; trial < 150; ++trial) {
            const std::size_t n = 2 + rng.below(6);
            const Dag g = random_dag(rng, n, rng.uniform(0.2, 0.6));
            VertexSet a, b, z;
            for (Vertex v = 0; v < n; ++v) {
                const auto r = rng.below(4);
                if (r == 0) a.insert(v);
                if (r == 1) b.insert(v);
                if (r == 2) z.insert(v);
            }
            if (a.empty() || b.empty()) continue;
            const bool fast = d_separated(g, a, b, z);
            CHECK(fast == oracle::d_separated_by_paths(g, a, b, z));
            CHECK(fast == d_separated(g, b, a, z));
        }
    }
}

}  // TEST_SUITE
