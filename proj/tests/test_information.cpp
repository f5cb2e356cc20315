#include "doctest.h"

#include "causalinfo/information.hpp"
#include "causalinfo/intervention.hpp"
#include "causalinfo/random_models.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace causalinfo;
using testing_support::random_subset;

namespace {

// Three pairwise disjoint random subsets; S is never empty.
struct Triple {
    VertexSet t, s, z;
};

Triple random_triple(CounterRng& rng, std::size_t n) {
    Triple out;
    for (Vertex v = 0; v < n; ++v) {
        switch (rng.below(4)) {
        case 0: out.t.insert(v); break;
        case 1: out.s.insert(v); break;
        case 2: out.z.insert(v); break;
        default: break;
        }
    }
    if (out.s.empty()) {
        const Vertex v = rng.below(n);
        out.t.erase(v);
        out.z.erase(v);
        out.s.insert(v);
    }
    return out;
}

}  // namespace

TEST_SUITE("information") {

TEST_CASE("agrees with the enumeration oracle") {
    for (auto seed : testing_support::property_seeds()) {
        CAPTURE(seed);
        CounterRng rng(seed);
        for (int trial = 0; trial < 25; ++trial) {
            const CptModel m = fixtures::random_model(rng, 5);
            const auto [t, s, z] = random_triple(rng, m.size());
            const InfoValue v = conditional_directed_information(m, t, s, z);
            CHECK(v.bits() >= 0.0);
            CHECK(std::abs(v.bits() - oracle::cdi(m, t, s, z)) <= 1e-9);
            CHECK(conditional_directed_information(m, t, s, {}).bits() == directed_information(m, t, s).bits());
        }
    }
}

TEST_CASE("nondescendant sources carry only dependence") {
    for (auto seed : testing_support::property_seeds()) {
        CAPTURE(seed);
        CounterRng rng(seed + 1);
        for (int trial = 0; trial < 25; ++trial) {
            const CptModel m = fixtures::random_model(rng);
            const JointTable j = joint_from_cpts(m);
            VertexSet s = random_subset(rng, VertexSet::range(m.size()), 0.3);
            if (s.empty()) s.insert(rng.below(m.size()));
            const VertexSet nd = nondescendants_of(m.dag(), s);
            const VertexSet t = random_subset(rng, nd, 0.6);
            const VertexSet z = random_subset(rng, set_difference(nd, t), 0.5);
            CHECK(std::abs(directed_information(m, t, s).bits() - mutual_information(j, t, s).bits()) <= 1e-9);
            CHECK(std::abs(conditional_directed_information(m, t, s, z).bits() -
                           conditional_mutual_information(j, t, s, z).bits()) <= 1e-9);
        }
    }
}

TEST_CASE("no directed information into the direct causes") {
    for (auto seed : testing_support::property_seeds()) {
        CounterRng rng(seed + 2);
        int tested = 0;
        while (tested < 15) {
            const CptModel m = fixtures::random_model(rng);
            VertexSet t = random_subset(rng, VertexSet::range(m.size()), 0.4);
            const VertexSet pi = parents_of_set(m.dag(), t);
            if (t.empty() || pi.empty() || !disjoint(t, ancestors_of(m.dag(), pi))) continue;
            ++tested;
            CHECK(directed_information(m, t, pi).bits() <= 1e-12);
        }
    }
}

TEST_CASE("chain examples") {
    const CptModel m = fixtures::random_on(fixtures::chain_dag(), 31);
    const JointTable j = joint_from_cpts(m);
    CHECK(directed_information(m, {2}, {0}).bits() <= 1e-12);
    CHECK(std::abs(directed_information(m, {0}, {2}).bits() - mutual_information(j, {0}, {2}).bits()) <= 1e-12);
    CHECK(mutual_information(j, {0}, {2}).bits() > 1e-6);
}

TEST_CASE("overlapping sets are rejected") {
    const CptModel m = fixtures::random_on(fixtures::chain_dag(), 1);
    CHECK_THROWS_AS(directed_information(m, {0, 1}, {1}), Error);
    CHECK_THROWS_AS(conditional_directed_information(m, {0}, {1}, {0}), Error);
    CHECK_THROWS_AS(chain_rule_decomposition(m, {1}, {1}), Error);
}

TEST_CASE("chain rule") {
    for (auto seed : testing_support::property_seeds()) {
        CAPTURE(seed);
        CounterRng rng(seed + 3);
        for (int trial = 0; trial < 30; ++trial) {
            const CptModel m = fixtures::random_model(rng, 5);
            const auto [t0, s, z] = random_triple(rng, m.size());
            // every other trial uses the full complement of S
            const VertexSet t = trial % 2 ? set_difference(VertexSet::range(m.size()), s) : t0;
            const ChainRuleTerms terms = chain_rule_decomposition(m, t, s);
            CHECK(terms.additive());
            CHECK(std::abs(terms.total.bits() - oracle::cdi(m, t, s)) <= 1e-9);
            if (t.is_subset_of(nondescendants_of(m.dag(), s))) CHECK(terms.cdi_term.bits() == 0.0);
        }
    }
}

TEST_CASE("additivity with infinite terms") {
    const ChainRuleTerms inf{InfoValue(0.5), InfoValue::infinite(), InfoValue::infinite()};
    CHECK(inf.additive());
    const ChainRuleTerms mismatch{InfoValue(0.5), InfoValue(0.1), InfoValue::infinite()};
    CHECK_FALSE(mismatch.additive());
}

TEST_CASE("zero directed information means no confounding") {
    int zeros = 0, positives = 0;
    for (auto seed : testing_support::property_seeds()) {
        CAPTURE(seed);
        CounterRng rng(seed + 4);
        for (int trial = 0; trial < 40; ++trial) {
            const CptModel m = fixtures::random_model(rng, 5);
            const auto [t, s, z] = random_triple(rng, m.size());
            if (t.empty()) continue;
            const bool zero = conditional_directed_information(m, t, s, z).bits() <= 1e-9;
            const JointTable j = joint_from_cpts(m);
            const JointTable psz = marginal(j, set_union(s, z));
            double worst = 0.0;
            for (std::size_t i = 0; i < psz.size(); ++i) {
                if (psz[i] <= 0.0) continue;
                const auto digits = psz.decode(i);
                PartialAssignment xs, xz;
                for (std::size_t k = 0; k < digits.size(); ++k) {
                    const Vertex v = psz.scope()[k].id;
                    (s.contains(v) ? xs : xz)[v] = digits[k];
                }
                PartialAssignment both = xs;
                both.insert(xz.begin(), xz.end());
                const JointTable observed = condition(marginal(j, set_union(set_union(t, s), z)), both);
                const JointTable causal = interventional_conditional(m, {xs}, xz, t);
                worst = std::max(worst, total_variation(observed, causal));
            }
            CHECK(zero == (worst <= 1e-9));
            (zero ? zeros : positives)++;
        }
    }
    CHECK(zeros > 0);
    CHECK(positives > 0);
}

TEST_CASE("canonical structures") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CounterRng rng(seed);
        for (auto kind : {CanonicalKind::Chain, CanonicalKind::Fork, CanonicalKind::Collider}) {
            const CptModel m = random_canonical_model(rng, kind);
            const CanonicalReport r = canonical_structure_report(m, kind);
            CHECK(r.identities.size() == (kind == CanonicalKind::Collider ? 7u : 6u));
            for (const auto& id : r.identities) {
                CAPTURE(id.statement);
                CHECK(id.holds);
            }
            CHECK(std::abs(r.x_to_z.bits() - oracle::cdi(m, {r.x}, {r.z})) <= 1e-9);
        }
    }
    // the fork's two outer variables exchange information both ways
    const CptModel fork = fixtures::random_on(fixtures::fork_dag(), 9);
    const CanonicalReport f = canonical_structure_report(fork, CanonicalKind::Fork);
    CHECK(f.y == 0);
    CHECK(f.x_to_z.bits() > 1e-6);
    CHECK(std::abs(f.x_to_z.bits() - f.z_to_x.bits()) <= 1e-9);
}

TEST_CASE("canonical structure mismatch") {
    const CptModel chain = fixtures::random_on(fixtures::chain_dag(), 2);
    CHECK_THROWS_AS(canonical_structure_report(chain, CanonicalKind::Collider), Error);
    CHECK_THROWS_AS(canonical_structure_report(chain, CanonicalKind::Fork), Error);
    const CptModel four = fixtures::random_on(fixtures::six_node_dag(), 2);
    try {
        canonical_structure_report(four, CanonicalKind::Chain);
        FAIL("six variables accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StructureMismatch);
    }
}

}  // TEST_SUITE
