#pragma once

// Directed information between variable sets of a Markovian model:
// I(X^T -> X^S) compares the observational conditional P_{X^T|X^S} with the
// interventional P_{X^T|do(X^S)}, averaged under P_{X^S}.

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "causalinfo/distribution.hpp"
#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/intervention.hpp"
#include "causalinfo/model.hpp"

namespace causalinfo {

namespace detail {

inline InterventionSpec spec_from_index(const CptModel& model, const VertexSet& s, std::size_t index) {
    InterventionSpec spec;
    for (std::size_t k = s.size(); k-- > 0;) {
        const std::size_t c = model.cardinality(s[k]);
        spec.values[s[k]] = index % c;
        index /= c;
    }
    return spec;
}

}  // namespace detail

/// I(X^T -> X^S | X^{S'}) in bits: the expectation under P_{X^S, X^{S'}} of
/// log P_{X^T|X^S,X^{S'}} / P_{X^T|do(X^S),X^{S'}}. Cells with zero
/// observational mass carry no weight; an interventional zero under positive
/// observational mass makes the value +infinity.
inline InfoValue conditional_directed_information(const CptModel& model, const VertexSet& t, const VertexSet& s,
                                                  const VertexSet& given) {
    check_vertices(model.dag(), t);
    check_vertices(model.dag(), s);
    check_vertices(model.dag(), given);
    detail::require_disjoint({&t, &s, &given}, ErrorKind::OverlappingSets);

    const JointTable joint = joint_from_cpts(model);
    std::vector<std::size_t> n;
    const auto observed = detail::regroup(joint, {s, given, t}, &n);
    const std::size_t block = n[1] * n[2];

    double sum = 0.0;
    std::vector<double> p_row(n[2]), q_row(n[2]);
    for (std::size_t is = 0; is < n[0]; ++is) {
        const double* obs = observed.data() + is * block;
        if (accurate_sum(std::span<const double>(obs, block)) <= 0.0) continue;
        const JointTable intervened = interventional_global(model, detail::spec_from_index(model, s, is));
        const auto q = detail::regroup(intervened, {given, t});
        for (std::size_t ig = 0; ig < n[1]; ++ig) {
            const std::span<const double> p_cell(obs + ig * n[2], n[2]);
            const std::span<const double> q_cell(q.data() + ig * n[2], n[2]);
            const double p_mass = accurate_sum(p_cell);
            if (p_mass <= 0.0) continue;
            const double q_mass = accurate_sum(q_cell);
            if (q_mass <= 0.0) return InfoValue::infinite();
            for (std::size_t it = 0; it < n[2]; ++it) {
                p_row[it] = p_cell[it] / p_mass;
                q_row[it] = q_cell[it] / q_mass;
            }
            const InfoValue d = kl_divergence(p_row, q_row);
            if (!d.is_finite()) return InfoValue::infinite();
            sum += p_mass * d.bits();
        }
    }
    return InfoValue(sum);
}

/// I(X^T -> X^S) = D(P_{X^T|X^S} || P_{X^T|do(X^S)} | P_{X^S}).
inline InfoValue directed_information(const CptModel& model, const VertexSet& t, const VertexSet& s) {
    return conditional_directed_information(model, t, s, VertexSet{});
}

struct ChainRuleTerms {
    InfoValue mi_term;   ///< I(X^{T cap N_S}; X^S)
    InfoValue cdi_term;  ///< I(X^{T cap Delta_S} -> X^S | X^{T cap N_S})
    InfoValue total;     ///< I(X^T -> X^S), computed directly

    bool additive(double tolerance = 1e-9) const {
        const InfoValue sum = mi_term + cdi_term;
        if (!total.is_finite() || !sum.is_finite()) return !total.is_finite() && !sum.is_finite();
        return std::abs(total.bits() - sum.bits()) <= tolerance;
    }
};

/// Splits I(X^T -> X^S) into the dependence on nondescendants of S and the
/// directed information from the descendants of S in T. All three terms are
/// computed independently so the caller can check additivity.
inline ChainRuleTerms chain_rule_decomposition(const CptModel& model, const VertexSet& t, const VertexSet& s) {
    check_vertices(model.dag(), t);
    check_vertices(model.dag(), s);
    if (!disjoint(s, t)) throw Error(ErrorKind::OverlappingSets, "cause and effect sets overlap");
    const VertexSet t_nondesc = set_intersection(t, nondescendants_of(model.dag(), s));
    const VertexSet t_desc = set_intersection(t, descendants_of(model.dag(), s));
    return ChainRuleTerms{
        mutual_information(joint_from_cpts(model), t_nondesc, s),
        conditional_directed_information(model, t_desc, s, t_nondesc),
        directed_information(model, t, s),
    };
}

// ---------------------------------------------------------------------------
// Canonical three-variable structures

enum class CanonicalKind { Chain, Fork, Collider };

constexpr std::string_view to_string(CanonicalKind kind) noexcept {
    switch (kind) {
    case CanonicalKind::Chain: return "chain";
    case CanonicalKind::Fork: return "fork";
    case CanonicalKind::Collider: return "collider";
    }
    return "unknown";
}

struct IdentityCheck {
    std::string statement;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct CanonicalReport {
    CanonicalKind kind{};
    Vertex x = 0, y = 0, z = 0;
    // Directed information in both directions for each pair.
    InfoValue x_to_y, y_to_x, y_to_z, z_to_y, x_to_z, z_to_x;
    InfoValue mi_xy, mi_yz, mi_xz;
    std::vector<IdentityCheck> identities;

    bool all_hold() const {
        for (const auto& c : identities)
            if (!c.holds) return false;
        return true;
    }
};

namespace detail {

struct Roles {
    Vertex x, y, z;
};

inline Roles canonical_roles(const Dag& dag, CanonicalKind kind) {
    auto mismatch = [&] {
        return Error(ErrorKind::StructureMismatch,
                     "model is not a three-variable " + std::string(to_string(kind)));
    };
    if (dag.size() != 3 || dag.edge_count() != 2) throw mismatch();
    for (Vertex y = 0; y < 3; ++y) {
        std::vector<Vertex> others;
        for (Vertex v = 0; v < 3; ++v)
            if (v != y) others.push_back(v);
        const Vertex a = others[0], b = others[1];
        switch (kind) {
        case CanonicalKind::Chain:
            if (dag.has_edge(a, y) && dag.has_edge(y, b)) return {a, y, b};
            if (dag.has_edge(b, y) && dag.has_edge(y, a)) return {b, y, a};
            break;
        case CanonicalKind::Fork:
            if (dag.has_edge(y, a) && dag.has_edge(y, b)) return {a, y, b};
            break;
        case CanonicalKind::Collider:
            if (dag.has_edge(a, y) && dag.has_edge(b, y)) return {a, y, b};
            break;
        }
    }
    throw mismatch();
}

}  // namespace detail

/// Computes the six pairwise directed informations of a chain X->Y->Z, fork
/// X<-Y->Z or collider X->Y<-Z and checks the identities each structure
/// implies. Equalities to zero use `zero_tolerance`; the rest `tolerance`.
inline CanonicalReport canonical_structure_report(const CptModel& model, CanonicalKind kind,
                                                  double tolerance = 1e-9, double zero_tolerance = 1e-12) {
    const auto roles = detail::canonical_roles(model.dag(), kind);
    const VertexSet x{roles.x}, y{roles.y}, z{roles.z};
    const JointTable joint = joint_from_cpts(model);

    CanonicalReport r;
    r.kind = kind;
    r.x = roles.x;
    r.y = roles.y;
    r.z = roles.z;
    r.x_to_y = directed_information(model, x, y);
    r.y_to_x = directed_information(model, y, x);
    r.y_to_z = directed_information(model, y, z);
    r.z_to_y = directed_information(model, z, y);
    r.x_to_z = directed_information(model, x, z);
    r.z_to_x = directed_information(model, z, x);
    r.mi_xy = mutual_information(joint, x, y);
    r.mi_yz = mutual_information(joint, y, z);
    r.mi_xz = mutual_information(joint, x, z);

    auto equal = [&](std::string statement, InfoValue lhs, InfoValue rhs) {
        const bool ok = lhs.is_finite() && rhs.is_finite() && std::abs(lhs.bits() - rhs.bits()) <= tolerance;
        r.identities.push_back({std::move(statement), lhs.bits(), rhs.bits(), ok});
    };
    auto zero = [&](std::string statement, InfoValue lhs) {
        r.identities.push_back({std::move(statement), lhs.bits(), 0.0, lhs.bits() <= zero_tolerance});
    };

    switch (kind) {
    case CanonicalKind::Chain:
        equal("I(X->Y) = I(X;Y)", r.x_to_y, r.mi_xy);
        zero("I(Y->X) = 0", r.y_to_x);
        equal("I(Y->Z) = I(Y;Z)", r.y_to_z, r.mi_yz);
        zero("I(Z->Y) = 0", r.z_to_y);
        equal("I(X->Z) = I(X;Z)", r.x_to_z, r.mi_xz);
        zero("I(Z->X) = 0", r.z_to_x);
        break;
    case CanonicalKind::Fork:
        zero("I(X->Y) = 0", r.x_to_y);
        equal("I(Y->X) = I(X;Y)", r.y_to_x, r.mi_xy);
        zero("I(Z->Y) = 0", r.z_to_y);
        equal("I(Y->Z) = I(Y;Z)", r.y_to_z, r.mi_yz);
        equal("I(X->Z) = I(X;Z)", r.x_to_z, r.mi_xz);
        equal("I(Z->X) = I(X;Z)", r.z_to_x, r.mi_xz);
        break;
    case CanonicalKind::Collider:
        equal("I(X->Y) = I(X;Y)", r.x_to_y, r.mi_xy);
        zero("I(Y->X) = 0", r.y_to_x);
        zero("I(Y->Z) = 0", r.y_to_z);
        equal("I(Z->Y) = I(Y;Z)", r.z_to_y, r.mi_yz);
        equal("I(X->Z) = I(X;Z)", r.x_to_z, r.mi_xz);
        equal("I(Z->X) = I(X;Z)", r.z_to_x, r.mi_xz);
        zero("I(X;Z) = 0", r.mi_xz);
        break;
    }
    return r;
}

}  // namespace causalinfo
