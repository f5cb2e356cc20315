#pragma once

// Identification of causal effects from observational quantities:
// adjustment for direct causes, back-door adjustment, and certification of
// adjustment sets in graphical and information-theoretic form.

#include <algorithm>
#include <string>
#include <vector>

#include "causalinfo/distribution.hpp"
#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/information.hpp"
#include "causalinfo/intervention.hpp"
#include "causalinfo/model.hpp"

namespace causalinfo {

inline constexpr double default_cdi_tolerance = 1e-9;

struct AdjustmentCertificate {
    VertexSet adjustment;
    bool graphical_ok = false;    ///< Z d-separates S from T once edges out of S are removed
    bool information_ok = false;  ///< cdi_value <= tolerance
    InfoValue cdi_value;          ///< I(X^T -> X^S | X^Z)
    double max_discrepancy = 0.0; ///< max over x^S of TV(adjusted row, interventional row)
};

namespace detail {

/// x^S -> sum_z P(x^T | x^S, x^Z) P(x^Z), computed from the joint.
inline Kernel adjustment_formula(const JointTable& joint, const VertexSet& s, const VertexSet& t,
                                 const VertexSet& z) {
    std::vector<std::size_t> n;
    const auto p = regroup(joint, {s, z, t}, &n);
    std::vector<double> pz(n[1], 0.0);
    for (std::size_t is = 0; is < n[0]; ++is)
        for (std::size_t iz = 0; iz < n[1]; ++iz)
            for (std::size_t it = 0; it < n[2]; ++it) pz[iz] += p[(is * n[1] + iz) * n[2] + it];

    std::vector<double> probs(n[0] * n[2], 0.0);
    for (std::size_t is = 0; is < n[0]; ++is) {
        for (std::size_t iz = 0; iz < n[1]; ++iz) {
            if (pz[iz] <= 0.0) continue;
            const std::span<const double> cell(p.data() + (is * n[1] + iz) * n[2], n[2]);
            const double psz = accurate_sum(cell);
            if (psz <= 0.0)
                throw Error(ErrorKind::UndefinedConditional,
                            "P(x^S | x^Z) = 0 where P(x^Z) > 0; the adjustment estimand is undefined");
            for (std::size_t it = 0; it < n[2]; ++it) probs[is * n[2] + it] += cell[it] / psz * pz[iz];
        }
    }
    return Kernel(sub_scope(joint.scope(), s), sub_scope(joint.scope(), t), std::move(probs),
                  std::vector<bool>(n[0], true));
}

inline void check_backdoor_inputs(const CptModel& model, const VertexSet& s, const VertexSet& t,
                                  const VertexSet& z) {
    check_vertices(model.dag(), s);
    check_vertices(model.dag(), t);
    check_vertices(model.dag(), z);
    require_disjoint({&s, &t, &z}, ErrorKind::OverlappingSets);
    if (!z.is_subset_of(nondescendants_of(model.dag(), s)))
        throw Error(ErrorKind::ZNotNondescendants, "adjustment set contains a descendant of the cause");
}

}  // namespace detail

/// Adjustment over the direct causes Pi_S:
/// x^S -> sum over x^{Pi_S} of P(x^T | x^S, x^{Pi_S}) P(x^{Pi_S}).
/// Reproduces P_{X^T|do(X^S)} when Pi_S holds no descendant of S. Warnings are
/// appended when T meets Pi_S and when that condition fails.
inline Kernel direct_causes_adjustment(const CptModel& model, const VertexSet& s, const VertexSet& t,
                                       std::vector<std::string>* warnings = nullptr) {
    check_vertices(model.dag(), s);
    check_vertices(model.dag(), t);
    if (!disjoint(s, t)) throw Error(ErrorKind::OverlappingSets, "cause and effect sets overlap");
    const VertexSet parents = parents_of_set(model.dag(), s);
    if (warnings && !disjoint(t, parents))
        warnings->push_back("effect set intersects the direct causes of the cause set");
    if (warnings && !disjoint(s, ancestors_of(model.dag(), parents)))
        warnings->push_back("cause set contains an ancestor of its own direct causes; the formula need not hold");
    return detail::adjustment_formula(joint_from_cpts(model), s, t, parents);
}

/// x^S -> sum_z P(x^T | x^S, x^Z) P(x^Z) for Z among the nondescendants of S.
/// Whether it equals the causal effect is what certify_backdoor decides.
inline Kernel backdoor_adjustment(const CptModel& model, const VertexSet& s, const VertexSet& t,
                                  const VertexSet& z) {
    detail::check_backdoor_inputs(model, s, t, z);
    return detail::adjustment_formula(joint_from_cpts(model), s, t, z);
}

/// Evaluates a candidate adjustment set three ways: the conditional directed
/// information I(X^T -> X^S | X^Z) against `tolerance`, the graphical
/// back-door test, and the actual worst-case gap between the adjustment
/// formula and the interventional distribution over positive-mass x^S.
inline AdjustmentCertificate certify_backdoor(const CptModel& model, const VertexSet& s, const VertexSet& t,
                                              const VertexSet& z, double tolerance = default_cdi_tolerance) {
    detail::check_backdoor_inputs(model, s, t, z);
    AdjustmentCertificate cert;
    cert.adjustment = z;
    cert.cdi_value = conditional_directed_information(model, t, s, z);
    cert.information_ok = cert.cdi_value.bits() <= tolerance;
    cert.graphical_ok = d_separated(remove_outgoing(model.dag(), s), s, t, z);

    const JointTable joint = joint_from_cpts(model);
    const Kernel adjusted = detail::adjustment_formula(joint, s, t, z);
    const Kernel causal = interventional_kernel(model, s, t);
    const JointTable ps = marginal(joint, s);
    for (std::size_t r = 0; r < adjusted.row_count(); ++r) {
        if (ps[r] <= 0.0) continue;
        cert.max_discrepancy = std::max(cert.max_discrepancy, total_variation(adjusted.row(r), causal.row(r)));
    }
    return cert;
}

/// All Z within the nondescendants of S (minus T), up to `max_size` members,
/// whose conditional directed information is within tolerance. Sorted by
/// size, then lexicographically.
inline std::vector<VertexSet> find_backdoor_sets(const CptModel& model, const VertexSet& s, const VertexSet& t,
                                                 std::size_t max_size = 4,
                                                 double tolerance = default_cdi_tolerance) {
    check_vertices(model.dag(), s);
    check_vertices(model.dag(), t);
    if (!disjoint(s, t)) throw Error(ErrorKind::OverlappingSets, "cause and effect sets overlap");
    const VertexSet pool = set_difference(nondescendants_of(model.dag(), s), t);

    std::vector<VertexSet> found;
    const std::size_t limit = std::min(max_size, pool.size());
    for (std::size_t k = 0; k <= limit; ++k) {
        // Combinations of pool positions in lexicographic order.
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            std::vector<Vertex> members;
            for (auto i : pick) members.push_back(pool[i]);
            VertexSet z(std::move(members));
            if (conditional_directed_information(model, t, s, z).bits() <= tolerance) found.push_back(std::move(z));

            std::size_t i = k;
            while (i > 0 && pick[i - 1] == pool.size() - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return found;
}

}  // namespace causalinfo
