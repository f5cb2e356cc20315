// A confounded fork built by hand: watching X says more about Z than setting X does.
#include <cstdio>

#include "causalinfo/criteria.hpp"

using namespace causalinfo;

int main() {
    // Y is the hub; X and Z are noisy copies of it.
    const Dag g = validate_dag(3, {{}, {0}, {0}}, {"Y", "X", "Z"});
    const CptModel m = CptModel::from_rows(g, {2, 2, 2}, {{0.4, 0.6}, {0.9, 0.1, 0.2, 0.8}, {0.85, 0.15, 0.3, 0.7}});
    const JointTable joint = joint_from_cpts(m);

    const Vertex y = 0, x = 1, z = 2;
    for (std::size_t v = 0; v < 2; ++v) {
        const JointTable seen = condition(marginal(joint, {x, z}), {{x, v}});
        const JointTable done = interventional_marginal(m, {{{x, v}}}, {z});
        std::printf("x=%zu  P(Z=1 | X=x) = %.4f   P(Z=1 | do X=x) = %.4f\n", v, seen[1], done[1]);
    }

    std::printf("I(X;Z)    = %.6f bits\n", mutual_information(joint, {x}, {z}).bits());
    std::printf("I(X -> Z) = %.6f bits\n", directed_information(m, {x}, {z}).bits());

    for (const VertexSet& adjust : {VertexSet{}, VertexSet{y}}) {
        const AdjustmentCertificate c = certify_backdoor(m, {x}, {z}, adjust);
        std::printf("adjust {%s}: cdi %.3g bits, worst TV %.3g, %s\n", adjust.empty() ? "" : "Y",
                    c.cdi_value.bits(), c.max_discrepancy, c.information_ok ? "admissible" : "rejected");
    }
}
