// Channel with feedback: fixing every output Y_i leaves a product of encoder
// kernels, which the directed stochastic kernel reproduces.
#include <cstdio>

#include "causalinfo/intervention.hpp"
#include "causalinfo/model_io.hpp"

using namespace causalinfo;

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: feedback <feedback3.json>\n");
        return 1;
    }
    const CptModel m = load_model_file(argv[1]).cpt_model();
    PartialAssignment outputs;
    for (Vertex v = 1; v < m.size(); v += 2) outputs[v] = 1;
    const InterventionSpec spec{outputs};

    const JointTable truncated = interventional_global(m, spec);
    const JointTable kernel = dsk(m, spec);
    std::printf("inputs given do(Y=1,1,1):\n");
    for (std::size_t i = 0; i < truncated.size(); ++i) {
        const auto xs = truncated.decode(i);
        for (std::size_t k = 0; k < xs.size(); ++k)
            std::printf("%s=%zu ", m.dag().label(truncated.scope()[k].id).c_str(), xs[k]);
        std::printf("  %.6f\n", truncated[i]);
    }
    std::printf("TV(truncated, dsk) = %.3g\n", total_variation(truncated, kernel));
}
