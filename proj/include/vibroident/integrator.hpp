#pragma once

#include <vector>

#include "vibroident/block_model.hpp"
#include "vibroident/excitation.hpp"

namespace vibroident {

struct InitialConditions {
    Vec6 u = Vec6::Zero();
    Vec6 v = Vec6::Zero();
};

/// Generalized state sampled every `stride` integration steps.
struct StateHistory {
    double dt = 0.0;           // spacing of recorded samples
    std::vector<Vec6> u, v, a;
    std::vector<Drive> drive;  // program state at each recorded sample

    std::size_t size() const { return u.size(); }
    double sample_rate() const { return 1.0 / dt; }
};

/// Newmark average acceleration over the whole program duration.
StateHistory integrate(const SystemMatrices& sys, const ExcitationProgram& program, double dt, int stride = 1,
                       const InitialConditions& ic = {}, double duration = -1.0);

} // namespace vibroident
