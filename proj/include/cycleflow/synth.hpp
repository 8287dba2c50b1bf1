#pragma once

#include <cstdint>

#include "cycleflow/grid.hpp"

namespace cycleflow {

/// Recipe for a synthetic connected grid: a uniform random labeled tree
/// plus `chords` distinct non-tree pairs, reactances uniform in
/// [reactance_min, reactance_max]. Deterministic for a fixed seed.
struct SynthSpec {
    int nodes = 0;
    int chords = 0;
    double reactance_min = 0.01;
    double reactance_max = 1.0;
    std::uint64_t seed = 0;
};

/// Generate the grid of a spec. Bus ids are 1..N, the slack is bus 1, tree
/// lines precede chords. Throws ValidationError on an infeasible spec
/// (chords exceeding the simple-graph budget, nodes < 2, bad reactance
/// range).
Grid generate(const SynthSpec& spec);

}  // namespace cycleflow
