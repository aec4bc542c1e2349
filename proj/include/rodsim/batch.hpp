#pragma once

#include <functional>
#include <vector>

#include "rodsim/world.hpp"

namespace rodsim {

// Runs `replicates` worlds of the same scenario with per-replicate seeds
// derived from scenario.rng_seed. `make_sinks`, when given, is called once
// per replicate (from the worker thread) to set up that replicate's outputs.
// Results come back in replicate order regardless of worker count, and a
// given (scenario, seed) pair produces identical worlds at any parallelism.
std::vector<RunSummary> run_batch(const Scenario& scenario, int replicates, int workers,
                                  const std::function<RunSinks(int replicate)>& make_sinks = {});

} // namespace rodsim
