#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rodsim/cells.hpp"
#include "rodsim/circuit.hpp"
#include "rodsim/rng.hpp"

namespace rodsim {

struct ConjugationParams {
    double p_d = 0.001; // donor per-iteration trial probability
    double p_t1 = 0.02; // transconjugant infected by a donor
    double p_t2 = 0.05; // transconjugant infected by a transconjugant
    int c_time = 450;   // iterations a pilus link lasts
    double contact_radius = 1.0; // max surface gap for mating
    bool transconjugants_conjugate = true;
    bool transconjugants_receive = false; // entry exclusion by default
    double trial_scale = 1.0;             // multiplier on all trial probabilities

    void validate() const;
};

// An active pilus link; cells referenced by id. Transfer fires when
// `remaining` reaches zero, exactly c_time iterations after creation.
struct PilusSpring {
    std::uint64_t id = 0;
    std::uint64_t giver = 0;
    std::uint64_t receiver = 0;
    int remaining = 0;
};

// Per-iteration trial probability for this cell acting as plasmid source.
// Zero for recipients, infants, busy cells, and transconjugants when
// transconjugants_conjugate is off.
double conjugation_probability(const Cell& c, const ConjugationParams& cp,
                               const GrowthParams& gp);

bool eligible_receiver(const Cell& c, const ConjugationParams& cp, const GrowthParams& gp);

// Gap between capsule surfaces; negative when overlapping.
double surface_gap(const CapsuleBody& a, const CapsuleBody& b);

// One Bernoulli trial for cells[actor]. On success picks a uniformly random
// mate among eligible receivers within contact_radius, marks both busy and
// returns the new link. A successful trial with nobody in range is consumed.
std::optional<PilusSpring> attempt_conjugation(std::vector<Cell>& cells, std::size_t actor,
                                               Rng& rng, const ConjugationParams& cp,
                                               const GrowthParams& gp, std::uint64_t spring_id);

struct SpringStepOutcome {
    std::vector<PilusSpring> aborted;   // an endpoint disappeared
    std::vector<PilusSpring> completed; // countdown hit zero this iteration
};

// Ticks every link down by one, dropping links whose endpoints are gone
// (their survivors are unmarked) and extracting completed ones. Surviving
// links keep their order in `springs`.
SpringStepOutcome step_springs(std::vector<PilusSpring>& springs, std::vector<Cell>& cells);

// Plasmid hand-off at countdown end: receiver becomes (or stays) a
// transconjugant, records who infected it, and starts a fresh program at the
// initial state. Both cells are freed for new matings.
void apply_transfer(const PilusSpring& s, std::vector<Cell>& cells, const Program* prog);

// Invariant guard used by tests: every spring endpoint exists, is flagged
// busy, and no cell appears in two links.
void validate_springs(const std::vector<PilusSpring>& springs, const std::vector<Cell>& cells);

} // namespace rodsim
