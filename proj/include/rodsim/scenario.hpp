#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rodsim/cells.hpp"
#include "rodsim/circuit.hpp"
#include "rodsim/conjugation.hpp"
#include "rodsim/geometry.hpp"

#include "json.hpp"

namespace rodsim {

enum class Arrangement { Uniform, Centered, Triangular, Explicit };

struct StrainSeed {
    Role role = Role::Recipient;
    int count = 0;
    Rect region;
    Arrangement arrangement = Arrangement::Uniform;
    std::vector<std::array<double, 3>> poses; // x, y, angle for Explicit
};

struct Intervention {
    std::string kind = "manual_mix";
    double at_minutes = 0.0;
};

struct SimParams {
    GrowthParams growth;
    ConjugationParams conj;
    SolverParams solver{.drag = 0.5};
    bool tie_solver_to_growth_speed = false;
    double spring_rest_length = 5.0;
    double spring_stiffness = 0.02;
    double spring_damping = 0.05;
    double bac_mass = 1.0;
    double bac_friction = 0.3;
    int snapshot_every = 75; // iterations between snapshot records
    int population_cap = 20000;
    int mix_relax_iterations = 50;
    bool lifetime_trial_scaling = false;
    std::string program_kind = "none"; // "none" | "oscillator"
    OscillatorParams osc;

    void validate() const;

    // Derived knobs folded in: conjugation trial scaling and the optional
    // solver/growth_speed coupling.
    SimParams finalized() const;
};

struct Scenario {
    std::string name = "custom";
    WorldGeometry geometry;
    std::vector<StrainSeed> seeds;
    SimParams params;
    std::vector<Intervention> interventions;
    double duration_min = 300.0;
    std::uint64_t rng_seed = 1;

    std::uint64_t iterations() const { return iteration_at(duration_min, params.growth); }
    void validate() const;
};

// Named experiment setups. Unknown names raise a config error.
Scenario build_scenario(const std::string& preset);
std::vector<std::string> scenario_preset_names();

// Strict config loading: every key is checked against the schema and unknown
// keys are config errors naming the offender. A "preset" key selects a base
// scenario that the remaining keys override.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& s);

} // namespace rodsim
