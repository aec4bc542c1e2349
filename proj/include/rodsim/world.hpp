#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include "rodsim/scenario.hpp"
#include "rodsim/snapshot.hpp"

namespace rodsim {

enum class EventKind { Division, SpringCreated, Transfer, SpringAborted, Washout, Mix };

const char* event_kind_name(EventKind k);

struct Event {
    std::uint64_t iteration = 0;
    double min = 0.0;
    EventKind kind = EventKind::Division;
    std::uint64_t a = 0, b = 0, c = 0; // meaning depends on kind
};

struct RunSinks {
    std::function<void(const SnapshotRecord&)> on_snapshot;
    std::function<void(const Event&)> on_event;
};

struct RunStats {
    std::uint64_t divisions = 0;
    std::uint64_t transfers = 0;
    std::uint64_t washouts = 0;
    std::uint64_t springs_created = 0;
    std::uint64_t springs_aborted = 0;
    std::optional<double> first_transfer_min;
    bool population_capped = false;
    // cumulative contact-iterations between role pairs, indexed [min][max]
    std::array<std::array<std::uint64_t, 3>, 3> pair_contacts{};
};

struct RunSummary {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t iterations = 0;
    double duration_min = 0.0;
    std::array<std::uint64_t, 3> final_counts{}; // donors, recipients, transconjugants
    RunStats stats;
    std::optional<double> final_Y; // T / (R + T)
};

// phases of one iteration, in execution order
enum class StepPhase { Springs, Division, Growth, Conjugation, Programs, Physics, Washout };

class World {
public:
    World(Scenario scenario, std::uint64_t seed);

    void step();
    void manual_mix();

    // Runs the configured duration, emitting a snapshot at iteration 0, every
    // snapshot_every iterations, and at the end; interventions fire at their
    // scheduled iteration before that iteration's step.
    RunSummary run(const RunSinks& sinks = {});

    SnapshotRecord make_snapshot();
    RunSummary summarize() const;

    const Scenario& scenario() const { return scenario_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<PilusSpring>& springs() const { return springs_; }
    std::uint64_t iteration() const { return iteration_; }
    double now_min() const { return minutes(iteration_, scenario_.params.growth); }
    const RunStats& stats() const { return stats_; }

    // test instrumentation; called at the start of each phase of step()
    std::function<void(StepPhase)> phase_hook;

private:
    void seed_population();
    void emit(const Event& e);
    void physics_pass(int relax_only_iterations = 0);
    void washout_pass();

    Scenario scenario_;
    std::uint64_t master_seed_ = 0;
    Rng rng_;
    std::vector<Cell> cells_;
    std::vector<PilusSpring> springs_;
    std::uint64_t iteration_ = 0;
    std::uint64_t next_cell_id_ = 0;
    std::uint64_t next_spring_id_ = 0;
    std::unique_ptr<Program> program_;
    RunStats stats_;
    const RunSinks* active_sinks_ = nullptr;
    // scratch buffers reused across iterations
    std::vector<CapsuleBody> bodies_;
    std::vector<double> pressure_;
};

} // namespace rodsim
