#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rodsim/physics.hpp"
#include "rodsim/rng.hpp"

namespace rodsim {

enum class Role : int { Donor = 0, Recipient = 1, Transconjugant = 2 };

const char* role_name(Role r);

// Per-cell genetic program state. `accumulator` implements the fractional
// stepping schedule exactly in integers: each world iteration adds
// network_steps, and every full Gt drained performs one ODE step, so a cell
// executes exactly network_steps ODE steps per Gt iterations.
struct ProgramState {
    std::vector<double> molecules;
    std::uint64_t steps_done = 0;
    std::uint64_t accumulator = 0;
};

struct GrowthParams {
    double width = 5.0;        // rod width = 2 * capsule radius
    double length = 15.0;      // axis length at birth; division at 2x
    int growth_speed = 30;     // iterations between elongation events
    int Gt = 450;              // iterations per doubling
    double real_Gt = 30.0;     // wall-clock minutes per doubling
    double max_overlap = 1.2;  // pressure above this stalls elongation
    double cell_infancy = 0.2; // fraction of Gt; newborn grace period
    bool growth_phase_jitter = true;
    double division_angle_jitter = 0.0; // radians, uniform +/- per daughter

    // Half-length gained per elongation event; Gt/growth_speed events double
    // the birth length exactly.
    double elongation_increment() const {
        return length * growth_speed / (2.0 * Gt);
    }
    std::uint64_t infancy_iterations() const {
        return static_cast<std::uint64_t>(cell_infancy * Gt + 0.5);
    }
    void validate() const;
};

double minutes(std::uint64_t iteration, const GrowthParams& p);
std::uint64_t iteration_at(double minutes, const GrowthParams& p);

struct Cell {
    std::uint64_t id = 0;
    CapsuleBody body;
    Role role = Role::Recipient;
    bool plasmid = false;
    bool conjugating = false;
    std::optional<Role> partner_role; // who the plasmid came from
    std::uint64_t age = 0;            // iterations since birth
    std::uint32_t growth_phase = 0;   // in [0, growth_speed)
    std::uint32_t elongation_events = 0;
    ProgramState program;
};

// Max penetration depth over all contacts touching body `index` (walls count).
double cell_pressure(std::size_t index, std::span<const Contact> contacts);

// Grows the rod by one increment when the cell's phase matches and local
// pressure has not exceeded max_overlap. Returns true if it grew.
bool try_elongate(Cell& c, const GrowthParams& p, double pressure);

// Splits a cell at double its birth length into two half-length daughters
// placed end to end along the axis. Conjugating cells never divide. Daughters
// inherit role, plasmid, partner and an exact copy of the program state;
// `next_id` hands out their ids. Returns nothing when the cell is not ready.
std::optional<std::pair<Cell, Cell>> try_divide(const Cell& mother, std::uint64_t& next_id,
                                                Rng& rng, const GrowthParams& p);

// Index of the cell with this id in an id-sorted vector, or npos.
std::size_t find_cell(std::span<const Cell> cells, std::uint64_t id);
inline constexpr std::size_t cell_npos = static_cast<std::size_t>(-1);

} // namespace rodsim
