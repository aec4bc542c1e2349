#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "rodsim/cells.hpp"
#include "rodsim/rng.hpp"

namespace rodsim {

// Two-species activator/repressor oscillator carried on the plasmid.
//
//   dx/dt = delta * ( beta*(1 + alpha*x^2) / (1 + x^2 + sigma*y^2) - x )
//   dy/dt = delta*gamma*(1 + alpha*x^2) / (1 + x^2) - y
//
// Note the asymmetry: delta scales the whole bracket in the first equation
// but only the production term in the second, so y's decay rate is not
// scaled. `delta_full_bracket` switches the second equation to
// delta*(production - y) for experiments with the symmetric form.
struct OscillatorParams {
    double alpha = 10.0;
    double beta = 1.0;
    double gamma = 0.3;
    double sigma = 0.5;
    double delta = 3.0;
    double dt = 0.04;      // integration step, network time units
    int network_steps = 18; // ODE steps per Gt iterations
    bool euler = false;     // forward Euler instead of RK4
    bool delta_full_bracket = false;

    void validate() const;
};

class Program {
public:
    virtual ~Program() = default;
    virtual ProgramState initial_state() const = 0;
    // One integration step. The RNG is unused by deterministic programs but
    // part of the interface so stochastic kinetics can slot in.
    virtual void step(ProgramState& s, Rng& rng) const = 0;
    // Display intensity in [0, 1].
    virtual double readout(const ProgramState& s) = 0;
};

class OscillatorProgram final : public Program {
public:
    explicit OscillatorProgram(OscillatorParams p);

    ProgramState initial_state() const override;
    void step(ProgramState& s, Rng& rng) const override;
    double readout(const ProgramState& s) override;

    const OscillatorParams& params() const { return p_; }

    static std::array<double, 2> derivative(double x, double y, const OscillatorParams& p);

private:
    OscillatorParams p_;
    double readout_ref_ = 1.0; // running peak used to normalize display
};

// Advances a cell's program clock by one world iteration. Executes however
// many ODE steps the integer accumulator releases (usually zero), clamping
// tiny negative concentrations to zero and raising a structured runtime
// error naming the cell if the state leaves [-1e-9, +inf) or goes non-finite.
void step_program(Cell& cell, const Program& prog, int network_steps, int Gt, Rng& rng);

struct ReadoutPeak {
    std::uint64_t cell_id = 0;
    double intensity = 0.0;
};

// Plasmid-bearing cell with the highest x concentration. Structured runtime
// error when no cell carries the program.
ReadoutPeak max_readout(std::span<const Cell> cells);

} // namespace rodsim
