#include "rodsim/circuit.hpp"

#include <cmath>
#include <string>

#include "rodsim/error.hpp"

namespace rodsim {

void OscillatorParams::validate() const {
    if (alpha < 0.0) throw SimError::config("oscillator alpha must be >= 0");
    if (beta <= 0.0) throw SimError::config("oscillator beta must be > 0");
    if (gamma <= 0.0) throw SimError::config("oscillator gamma must be > 0");
    if (sigma < 0.0) throw SimError::config("oscillator sigma must be >= 0");
    if (delta <= 0.0) throw SimError::config("oscillator delta must be > 0");
    if (dt <= 0.0) throw SimError::config("oscillator dt must be > 0");
    if (network_steps < 0) throw SimError::config("network_steps must be >= 0");
}

OscillatorProgram::OscillatorProgram(OscillatorParams p) : p_(p) { p_.validate(); }

ProgramState OscillatorProgram::initial_state() const {
    ProgramState s;
    s.molecules = {0.0, 0.0};
    return s;
}

std::array<double, 2> OscillatorProgram::derivative(double x, double y, const OscillatorParams& p) {
    double x2 = x * x;
    double act = 1.0 + p.alpha * x2;
    double dx = p.delta * (p.beta * act / (1.0 + x2 + p.sigma * y * y) - x);
    double dy = p.delta_full_bracket ? p.delta * (p.gamma * act / (1.0 + x2) - y)
                                     : p.delta * p.gamma * act / (1.0 + x2) - y;
    return {dx, dy};
}

void OscillatorProgram::step(ProgramState& s, Rng&) const {
    double x = s.molecules[0], y = s.molecules[1];
    double h = p_.dt;
    if (p_.euler) {
        auto k = derivative(x, y, p_);
        s.molecules[0] = x + h * k[0];
        s.molecules[1] = y + h * k[1];
    } else {
        auto k1 = derivative(x, y, p_);
        auto k2 = derivative(x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], p_);
        auto k3 = derivative(x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], p_);
        auto k4 = derivative(x + h * k3[0], y + h * k3[1], p_);
        s.molecules[0] = x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        s.molecules[1] = y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
}

double OscillatorProgram::readout(const ProgramState& s) {
    if (s.molecules.empty()) return 0.0;
    double x = s.molecules[0];
    if (x > readout_ref_) readout_ref_ = x;
    double r = x / readout_ref_;
    return r < 0.0 ? 0.0 : (r > 1.0 ? 1.0 : r);
}

void step_program(Cell& cell, const Program& prog, int network_steps, int Gt, Rng& rng) {
    if (network_steps <= 0) return;
    auto& st = cell.program;
    if (st.molecules.empty()) return;
    st.accumulator += static_cast<std::uint64_t>(network_steps);
    auto gt = static_cast<std::uint64_t>(Gt);
    while (st.accumulator >= gt) {
        st.accumulator -= gt;
        prog.step(st, rng);
        ++st.steps_done;
        for (double& m : st.molecules) {
            if (!std::isfinite(m))
                throw SimError::runtime("program state non-finite in cell " +
                                        std::to_string(cell.id));
            if (m < -1e-9)
                throw SimError::runtime("program concentration " + std::to_string(m) +
                                        " below tolerance in cell " + std::to_string(cell.id));
            if (m < 0.0) m = 0.0;
        }
    }
}

ReadoutPeak max_readout(std::span<const Cell> cells) {
    bool found = false;
    ReadoutPeak best;
    for (const auto& c : cells) {
        if (!c.plasmid || c.program.molecules.empty()) continue;
        double x = c.program.molecules[0];
        if (!found || x > best.intensity) {
            best = {c.id, x};
            found = true;
        }
    }
    if (!found) throw SimError::runtime("max_readout: no plasmid-bearing cells");
    return best;
}

} // namespace rodsim
