#include "rodsim/conjugation.hpp"

#include <algorithm>
#include <string>

#include "rodsim/error.hpp"

namespace rodsim {

void ConjugationParams::validate() const {
    for (double p : {p_d, p_t1, p_t2})
        if (p < 0.0 || p > 1.0)
            throw SimError::config("conjugation probabilities must lie in [0, 1]");
    if (c_time < 1) throw SimError::config("c_time must be >= 1");
    if (contact_radius < 0.0) throw SimError::config("contact_radius must be >= 0");
    if (trial_scale < 0.0) throw SimError::config("trial_scale must be >= 0");
}

double conjugation_probability(const Cell& c, const ConjugationParams& cp,
                               const GrowthParams& gp) {
    if (c.conjugating) return 0.0;
    if (c.age < gp.infancy_iterations()) return 0.0;
    double p = 0.0;
    switch (c.role) {
    case Role::Donor:
        p = cp.p_d;
        break;
    case Role::Transconjugant:
        if (cp.transconjugants_conjugate)
            p = (c.partner_role == Role::Transconjugant) ? cp.p_t2 : cp.p_t1;
        break;
    case Role::Recipient:
        break;
    }
    return std::clamp(p * cp.trial_scale, 0.0, 1.0);
}

bool eligible_receiver(const Cell& c, const ConjugationParams& cp, const GrowthParams& gp) {
    if (c.conjugating) return false;
    if (c.age < gp.infancy_iterations()) return false;
    if (c.role == Role::Recipient) return true;
    return c.role == Role::Transconjugant && cp.transconjugants_receive;
}

double surface_gap(const CapsuleBody& a, const CapsuleBody& b) {
    auto [ca, cb] = closest_points_segment_segment(a.cap_a(), a.cap_b(), b.cap_a(), b.cap_b());
    return length(cb - ca) - a.radius - b.radius;
}

std::optional<PilusSpring> attempt_conjugation(std::vector<Cell>& cells, std::size_t actor,
                                               Rng& rng, const ConjugationParams& cp,
                                               const GrowthParams& gp, std::uint64_t spring_id) {
    Cell& src = cells[actor];
    double p = conjugation_probability(src, cp, gp);
    if (p <= 0.0) return std::nullopt;
    if (!rng.bernoulli(p)) return std::nullopt;

    std::vector<std::size_t> mates;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i == actor) continue;
        if (!eligible_receiver(cells[i], cp, gp)) continue;
        if (surface_gap(src.body, cells[i].body) <= cp.contact_radius) mates.push_back(i);
    }
    if (mates.empty()) return std::nullopt; // trial spent

    std::size_t mate = mates[rng.below(mates.size())];
    src.conjugating = true;
    cells[mate].conjugating = true;
    return PilusSpring{spring_id, src.id, cells[mate].id, cp.c_time};
}

SpringStepOutcome step_springs(std::vector<PilusSpring>& springs, std::vector<Cell>& cells) {
    SpringStepOutcome out;
    std::vector<PilusSpring> survivors;
    survivors.reserve(springs.size());
    for (auto& s : springs) {
        std::size_t gi = find_cell(cells, s.giver);
        std::size_t ri = find_cell(cells, s.receiver);
        if (gi == cell_npos || ri == cell_npos) {
            if (gi != cell_npos) cells[gi].conjugating = false;
            if (ri != cell_npos) cells[ri].conjugating = false;
            out.aborted.push_back(s);
            continue;
        }
        --s.remaining;
        if (s.remaining <= 0)
            out.completed.push_back(s);
        else
            survivors.push_back(s);
    }
    springs = std::move(survivors);
    return out;
}

void apply_transfer(const PilusSpring& s, std::vector<Cell>& cells, const Program* prog) {
    std::size_t gi = find_cell(cells, s.giver);
    std::size_t ri = find_cell(cells, s.receiver);
    if (gi == cell_npos || ri == cell_npos)
        throw SimError::runtime("transfer on spring " + std::to_string(s.id) +
                                " with missing endpoint");
    Cell& g = cells[gi];
    Cell& r = cells[ri];
    if (r.role == Role::Donor)
        throw SimError::runtime("transfer into donor cell " + std::to_string(r.id));
    r.role = Role::Transconjugant;
    r.plasmid = true;
    r.partner_role = g.role;
    r.program = prog ? prog->initial_state() : ProgramState{};
    r.conjugating = false;
    g.conjugating = false;
}

void validate_springs(const std::vector<PilusSpring>& springs, const std::vector<Cell>& cells) {
    std::vector<std::uint64_t> seen;
    for (const auto& s : springs) {
        for (std::uint64_t id : {s.giver, s.receiver}) {
            std::size_t i = find_cell(cells, id);
            if (i == cell_npos)
                throw SimError::runtime("spring " + std::to_string(s.id) +
                                        " references missing cell " + std::to_string(id));
            if (!cells[i].conjugating)
                throw SimError::runtime("cell " + std::to_string(id) +
                                        " linked by spring " + std::to_string(s.id) +
                                        " is not flagged busy");
            if (std::find(seen.begin(), seen.end(), id) != seen.end())
                throw SimError::runtime("cell " + std::to_string(id) +
                                        " appears in more than one spring");
            seen.push_back(id);
        }
        if (s.remaining < 1)
            throw SimError::runtime("spring " + std::to_string(s.id) + " has countdown " +
                                    std::to_string(s.remaining));
    }
}

} // namespace rodsim
