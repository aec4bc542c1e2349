#include "rodsim/cells.hpp"

#include <algorithm>
#include <cmath>

#include "rodsim/error.hpp"

namespace rodsim {

const char* role_name(Role r) {
    switch (r) {
    case Role::Donor: return "donor";
    case Role::Recipient: return "recipient";
    case Role::Transconjugant: return "transconjugant";
    }
    return "?";
}

void GrowthParams::validate() const {
    if (width <= 0.0) throw SimError::config("width must be > 0");
    if (length <= 0.0) throw SimError::config("length must be > 0");
    if (growth_speed < 1) throw SimError::config("growth_speed must be >= 1");
    if (Gt < 1) throw SimError::config("Gt must be >= 1");
    if (growth_speed > Gt) throw SimError::config("growth_speed must not exceed Gt");
    if (real_Gt <= 0.0) throw SimError::config("real_Gt must be > 0");
    if (max_overlap < 0.0) throw SimError::config("max_overlap must be >= 0");
    if (cell_infancy < 0.0 || cell_infancy > 1.0)
        throw SimError::config("cell_infancy must lie in [0, 1]");
    if (division_angle_jitter < 0.0) throw SimError::config("division_angle_jitter must be >= 0");
}

double minutes(std::uint64_t iteration, const GrowthParams& p) {
    return static_cast<double>(iteration) * p.real_Gt / p.Gt;
}

std::uint64_t iteration_at(double min, const GrowthParams& p) {
    return static_cast<std::uint64_t>(std::llround(min * p.Gt / p.real_Gt));
}

double cell_pressure(std::size_t index, std::span<const Contact> contacts) {
    double pressure = 0.0;
    auto idx = static_cast<std::int32_t>(index);
    for (const auto& c : contacts) {
        if (c.a == idx || (!c.b_is_wall && c.b == idx))
            pressure = std::max(pressure, c.depth);
    }
    return pressure;
}

bool try_elongate(Cell& c, const GrowthParams& p, double pressure) {
    if (c.age % static_cast<std::uint64_t>(p.growth_speed) != c.growth_phase) return false;
    if (pressure > p.max_overlap) return false;
    resize_capsule(c.body, c.body.half_length + p.elongation_increment());
    ++c.elongation_events;
    return true;
}

namespace {

Cell make_daughter(const Cell& mother, std::uint64_t id, double offset_sign, double half_length,
                   Rng& rng, const GrowthParams& p) {
    Cell d;
    d.id = id;
    d.body = mother.body;
    d.body.center = mother.body.center + mother.body.axis() * (offset_sign * half_length);
    if (p.division_angle_jitter > 0.0)
        d.body.angle += rng.uniform(-p.division_angle_jitter, p.division_angle_jitter);
    resize_capsule(d.body, half_length);
    d.role = mother.role;
    d.plasmid = mother.plasmid;
    d.partner_role = mother.partner_role;
    d.conjugating = false;
    d.age = 0;
    d.growth_phase = p.growth_phase_jitter
                         ? static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(p.growth_speed)))
                         : static_cast<std::uint32_t>(p.growth_speed - 1);
    d.elongation_events = 0;
    d.program = mother.program; // exact copy; daughters stay in lockstep
    return d;
}

} // namespace

std::optional<std::pair<Cell, Cell>> try_divide(const Cell& mother, std::uint64_t& next_id,
                                                Rng& rng, const GrowthParams& p) {
    if (mother.conjugating) return std::nullopt;
    if (2.0 * mother.body.half_length < 2.0 * p.length - 1e-12) return std::nullopt;

    double h = mother.body.half_length * 0.5;
    Cell a = make_daughter(mother, next_id++, -1.0, h, rng, p);
    Cell b = make_daughter(mother, next_id++, +1.0, h, rng, p);
    return std::make_pair(std::move(a), std::move(b));
}

std::size_t find_cell(std::span<const Cell> cells, std::uint64_t id) {
    auto it = std::lower_bound(cells.begin(), cells.end(), id,
                               [](const Cell& c, std::uint64_t v) { return c.id < v; });
    if (it == cells.end() || it->id != id) return cell_npos;
    return static_cast<std::size_t>(it - cells.begin());
}

} // namespace rodsim
