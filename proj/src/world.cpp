#include "rodsim/world.hpp"

#include <algorithm>
#include <cmath>

#include "rodsim/error.hpp"

namespace rodsim {

const char* event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::Division: return "division";
    case EventKind::SpringCreated: return "spring_created";
    case EventKind::Transfer: return "transfer";
    case EventKind::SpringAborted: return "spring_aborted";
    case EventKind::Washout: return "washout";
    case EventKind::Mix: return "mix";
    }
    return "?";
}

World::World(Scenario scenario, std::uint64_t seed)
    : scenario_(std::move(scenario)), master_seed_(seed), rng_(seed) {
    scenario_.params = scenario_.params.finalized();
    scenario_.validate();
    if (scenario_.params.program_kind == "oscillator")
        program_ = std::make_unique<OscillatorProgram>(scenario_.params.osc);
    seed_population();
}

void World::seed_population() {
    const auto& p = scenario_.params;
    double radius = p.growth.width * 0.5;
    double half_length = p.growth.length * 0.5;

    for (const auto& s : scenario_.seeds) {
        for (int n = 0; n < s.count; ++n) {
            Cell c;
            c.id = next_cell_id_++;
            c.body.radius = radius;
            c.body.mass = p.bac_mass;
            c.body.friction = p.bac_friction;
            resize_capsule(c.body, half_length);

            double m = radius;
            Rect r = s.region;
            double lo_x = r.x0 + m, hi_x = std::max(r.x1 - m, r.x0 + m);
            double lo_y = r.y0 + m, hi_y = std::max(r.y1 - m, r.y0 + m);
            switch (s.arrangement) {
            case Arrangement::Explicit: {
                const auto& pose = s.poses[static_cast<std::size_t>(n)];
                c.body.center = {pose[0], pose[1]};
                c.body.angle = pose[2];
                break;
            }
            case Arrangement::Uniform:
            case Arrangement::Centered:
            case Arrangement::Triangular: {
                for (int attempt = 0; attempt < 64; ++attempt) {
                    Vec2 pos;
                    if (s.arrangement == Arrangement::Uniform) {
                        pos = {rng_.uniform(lo_x, hi_x), rng_.uniform(lo_y, hi_y)};
                    } else if (s.arrangement == Arrangement::Triangular) {
                        pos = {rng_.triangular(lo_x, hi_x), rng_.uniform(lo_y, hi_y)};
                    } else {
                        Vec2 mid = r.center();
                        double sd = std::min(r.width(), r.height()) / 6.0;
                        pos = {std::clamp(rng_.gaussian(mid.x, sd), lo_x, hi_x),
                               std::clamp(rng_.gaussian(mid.y, sd), lo_y, hi_y)};
                    }
                    c.body.center = pos;
                    c.body.angle = rng_.uniform(0.0, M_PI);
                    bool clear = true;
                    for (const auto& other : cells_)
                        if (surface_gap(c.body, other.body) < 0.25) {
                            clear = false;
                            break;
                        }
                    if (clear) break;
                }
                break;
            }
            }

            c.role = s.role;
            c.plasmid = s.role != Role::Recipient;
            if (s.role == Role::Transconjugant) c.partner_role = Role::Donor;
            c.growth_phase =
                p.growth.growth_phase_jitter
                    ? static_cast<std::uint32_t>(
                          rng_.below(static_cast<std::uint64_t>(p.growth.growth_speed)))
                    : static_cast<std::uint32_t>(p.growth.growth_speed - 1);
            if (c.plasmid && program_) c.program = program_->initial_state();
            cells_.push_back(std::move(c));
        }
    }
}

void World::emit(const Event& e) {
    if (active_sinks_ && active_sinks_->on_event) active_sinks_->on_event(e);
}

void World::physics_pass(int relax_only_iterations) {
    const auto& p = scenario_.params;
    bodies_.resize(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) bodies_[i] = cells_[i].body;

    std::vector<DampedSpring> dsprings;
    if (relax_only_iterations == 0) {
        dsprings.reserve(springs_.size());
        for (const auto& s : springs_) {
            std::size_t gi = find_cell(cells_, s.giver);
            std::size_t ri = find_cell(cells_, s.receiver);
            if (gi == cell_npos || ri == cell_npos)
                throw SimError::runtime("pilus spring " + std::to_string(s.id) +
                                        " has a dangling endpoint");
            DampedSpring d;
            d.body_a = static_cast<std::int32_t>(gi);
            d.body_b = static_cast<std::int32_t>(ri);
            d.rest_length = p.spring_rest_length;
            d.stiffness = p.spring_stiffness;
            d.damping = p.spring_damping;
            dsprings.push_back(d);
        }
    }

    SolverParams sp = p.solver;
    int rounds = relax_only_iterations > 0 ? relax_only_iterations : 1;
    for (int k = 0; k < rounds; ++k)
        solve_step(bodies_, scenario_.geometry.walls, dsprings, sp, scenario_.geometry.flow);

    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i].body = bodies_[i];
}

void World::washout_pass() {
    if (scenario_.geometry.washout.empty()) return;
    std::vector<std::uint64_t> removed;
    std::vector<Cell> kept;
    kept.reserve(cells_.size());
    for (auto& c : cells_) {
        bool gone = false;
        Rect box = c.body.aabb();
        for (const auto& r : scenario_.geometry.washout)
            if (r.contains(box)) {
                gone = true;
                break;
            }
        if (gone) {
            removed.push_back(c.id);
            emit({iteration_, now_min(), EventKind::Washout, c.id, 0, 0});
            ++stats_.washouts;
        } else {
            kept.push_back(std::move(c));
        }
    }
    // reassign unconditionally: the scan moved every kept cell out of cells_
    cells_ = std::move(kept);
    if (removed.empty()) return;

    std::vector<PilusSpring> live;
    live.reserve(springs_.size());
    for (const auto& s : springs_) {
        bool giver_gone = std::find(removed.begin(), removed.end(), s.giver) != removed.end();
        bool recv_gone = std::find(removed.begin(), removed.end(), s.receiver) != removed.end();
        if (!giver_gone && !recv_gone) {
            live.push_back(s);
            continue;
        }
        if (!giver_gone) {
            std::size_t i = find_cell(cells_, s.giver);
            if (i != cell_npos) cells_[i].conjugating = false;
        }
        if (!recv_gone) {
            std::size_t i = find_cell(cells_, s.receiver);
            if (i != cell_npos) cells_[i].conjugating = false;
        }
        emit({iteration_, now_min(), EventKind::SpringAborted, s.giver, s.receiver, s.id});
        ++stats_.springs_aborted;
    }
    springs_ = std::move(live);
}

void World::step() {
    const auto& p = scenario_.params;
    auto phase = [&](StepPhase ph) {
        if (phase_hook) phase_hook(ph);
    };

    // 1. pilus countdown; completed links transfer the plasmid
    phase(StepPhase::Springs);
    {
        auto outcome = step_springs(springs_, cells_);
        for (const auto& s : outcome.aborted) {
            emit({iteration_, now_min(), EventKind::SpringAborted, s.giver, s.receiver, s.id});
            ++stats_.springs_aborted;
        }
        for (const auto& s : outcome.completed) {
            apply_transfer(s, cells_, program_.get());
            emit({iteration_, now_min(), EventKind::Transfer, s.giver, s.receiver, s.id});
            ++stats_.transfers;
            if (!stats_.first_transfer_min) stats_.first_transfer_min = now_min();
        }
    }

    // 2. divisions (id order); daughters append after all mothers
    phase(StepPhase::Division);
    bool capped = cells_.size() >= static_cast<std::size_t>(p.population_cap);
    if (capped) stats_.population_capped = true;
    if (!capped) {
        std::vector<Cell> kept;
        std::vector<Cell> daughters;
        kept.reserve(cells_.size());
        for (auto& c : cells_) {
            if (auto d = try_divide(c, next_cell_id_, rng_, p.growth)) {
                emit({iteration_, now_min(), EventKind::Division, c.id, d->first.id,
                      d->second.id});
                ++stats_.divisions;
                daughters.push_back(std::move(d->first));
                daughters.push_back(std::move(d->second));
            } else {
                kept.push_back(std::move(c));
            }
        }
        for (auto& d : daughters) kept.push_back(std::move(d));
        cells_ = std::move(kept);
        std::sort(cells_.begin(), cells_.end(),
                  [](const Cell& a, const Cell& b) { return a.id < b.id; });
    }

    // 3. pressure-gated elongation; same contact pass feeds the strain
    //    contact tallies
    phase(StepPhase::Growth);
    {
        bodies_.resize(cells_.size());
        for (std::size_t i = 0; i < cells_.size(); ++i) bodies_[i] = cells_[i].body;
        auto contacts = detect_contacts(bodies_, scenario_.geometry.walls);
        pressure_.assign(cells_.size(), 0.0);
        for (const auto& c : contacts) {
            pressure_[static_cast<std::size_t>(c.a)] =
                std::max(pressure_[static_cast<std::size_t>(c.a)], c.depth);
            if (!c.b_is_wall) {
                pressure_[static_cast<std::size_t>(c.b)] =
                    std::max(pressure_[static_cast<std::size_t>(c.b)], c.depth);
                int ra = static_cast<int>(cells_[static_cast<std::size_t>(c.a)].role);
                int rb = static_cast<int>(cells_[static_cast<std::size_t>(c.b)].role);
                ++stats_.pair_contacts[std::min(ra, rb)][std::max(ra, rb)];
            }
        }
        if (!capped)
            for (std::size_t i = 0; i < cells_.size(); ++i)
                try_elongate(cells_[i], p.growth, pressure_[i]);
    }

    // 4. conjugation trials (id order)
    phase(StepPhase::Conjugation);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        auto s = attempt_conjugation(cells_, i, rng_, p.conj, p.growth, next_spring_id_);
        if (s) {
            ++next_spring_id_;
            emit({iteration_, now_min(), EventKind::SpringCreated, s->giver, s->receiver, s->id});
            ++stats_.springs_created;
            springs_.push_back(*s);
        }
    }

    // 5. genetic programs
    phase(StepPhase::Programs);
    if (program_) {
        for (auto& c : cells_)
            if (c.plasmid) step_program(c, *program_, p.osc.network_steps, p.growth.Gt, rng_);
    }

    // 6. forces and motion
    phase(StepPhase::Physics);
    physics_pass();

    // 7. washout removal
    phase(StepPhase::Washout);
    washout_pass();

    for (auto& c : cells_) ++c.age;
    ++iteration_;
}

void World::manual_mix() {
    for (const auto& s : springs_) {
        for (std::uint64_t id : {s.giver, s.receiver}) {
            std::size_t i = find_cell(cells_, id);
            if (i != cell_npos) cells_[i].conjugating = false;
        }
        emit({iteration_, now_min(), EventKind::SpringAborted, s.giver, s.receiver, s.id});
        ++stats_.springs_aborted;
    }
    springs_.clear();

    Rect r = scenario_.geometry.growth_region;
    for (auto& c : cells_) {
        double m = c.body.radius;
        c.body.center = {rng_.uniform(r.x0 + m, r.x1 - m), rng_.uniform(r.y0 + m, r.y1 - m)};
        c.body.angle = rng_.uniform(0.0, 2.0 * M_PI);
    }
    emit({iteration_, now_min(), EventKind::Mix, 0, 0, 0});
    if (scenario_.params.mix_relax_iterations > 0)
        physics_pass(scenario_.params.mix_relax_iterations);
}

SnapshotRecord World::make_snapshot() {
    SnapshotRecord rec;
    rec.iteration = iteration_;
    rec.min = now_min();
    rec.cells.reserve(cells_.size());
    for (auto& c : cells_) {
        SnapshotCellRow row;
        row.id = c.id;
        row.cx = c.body.center.x;
        row.cy = c.body.center.y;
        row.angle = c.body.angle;
        row.half_length = c.body.half_length;
        row.radius = c.body.radius;
        row.vx = c.body.velocity.x;
        row.vy = c.body.velocity.y;
        row.role = static_cast<int>(c.role);
        row.conjugating = c.conjugating;
        row.readout = (program_ && c.plasmid) ? program_->readout(c.program) : 0.0;
        rec.cells.push_back(row);
    }
    for (const auto& s : springs_)
        rec.springs.push_back({s.id, s.giver, s.receiver, s.remaining});
    return rec;
}

RunSummary World::summarize() const {
    RunSummary sum;
    sum.scenario = scenario_.name;
    sum.seed = master_seed_;
    sum.iterations = iteration_;
    sum.duration_min = now_min();
    for (const auto& c : cells_) ++sum.final_counts[static_cast<std::size_t>(c.role)];
    sum.stats = stats_;
    auto r = sum.final_counts[1], t = sum.final_counts[2];
    if (r + t > 0) sum.final_Y = static_cast<double>(t) / static_cast<double>(r + t);
    return sum;
}

RunSummary World::run(const RunSinks& sinks) {
    active_sinks_ = &sinks;
    const std::uint64_t total = scenario_.iterations();
    const auto every = static_cast<std::uint64_t>(scenario_.params.snapshot_every);

    std::vector<std::uint64_t> mix_at;
    for (const auto& iv : scenario_.interventions)
        mix_at.push_back(iteration_at(iv.at_minutes, scenario_.params.growth));

    auto snap = [&]() {
        if (sinks.on_snapshot) sinks.on_snapshot(make_snapshot());
    };

    snap();
    while (iteration_ < total) {
        for (std::size_t k = 0; k < mix_at.size(); ++k)
            if (mix_at[k] == iteration_ && scenario_.interventions[k].kind == "manual_mix")
                manual_mix();
        step();
        if (iteration_ % every == 0 || iteration_ == total) snap();
    }
    active_sinks_ = nullptr;
    return summarize();
}

} // namespace rodsim
