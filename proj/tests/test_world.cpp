#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "rodsim/error.hpp"
#include "rodsim/world.hpp"

using namespace rodsim;

namespace {

// Small closed plate with explicitly placed cells so tests control geometry.
Scenario plate_scenario(std::vector<std::array<double, 3>> donor_poses,
                        std::vector<std::array<double, 3>> recipient_poses,
                        double side = 150.0) {
    Scenario sc;
    sc.name = "test_plate";
    sc.geometry = open_plate_geometry(side, side);
    auto add = [&](Role role, std::vector<std::array<double, 3>> poses) {
        if (poses.empty()) return;
        StrainSeed s;
        s.role = role;
        s.arrangement = Arrangement::Explicit;
        s.poses = std::move(poses);
        s.count = static_cast<int>(s.poses.size());
        sc.seeds.push_back(std::move(s));
    };
    add(Role::Donor, std::move(donor_poses));
    add(Role::Recipient, std::move(recipient_poses));
    sc.duration_min = 60.0;
    sc.params.growth.growth_phase_jitter = false;
    return sc;
}

bool ids_sorted_unique(const std::vector<Cell>& cells) {
    for (std::size_t i = 1; i < cells.size(); ++i)
        if (cells[i - 1].id >= cells[i].id) return false;
    return true;
}

} // namespace

TEST_CASE("step phases run in the locked order") {
    Scenario sc = plate_scenario({{40, 40, 0.0}}, {{80, 80, 1.0}});
    World w(sc, 1);
    std::vector<StepPhase> seen;
    w.phase_hook = [&](StepPhase p) { seen.push_back(p); };
    w.step();
    REQUIRE(seen.size() == 7);
    CHECK(seen[0] == StepPhase::Springs);
    CHECK(seen[1] == StepPhase::Division);
    CHECK(seen[2] == StepPhase::Growth);
    CHECK(seen[3] == StepPhase::Conjugation);
    CHECK(seen[4] == StepPhase::Programs);
    CHECK(seen[5] == StepPhase::Physics);
    CHECK(seen[6] == StepPhase::Washout);
    CHECK(w.iteration() == 1);
}

TEST_CASE("seeding lays cells down as configured") {
    Scenario sc = plate_scenario({{30, 30, 0.5}, {60, 30, 1.5}}, {{90, 90, 0.0}});
    World w(sc, 3);
    const auto& cells = w.cells();
    REQUIRE(cells.size() == 3);
    CHECK(ids_sorted_unique(cells));
    CHECK(cells[0].role == Role::Donor);
    CHECK(cells[0].plasmid);
    CHECK(cells[0].body.center.x == doctest::Approx(30.0));
    CHECK(cells[0].body.angle == doctest::Approx(0.5));
    CHECK(cells[0].body.half_length == doctest::Approx(7.5));
    CHECK(cells[2].role == Role::Recipient);
    CHECK_FALSE(cells[2].plasmid);
    // jitter off: all phases at growth_speed - 1
    for (const auto& c : cells) CHECK(c.growth_phase == 29);
}

TEST_CASE("uniform seeding respects the region and avoids hard overlap") {
    Scenario sc;
    sc.name = "uniform_seed";
    sc.geometry = open_plate_geometry(200.0, 200.0);
    StrainSeed s;
    s.role = Role::Recipient;
    s.count = 12;
    s.region = {20, 20, 180, 180};
    sc.seeds.push_back(s);
    sc.duration_min = 1.0;
    World w(sc, 17);
    REQUIRE(w.cells().size() == 12);
    for (const auto& c : w.cells()) {
        CHECK(c.body.center.x >= 20.0);
        CHECK(c.body.center.x <= 180.0);
        CHECK(c.body.center.y >= 20.0);
        CHECK(c.body.center.y <= 180.0);
    }
}

TEST_CASE("an isolated cell divides at exactly Gt") {
    Scenario sc = plate_scenario({}, {{75, 75, 0.3}});
    sc.params.conj.p_d = 0.0;
    World w(sc, 5);
    REQUIRE(w.cells().size() == 1);
    for (int i = 0; i < 450; ++i) w.step();
    CHECK(w.cells().size() == 1);
    CHECK(w.cells()[0].body.half_length == doctest::Approx(15.0)); // fully doubled, not yet split
    w.step(); // the iteration with index 450 performs the split
    CHECK(w.cells().size() == 2);
    CHECK(w.iteration() == 451);
    CHECK(w.stats().divisions == 1);
    for (const auto& c : w.cells()) {
        CHECK(c.body.half_length == doctest::Approx(7.5));
        CHECK(c.age == 1); // born during 450, aged once at its close
    }
    // the next generation lands during index 900: birth-to-birth is exactly Gt
    for (int i = 0; i < 449; ++i) w.step();
    CHECK(w.cells().size() == 2);
    w.step();
    CHECK(w.cells().size() == 4);
}

TEST_CASE("cells stay id-sorted through divisions and growth") {
    Scenario sc = plate_scenario({{50, 50, 0.2}, {100, 50, 1.2}}, {{50, 100, 2.0}, {100, 100, 0.8}});
    sc.duration_min = 70.0;
    World w(sc, 11);
    for (int i = 0; i < 1000; ++i) {
        w.step();
        REQUIRE(ids_sorted_unique(w.cells()));
    }
    CHECK(w.cells().size() > 4); // at least one generation passed
}

TEST_CASE("conjugation invariants hold across a crowded run") {
    Scenario sc = plate_scenario({{60, 60, 0.0}, {75, 68, 0.5}},
                                 {{68, 75, 1.0}, {85, 80, 2.0}, {60, 85, 0.7}}, 160.0);
    sc.params.conj.p_d = 0.05; // frequent trials
    sc.params.conj.c_time = 60;
    World w(sc, 23);
    bool saw_spring = false, saw_transfer = false;
    for (int i = 0; i < 1200; ++i) {
        w.step();
        CHECK_NOTHROW(validate_springs(w.springs(), w.cells()));
        saw_spring = saw_spring || !w.springs().empty();
        saw_transfer = saw_transfer || w.stats().transfers > 0;
    }
    CHECK(saw_spring);
    CHECK(saw_transfer);
    CHECK(w.stats().springs_created > 0);
    CHECK(*w.stats().first_transfer_min > 0.0);
    // transconjugants now exist and count toward Y
    auto sum = w.summarize();
    CHECK(sum.final_counts[2] > 0);
    REQUIRE(sum.final_Y.has_value());
    CHECK(*sum.final_Y > 0.0);
    CHECK(*sum.final_Y <= 1.0);
}

TEST_CASE("role contact tallies accumulate for touching pairs") {
    // donor and recipient side by side, overlapping slightly
    Scenario sc = plate_scenario({{70, 70, 0.0}}, {{70, 74.5, 0.0}});
    sc.params.conj.p_d = 0.0;
    World w(sc, 2);
    w.step();
    CHECK(w.stats().pair_contacts[0][1] >= 1);
    CHECK(w.stats().pair_contacts[0][0] == 0);
    CHECK(w.stats().pair_contacts[1][1] == 0);
}

TEST_CASE("washout removes cells that drift fully inside a zone") {
    Scenario sc;
    sc.name = "washout_test";
    sc.geometry = straight_channel_geometry();
    StrainSeed s;
    s.role = Role::Recipient;
    s.arrangement = Arrangement::Explicit;
    // one rod already deep in the left washout, one safely mid-channel
    s.poses = {{-30.0, 75.0, 0.0}, {125.0, 75.0, 0.0}};
    s.count = 2;
    sc.seeds.push_back(s);
    sc.duration_min = 30.0;
    World w(sc, 4);
    std::vector<Event> events;
    REQUIRE(w.cells().size() == 2);
    w.phase_hook = nullptr;
    w.step();
    CHECK(w.cells().size() == 1);
    CHECK(w.cells()[0].body.center.x == doctest::Approx(125.0).epsilon(0.1));
    CHECK(w.stats().washouts == 1);

    // nothing alive ever sits fully inside a washout zone after a step
    for (int i = 0; i < 300; ++i) {
        w.step();
        for (const auto& c : w.cells()) {
            Rect box = c.body.aabb();
            for (const auto& z : w.scenario().geometry.washout) CHECK_FALSE(z.contains(box));
        }
    }
}

TEST_CASE("washout passes that remove nothing leave survivor state intact") {
    // regression: the removal scan used to gut the kept cells' vector members
    // on iterations where no cell actually left the device
    Scenario sc;
    sc.name = "washout_noop_test";
    sc.geometry = straight_channel_geometry();
    sc.params.program_kind = "oscillator";
    StrainSeed s;
    s.role = Role::Donor;
    s.arrangement = Arrangement::Explicit;
    s.poses = {{125.0, 75.0, 0.0}}; // mid-channel, never washed out
    s.count = 1;
    sc.seeds.push_back(s);
    sc.duration_min = 30.0;
    World w(sc, 4);
    REQUIRE(w.cells().size() == 1);
    REQUIRE(w.cells()[0].program.molecules.size() == 2);
    std::uint64_t last_steps = 0;
    for (int i = 0; i < 100; ++i) {
        w.step();
        REQUIRE(w.stats().washouts == 0);
        for (const auto& c : w.cells()) {
            CHECK(c.program.molecules.size() == 2);
            CHECK(c.program.steps_done >= last_steps);
            last_steps = c.program.steps_done;
        }
    }
    CHECK(last_steps > 0); // the program really advanced across those steps
}

TEST_CASE("manual mix rescatters cells, keeps the census, clears links") {
    Scenario sc = plate_scenario({{60, 60, 0.0}, {70, 64, 0.5}}, {{64, 70, 1.0}, {80, 75, 2.0}});
    sc.params.conj.p_d = 0.2;
    sc.params.conj.c_time = 400; // long enough that links survive until the mix
    World w(sc, 31);
    for (int i = 0; i < 200; ++i) w.step();
    auto before = w.summarize().final_counts;
    auto ids_before = std::set<std::uint64_t>{};
    for (const auto& c : w.cells()) ids_before.insert(c.id);

    w.manual_mix();

    CHECK(w.springs().empty());
    auto after = w.summarize().final_counts;
    CHECK(after == before);
    std::set<std::uint64_t> ids_after;
    for (const auto& c : w.cells()) {
        ids_after.insert(c.id);
        CHECK_FALSE(c.conjugating);
        Rect r = w.scenario().geometry.growth_region;
        CHECK(c.body.center.x >= r.x0 - 5.0);
        CHECK(c.body.center.x <= r.x1 + 5.0);
        CHECK(c.body.center.y >= r.y0 - 5.0);
        CHECK(c.body.center.y <= r.y1 + 5.0);
    }
    CHECK(ids_after == ids_before);
    CHECK_NOTHROW(validate_springs(w.springs(), w.cells()));
}

TEST_CASE("run emits snapshots at the configured cadence") {
    Scenario sc = plate_scenario({{40, 40, 0.0}}, {{90, 90, 1.0}});
    sc.duration_min = 6.2; // 93 iterations
    sc.params.snapshot_every = 10;
    World w(sc, 8);
    std::vector<std::uint64_t> snaps;
    RunSinks sinks;
    sinks.on_snapshot = [&](const SnapshotRecord& r) { snaps.push_back(r.iteration); };
    auto sum = w.run(sinks);
    CHECK(sum.iterations == 93);
    REQUIRE(snaps.size() == 11);
    CHECK(snaps.front() == 0);
    CHECK(snaps[1] == 10);
    CHECK(snaps[9] == 90);
    CHECK(snaps.back() == 93);
}

TEST_CASE("interventions fire at their scheduled iteration") {
    Scenario sc = plate_scenario({{40, 40, 0.0}}, {{90, 90, 1.0}});
    sc.duration_min = 10.0;
    sc.interventions.push_back({"manual_mix", 4.0}); // iteration 60
    World w(sc, 8);
    std::vector<Event> events;
    RunSinks sinks;
    sinks.on_event = [&](const Event& e) { events.push_back(e); };
    w.run(sinks);
    bool found = false;
    for (const auto& e : events)
        if (e.kind == EventKind::Mix) {
            found = true;
            CHECK(e.iteration == 60);
            CHECK(e.min == doctest::Approx(4.0));
        }
    CHECK(found);
}

TEST_CASE("runs are deterministic: identical snapshot and event streams") {
    auto collect = [](std::uint64_t seed) {
        Scenario sc = plate_scenario({{55, 55, 0.1}, {75, 60, 1.1}},
                                     {{60, 75, 2.1}, {85, 82, 0.4}});
        sc.params.growth.growth_phase_jitter = true; // exercise the rng paths
        sc.params.conj.p_d = 0.05;
        sc.params.conj.c_time = 100;
        sc.duration_min = 45.0;
        sc.params.snapshot_every = 25;
        World w(sc, seed);
        std::string log;
        RunSinks sinks;
        sinks.on_snapshot = [&](const SnapshotRecord& r) { log += record_to_json(r).dump(); };
        sinks.on_event = [&](const Event& e) {
            log += event_kind_name(e.kind);
            log += std::to_string(e.iteration) + "," + std::to_string(e.a) + "," +
                   std::to_string(e.b) + "," + std::to_string(e.c) + ";";
        };
        w.run(sinks);
        return log;
    };
    auto a = collect(42);
    auto b = collect(42);
    CHECK(a == b);
    CHECK(a.size() > 1000);
    auto c = collect(43);
    CHECK(a != c); // different seed, different history
}

TEST_CASE("oscillator programs ride along on plasmid carriers only") {
    Scenario sc = plate_scenario({{50, 50, 0.0}, {100, 50, 1.0}}, {{75, 100, 0.5}});
    sc.params.program_kind = "oscillator";
    sc.params.conj.p_d = 0.0;
    World w(sc, 6);
    for (const auto& c : w.cells()) {
        if (c.plasmid) CHECK(c.program.molecules.size() == 2);
        else CHECK(c.program.molecules.empty());
    }
    for (int i = 0; i < 450; ++i) w.step();
    std::vector<const Cell*> donors;
    for (const auto& c : w.cells())
        if (c.role == Role::Donor) donors.push_back(&c);
    REQUIRE(donors.size() >= 2);
    // network_steps per Gt, and every donor line in perfect lockstep
    for (const Cell* d : donors) {
        CHECK(d->program.steps_done == 18);
        CHECK(d->program.molecules[0] == donors[0]->program.molecules[0]);
        CHECK(d->program.molecules[1] == donors[0]->program.molecules[1]);
    }
    for (const auto& c : w.cells())
        if (c.role == Role::Recipient) CHECK(c.program.steps_done == 0);
}

TEST_CASE("population cap freezes divisions and flags the run") {
    Scenario sc = plate_scenario({}, {{40, 40, 0.0}, {80, 40, 1.0}, {40, 80, 2.0}, {80, 80, 0.5}});
    sc.params.population_cap = 6;
    sc.duration_min = 120.0;
    World w(sc, 9);
    std::size_t peak = 0;
    for (int i = 0; i < 1800; ++i) {
        w.step();
        peak = std::max(peak, w.cells().size());
    }
    CHECK(peak >= 6);
    CHECK(peak <= 12); // one division wave past the cap at most
    CHECK(w.stats().population_capped);
}

TEST_CASE("summaries count roles and leave Y undefined without recipients") {
    Scenario sc = plate_scenario({{40, 40, 0.0}, {80, 80, 1.0}}, {});
    sc.params.conj.p_d = 0.0;
    World w(sc, 2);
    w.step();
    auto sum = w.summarize();
    CHECK(sum.final_counts[0] == 2);
    CHECK(sum.final_counts[1] == 0);
    CHECK(sum.final_counts[2] == 0);
    CHECK_FALSE(sum.final_Y.has_value());
    CHECK(sum.scenario == "test_plate");
    CHECK(sum.seed == 2);
}

TEST_CASE("snapshot records round-trip through json") {
    Scenario sc = plate_scenario({{40, 40, 0.25}}, {{90, 90, 1.5}});
    World w(sc, 12);
    for (int i = 0; i < 30; ++i) w.step();
    SnapshotRecord rec = w.make_snapshot();
    auto j = record_to_json(rec);
    SnapshotRecord back = record_from_json(j);
    CHECK(back.iteration == rec.iteration);
    CHECK(back.min == rec.min);
    REQUIRE(back.cells.size() == rec.cells.size());
    for (std::size_t i = 0; i < rec.cells.size(); ++i) {
        CHECK(back.cells[i].id == rec.cells[i].id);
        CHECK(back.cells[i].cx == rec.cells[i].cx); // bit-exact through the writer
        CHECK(back.cells[i].cy == rec.cells[i].cy);
        CHECK(back.cells[i].angle == rec.cells[i].angle);
        CHECK(back.cells[i].role == rec.cells[i].role);
    }
}
