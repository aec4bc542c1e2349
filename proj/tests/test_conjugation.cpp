#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "rodsim/conjugation.hpp"
#include "rodsim/error.hpp"

using namespace rodsim;

namespace {

Cell grown_cell(std::uint64_t id, Role role, Vec2 center, const GrowthParams& gp) {
    Cell c;
    c.id = id;
    c.role = role;
    c.plasmid = role != Role::Recipient;
    c.body.center = center;
    c.body.angle = 0.0;
    c.body.radius = gp.width / 2.0;
    c.body.mass = 1.0;
    resize_capsule(c.body, gp.length / 2.0);
    c.age = gp.infancy_iterations() + 10;
    return c;
}

} // namespace

TEST_CASE("trial probability by role, partner, infancy and busy state") {
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 0.001;
    cp.p_t1 = 0.02;
    cp.p_t2 = 0.05;

    Cell donor = grown_cell(1, Role::Donor, {0, 0}, gp);
    CHECK(conjugation_probability(donor, cp, gp) == doctest::Approx(0.001));

    Cell recipient = grown_cell(2, Role::Recipient, {0, 0}, gp);
    CHECK(conjugation_probability(recipient, cp, gp) == 0.0);

    Cell from_donor = grown_cell(3, Role::Transconjugant, {0, 0}, gp);
    from_donor.partner_role = Role::Donor;
    CHECK(conjugation_probability(from_donor, cp, gp) == doctest::Approx(0.02));

    Cell from_tc = grown_cell(4, Role::Transconjugant, {0, 0}, gp);
    from_tc.partner_role = Role::Transconjugant;
    CHECK(conjugation_probability(from_tc, cp, gp) == doctest::Approx(0.05));

    // infancy silences everyone
    Cell infant = donor;
    infant.age = gp.infancy_iterations() - 1;
    CHECK(conjugation_probability(infant, cp, gp) == 0.0);
    infant.age = gp.infancy_iterations();
    CHECK(conjugation_probability(infant, cp, gp) == doctest::Approx(0.001));

    // busy cells sit out
    Cell busy = donor;
    busy.conjugating = true;
    CHECK(conjugation_probability(busy, cp, gp) == 0.0);

    // transconjugants can be muted wholesale
    ConjugationParams muted = cp;
    muted.transconjugants_conjugate = false;
    CHECK(conjugation_probability(from_donor, muted, gp) == 0.0);
    CHECK(conjugation_probability(donor, muted, gp) == doctest::Approx(0.001));

    // trial_scale multiplies and the result clamps to 1
    ConjugationParams scaled = cp;
    scaled.trial_scale = 3.0;
    CHECK(conjugation_probability(from_tc, scaled, gp) == doctest::Approx(0.15));
    scaled.trial_scale = 5000.0;
    CHECK(conjugation_probability(from_tc, scaled, gp) == 1.0);
}

TEST_CASE("receiver eligibility and entry exclusion") {
    GrowthParams gp;
    ConjugationParams cp; // transconjugants_receive defaults off

    Cell recipient = grown_cell(1, Role::Recipient, {0, 0}, gp);
    CHECK(eligible_receiver(recipient, cp, gp));

    Cell infant = recipient;
    infant.age = 0;
    CHECK_FALSE(eligible_receiver(infant, cp, gp));

    Cell busy = recipient;
    busy.conjugating = true;
    CHECK_FALSE(eligible_receiver(busy, cp, gp));

    Cell donor = grown_cell(2, Role::Donor, {0, 0}, gp);
    CHECK_FALSE(eligible_receiver(donor, cp, gp));

    Cell tc = grown_cell(3, Role::Transconjugant, {0, 0}, gp);
    CHECK_FALSE(eligible_receiver(tc, cp, gp)); // entry exclusion
    ConjugationParams open = cp;
    open.transconjugants_receive = true;
    CHECK(eligible_receiver(tc, open, gp));
}

TEST_CASE("surface gap between parallel rods") {
    GrowthParams gp;
    Cell a = grown_cell(1, Role::Donor, {0, 0}, gp);
    Cell b = grown_cell(2, Role::Recipient, {0, 4.0}, gp);
    CHECK(surface_gap(a.body, b.body) == doctest::Approx(-1.0)); // radii 2.5 + 2.5 vs 4 apart
    b.body.center = {0, 7.0};
    CHECK(surface_gap(a.body, b.body) == doctest::Approx(2.0));
}

TEST_CASE("attempt_conjugation links a donor to an adjacent recipient") {
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 1.0;
    std::vector<Cell> cells{grown_cell(10, Role::Donor, {0, 0}, gp),
                            grown_cell(11, Role::Recipient, {0, 5.5}, gp)};
    Rng rng(2024);
    auto link = attempt_conjugation(cells, 0, rng, cp, gp, 900);
    REQUIRE(link.has_value());
    CHECK(link->id == 900);
    CHECK(link->giver == 10);
    CHECK(link->receiver == 11);
    CHECK(link->remaining == cp.c_time);
    CHECK(cells[0].conjugating);
    CHECK(cells[1].conjugating);

    // both busy now: no second link possible, and no randomness consumed
    Rng before(7), after(7);
    CHECK_FALSE(attempt_conjugation(cells, 0, after, cp, gp, 901).has_value());
    CHECK(before.next_u64() == after.next_u64());
}

TEST_CASE("out-of-range recipients are not mated") {
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 1.0;
    cp.contact_radius = 1.0;
    // surface gap is 6 - 5 = 1.0 exactly: in range; 6.1 puts it out
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 6.0}, gp)};
    Rng rng(1);
    CHECK(attempt_conjugation(cells, 0, rng, cp, gp, 1).has_value());

    std::vector<Cell> cells2{grown_cell(1, Role::Donor, {0, 0}, gp),
                             grown_cell(2, Role::Recipient, {0, 6.1}, gp)};
    CHECK_FALSE(attempt_conjugation(cells2, 0, rng, cp, gp, 1).has_value());
    CHECK_FALSE(cells2[0].conjugating);
}

TEST_CASE("a successful trial with nobody in range is spent quietly") {
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 1.0; // certain trial, no draw needed
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp)};
    Rng a(3), b(3);
    CHECK_FALSE(attempt_conjugation(cells, 0, a, cp, gp, 1).has_value());
    CHECK_FALSE(cells[0].conjugating);
    CHECK(a.next_u64() == b.next_u64()); // nothing drawn
}

TEST_CASE("silent cells never touch the random stream") {
    GrowthParams gp;
    ConjugationParams cp;
    std::vector<Cell> cells{grown_cell(1, Role::Recipient, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 5.5}, gp)};
    Rng a(3), b(3);
    for (int i = 0; i < 50; ++i)
        CHECK_FALSE(attempt_conjugation(cells, 0, a, cp, gp, 1).has_value());
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("trial counts match a binomial over many iterations") {
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 0.05;
    Rng rng(20240601);
    int hits = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                                grown_cell(2, Role::Recipient, {0, 5.5}, gp)};
        if (attempt_conjugation(cells, 0, rng, cp, gp, 1).has_value()) ++hits;
    }
    double mean = n * cp.p_d;
    double sd = std::sqrt(n * cp.p_d * (1.0 - cp.p_d));
    CHECK(std::fabs(hits - mean) < 3.5 * sd);
}

TEST_CASE("mate choice is uniform among recipients in range") {
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 1.0;
    Rng rng(88);
    int left = 0, right = 0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                                grown_cell(2, Role::Recipient, {0, 5.5}, gp),
                                grown_cell(3, Role::Recipient, {0, -5.5}, gp)};
        auto link = attempt_conjugation(cells, 0, rng, cp, gp, 1);
        REQUIRE(link.has_value());
        (link->receiver == 2 ? left : right)++;
    }
    double sd = std::sqrt(n * 0.25);
    CHECK(std::fabs(left - n / 2.0) < 3.5 * sd);
    CHECK(left + right == n);
}

TEST_CASE("spring countdown completes after exactly c_time ticks") {
    GrowthParams gp;
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 5.5}, gp)};
    cells[0].conjugating = cells[1].conjugating = true;
    std::vector<PilusSpring> springs{{40, 1, 2, 5}};

    for (int tick = 1; tick <= 4; ++tick) {
        auto out = step_springs(springs, cells);
        CHECK(out.completed.empty());
        CHECK(out.aborted.empty());
        REQUIRE(springs.size() == 1);
        CHECK(springs[0].remaining == 5 - tick);
    }
    auto out = step_springs(springs, cells);
    REQUIRE(out.completed.size() == 1);
    CHECK(out.completed[0].id == 40);
    CHECK(springs.empty());
}

TEST_CASE("the full link lifecycle takes exactly c_time iterations") {
    // springs tick at the top of each iteration and links form near the
    // bottom, so a link made during iteration k hands off during k + c_time
    GrowthParams gp;
    ConjugationParams cp;
    cp.p_d = 1.0;
    cp.c_time = 450;
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 5.5}, gp)};
    Rng rng(5);
    std::vector<PilusSpring> springs;
    long created_at = -1, completed_at = -1;
    for (long it = 0; it < 2000 && completed_at < 0; ++it) {
        auto out = step_springs(springs, cells);
        if (!out.completed.empty()) completed_at = it;
        if (created_at < 0) {
            auto link = attempt_conjugation(cells, 0, rng, cp, gp, 1);
            if (link) {
                springs.push_back(*link);
                created_at = it;
            }
        }
    }
    CHECK(created_at == 0);
    CHECK(completed_at == created_at + 450);
}

TEST_CASE("springs abort when an endpoint washes away") {
    GrowthParams gp;
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp)};
    cells[0].conjugating = true;
    std::vector<PilusSpring> springs{{7, 1, 99, 300}}; // receiver gone
    auto out = step_springs(springs, cells);
    REQUIRE(out.aborted.size() == 1);
    CHECK(out.aborted[0].id == 7);
    CHECK(out.completed.empty());
    CHECK(springs.empty());
    CHECK_FALSE(cells[0].conjugating); // survivor freed
}

TEST_CASE("surviving springs keep their order") {
    GrowthParams gp;
    std::vector<Cell> cells;
    for (std::uint64_t id = 1; id <= 6; ++id) {
        cells.push_back(grown_cell(id, Role::Donor, {0, 0}, gp));
        cells.back().conjugating = true;
    }
    std::vector<PilusSpring> springs{{1, 1, 2, 10}, {2, 3, 4, 10}, {3, 5, 6, 10}};
    step_springs(springs, cells);
    REQUIRE(springs.size() == 3);
    CHECK(springs[0].id == 1);
    CHECK(springs[1].id == 2);
    CHECK(springs[2].id == 3);
}

TEST_CASE("transfer flips the receiver and restarts its program") {
    GrowthParams gp;
    OscillatorProgram prog{OscillatorParams{}};
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 5.5}, gp)};
    cells[0].conjugating = cells[1].conjugating = true;
    cells[0].program.molecules = {4.2, 1.1};
    cells[0].program.steps_done = 77;

    apply_transfer({9, 1, 2, 0}, cells, &prog);
    const Cell& r = cells[1];
    CHECK(r.role == Role::Transconjugant);
    CHECK(r.plasmid);
    CHECK(r.partner_role == Role::Donor);
    CHECK_FALSE(r.conjugating);
    CHECK_FALSE(cells[0].conjugating);
    // program starts from scratch, nothing inherited from the giver
    CHECK(r.program.molecules == std::vector<double>{0.0, 0.0});
    CHECK(r.program.steps_done == 0);
    CHECK(r.program.accumulator == 0);
}

TEST_CASE("transfer from a transconjugant records the giver's role") {
    GrowthParams gp;
    std::vector<Cell> cells{grown_cell(1, Role::Transconjugant, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 5.5}, gp)};
    apply_transfer({1, 1, 2, 0}, cells, nullptr);
    CHECK(cells[1].partner_role == Role::Transconjugant);
    CHECK(cells[1].program.molecules.empty()); // no program installed
}

TEST_CASE("transfer guards: missing endpoint and donor receiver") {
    GrowthParams gp;
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                            grown_cell(2, Role::Donor, {0, 5.5}, gp)};
    CHECK_THROWS_AS(apply_transfer({1, 1, 99, 0}, cells, nullptr), SimError);
    bool threw = false;
    try {
        apply_transfer({1, 1, 2, 0}, cells, nullptr);
    } catch (const SimError& e) {
        threw = true;
        CHECK(e.kind() == ErrorKind::Runtime);
        CHECK(std::string(e.what()).find("donor") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("validate_springs catches every broken invariant") {
    GrowthParams gp;
    std::vector<Cell> cells{grown_cell(1, Role::Donor, {0, 0}, gp),
                            grown_cell(2, Role::Recipient, {0, 5.5}, gp),
                            grown_cell(3, Role::Recipient, {0, 11}, gp)};
    cells[0].conjugating = cells[1].conjugating = true;

    std::vector<PilusSpring> good{{1, 1, 2, 100}};
    CHECK_NOTHROW(validate_springs(good, cells));

    std::vector<PilusSpring> missing{{1, 1, 42, 100}};
    CHECK_THROWS_AS(validate_springs(missing, cells), SimError);

    std::vector<PilusSpring> unflagged{{1, 1, 3, 100}}; // cell 3 not busy
    CHECK_THROWS_AS(validate_springs(unflagged, cells), SimError);

    cells[2].conjugating = true;
    std::vector<PilusSpring> doubled{{1, 1, 2, 100}, {2, 1, 3, 100}};
    CHECK_THROWS_AS(validate_springs(doubled, cells), SimError);

    std::vector<PilusSpring> stale{{1, 1, 2, 0}};
    CHECK_THROWS_AS(validate_springs(stale, cells), SimError);
}

TEST_CASE("conjugation parameter validation") {
    ConjugationParams cp;
    CHECK_NOTHROW(cp.validate());
    cp.p_t1 = 1.5;
    CHECK_THROWS_AS(cp.validate(), SimError);
    cp = {};
    cp.c_time = 0;
    CHECK_THROWS_AS(cp.validate(), SimError);
    cp = {};
    cp.trial_scale = -0.1;
    CHECK_THROWS_AS(cp.validate(), SimError);
}
