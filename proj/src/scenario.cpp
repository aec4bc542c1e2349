#include "rodsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rodsim/error.hpp"

namespace rodsim {

using nlohmann::json;

void SimParams::validate() const {
    growth.validate();
    conj.validate();
    if (solver.substeps < 1) throw SimError::config("pymunk_steps must be >= 1");
    if (solver.iterations < 1) throw SimError::config("solver_iterations must be >= 1");
    if (solver.position_correction_fraction < 0.0 || solver.position_correction_fraction > 1.0)
        throw SimError::config("position_correction must lie in [0, 1]");
    if (solver.slop < 0.0) throw SimError::config("solver slop must be >= 0");
    if (solver.drag < 0.0) throw SimError::config("drag must be >= 0");
    if (spring_rest_length < 0.0) throw SimError::config("spring_rest_length must be >= 0");
    if (spring_stiffness < 0.0) throw SimError::config("spring_stiffness must be >= 0");
    if (spring_damping < 0.0) throw SimError::config("spring_damping must be >= 0");
    if (bac_mass <= 0.0) throw SimError::config("bac_mass must be > 0");
    if (bac_friction < 0.0) throw SimError::config("bac_friction must be >= 0");
    if (snapshot_every < 1) throw SimError::config("pymunk_clock_ticks must be >= 1");
    if (population_cap < 1) throw SimError::config("population_cap must be >= 1");
    if (mix_relax_iterations < 0) throw SimError::config("mix_relax_iterations must be >= 0");
    if (program_kind != "none" && program_kind != "oscillator")
        throw SimError::config("program kind must be 'none' or 'oscillator', got '" +
                               program_kind + "'");
    if (program_kind == "oscillator") osc.validate();
}

SimParams SimParams::finalized() const {
    SimParams p = *this;
    if (p.tie_solver_to_growth_speed) p.solver.iterations = p.growth.growth_speed;
    p.conj.trial_scale =
        p.lifetime_trial_scaling ? p.growth.width * p.growth.length / p.growth.Gt : 1.0;
    return p;
}

void Scenario::validate() const {
    if (name.empty()) throw SimError::config("scenario name must not be empty");
    geometry.validate();
    params.validate();
    if (duration_min < 0.0) throw SimError::config("duration_min must be >= 0");
    for (const auto& s : seeds) {
        if (s.count < 0) throw SimError::config("seed count must be >= 0");
        if (s.arrangement == Arrangement::Explicit) {
            if (s.poses.empty()) throw SimError::config("explicit seed needs poses");
        } else if (s.count > 0 && (s.region.width() <= 0.0 || s.region.height() <= 0.0)) {
            throw SimError::config("seed region must have positive extent");
        }
    }
    for (const auto& iv : interventions) {
        if (iv.kind != "manual_mix")
            throw SimError::config("unknown intervention kind '" + iv.kind + "'");
        if (iv.at_minutes < 0.0 || iv.at_minutes > duration_min)
            throw SimError::config("intervention time must lie within the run duration");
    }
}

namespace {

StrainSeed seed(Role role, int count, Rect region, Arrangement a = Arrangement::Uniform) {
    StrainSeed s;
    s.role = role;
    s.count = count;
    s.region = region;
    s.arrangement = a;
    return s;
}

Scenario base_scenario(std::string name, WorldGeometry geom) {
    Scenario sc;
    sc.name = std::move(name);
    sc.geometry = std::move(geom);
    return sc;
}

Scenario fig2bc_conjugation() {
    Scenario sc = base_scenario("fig2bc_conjugation", open_plate_geometry(400.0, 400.0));
    sc.seeds.push_back(seed(Role::Donor, 4, {130.0, 185.0, 160.0, 215.0}, Arrangement::Centered));
    sc.seeds.push_back(
        seed(Role::Recipient, 8, {260.0, 185.0, 290.0, 215.0}, Arrangement::Centered));
    sc.duration_min = 280.0;
    return sc;
}

Scenario fig2_channel_test(int variant) {
    Scenario sc = base_scenario("fig2_channel_test" + std::to_string(variant),
                                straight_channel_geometry());
    sc.params.growth.length = 24.0;
    Arrangement a = variant == 1   ? Arrangement::Triangular
                    : variant == 2 ? Arrangement::Centered
                                   : Arrangement::Uniform;
    sc.seeds.push_back(seed(Role::Recipient, 30, {5.0, 5.0, 245.0, 145.0}, a));
    sc.duration_min = 500.0;
    return sc;
}

Scenario fig3_oscillator_cross() {
    Scenario sc = base_scenario("fig3_oscillator_cross", cross_channel_geometry());
    sc.seeds.push_back(seed(Role::Donor, 6, {5.0, 57.0, 65.0, 93.0}));
    sc.seeds.push_back(seed(Role::Recipient, 6, {185.0, 57.0, 245.0, 93.0}));
    sc.params.program_kind = "oscillator";
    sc.duration_min = 560.0;
    return sc;
}

// Three inert strains in lateral bands; conjugation switched off so the role
// labels act as dyes.
void add_band_seeds(Scenario& sc) {
    sc.seeds.push_back(seed(Role::Donor, 10, {5.0, 5.0, 95.0, 45.0}));
    sc.seeds.push_back(seed(Role::Recipient, 10, {5.0, 55.0, 95.0, 95.0}));
    sc.seeds.push_back(seed(Role::Transconjugant, 10, {5.0, 105.0, 95.0, 145.0}));
    sc.params.conj.p_d = 0.0;
    sc.params.conj.p_t1 = 0.0;
    sc.params.conj.p_t2 = 0.0;
    sc.duration_min = 300.0;
}

Scenario fig4(char variant) {
    switch (variant) {
    case 'a': {
        Scenario sc = base_scenario("fig4a", straight_channel_geometry());
        add_band_seeds(sc);
        return sc;
    }
    case 'b': {
        Scenario sc = base_scenario("fig4b", columns_channel_geometry());
        add_band_seeds(sc);
        return sc;
    }
    case 'c': {
        Scenario sc = base_scenario("fig4c", zigzag_channel_geometry());
        add_band_seeds(sc);
        return sc;
    }
    case 'd':
    case 'e': {
        bool turbulent = variant == 'e';
        Scenario sc = base_scenario(std::string("fig4") + variant,
                                    side_traps_geometry(turbulent ? 1.2 : 0.4, turbulent));
        sc.seeds.push_back(seed(Role::Donor, 6, {55.0, 45.0, 78.0, 95.0}));
        sc.seeds.push_back(seed(Role::Transconjugant, 6, {82.0, 45.0, 105.0, 95.0}));
        sc.seeds.push_back(seed(Role::Recipient, 8, {195.0, 45.0, 245.0, 95.0}));
        sc.params.conj.p_d = 0.0;
        sc.params.conj.p_t1 = 0.0;
        sc.params.conj.p_t2 = 0.0;
        sc.duration_min = 300.0;
        return sc;
    }
    default:
        throw SimError::config("unknown fig4 variant");
    }
}

Scenario fig5(bool mixed, bool short_cells) {
    std::string name = std::string("fig5_") + (mixed ? "mixed" : "unmixed") +
                       (short_cells ? "_1x2" : "_1x3");
    // plate large enough that the capped population never reaches crush
    // density against the fence; the cap plays the role of nutrient limits.
    // caps hold the confluent biomass equal across sizes, so the shorter
    // strain fills the plate with more individuals
    Scenario sc = base_scenario(name, open_plate_geometry(400.0, 400.0));
    if (short_cells) sc.params.growth.length = 10.0;
    sc.seeds.push_back(seed(Role::Donor, 14, {10.0, 10.0, 390.0, 390.0}));
    sc.seeds.push_back(seed(Role::Recipient, 14, {10.0, 10.0, 390.0, 390.0}));
    sc.params.conj.transconjugants_conjugate = false;
    sc.params.population_cap = short_cells ? 1400 : 1000;
    sc.duration_min = 560.0;
    if (mixed) sc.interventions.push_back({"manual_mix", 420.0});
    return sc;
}

} // namespace

Scenario build_scenario(const std::string& preset) {
    Scenario sc = [&]() -> Scenario {
        if (preset == "fig2bc_conjugation") return fig2bc_conjugation();
        if (preset == "fig2_channel_test1") return fig2_channel_test(1);
        if (preset == "fig2_channel_test2") return fig2_channel_test(2);
        if (preset == "fig2_channel_test3") return fig2_channel_test(3);
        if (preset == "fig3_oscillator_cross") return fig3_oscillator_cross();
        if (preset == "fig4a") return fig4('a');
        if (preset == "fig4b") return fig4('b');
        if (preset == "fig4c") return fig4('c');
        if (preset == "fig4d") return fig4('d');
        if (preset == "fig4e") return fig4('e');
        if (preset == "fig5_unmixed_1x3") return fig5(false, false);
        if (preset == "fig5_mixed_1x3") return fig5(true, false);
        if (preset == "fig5_unmixed_1x2") return fig5(false, true);
        if (preset == "fig5_mixed_1x2") return fig5(true, true);
        // bare geometry presets run as empty-ish demo scenarios
        for (const auto& g : geometry_preset_names()) {
            if (preset == g) {
                Scenario sc2 = base_scenario(g, geometry_preset(g));
                Rect r = sc2.geometry.growth_region;
                sc2.seeds.push_back(seed(Role::Recipient, 12, r));
                sc2.duration_min = 300.0;
                return sc2;
            }
        }
        throw SimError::config("unknown scenario preset '" + preset + "'");
    }();
    sc.validate();
    return sc;
}

std::vector<std::string> scenario_preset_names() {
    return {"fig2bc_conjugation", "fig2_channel_test1", "fig2_channel_test2",
            "fig2_channel_test3", "fig3_oscillator_cross", "fig4a", "fig4b", "fig4c",
            "fig4d", "fig4e", "fig5_unmixed_1x3", "fig5_mixed_1x3", "fig5_unmixed_1x2",
            "fig5_mixed_1x2"};
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* ctx) {
    if (!j.is_object()) throw SimError::config(std::string(ctx) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw SimError::config(std::string(ctx) + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
void read_opt(const json& j, const char* key, T& out, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw SimError::config(std::string(ctx) + ": key '" + key + "' has the wrong type");
    }
}

Rect rect_from(const json& j, const char* ctx) {
    if (!j.is_array() || j.size() != 4)
        throw SimError::config(std::string(ctx) + ": expected [x0, y0, x1, y1]");
    Rect r{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
           j.at(3).get<double>()};
    if (r.x1 < r.x0 || r.y1 < r.y0)
        throw SimError::config(std::string(ctx) + ": rect corners out of order");
    return r;
}

json rect_to(const Rect& r) { return {r.x0, r.y0, r.x1, r.y1}; }

Role role_from(const std::string& s, const char* ctx) {
    if (s == "donor") return Role::Donor;
    if (s == "recipient") return Role::Recipient;
    if (s == "transconjugant") return Role::Transconjugant;
    throw SimError::config(std::string(ctx) + ": unknown role '" + s + "'");
}

Arrangement arrangement_from(const std::string& s) {
    if (s == "uniform") return Arrangement::Uniform;
    if (s == "centered") return Arrangement::Centered;
    if (s == "triangular") return Arrangement::Triangular;
    if (s == "explicit") return Arrangement::Explicit;
    throw SimError::config("seed: unknown arrangement '" + s + "'");
}

const char* arrangement_name(Arrangement a) {
    switch (a) {
    case Arrangement::Uniform: return "uniform";
    case Arrangement::Centered: return "centered";
    case Arrangement::Triangular: return "triangular";
    case Arrangement::Explicit: return "explicit";
    }
    return "?";
}

void apply_geometry(const json& j, Scenario& sc) {
    check_keys(j,
               {"preset", "screenview", "walls", "washout", "uniform_flow", "vortices",
                "growth_region", "wall_friction"},
               "geometry");
    if (auto it = j.find("preset"); it != j.end()) {
        sc.geometry = geometry_preset(it->get<std::string>());
    } else if (j.contains("screenview")) {
        WorldGeometry g;
        g.name = "custom";
        auto sv = j.at("screenview");
        if (sv.is_array() && sv.size() == 2) {
            g.screenview = {0.0, 0.0, sv.at(0).get<double>(), sv.at(1).get<double>()};
        } else {
            g.screenview = rect_from(sv, "geometry.screenview");
        }
        double wall_friction = 0.3;
        read_opt(j, "wall_friction", wall_friction, "geometry");
        if (j.contains("walls")) {
            for (const auto& w : j.at("walls")) {
                if (!w.is_array() || w.size() != 4)
                    throw SimError::config("geometry.walls: expected [ax, ay, bx, by]");
                g.walls.push_back({{w.at(0).get<double>(), w.at(1).get<double>()},
                                   {w.at(2).get<double>(), w.at(3).get<double>()},
                                   wall_friction});
            }
        }
        if (j.contains("washout"))
            for (const auto& r : j.at("washout"))
                g.washout.push_back(rect_from(r, "geometry.washout"));
        if (j.contains("uniform_flow")) {
            for (const auto& f : j.at("uniform_flow")) {
                check_keys(f, {"region", "velocity"}, "geometry.uniform_flow");
                UniformFlowRegion u;
                u.region = rect_from(f.at("region"), "geometry.uniform_flow.region");
                auto v = f.at("velocity");
                u.velocity = {v.at(0).get<double>(), v.at(1).get<double>()};
                g.flow.uniform.push_back(u);
            }
        }
        if (j.contains("vortices")) {
            for (const auto& f : j.at("vortices")) {
                check_keys(f, {"center", "radius", "strength"}, "geometry.vortices");
                VortexRegion v;
                auto c = f.at("center");
                v.center = {c.at(0).get<double>(), c.at(1).get<double>()};
                v.radius = f.at("radius").get<double>();
                v.strength = f.at("strength").get<double>();
                g.flow.vortices.push_back(v);
            }
        }
        g.growth_region = g.screenview;
        sc.geometry = g;
    }
    if (j.contains("growth_region"))
        sc.geometry.growth_region = rect_from(j.at("growth_region"), "geometry.growth_region");
}

void apply_params(const json& j, Scenario& sc) {
    check_keys(j,
               {"width", "length", "growth_speed", "Gt", "real_Gt", "max_overlap",
                "cell_infancy", "growth_phase_jitter", "division_angle_jitter", "p_d", "p_t1",
                "p_t2", "c_time", "contact_radius", "transconjugants_conjugate",
                "transconjugants_receive", "lifetime_trial_scaling", "spring_rest_length",
                "spring_stiffness", "spring_damping", "bac_mass", "bac_friction", "drag",
                "pymunk_steps", "pymunk_clock_ticks", "solver_iterations", "position_correction",
                "tie_solver_to_growth_speed", "network_steps", "number_donors",
                "number_recipients", "population_cap", "mix_relax_iterations", "screenview"},
               "params");
    SimParams& p = sc.params;
    read_opt(j, "width", p.growth.width, "params");
    read_opt(j, "length", p.growth.length, "params");
    read_opt(j, "growth_speed", p.growth.growth_speed, "params");
    read_opt(j, "Gt", p.growth.Gt, "params");
    read_opt(j, "real_Gt", p.growth.real_Gt, "params");
    read_opt(j, "max_overlap", p.growth.max_overlap, "params");
    read_opt(j, "cell_infancy", p.growth.cell_infancy, "params");
    read_opt(j, "growth_phase_jitter", p.growth.growth_phase_jitter, "params");
    read_opt(j, "division_angle_jitter", p.growth.division_angle_jitter, "params");
    read_opt(j, "p_d", p.conj.p_d, "params");
    read_opt(j, "p_t1", p.conj.p_t1, "params");
    read_opt(j, "p_t2", p.conj.p_t2, "params");
    read_opt(j, "c_time", p.conj.c_time, "params");
    read_opt(j, "contact_radius", p.conj.contact_radius, "params");
    read_opt(j, "transconjugants_conjugate", p.conj.transconjugants_conjugate, "params");
    read_opt(j, "transconjugants_receive", p.conj.transconjugants_receive, "params");
    read_opt(j, "lifetime_trial_scaling", p.lifetime_trial_scaling, "params");
    read_opt(j, "spring_rest_length", p.spring_rest_length, "params");
    read_opt(j, "spring_stiffness", p.spring_stiffness, "params");
    read_opt(j, "spring_damping", p.spring_damping, "params");
    read_opt(j, "bac_mass", p.bac_mass, "params");
    read_opt(j, "bac_friction", p.bac_friction, "params");
    read_opt(j, "drag", p.solver.drag, "params");
    read_opt(j, "pymunk_steps", p.solver.substeps, "params");
    read_opt(j, "pymunk_clock_ticks", p.snapshot_every, "params");
    read_opt(j, "solver_iterations", p.solver.iterations, "params");
    read_opt(j, "position_correction", p.solver.position_correction_fraction, "params");
    read_opt(j, "tie_solver_to_growth_speed", p.tie_solver_to_growth_speed, "params");
    read_opt(j, "network_steps", p.osc.network_steps, "params");
    read_opt(j, "population_cap", p.population_cap, "params");
    read_opt(j, "mix_relax_iterations", p.mix_relax_iterations, "params");
    if (j.contains("screenview")) {
        auto sv = j.at("screenview");
        if (sv.is_array() && sv.size() == 2)
            sc.geometry.screenview = {0.0, 0.0, sv.at(0).get<double>(), sv.at(1).get<double>()};
        else
            sc.geometry.screenview = rect_from(sv, "params.screenview");
    }

    auto override_count = [&](const char* key, Role role) {
        auto it = j.find(key);
        if (it == j.end()) return;
        int n = it->get<int>();
        if (n < 0) throw SimError::config(std::string("params.") + key + " must be >= 0");
        for (auto& s : sc.seeds)
            if (s.role == role) {
                s.count = n;
                return;
            }
        StrainSeed s;
        s.role = role;
        s.count = n;
        s.region = sc.geometry.growth_region;
        sc.seeds.push_back(s);
    };
    override_count("number_donors", Role::Donor);
    override_count("number_recipients", Role::Recipient);
}

void apply_program(const json& j, Scenario& sc) {
    check_keys(j,
               {"kind", "alpha", "beta", "gamma", "sigma", "delta", "dt", "integrator",
                "delta_full_bracket"},
               "program");
    read_opt(j, "kind", sc.params.program_kind, "program");
    OscillatorParams& o = sc.params.osc;
    read_opt(j, "alpha", o.alpha, "program");
    read_opt(j, "beta", o.beta, "program");
    read_opt(j, "gamma", o.gamma, "program");
    read_opt(j, "sigma", o.sigma, "program");
    read_opt(j, "delta", o.delta, "program");
    read_opt(j, "dt", o.dt, "program");
    read_opt(j, "delta_full_bracket", o.delta_full_bracket, "program");
    if (auto it = j.find("integrator"); it != j.end()) {
        std::string s = it->get<std::string>();
        if (s == "euler")
            o.euler = true;
        else if (s == "rk4")
            o.euler = false;
        else
            throw SimError::config("program.integrator must be 'rk4' or 'euler'");
    }
}

void apply_seeds(const json& j, Scenario& sc) {
    if (!j.is_array()) throw SimError::config("seeds: expected an array");
    sc.seeds.clear();
    for (const auto& e : j) {
        check_keys(e, {"role", "count", "region", "arrangement", "poses"}, "seed");
        StrainSeed s;
        s.role = role_from(e.at("role").get<std::string>(), "seed.role");
        if (e.contains("arrangement"))
            s.arrangement = arrangement_from(e.at("arrangement").get<std::string>());
        if (e.contains("region")) s.region = rect_from(e.at("region"), "seed.region");
        else s.region = sc.geometry.growth_region;
        if (s.arrangement == Arrangement::Explicit) {
            if (!e.contains("poses")) throw SimError::config("explicit seed needs 'poses'");
            for (const auto& p : e.at("poses")) {
                if (!p.is_array() || p.size() != 3)
                    throw SimError::config("seed.poses: expected [x, y, angle]");
                s.poses.push_back(
                    {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
            }
            s.count = static_cast<int>(s.poses.size());
        } else {
            s.count = e.at("count").get<int>();
        }
        sc.seeds.push_back(std::move(s));
    }
}

void apply_interventions(const json& j, Scenario& sc) {
    if (!j.is_array()) throw SimError::config("interventions: expected an array");
    sc.interventions.clear();
    for (const auto& e : j) {
        check_keys(e, {"kind", "at_minutes"}, "intervention");
        Intervention iv;
        read_opt(e, "kind", iv.kind, "intervention");
        if (!e.contains("at_minutes"))
            throw SimError::config("intervention needs 'at_minutes'");
        iv.at_minutes = e.at("at_minutes").get<double>();
        sc.interventions.push_back(iv);
    }
}

} // namespace

Scenario scenario_from_json(const json& j) {
    check_keys(j,
               {"name", "preset", "geometry", "params", "program", "seeds", "interventions",
                "duration_min", "rng_seed"},
               "scenario");
    Scenario sc;
    if (auto it = j.find("preset"); it != j.end())
        sc = build_scenario(it->get<std::string>());
    read_opt(j, "name", sc.name, "scenario");
    if (j.contains("geometry")) apply_geometry(j.at("geometry"), sc);
    if (j.contains("seeds")) apply_seeds(j.at("seeds"), sc);
    if (j.contains("params")) apply_params(j.at("params"), sc);
    if (j.contains("program")) apply_program(j.at("program"), sc);
    if (j.contains("interventions")) apply_interventions(j.at("interventions"), sc);
    read_opt(j, "duration_min", sc.duration_min, "scenario");
    read_opt(j, "rng_seed", sc.rng_seed, "scenario");
    if (sc.geometry.walls.empty() && sc.geometry.screenview.width() <= 0.0)
        throw SimError::config("scenario needs a geometry (preset or explicit)");
    sc.validate();
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError::io("cannot open scenario file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw SimError::config(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

json scenario_to_json(const Scenario& s) {
    json walls = json::array();
    for (const auto& w : s.geometry.walls) walls.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
    json washout = json::array();
    for (const auto& r : s.geometry.washout) washout.push_back(rect_to(r));
    json uni = json::array();
    for (const auto& u : s.geometry.flow.uniform)
        uni.push_back({{"region", rect_to(u.region)}, {"velocity", {u.velocity.x, u.velocity.y}}});
    json vort = json::array();
    for (const auto& v : s.geometry.flow.vortices)
        vort.push_back({{"center", {v.center.x, v.center.y}},
                        {"radius", v.radius},
                        {"strength", v.strength}});
    json geometry = {{"screenview", rect_to(s.geometry.screenview)},
                     {"walls", walls},
                     {"washout", washout},
                     {"uniform_flow", uni},
                     {"vortices", vort},
                     {"growth_region", rect_to(s.geometry.growth_region)}};

    const SimParams& p = s.params;
    json params = {{"width", p.growth.width},
                   {"length", p.growth.length},
                   {"growth_speed", p.growth.growth_speed},
                   {"Gt", p.growth.Gt},
                   {"real_Gt", p.growth.real_Gt},
                   {"max_overlap", p.growth.max_overlap},
                   {"cell_infancy", p.growth.cell_infancy},
                   {"growth_phase_jitter", p.growth.growth_phase_jitter},
                   {"division_angle_jitter", p.growth.division_angle_jitter},
                   {"p_d", p.conj.p_d},
                   {"p_t1", p.conj.p_t1},
                   {"p_t2", p.conj.p_t2},
                   {"c_time", p.conj.c_time},
                   {"contact_radius", p.conj.contact_radius},
                   {"transconjugants_conjugate", p.conj.transconjugants_conjugate},
                   {"transconjugants_receive", p.conj.transconjugants_receive},
                   {"lifetime_trial_scaling", p.lifetime_trial_scaling},
                   {"spring_rest_length", p.spring_rest_length},
                   {"spring_stiffness", p.spring_stiffness},
                   {"spring_damping", p.spring_damping},
                   {"bac_mass", p.bac_mass},
                   {"bac_friction", p.bac_friction},
                   {"drag", p.solver.drag},
                   {"pymunk_steps", p.solver.substeps},
                   {"pymunk_clock_ticks", p.snapshot_every},
                   {"solver_iterations", p.solver.iterations},
                   {"position_correction", p.solver.position_correction_fraction},
                   {"tie_solver_to_growth_speed", p.tie_solver_to_growth_speed},
                   {"network_steps", p.osc.network_steps},
                   {"population_cap", p.population_cap},
                   {"mix_relax_iterations", p.mix_relax_iterations}};

    json program = {{"kind", p.program_kind},
                    {"alpha", p.osc.alpha},
                    {"beta", p.osc.beta},
                    {"gamma", p.osc.gamma},
                    {"sigma", p.osc.sigma},
                    {"delta", p.osc.delta},
                    {"dt", p.osc.dt},
                    {"integrator", p.osc.euler ? "euler" : "rk4"},
                    {"delta_full_bracket", p.osc.delta_full_bracket}};

    json seeds = json::array();
    for (const auto& e : s.seeds) {
        json js = {{"role", role_name(e.role)},
                   {"count", e.count},
                   {"region", rect_to(e.region)},
                   {"arrangement", arrangement_name(e.arrangement)}};
        if (e.arrangement == Arrangement::Explicit) {
            json poses = json::array();
            for (const auto& p3 : e.poses) poses.push_back({p3[0], p3[1], p3[2]});
            js["poses"] = poses;
        }
        seeds.push_back(js);
    }

    json ivs = json::array();
    for (const auto& iv : s.interventions)
        ivs.push_back({{"kind", iv.kind}, {"at_minutes", iv.at_minutes}});

    return {{"name", s.name},        {"geometry", geometry},
            {"params", params},      {"program", program},
            {"seeds", seeds},        {"interventions", ivs},
            {"duration_min", s.duration_min}, {"rng_seed", s.rng_seed}};
}

} // namespace rodsim
