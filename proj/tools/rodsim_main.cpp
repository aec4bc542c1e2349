#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rodsim/batch.hpp"
#include "rodsim/error.hpp"
#include "rodsim/metrics.hpp"
#include "rodsim/render.hpp"
#include "rodsim/scenario.hpp"
#include "rodsim/snapshot.hpp"
#include "rodsim/world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rodsim;

namespace {

json event_to_json(const Event& e) {
    return {{"it", e.iteration}, {"min", e.min},      {"kind", event_kind_name(e.kind)},
            {"a", e.a},          {"b", e.b},          {"c", e.c}};
}

json summary_to_json(const RunSummary& s) {
    json pair = json::array();
    for (const auto& row : s.stats.pair_contacts) pair.push_back({row[0], row[1], row[2]});
    json j = {{"scenario", s.scenario},
              {"seed", s.seed},
              {"iterations", s.iterations},
              {"duration_min", s.duration_min},
              {"final",
               {{"donors", s.final_counts[0]},
                {"recipients", s.final_counts[1]},
                {"transconjugants", s.final_counts[2]}}},
              {"transfers", s.stats.transfers},
              {"divisions", s.stats.divisions},
              {"washouts", s.stats.washouts},
              {"springs_created", s.stats.springs_created},
              {"springs_aborted", s.stats.springs_aborted},
              {"population_capped", s.stats.population_capped},
              {"pair_contacts", pair}};
    j["Y"] = s.final_Y ? json(*s.final_Y) : json(nullptr);
    j["first_transfer_min"] =
        s.stats.first_transfer_min ? json(*s.stats.first_transfer_min) : json(nullptr);
    return j;
}

std::string rep_dir_name(int rep) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "rep%03d", rep);
    return buf;
}

struct RunArgs {
    std::string scenario_file;
    std::string preset;
    std::optional<std::uint64_t> seed;
    int replicates = 1;
    std::optional<double> duration_min;
    std::string out;
    std::optional<int> snapshot_every;
    int workers = 1;
    bool render = false;
};

int cmd_run(const RunArgs& a) {
    if (a.scenario_file.empty() == a.preset.empty())
        throw SimError::config("pass exactly one of --scenario or --preset");

    Scenario sc = a.preset.empty() ? load_scenario_file(a.scenario_file)
                                   : build_scenario(a.preset);
    if (a.seed) sc.rng_seed = *a.seed;
    if (a.duration_min) sc.duration_min = *a.duration_min;
    if (a.snapshot_every) sc.params.snapshot_every = *a.snapshot_every;
    sc.validate();

    fs::path out = a.out;
    if (out.empty()) {
        if (const char* env = std::getenv("RODSIM_OUT")) out = fs::path(env) / sc.name;
        else out = fs::path("runs") / sc.name;
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw SimError::io("cannot create output directory " + out.string());

    {
        std::ofstream cfg(out / "scenario.json");
        if (!cfg) throw SimError::io("cannot write " + (out / "scenario.json").string());
        cfg << scenario_to_json(sc).dump(2) << '\n';
    }

    struct RepFiles {
        SnapshotWriter snaps;
        std::ofstream events;
    };
    std::vector<RepFiles> files(static_cast<std::size_t>(a.replicates));

    auto make_sinks = [&](int rep) -> RunSinks {
        fs::path dir = out / rep_dir_name(rep);
        fs::create_directories(dir);
        auto& f = files[static_cast<std::size_t>(rep)];
        SnapshotHeader header;
        header.scenario = sc.name;
        header.seed = replicate_seed(sc.rng_seed, static_cast<std::uint64_t>(rep));
        header.screenview = sc.geometry.screenview;
        header.walls = sc.geometry.walls;
        f.snaps.open((dir / "snapshots.jsonl").string(), header);
        f.events.open(dir / "events.jsonl");
        if (!f.events) throw SimError::io("cannot open events file in " + dir.string());
        RunSinks sinks;
        sinks.on_snapshot = [&f](const SnapshotRecord& r) { f.snaps.append(r); };
        sinks.on_event = [&f](const Event& e) { f.events << event_to_json(e).dump() << '\n'; };
        return sinks;
    };

    auto t0 = std::chrono::steady_clock::now();
    auto summaries = run_batch(sc, a.replicates, a.workers, make_sinks);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json reps = json::array();
    std::vector<double> ys;
    double transfer_sum = 0.0;
    for (int rep = 0; rep < a.replicates; ++rep) {
        const auto& s = summaries[static_cast<std::size_t>(rep)];
        std::ofstream rs(out / rep_dir_name(rep) / "summary.json");
        rs << summary_to_json(s).dump(2) << '\n';
        reps.push_back(summary_to_json(s));
        if (s.final_Y) ys.push_back(*s.final_Y);
        transfer_sum += static_cast<double>(s.stats.transfers);
        std::printf("rep %03d  cells %llu/%llu/%llu (D/R/T)  transfers %llu  Y %s  first %s\n",
                    rep, static_cast<unsigned long long>(s.final_counts[0]),
                    static_cast<unsigned long long>(s.final_counts[1]),
                    static_cast<unsigned long long>(s.final_counts[2]),
                    static_cast<unsigned long long>(s.stats.transfers),
                    s.final_Y ? std::to_string(*s.final_Y).c_str() : "-",
                    s.stats.first_transfer_min ? std::to_string(*s.stats.first_transfer_min).c_str()
                                               : "-");
    }

    json agg = {{"scenario", sc.name},
                {"replicates", a.replicates},
                {"master_seed", sc.rng_seed},
                {"transfers_mean", transfer_sum / a.replicates},
                {"replicate_summaries", reps}};
    if (!ys.empty()) {
        double mean = 0.0;
        for (double y : ys) mean += y;
        mean /= static_cast<double>(ys.size());
        double var = 0.0;
        for (double y : ys) var += (y - mean) * (y - mean);
        double sd = ys.size() > 1 ? std::sqrt(var / static_cast<double>(ys.size() - 1)) : 0.0;
        agg["Y_mean"] = mean;
        agg["Y_sd"] = sd;
        agg["Y_n"] = ys.size();
    } else {
        agg["Y_mean"] = nullptr;
        agg["Y_sd"] = nullptr;
        agg["Y_n"] = 0;
    }
    {
        std::ofstream as(out / "summary.json");
        as << agg.dump(2) << '\n';
    }
    std::printf("wrote %s (%d replicate%s, %.1fs)\n", out.string().c_str(), a.replicates,
                a.replicates == 1 ? "" : "s", elapsed);

    if (a.render) {
        auto file = read_snapshot_file((out / rep_dir_name(0) / "snapshots.jsonl").string());
        fs::path frames = out / "frames";
        fs::create_directories(frames);
        RenderOptions ro;
        ro.velocity_field = !sc.geometry.flow.empty();
        for (const auto& rec : file.records) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%07llu.svg",
                          static_cast<unsigned long long>(rec.iteration));
            write_frame_svg((frames / name).string(), file.header, rec, ro);
        }
        std::printf("rendered %zu frames to %s\n", file.records.size(),
                    frames.string().c_str());
    }
    return 0;
}

Rect parse_region(const std::string& s) {
    Rect r;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &r.x0, &r.y0, &r.x1, &r.y1) != 4)
        throw SimError::config("--region expects x0,y0,x1,y1");
    return r;
}

int cmd_metrics(const std::string& in, const std::string& metric, int bins,
                const std::string& region_str, const std::string& axis, double contact_radius,
                const std::string& out_path) {
    auto file = read_snapshot_file(in);
    Rect region = region_str.empty() ? file.header.screenview : parse_region(region_str);

    std::ostream* out = &std::cout;
    std::ofstream fout;
    if (!out_path.empty()) {
        fout.open(out_path);
        if (!fout) throw SimError::io("cannot open output file: " + out_path);
        out = &fout;
    }

    Vec2 ax = axis == "y" ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};

    if (metric == "density") {
        *out << "iteration,min,density\n";
        for (const auto& r : file.records)
            *out << r.iteration << ',' << r.min << ',' << metrics::density(r, region) << '\n';
    } else if (metric == "ordering") {
        *out << "iteration,min,ordering\n";
        for (const auto& r : file.records) {
            if (r.cells.empty()) continue;
            *out << r.iteration << ',' << r.min << ',' << metrics::ordering(r, ax, region)
                 << '\n';
        }
    } else if (metric == "velocity_gradient") {
        *out << "iteration,min,bin,x,count,mean_vx,gradient\n";
        for (const auto& r : file.records)
            for (const auto& b : metrics::velocity_gradient(r, region, bins))
                *out << r.iteration << ',' << r.min << ',' << b.index << ',' << b.x << ','
                     << b.count << ',' << b.mean_vx << ',' << b.value << '\n';
    } else if (metric == "vector_field") {
        int nx = bins, ny = std::max(1, bins / 2);
        *out << "iteration,min,ix,iy,cx,cy,count,vx,vy\n";
        for (const auto& r : file.records)
            for (const auto& f : metrics::vector_field(r, region, nx, ny))
                *out << r.iteration << ',' << r.min << ',' << f.ix << ',' << f.iy << ','
                     << f.cx << ',' << f.cy << ',' << f.count << ',' << f.vx << ',' << f.vy
                     << '\n';
    } else if (metric == "conjugation_frequency" || metric == "Y") {
        *out << "iteration,min,Y\n";
        for (const auto& r : file.records)
            *out << r.iteration << ',' << r.min << ',' << metrics::conjugation_frequency(r)
                 << '\n';
    } else if (metric == "isolation_index") {
        *out << "iteration,min,isolation_index\n";
        for (const auto& r : file.records)
            *out << r.iteration << ',' << r.min << ','
                 << metrics::isolation_index(r, contact_radius) << '\n';
    } else {
        throw SimError::config("unknown metric '" + metric +
                               "' (density, ordering, velocity_gradient, vector_field, "
                               "conjugation_frequency, isolation_index)");
    }
    return 0;
}

int cmd_render(const std::string& in, const std::string& out_dir, int every, bool field) {
    auto file = read_snapshot_file(in);
    fs::create_directories(out_dir);
    RenderOptions ro;
    ro.velocity_field = field;
    for (std::size_t i = 0; i < file.records.size(); ++i) {
        if (every > 1 && i % static_cast<std::size_t>(every) != 0 &&
            i + 1 != file.records.size())
            continue;
        char name[32];
        std::snprintf(name, sizeof name, "frame_%07llu.svg",
                      static_cast<unsigned long long>(file.records[i].iteration));
        write_frame_svg((fs::path(out_dir) / name).string(), file.header, file.records[i], ro);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rodsim - rod-shaped bacteria, conjugation, and microfluidic worlds"};
    app.require_subcommand(1);

    RunArgs ra;
    auto* run = app.add_subcommand("run", "simulate a scenario");
    run->add_option("--scenario,-s", ra.scenario_file, "scenario config (json)");
    run->add_option("--preset", ra.preset, "scenario preset name");
    run->add_option("--seed", ra.seed, "master RNG seed");
    run->add_option("--replicates", ra.replicates, "independent replicates")
        ->check(CLI::PositiveNumber);
    run->add_option("--duration-min", ra.duration_min, "simulated minutes");
    run->add_option("--out", ra.out, "output directory (default $RODSIM_OUT/<name>)");
    run->add_option("--snapshot-every", ra.snapshot_every, "iterations between snapshots")
        ->check(CLI::PositiveNumber);
    run->add_option("--workers", ra.workers, "worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--render", ra.render, "render SVG frames for replicate 0");

    std::string m_in, m_metric, m_region, m_axis = "x", m_out;
    int m_bins = 20;
    double m_contact = 1.0;
    auto* met = app.add_subcommand("metrics", "compute metrics over a snapshot file");
    met->add_option("--in", m_in, "snapshots.jsonl path")->required();
    met->add_option("--metric", m_metric, "metric name")->required();
    met->add_option("--bins", m_bins, "bin count")->check(CLI::PositiveNumber);
    met->add_option("--region", m_region, "x0,y0,x1,y1 (default: screenview)");
    met->add_option("--axis", m_axis, "ordering axis: x or y");
    met->add_option("--contact-radius", m_contact, "isolation_index reach");
    met->add_option("--out", m_out, "write CSV here instead of stdout");

    std::string r_in, r_out = "frames";
    int r_every = 1;
    bool r_field = false;
    auto* ren = app.add_subcommand("render", "render snapshot records to SVG frames");
    ren->add_option("--in", r_in, "snapshots.jsonl path")->required();
    ren->add_option("--out", r_out, "frame directory");
    ren->add_option("--every", r_every, "render every k-th record")->check(CLI::PositiveNumber);
    ren->add_flag("--field", r_field, "overlay mean-velocity arrows");

    auto* pre = app.add_subcommand("presets", "list scenario presets");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(ra);
        if (met->parsed())
            return cmd_metrics(m_in, m_metric, m_bins, m_region, m_axis, m_contact, m_out);
        if (ren->parsed()) return cmd_render(r_in, r_out, r_every, r_field);
        if (pre->parsed()) {
            for (const auto& n : scenario_preset_names()) std::printf("%s\n", n.c_str());
            std::printf("# geometry presets usable via config \"geometry\": {\"preset\": ...}\n");
            for (const auto& n : geometry_preset_names()) std::printf("%s\n", n.c_str());
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const SimError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.kind()) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Runtime: return 3;
        case ErrorKind::Io: return 4;
        }
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
