#include "rodsim/snapshot.hpp"

#include "rodsim/error.hpp"

namespace rodsim {

using nlohmann::json;

namespace {

// strict field access: missing or mistyped keys are IO errors
const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw SimError::io(std::string("snapshot record missing key '") + key + "'");
    return *it;
}

} // namespace

json header_to_json(const SnapshotHeader& h) {
    json walls = json::array();
    for (const auto& w : h.walls) walls.push_back({w.a.x, w.a.y, w.b.x, w.b.y});
    return {{"format", h.format},
            {"version", h.version},
            {"scenario", h.scenario},
            {"seed", h.seed},
            {"screenview", {h.screenview.x0, h.screenview.y0, h.screenview.x1, h.screenview.y1}},
            {"walls", walls}};
}

SnapshotHeader header_from_json(const json& j) {
    SnapshotHeader h;
    h.format = need(j, "format").get<std::string>();
    if (h.format != "rodsim-snapshot")
        throw SimError::io("not a snapshot file (format '" + h.format + "')");
    h.version = need(j, "version").get<int>();
    if (h.version != 1)
        throw SimError::io("unsupported snapshot version " + std::to_string(h.version));
    h.scenario = need(j, "scenario").get<std::string>();
    h.seed = need(j, "seed").get<std::uint64_t>();
    auto sv = need(j, "screenview");
    h.screenview = {sv.at(0).get<double>(), sv.at(1).get<double>(), sv.at(2).get<double>(),
                    sv.at(3).get<double>()};
    for (const auto& w : need(j, "walls"))
        h.walls.push_back({{w.at(0).get<double>(), w.at(1).get<double>()},
                           {w.at(2).get<double>(), w.at(3).get<double>()},
                           0.0});
    return h;
}

json record_to_json(const SnapshotRecord& r) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        cells.push_back({{"id", c.id},
                         {"x", c.cx},
                         {"y", c.cy},
                         {"a", c.angle},
                         {"hl", c.half_length},
                         {"r", c.radius},
                         {"vx", c.vx},
                         {"vy", c.vy},
                         {"role", c.role},
                         {"conj", c.conjugating},
                         {"ro", c.readout}});
    }
    json springs = json::array();
    for (const auto& s : r.springs)
        springs.push_back(
            {{"id", s.id}, {"giver", s.giver}, {"receiver", s.receiver}, {"left", s.remaining}});
    return {{"it", r.iteration}, {"min", r.min}, {"cells", cells}, {"springs", springs}};
}

SnapshotRecord record_from_json(const json& j) {
    SnapshotRecord r;
    r.iteration = need(j, "it").get<std::uint64_t>();
    r.min = need(j, "min").get<double>();
    for (const auto& c : need(j, "cells")) {
        SnapshotCellRow row;
        row.id = need(c, "id").get<std::uint64_t>();
        row.cx = need(c, "x").get<double>();
        row.cy = need(c, "y").get<double>();
        row.angle = need(c, "a").get<double>();
        row.half_length = need(c, "hl").get<double>();
        row.radius = need(c, "r").get<double>();
        row.vx = need(c, "vx").get<double>();
        row.vy = need(c, "vy").get<double>();
        row.role = need(c, "role").get<int>();
        if (row.role < 0 || row.role > 2)
            throw SimError::io("snapshot cell role out of range: " + std::to_string(row.role));
        row.conjugating = need(c, "conj").get<bool>();
        row.readout = need(c, "ro").get<double>();
        r.cells.push_back(row);
    }
    for (const auto& s : need(j, "springs")) {
        SnapshotSpringRow row;
        row.id = need(s, "id").get<std::uint64_t>();
        row.giver = need(s, "giver").get<std::uint64_t>();
        row.receiver = need(s, "receiver").get<std::uint64_t>();
        row.remaining = need(s, "left").get<int>();
        r.springs.push_back(row);
    }
    return r;
}

void SnapshotWriter::open(const std::string& path, const SnapshotHeader& header) {
    out_.open(path, std::ios::out | std::ios::trunc);
    if (!out_) throw SimError::io("cannot open snapshot file for writing: " + path);
    out_ << header_to_json(header).dump() << '\n';
}

void SnapshotWriter::append(const SnapshotRecord& r) {
    out_ << record_to_json(r).dump() << '\n';
    if (!out_) throw SimError::io("snapshot write failed");
}

void SnapshotWriter::close() {
    if (out_.is_open()) out_.close();
}

SnapshotFile read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError::io("cannot open snapshot file: " + path);
    SnapshotFile f;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw SimError::io(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (!have_header) {
            f.header = header_from_json(j);
            have_header = true;
        } else {
            f.records.push_back(record_from_json(j));
        }
    }
    if (!have_header) throw SimError::io("snapshot file has no header: " + path);
    return f;
}

} // namespace rodsim
