#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "rodsim/geometry.hpp"

#include "json.hpp"

namespace rodsim {

// One line per record in a .jsonl file, preceded by a header line carrying
// enough geometry to render frames without the original config.
struct SnapshotHeader {
    std::string format = "rodsim-snapshot";
    int version = 1;
    std::string scenario;
    std::uint64_t seed = 0;
    Rect screenview;
    std::vector<Wall> walls;
};

struct SnapshotCellRow {
    std::uint64_t id = 0;
    double cx = 0, cy = 0, angle = 0, half_length = 0, radius = 0;
    double vx = 0, vy = 0;
    int role = 0;
    bool conjugating = false;
    double readout = 0.0;
};

struct SnapshotSpringRow {
    std::uint64_t id = 0, giver = 0, receiver = 0;
    int remaining = 0;
};

struct SnapshotRecord {
    std::uint64_t iteration = 0;
    double min = 0.0;
    std::vector<SnapshotCellRow> cells;
    std::vector<SnapshotSpringRow> springs;
};

nlohmann::json header_to_json(const SnapshotHeader& h);
nlohmann::json record_to_json(const SnapshotRecord& r);
SnapshotHeader header_from_json(const nlohmann::json& j);
SnapshotRecord record_from_json(const nlohmann::json& j);

class SnapshotWriter {
public:
    SnapshotWriter() = default;
    void open(const std::string& path, const SnapshotHeader& header);
    void append(const SnapshotRecord& r);
    void close();
    bool is_open() const { return out_.is_open(); }

private:
    std::ofstream out_;
};

struct SnapshotFile {
    SnapshotHeader header;
    std::vector<SnapshotRecord> records;
};

SnapshotFile read_snapshot_file(const std::string& path);

} // namespace rodsim
