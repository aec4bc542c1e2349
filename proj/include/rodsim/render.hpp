#pragma once

#include <string>

#include "rodsim/snapshot.hpp"

namespace rodsim {

struct RenderOptions {
    double scale = 2.0;       // pixels per lattice unit
    bool velocity_field = false;
    int field_bins_x = 24;
    int field_bins_y = 12;
};

// One SVG frame: walls, cells colored by role (plasmid carriers brighten
// with their program readout), pilus links, optional mean-velocity arrows.
std::string render_svg(const SnapshotHeader& header, const SnapshotRecord& record,
                       const RenderOptions& opts = {});

void write_frame_svg(const std::string& path, const SnapshotHeader& header,
                     const SnapshotRecord& record, const RenderOptions& opts = {});

} // namespace rodsim
