#include "rodsim/geometry.hpp"

#include <cmath>

#include "rodsim/error.hpp"

namespace rodsim {

void WorldGeometry::validate() const {
    if (screenview.width() <= 0.0 || screenview.height() <= 0.0)
        throw SimError::config("geometry screenview must have positive extent");
    if (growth_region.width() <= 0.0 || growth_region.height() <= 0.0)
        throw SimError::config("geometry growth_region must have positive extent");
    for (const auto& w : walls)
        if (w.a == w.b) throw SimError::config("geometry wall segment has zero length");
    for (const auto& r : washout)
        if (r.x1 <= r.x0 || r.y1 <= r.y0)
            throw SimError::config("geometry washout rect must have positive extent");
    for (const auto& v : flow.vortices)
        if (v.radius <= 0.0) throw SimError::config("vortex radius must be > 0");
}

namespace {

constexpr double WALL_FRICTION = 0.3;

void add_wall(WorldGeometry& g, double ax, double ay, double bx, double by) {
    g.walls.push_back({{ax, ay}, {bx, by}, WALL_FRICTION});
}

// channel side walls plus washout pockets past both mouths
WorldGeometry channel_frame() {
    WorldGeometry g;
    g.screenview = {-60.0, -10.0, 310.0, 160.0};
    g.growth_region = {0.0, 0.0, 250.0, 150.0};
    g.washout.push_back({-60.0, -10.0, -2.0, 160.0});
    g.washout.push_back({252.0, -10.0, 310.0, 160.0});
    return g;
}

void add_box(WorldGeometry& g, double x0, double y0, double x1, double y1) {
    add_wall(g, x0, y0, x1, y0);
    add_wall(g, x1, y0, x1, y1);
    add_wall(g, x1, y1, x0, y1);
    add_wall(g, x0, y1, x0, y0);
}

} // namespace

WorldGeometry straight_channel_geometry() {
    WorldGeometry g = channel_frame();
    g.name = "straight_channel";
    add_wall(g, -60.0, 0.0, 310.0, 0.0);
    add_wall(g, -60.0, 150.0, 310.0, 150.0);
    return g;
}

WorldGeometry cross_channel_geometry() {
    WorldGeometry g;
    g.name = "cross_channel";
    g.screenview = {-60.0, -60.0, 310.0, 210.0};
    g.growth_region = {0.0, 55.0, 250.0, 95.0};
    // horizontal corridor y in [55, 95], vertical corridor x in [105, 145]
    add_wall(g, -60.0, 95.0, 105.0, 95.0);
    add_wall(g, 145.0, 95.0, 310.0, 95.0);
    add_wall(g, -60.0, 55.0, 105.0, 55.0);
    add_wall(g, 145.0, 55.0, 310.0, 55.0);
    add_wall(g, 105.0, 95.0, 105.0, 210.0);
    add_wall(g, 145.0, 95.0, 145.0, 210.0);
    add_wall(g, 105.0, -60.0, 105.0, 55.0);
    add_wall(g, 145.0, -60.0, 145.0, 55.0);
    g.washout.push_back({-60.0, 45.0, -15.0, 105.0});
    g.washout.push_back({265.0, 45.0, 310.0, 105.0});
    g.washout.push_back({95.0, 165.0, 155.0, 210.0});
    g.washout.push_back({95.0, -60.0, 155.0, -15.0});
    return g;
}

WorldGeometry columns_channel_geometry() {
    WorldGeometry g = straight_channel_geometry();
    g.name = "columns_channel";
    // Staggered baffles: row A gaps at [45,75] and [120,150]; row B gaps at
    // [0,30] and [75,105]. Nothing passes without changing lane.
    add_box(g, 95.0, 0.0, 110.0, 45.0);
    add_box(g, 95.0, 75.0, 110.0, 120.0);
    add_box(g, 145.0, 30.0, 160.0, 75.0);
    add_box(g, 145.0, 105.0, 160.0, 150.0);
    return g;
}

WorldGeometry zigzag_channel_geometry() {
    WorldGeometry g = channel_frame();
    g.name = "zigzag_channel";
    add_wall(g, -60.0, 0.0, 0.0, 0.0);
    add_wall(g, 250.0, 0.0, 310.0, 0.0);
    add_wall(g, -60.0, 150.0, 0.0, 150.0);
    add_wall(g, 250.0, 150.0, 310.0, 150.0);
    // Opposed teeth, half-period offset: the passage necks down to the band
    // y in [45, 105] at every bottom peak.
    for (int k = 0; k < 5; ++k) {
        double x = 50.0 * k;
        add_wall(g, x, 0.0, x + 25.0, 45.0);
        add_wall(g, x + 25.0, 45.0, x + 50.0, 0.0);
        add_wall(g, x, 150.0, x + 25.0, 105.0);
        add_wall(g, x + 25.0, 105.0, x + 50.0, 150.0);
    }
    return g;
}

WorldGeometry side_traps_geometry(double flow_speed, bool vortices) {
    WorldGeometry g;
    g.name = vortices ? "side_traps_vortex" : "side_traps";
    g.screenview = {-60.0, -10.0, 360.0, 110.0};
    g.growth_region = {50.0, 40.0, 110.0, 100.0}; // first trap
    add_wall(g, -60.0, 0.0, 360.0, 0.0);
    add_wall(g, -60.0, 40.0, 50.0, 40.0);
    add_wall(g, 110.0, 40.0, 190.0, 40.0);
    add_wall(g, 250.0, 40.0, 360.0, 40.0);
    for (double x0 : {50.0, 190.0}) {
        add_wall(g, x0, 40.0, x0, 100.0);
        add_wall(g, x0, 100.0, x0 + 60.0, 100.0);
        add_wall(g, x0 + 60.0, 100.0, x0 + 60.0, 40.0);
    }
    g.washout.push_back({-60.0, -10.0, -5.0, 110.0});
    g.washout.push_back({305.0, -10.0, 360.0, 110.0});
    g.flow.uniform.push_back({{-60.0, 0.0, 360.0, 40.0}, {flow_speed, 0.0}});
    if (vortices) {
        g.flow.vortices.push_back({{80.0, 70.0}, 28.0, 0.04});
        g.flow.vortices.push_back({{220.0, 70.0}, 28.0, 0.04});
    }
    return g;
}

WorldGeometry open_plate_geometry(double w, double h) {
    WorldGeometry g;
    g.name = "open_plate";
    g.screenview = {-10.0, -10.0, w + 10.0, h + 10.0};
    g.growth_region = {0.0, 0.0, w, h};
    add_box(g, 0.0, 0.0, w, h);
    return g;
}

WorldGeometry geometry_preset(const std::string& name) {
    if (name == "straight_channel") return straight_channel_geometry();
    if (name == "cross_channel") return cross_channel_geometry();
    if (name == "columns_channel") return columns_channel_geometry();
    if (name == "zigzag_channel") return zigzag_channel_geometry();
    if (name == "side_traps") return side_traps_geometry(0.4, false);
    if (name == "side_traps_vortex") return side_traps_geometry(1.2, true);
    if (name == "open_plate") return open_plate_geometry(400.0, 400.0);
    throw SimError::config("unknown geometry preset '" + name + "'");
}

std::vector<std::string> geometry_preset_names() {
    return {"straight_channel", "cross_channel",     "columns_channel", "zigzag_channel",
            "side_traps",       "side_traps_vortex", "open_plate"};
}

} // namespace rodsim
