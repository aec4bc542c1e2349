#pragma once

#include <string>
#include <vector>

#include "rodsim/physics.hpp"

namespace rodsim {

// Static stage a population lives on: obstacle walls, washout regions that
// delete cells drifting fully inside them, an ambient flow field, and the
// rectangle used for seeding and manual mixing. Lattice units; the default
// rod width is 5 units.
struct WorldGeometry {
    std::string name = "custom";
    Rect screenview;
    std::vector<Wall> walls;
    std::vector<Rect> washout;
    FlowField flow;
    Rect growth_region;

    void validate() const;
};

// Open-ended straight microfluidic channel, interior 250 x 150, with washout
// zones past both mouths.
WorldGeometry straight_channel_geometry();

// Two perpendicular channels meeting in an open junction; four washout ends.
WorldGeometry cross_channel_geometry();

// Straight channel with two staggered rows of rectangular baffles that force
// lanes to cross between rows.
WorldGeometry columns_channel_geometry();

// Straight channel whose walls carry opposed triangular teeth, necking the
// passage to a centered throat once per period.
WorldGeometry zigzag_channel_geometry();

// Narrow flow channel with two square growth traps hanging off the top wall.
// `flow_speed` drives the channel; `vortices` adds a counter-clockwise
// stirring patch in each trap.
WorldGeometry side_traps_geometry(double flow_speed, bool vortices);

// Closed rectangular arena, no washout, no flow.
WorldGeometry open_plate_geometry(double w, double h);

// Presets by name (straight_channel, cross_channel, columns_channel,
// zigzag_channel, side_traps, side_traps_vortex, open_plate); unknown names
// raise a config error.
WorldGeometry geometry_preset(const std::string& name);

std::vector<std::string> geometry_preset_names();

} // namespace rodsim
