#pragma once

#include <optional>
#include <vector>

#include "rodsim/snapshot.hpp"
#include "rodsim/vec2.hpp"

namespace rodsim::metrics {

// Fraction of `region` covered by cells. Each cell's overlap with the region
// is estimated from an 8x8 grid of sample points over its bounding box.
double density(const SnapshotRecord& snap, const Rect& region);

struct BinStat {
    int index = 0;
    double x = 0.0;      // bin centre along the profile axis
    double value = 0.0;  // mean axial velocity minus the centre-bin mean
    double mean_vx = 0.0;
    std::size_t count = 0; // cells in the bin; 0 = no data
};

// Axial velocity profile across `bins` slices of the region along x,
// expressed relative to the centre bin.
std::vector<BinStat> velocity_gradient(const SnapshotRecord& snap, const Rect& region, int bins);

// Mean |cos(angle between cell axis and `axis`)|; 1 = perfectly aligned,
// 2/pi for isotropic orientations. Optionally restricted to cells whose
// centre lies in `region`.
double ordering(const SnapshotRecord& snap, Vec2 axis, const std::optional<Rect>& region = {});

struct FieldCell {
    int ix = 0, iy = 0;
    double cx = 0.0, cy = 0.0;
    double vx = 0.0, vy = 0.0; // mean velocity of cells in the bin
    std::size_t count = 0;
};

// Mean-velocity field on an nx-by-ny grid over the region. Bins with no
// cells are present with count == 0.
std::vector<FieldCell> vector_field(const SnapshotRecord& snap, const Rect& region, int nx,
                                    int ny);

// Mean curl (dvy/dx - dvx/dy) of a binned field via central differences over
// bins that have data on all four sides.
double mean_field_curl(const std::vector<FieldCell>& field, int nx, int ny, double bin_w,
                       double bin_h);

// T / (R + T). Structured runtime error when R + T == 0.
double conjugation_frequency(const SnapshotRecord& snap);

// Fraction of recipients with no plasmid carrier within `contact_radius`
// plus one cell width of surface gap. Structured runtime error when the
// snapshot holds no recipients.
double isolation_index(const SnapshotRecord& snap, double contact_radius);

} // namespace rodsim::metrics
