#include "rodsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rodsim/error.hpp"
#include "rodsim/physics.hpp"

namespace rodsim::metrics {

namespace {

CapsuleBody body_of(const SnapshotCellRow& c) {
    CapsuleBody b;
    b.center = {c.cx, c.cy};
    b.angle = c.angle;
    b.half_length = c.half_length;
    b.radius = c.radius;
    return b;
}

} // namespace

double density(const SnapshotRecord& snap, const Rect& region) {
    double region_area = region.width() * region.height();
    if (region_area <= 0.0) throw SimError::runtime("density: region has no area");
    double covered = 0.0;
    for (const auto& c : snap.cells) {
        CapsuleBody b = body_of(c);
        Rect box = b.aabb();
        if (!box.overlaps(region)) continue;
        Vec2 a = b.cap_a(), bb = b.cap_b();
        int inside_shape = 0, inside_both = 0;
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                Vec2 p{box.x0 + (i + 0.5) / 8.0 * box.width(),
                       box.y0 + (j + 0.5) / 8.0 * box.height()};
                if (distance_point_segment(p, a, bb) > b.radius) continue;
                ++inside_shape;
                if (region.contains(p)) ++inside_both;
            }
        }
        if (inside_shape == 0) continue;
        covered += capsule_area(b.half_length, b.radius) *
                   (static_cast<double>(inside_both) / inside_shape);
    }
    return covered / region_area;
}

std::vector<BinStat> velocity_gradient(const SnapshotRecord& snap, const Rect& region,
                                       int bins) {
    if (bins < 1) throw SimError::runtime("velocity_gradient: bins must be >= 1");
    double w = region.width() / bins;
    if (w <= 0.0) throw SimError::runtime("velocity_gradient: region has no width");
    std::vector<BinStat> out(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i) {
        out[static_cast<std::size_t>(i)].index = i;
        out[static_cast<std::size_t>(i)].x = region.x0 + (i + 0.5) * w;
    }
    for (const auto& c : snap.cells) {
        if (!region.contains(Vec2{c.cx, c.cy})) continue;
        int i = std::min(bins - 1, static_cast<int>((c.cx - region.x0) / w));
        auto& b = out[static_cast<std::size_t>(i)];
        b.mean_vx += c.vx;
        ++b.count;
    }
    for (auto& b : out)
        if (b.count > 0) b.mean_vx /= static_cast<double>(b.count);
    const auto& centre = out[static_cast<std::size_t>(bins / 2)];
    double ref = centre.count > 0 ? centre.mean_vx : 0.0;
    for (auto& b : out) b.value = b.count > 0 ? b.mean_vx - ref : 0.0;
    return out;
}

double ordering(const SnapshotRecord& snap, Vec2 axis, const std::optional<Rect>& region) {
    Vec2 n = normalized(axis);
    if (n == Vec2{}) throw SimError::runtime("ordering: axis must be non-zero");
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& c : snap.cells) {
        if (region && !region->contains(Vec2{c.cx, c.cy})) continue;
        sum += std::fabs(dot(from_angle(c.angle), n));
        ++count;
    }
    if (count == 0) throw SimError::runtime("ordering: no cells in scope");
    return sum / static_cast<double>(count);
}

std::vector<FieldCell> vector_field(const SnapshotRecord& snap, const Rect& region, int nx,
                                    int ny) {
    if (nx < 1 || ny < 1) throw SimError::runtime("vector_field: grid must be at least 1x1");
    double bw = region.width() / nx, bh = region.height() / ny;
    if (bw <= 0.0 || bh <= 0.0) throw SimError::runtime("vector_field: region has no area");
    std::vector<FieldCell> out(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            auto& f = out[static_cast<std::size_t>(iy) * nx + ix];
            f.ix = ix;
            f.iy = iy;
            f.cx = region.x0 + (ix + 0.5) * bw;
            f.cy = region.y0 + (iy + 0.5) * bh;
        }
    for (const auto& c : snap.cells) {
        if (!region.contains(Vec2{c.cx, c.cy})) continue;
        int ix = std::min(nx - 1, static_cast<int>((c.cx - region.x0) / bw));
        int iy = std::min(ny - 1, static_cast<int>((c.cy - region.y0) / bh));
        auto& f = out[static_cast<std::size_t>(iy) * nx + ix];
        f.vx += c.vx;
        f.vy += c.vy;
        ++f.count;
    }
    for (auto& f : out)
        if (f.count > 0) {
            f.vx /= static_cast<double>(f.count);
            f.vy /= static_cast<double>(f.count);
        }
    return out;
}

double mean_field_curl(const std::vector<FieldCell>& field, int nx, int ny, double bin_w,
                       double bin_h) {
    auto at = [&](int ix, int iy) -> const FieldCell& {
        return field[static_cast<std::size_t>(iy) * nx + ix];
    };
    double sum = 0.0;
    std::size_t n = 0;
    for (int iy = 1; iy + 1 < ny; ++iy) {
        for (int ix = 1; ix + 1 < nx; ++ix) {
            const auto &xm = at(ix - 1, iy), &xp = at(ix + 1, iy);
            const auto &ym = at(ix, iy - 1), &yp = at(ix, iy + 1);
            if (xm.count == 0 || xp.count == 0 || ym.count == 0 || yp.count == 0) continue;
            double dvy_dx = (xp.vy - xm.vy) / (2.0 * bin_w);
            double dvx_dy = (yp.vx - ym.vx) / (2.0 * bin_h);
            sum += dvy_dx - dvx_dy;
            ++n;
        }
    }
    if (n == 0) throw SimError::runtime("mean_field_curl: no interior bins with data");
    return sum / static_cast<double>(n);
}

double conjugation_frequency(const SnapshotRecord& snap) {
    std::size_t r = 0, t = 0;
    for (const auto& c : snap.cells) {
        if (c.role == 1) ++r;
        if (c.role == 2) ++t;
    }
    if (r + t == 0)
        throw SimError::runtime("conjugation_frequency undefined: no recipients or "
                                "transconjugants in snapshot");
    return static_cast<double>(t) / static_cast<double>(r + t);
}

double isolation_index(const SnapshotRecord& snap, double contact_radius) {
    std::vector<const SnapshotCellRow*> recipients, sources;
    for (const auto& c : snap.cells) {
        if (c.role == 1) recipients.push_back(&c);
        else sources.push_back(&c); // donors and transconjugants both carry the plasmid
    }
    if (recipients.empty())
        throw SimError::runtime("isolation_index undefined: no recipients in snapshot");
    std::size_t isolated = 0;
    for (const auto* r : recipients) {
        CapsuleBody rb = body_of(*r);
        double reach = contact_radius + 2.0 * r->radius;
        bool near = false;
        for (const auto* s : sources) {
            CapsuleBody sb = body_of(*s);
            auto [ca, cb] = closest_points_segment_segment(rb.cap_a(), rb.cap_b(), sb.cap_a(),
                                                           sb.cap_b());
            if (length(cb - ca) - rb.radius - sb.radius <= reach) {
                near = true;
                break;
            }
        }
        if (!near) ++isolated;
    }
    return static_cast<double>(isolated) / static_cast<double>(recipients.size());
}

} // namespace rodsim::metrics
