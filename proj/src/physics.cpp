#include "rodsim/physics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rodsim/error.hpp"

namespace rodsim {

double capsule_area(double half_length, double radius) {
    return 4.0 * half_length * radius + M_PI * radius * radius;
}

double capsule_moment(double mass, double half_length, double radius) {
    double h = half_length, r = radius;
    double area = capsule_area(h, r);
    if (area <= 0.0) return mass * r * r * 0.5;
    double m_rect = mass * (4.0 * h * r) / area;
    double m_caps = mass - m_rect; // both half-discs
    // Half-disc centroid sits 4r/3pi beyond the cap centre; parallel-axis
    // twice gives r^2/2 + h^2 + 2hc about the capsule centre.
    double c = 4.0 * r / (3.0 * M_PI);
    double i_rect = m_rect * (h * h + r * r) / 3.0;
    double i_caps = m_caps * (0.5 * r * r + h * h + 2.0 * h * c);
    return i_rect + i_caps;
}

void resize_capsule(CapsuleBody& b, double half_length) {
    b.half_length = half_length;
    b.moment = capsule_moment(b.mass, b.half_length, b.radius);
}

Vec2 interpolate_flow(const FlowField& flow, Vec2 p) {
    for (const auto& v : flow.vortices) {
        Vec2 rel = p - v.center;
        if (length_sq(rel) <= v.radius * v.radius) return perp(rel) * v.strength;
    }
    for (const auto& u : flow.uniform) {
        if (u.region.contains(p)) return u.velocity;
    }
    return {};
}

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = length_sq(ab);
    if (len2 <= 0.0) return length(p - a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return length(p - (a + ab * t));
}

std::pair<Vec2, Vec2> closest_points_segment_segment(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2) {
    constexpr double EPS = 1e-12;
    Vec2 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s = 0.0, t = 0.0;

    if (a <= EPS && e <= EPS) return {p1, p2};
    if (a <= EPS) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = dot(d1, r);
        if (e <= EPS) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = dot(d1, d2);
            double denom = a * e - b * b;
            if (denom > 1e-10 * a * e) {
                s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            } else {
                // Parallel. Project segment 2 onto segment 1's parameter; if
                // the intervals overlap, take the overlap midpoint so stacked
                // rods get one centered contact instead of an endpoint one.
                double s_p = dot(p2 - p1, d1) / a;
                double s_q = dot(q2 - p1, d1) / a;
                double lo = std::max(0.0, std::min(s_p, s_q));
                double hi = std::min(1.0, std::max(s_p, s_q));
                if (lo <= hi) {
                    s = 0.5 * (lo + hi);
                } else {
                    s = std::clamp(0.5 * (s_p + s_q), 0.0, 1.0);
                }
            }
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return {p1 + d1 * s, p2 + d2 * t};
}

namespace {

// from body a toward b, with fallbacks for coincident closest points
Vec2 contact_normal(Vec2 ca, Vec2 cb, const CapsuleBody& a, Vec2 other_center) {
    Vec2 d = cb - ca;
    double len = length(d);
    if (len > 1e-9) return d / len;
    Vec2 cd = other_center - a.center;
    double cl = length(cd);
    if (cl > 1e-9) return cd / cl;
    return perp(a.axis());
}

} // namespace

// Broadphase: bodies are binned by centre into a dense grid whose cell edge
// is the largest body extent, so any AABB-overlapping pair sits within one
// cell of each other. Scanning each body's 3x3 neighbourhood for higher
// indices yields every candidate exactly once, already ordered. Scratch
// buffers persist per thread to keep the hot path allocation-free.
std::vector<Contact> detect_contacts(std::span<const CapsuleBody> bodies,
                                     std::span<const Wall> walls) {
    std::vector<Contact> out;
    if (bodies.empty()) return out;

    double cell = 0.0;
    for (const auto& b : bodies) cell = std::max(cell, 2.0 * (b.half_length + b.radius));
    if (cell <= 0.0) cell = 1.0;

    auto n = static_cast<std::int32_t>(bodies.size());
    thread_local std::vector<Rect> boxes;
    thread_local std::vector<std::int32_t> cell_of, bucket_start, cursor, slots, near;
    boxes.resize(bodies.size());
    cell_of.resize(bodies.size());

    double minx = bodies[0].center.x, maxx = minx;
    double miny = bodies[0].center.y, maxy = miny;
    for (std::int32_t i = 0; i < n; ++i) {
        const CapsuleBody& b = bodies[i];
        if (!std::isfinite(b.center.x) || !std::isfinite(b.center.y))
            throw SimError::runtime("body " + std::to_string(i) + " has a non-finite position");
        boxes[static_cast<std::size_t>(i)] = b.aabb();
        minx = std::min(minx, b.center.x);
        maxx = std::max(maxx, b.center.x);
        miny = std::min(miny, b.center.y);
        maxy = std::max(maxy, b.center.y);
    }
    auto nx = static_cast<std::int32_t>((maxx - minx) / cell) + 1;
    auto ny = static_cast<std::int32_t>((maxy - miny) / cell) + 1;

    auto n_buckets = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    bucket_start.assign(n_buckets + 1, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        auto gx = static_cast<std::int32_t>((bodies[i].center.x - minx) / cell);
        auto gy = static_cast<std::int32_t>((bodies[i].center.y - miny) / cell);
        cell_of[static_cast<std::size_t>(i)] = gy * nx + gx;
        ++bucket_start[static_cast<std::size_t>(cell_of[static_cast<std::size_t>(i)]) + 1];
    }
    for (std::size_t k = 1; k <= n_buckets; ++k) bucket_start[k] += bucket_start[k - 1];
    cursor.assign(bucket_start.begin(), bucket_start.end() - 1);
    slots.resize(bodies.size());
    for (std::int32_t i = 0; i < n; ++i)
        slots[static_cast<std::size_t>(cursor[static_cast<std::size_t>(cell_of[static_cast<std::size_t>(i)])]++)] = i;

    for (std::int32_t i = 0; i < n; ++i) {
        const Rect& bi = boxes[static_cast<std::size_t>(i)];
        std::int32_t gx = cell_of[static_cast<std::size_t>(i)] % nx;
        std::int32_t gy = cell_of[static_cast<std::size_t>(i)] / nx;
        near.clear();
        for (std::int32_t dy = -1; dy <= 1; ++dy) {
            std::int32_t yy = gy + dy;
            if (yy < 0 || yy >= ny) continue;
            for (std::int32_t dx = -1; dx <= 1; ++dx) {
                std::int32_t xx = gx + dx;
                if (xx < 0 || xx >= nx) continue;
                auto bucket = static_cast<std::size_t>(yy * nx + xx);
                for (std::int32_t s = bucket_start[bucket]; s < bucket_start[bucket + 1]; ++s) {
                    std::int32_t j = slots[static_cast<std::size_t>(s)];
                    if (j > i && bi.overlaps(boxes[static_cast<std::size_t>(j)])) near.push_back(j);
                }
            }
        }
        std::sort(near.begin(), near.end());
        for (std::int32_t j : near) {
            const CapsuleBody& A = bodies[i];
            const CapsuleBody& B = bodies[j];
            auto [ca, cb] =
                closest_points_segment_segment(A.cap_a(), A.cap_b(), B.cap_a(), B.cap_b());
            double dist = length(cb - ca);
            double rsum = A.radius + B.radius;
            if (dist >= rsum) continue;
            Contact c;
            c.a = i;
            c.b = j;
            c.b_is_wall = false;
            c.normal = contact_normal(ca, cb, A, B.center);
            c.depth = rsum - dist;
            Vec2 pa = ca + c.normal * A.radius;
            Vec2 pb = cb - c.normal * B.radius;
            c.point = (pa + pb) * 0.5;
            out.push_back(c);
        }
    }

    for (std::int32_t i = 0; i < static_cast<std::int32_t>(bodies.size()); ++i) {
        const CapsuleBody& A = bodies[i];
        const Rect& box = boxes[static_cast<std::size_t>(i)];
        for (std::int32_t w = 0; w < static_cast<std::int32_t>(walls.size()); ++w) {
            const Wall& wall = walls[w];
            Rect wb{std::fmin(wall.a.x, wall.b.x), std::fmin(wall.a.y, wall.b.y),
                    std::fmax(wall.a.x, wall.b.x), std::fmax(wall.a.y, wall.b.y)};
            if (!box.overlaps(wb)) continue;
            auto [ca, cb] = closest_points_segment_segment(A.cap_a(), A.cap_b(), wall.a, wall.b);
            double dist = length(cb - ca);
            if (dist >= A.radius) continue;
            Contact c;
            c.a = i;
            c.b = w;
            c.b_is_wall = true;
            Vec2 d = cb - ca;
            if (dist > 1e-9) {
                c.normal = d / dist;
            } else {
                // axis crosses the wall; push out sideways
                Vec2 n = normalized(perp(wall.b - wall.a));
                Vec2 mid = (wall.a + wall.b) * 0.5;
                c.normal = dot(n, mid - A.center) >= 0.0 ? n : -n;
            }
            c.depth = A.radius - dist;
            c.point = ca + c.normal * A.radius;
            out.push_back(c);
        }
    }
    return out;
}

std::pair<Vec2, Vec2> spring_forces(const DampedSpring& s, std::span<const CapsuleBody> bodies) {
    const CapsuleBody& A = bodies[s.body_a];
    const CapsuleBody& B = bodies[s.body_b];
    Vec2 ra = rotate(s.anchor_a, A.angle);
    Vec2 rb = rotate(s.anchor_b, B.angle);
    Vec2 wa = A.center + ra;
    Vec2 wb = B.center + rb;
    Vec2 d = wb - wa;
    double len = length(d);
    Vec2 dir = len > 1e-12 ? d / len : A.axis();
    Vec2 va = A.velocity + perp(ra) * A.angular_velocity;
    Vec2 vb = B.velocity + perp(rb) * B.angular_velocity;
    double stretch_rate = dot(vb - va, dir);
    double mag = s.stiffness * (len - s.rest_length) + s.damping * stretch_rate;
    Vec2 force = dir * mag;
    return {force, -force};
}

namespace {

struct ContactConstraint {
    std::int32_t a, b;
    bool wall;
    Vec2 ra, rb, n, t;
    double mass_n, mass_t, bias, mu;
    double pn = 0.0, pt = 0.0;
};

inline Vec2 point_velocity(const CapsuleBody& b, Vec2 r) {
    return b.velocity + perp(r) * b.angular_velocity;
}

} // namespace

void solve_step(std::span<CapsuleBody> bodies, std::span<const Wall> walls,
                std::span<const DampedSpring> springs, const SolverParams& params,
                const FlowField& flow) {
    auto n_bodies = static_cast<std::int32_t>(bodies.size());
    for (std::size_t k = 0; k < springs.size(); ++k) {
        const auto& s = springs[k];
        if (s.body_a < 0 || s.body_a >= n_bodies || s.body_b < 0 || s.body_b >= n_bodies)
            throw SimError::runtime("spring " + std::to_string(k) + " references body index " +
                                    std::to_string(s.body_a < 0 || s.body_a >= n_bodies ? s.body_a
                                                                                        : s.body_b) +
                                    " outside the body set");
    }

    int n_sub = std::max(1, params.substeps);
    double dt = 1.0 / n_sub;

    for (int sub = 0; sub < n_sub; ++sub) {
        if (params.drag > 0.0) {
            double k = std::min(params.drag * dt, 1.0);
            for (auto& b : bodies) {
                Vec2 vf = interpolate_flow(flow, b.center);
                b.velocity += (vf - b.velocity) * k;
                b.angular_velocity -= b.angular_velocity * k;
            }
        }

        for (const auto& s : springs) {
            auto [fa, fb] = spring_forces(s, bodies);
            CapsuleBody& A = bodies[s.body_a];
            CapsuleBody& B = bodies[s.body_b];
            Vec2 ra = rotate(s.anchor_a, A.angle);
            Vec2 rb = rotate(s.anchor_b, B.angle);
            A.velocity += fa * (dt / A.mass);
            A.angular_velocity += cross(ra, fa) * (dt / A.moment);
            B.velocity += fb * (dt / B.mass);
            B.angular_velocity += cross(rb, fb) * (dt / B.moment);
        }

        auto contacts = detect_contacts(bodies, walls);
        std::vector<ContactConstraint> cons;
        cons.reserve(contacts.size());
        for (const auto& c : contacts) {
            ContactConstraint cc;
            cc.a = c.a;
            cc.b = c.b;
            cc.wall = c.b_is_wall;
            cc.n = c.normal;
            cc.t = perp(c.normal);
            const CapsuleBody& A = bodies[c.a];
            double inv_ma = 1.0 / A.mass, inv_ia = 1.0 / A.moment;
            double inv_mb = 0.0, inv_ib = 0.0, fric_b;
            cc.ra = c.point - A.center;
            if (c.b_is_wall) {
                cc.rb = {};
                fric_b = walls[c.b].friction;
            } else {
                const CapsuleBody& B = bodies[c.b];
                inv_mb = 1.0 / B.mass;
                inv_ib = 1.0 / B.moment;
                cc.rb = c.point - B.center;
                fric_b = B.friction;
            }
            double can = cross(cc.ra, cc.n), cbn = cross(cc.rb, cc.n);
            double cat = cross(cc.ra, cc.t), cbt = cross(cc.rb, cc.t);
            cc.mass_n = 1.0 / (inv_ma + inv_mb + inv_ia * can * can + inv_ib * cbn * cbn);
            cc.mass_t = 1.0 / (inv_ma + inv_mb + inv_ia * cat * cat + inv_ib * cbt * cbt);
            cc.bias = params.position_correction_fraction / dt * std::max(0.0, c.depth - params.slop);
            cc.mu = std::sqrt(std::max(0.0, A.friction * fric_b));
            cons.push_back(cc);
        }

        for (int it = 0; it < std::max(1, params.iterations); ++it) {
            for (auto& cc : cons) {
                CapsuleBody& A = bodies[cc.a];
                CapsuleBody* B = cc.wall ? nullptr : &bodies[cc.b];
                double inv_ma = 1.0 / A.mass, inv_ia = 1.0 / A.moment;
                double inv_mb = B ? 1.0 / B->mass : 0.0;
                double inv_ib = B ? 1.0 / B->moment : 0.0;

                Vec2 vb = B ? point_velocity(*B, cc.rb) : Vec2{};
                Vec2 rel = vb - point_velocity(A, cc.ra);
                double vn = dot(rel, cc.n);
                double dpn = cc.mass_n * (cc.bias - vn);
                double pn0 = cc.pn;
                cc.pn = std::max(pn0 + dpn, 0.0);
                dpn = cc.pn - pn0;
                Vec2 p = cc.n * dpn;
                A.velocity -= p * inv_ma;
                A.angular_velocity -= cross(cc.ra, p) * inv_ia;
                if (B) {
                    B->velocity += p * inv_mb;
                    B->angular_velocity += cross(cc.rb, p) * inv_ib;
                }

                vb = B ? point_velocity(*B, cc.rb) : Vec2{};
                rel = vb - point_velocity(A, cc.ra);
                double vt = dot(rel, cc.t);
                double dpt = cc.mass_t * (-vt);
                double max_pt = cc.mu * cc.pn;
                double pt0 = cc.pt;
                cc.pt = std::clamp(pt0 + dpt, -max_pt, max_pt);
                dpt = cc.pt - pt0;
                p = cc.t * dpt;
                A.velocity -= p * inv_ma;
                A.angular_velocity -= cross(cc.ra, p) * inv_ia;
                if (B) {
                    B->velocity += p * inv_mb;
                    B->angular_velocity += cross(cc.rb, p) * inv_ib;
                }
            }
        }

        for (auto& b : bodies) {
            b.center += b.velocity * dt;
            b.angle += b.angular_velocity * dt;
        }
    }
}

} // namespace rodsim
