#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rodsim/vec2.hpp"

namespace rodsim {

// Rigid 2D capsule: segment of half-length `half_length` around `center`
// along `angle`, inflated by `radius`. Total rod length is 2*half_length
// measured cap-center to cap-center (the paper's convention for cell length).
struct CapsuleBody {
    Vec2 center;
    double angle = 0.0;
    double half_length = 0.0;
    double radius = 1.0;
    Vec2 velocity;
    double angular_velocity = 0.0;
    double mass = 1.0;
    double moment = 1.0;
    double friction = 0.0;

    Vec2 axis() const { return from_angle(angle); }
    Vec2 cap_a() const { return center - axis() * half_length; }
    Vec2 cap_b() const { return center + axis() * half_length; }

    Rect aabb() const {
        Vec2 a = cap_a(), b = cap_b();
        return {std::fmin(a.x, b.x) - radius, std::fmin(a.y, b.y) - radius,
                std::fmax(a.x, b.x) + radius, std::fmax(a.y, b.y) + radius};
    }
};

// Exact moment of inertia of a uniform capsule about its center, decomposed
// into the rectangle and the two half-discs (each at area-weighted mass).
double capsule_moment(double mass, double half_length, double radius);

double capsule_area(double half_length, double radius);

// Sets half_length and refreshes the moment for the current mass.
void resize_capsule(CapsuleBody& b, double half_length);

// Static obstacle segment (zero radius).
struct Wall {
    Vec2 a;
    Vec2 b;
    double friction = 0.3;
};

// Contact normal points from `a` toward `b`.
struct Contact {
    std::int32_t a = -1;
    std::int32_t b = -1;
    bool b_is_wall = false;
    Vec2 normal;
    double depth = 0.0;
    Vec2 point;
};

// Anchors are body-local (rotated by the body angle at evaluation time).
struct DampedSpring {
    std::int32_t body_a = -1;
    std::int32_t body_b = -1;
    Vec2 anchor_a;
    Vec2 anchor_b;
    double rest_length = 0.0;
    double stiffness = 0.0;
    double damping = 0.0;
};

struct SolverParams {
    int substeps = 1;                          // physics sub-steps per call
    int iterations = 12;                       // impulse sweeps per sub-step
    double position_correction_fraction = 0.2; // Baumgarte factor
    double slop = 0.01;                        // tolerated overlap
    double drag = 0.0;                         // linear drag toward local flow
};

// Piecewise flow field: axis-aligned uniform strips plus solid-rotation
// vortex patches. Vortices take precedence where regions overlap; outside
// every region the flow is zero.
struct UniformFlowRegion {
    Rect region;
    Vec2 velocity;
};

struct VortexRegion {
    Vec2 center;
    double radius = 0.0;
    double strength = 0.0; // angular velocity, counter-clockwise positive
};

struct FlowField {
    std::vector<UniformFlowRegion> uniform;
    std::vector<VortexRegion> vortices;

    bool empty() const { return uniform.empty() && vortices.empty(); }
};

Vec2 interpolate_flow(const FlowField& flow, Vec2 p);

// Closest points between segments [p1,q1] and [p2,q2]. Parallel overlapping
// segments resolve to the midpoint of the overlap interval so rod stacks get
// a stable, centered contact.
std::pair<Vec2, Vec2> closest_points_segment_segment(Vec2 p1, Vec2 q1, Vec2 p2, Vec2 q2);

double distance_point_segment(Vec2 p, Vec2 a, Vec2 b);

// All capsule-capsule and capsule-wall contacts, in deterministic order:
// body pairs sorted (a < b) first, then wall contacts sorted by (body, wall).
std::vector<Contact> detect_contacts(std::span<const CapsuleBody> bodies,
                                     std::span<const Wall> walls);

// Equal-and-opposite forces a damped spring currently exerts on its two
// bodies (first on body_a). Exposed separately so tests can probe statics.
std::pair<Vec2, Vec2> spring_forces(const DampedSpring& s,
                                    std::span<const CapsuleBody> bodies);

// One physics iteration (possibly several sub-steps): flow drag and spring
// forces, sequential-impulse contact resolution with friction and Baumgarte
// position bias, then semi-implicit Euler integration. Bodies are updated in
// place. Contact impulses never pull; restitution is zero. A spring endpoint
// outside [0, bodies.size()) raises a structured runtime error.
void solve_step(std::span<CapsuleBody> bodies, std::span<const Wall> walls,
                std::span<const DampedSpring> springs, const SolverParams& params,
                const FlowField& flow = {});

} // namespace rodsim
