#pragma once

#include <cmath>

namespace rodsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// z-component of the 3D cross product; torque arm for 2D dynamics.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// counter-clockwise perpendicular
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

constexpr double length_sq(Vec2 v) { return v.x * v.x + v.y * v.y; }

inline double length(Vec2 v) { return std::sqrt(length_sq(v)); }

inline Vec2 normalized(Vec2 v) {
    double len = length(v);
    return len > 0.0 ? v / len : Vec2{};
}

inline Vec2 from_angle(double a) { return {std::cos(a), std::sin(a)}; }

inline Vec2 rotate(Vec2 v, double a) {
    double c = std::cos(a), s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Axis-aligned rectangle, min/max corners.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    constexpr bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
    constexpr bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }
    constexpr bool overlaps(const Rect& r) const {
        return r.x0 <= x1 && r.x1 >= x0 && r.y0 <= y1 && r.y1 >= y0;
    }
    constexpr double width() const { return x1 - x0; }
    constexpr double height() const { return y1 - y0; }
    constexpr Vec2 center() const { return {(x0 + x1) * 0.5, (y0 + y1) * 0.5}; }
};

} // namespace rodsim
