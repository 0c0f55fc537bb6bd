#pragma once

#include <cmath>

namespace circpack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
    double angle() const { return std::atan2(y, x); }

    Vec2 perp() const { return {-y, x}; }
    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    // rotate counterclockwise by phi
    Vec2 rotated(double phi) const {
        double c = std::cos(phi), s = std::sin(phi);
        return {c * x - s * y, s * x + c * y};
    }
    // reflect across the line through the origin at angle phi
    Vec2 reflected(double phi) const {
        double c = std::cos(2.0 * phi), s = std::sin(2.0 * phi);
        return {c * x + s * y, s * x - c * y};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }
inline double dist2(const Vec2& a, const Vec2& b) { return (a - b).norm2(); }
inline double dot(const Vec2& a, const Vec2& b) { return a.dot(b); }
inline Vec2 from_polar(double r, double phi) { return {r * std::cos(phi), r * std::sin(phi)}; }

}  // namespace circpack
