#pragma once

#include <algorithm>
#include <cmath>

namespace ivq {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

// Axis-aligned box in world units.
struct Box3 {
    Vec3 min;
    Vec3 max;

    bool contains(const Box3& inner) const {
        return inner.min.x >= min.x && inner.max.x <= max.x &&
               inner.min.y >= min.y && inner.max.y <= max.y &&
               inner.min.z >= min.z && inner.max.z <= max.z;
    }

    bool intersects(const Box3& other) const {
        return min.x < other.max.x && other.min.x < max.x &&
               min.y < other.max.y && other.min.y < max.y &&
               min.z < other.max.z && other.min.z < max.z;
    }
};

// Euclidean gap between two boxes; 0 when they touch or overlap.
inline double box_gap(const Box3& a, const Box3& b) {
    double gx = std::max({a.min.x - b.max.x, b.min.x - a.max.x, 0.0});
    double gy = std::max({a.min.y - b.max.y, b.min.y - a.max.y, 0.0});
    double gz = std::max({a.min.z - b.max.z, b.min.z - a.max.z, 0.0});
    return std::sqrt(gx * gx + gy * gy + gz * gz);
}

struct Box2 {
    Vec2 min;
    Vec2 max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
};

} // namespace ivq
