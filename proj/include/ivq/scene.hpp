#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivq/geometry.hpp"

#include "json.hpp"

namespace ivq {

enum class Shape { cube, cylinder, cone };

// Fixed 8-color palette; names appear verbatim in captions and labels.
enum class Color { red, green, blue, yellow, orange, purple, cyan, gray };

struct Rgb {
    std::uint8_t r;
    std::uint8_t g;
    std::uint8_t b;
};

const char* shape_name(Shape s);
const char* color_name(Color c);
Rgb color_rgb(Color c);
inline constexpr int kPaletteSize = 8;

struct Primitive {
    std::string id;
    Shape shape = Shape::cube;
    Vec3 center;          // bounding-box center, world units
    double edge = 1.0;    // cube only
    double radius = 0.5;  // cylinder / cone
    double height = 1.0;  // cylinder / cone
    Color color = Color::red;
    std::string label;

    Vec3 half_extents() const {
        if (shape == Shape::cube) return {edge / 2, edge / 2, edge / 2};
        return {radius, radius, height / 2};
    }
    Box3 bounding_box() const {
        Vec3 h = half_extents();
        return {{center.x - h.x, center.y - h.y, center.z - h.z},
                {center.x + h.x, center.y + h.y, center.z + h.z}};
    }
};

struct Scene {
    std::vector<Primitive> primitives;
    Box3 bounds;

    const Primitive* find(const std::string& id) const {
        for (const auto& p : primitives)
            if (p.id == id) return &p;
        return nullptr;
    }
};

// Axes convention: x = right, y = depth into the scene, z = up.
// front view looks along +y, side along +x, top along -z.
enum class View { front, side, top };
const char* view_name(View v);

enum class Relation {
    left_of,
    right_of,
    above,
    below,
    in_front_of,
    behind,
    occludes_in_view,
};
const char* relation_name(Relation r);

struct RelationFact {
    std::string subject;
    std::string object;
    Relation relation = Relation::left_of;
    std::optional<View> view; // required for occludes_in_view

    bool operator==(const RelationFact& o) const {
        return subject == o.subject && object == o.object && relation == o.relation &&
               view == o.view;
    }
};

struct SceneSpec {
    int count_min = 2;
    int count_max = 4;
    double shape_weights[3] = {1.0, 1.0, 1.0}; // cube, cylinder, cone
    double min_separation = 0.5;
    Box3 bounds = {{0, 0, 0}, {10, 10, 10}};
    double size_min = 0.8;
    double size_max = 2.4;
    int attempt_budget = 10000;
};

// Directional axis facts are emitted only when the center delta exceeds this.
inline constexpr double kTieTolerance = 1e-9;

// Rejection-sampled placement; pure function of (spec, seed).
// Throws PlacementExhausted when the attempt budget runs out.
Scene generate_scene(const SceneSpec& spec, std::uint64_t seed);

// All axis relations (both directions) plus occlusion facts per view.
std::vector<RelationFact> spatial_relations(const Scene& scene);

bool fact_holds(const RelationFact& fact, const std::vector<RelationFact>& facts);

nlohmann::ordered_json scene_to_json(const Scene& scene);

} // namespace ivq
