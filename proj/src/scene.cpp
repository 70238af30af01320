#include "ivq/scene.hpp"

#include <algorithm>
#include <set>

#include "ivq/errors.hpp"
#include "ivq/render.hpp"
#include "ivq/rng.hpp"

namespace ivq {

namespace {

struct PaletteEntry {
    const char* name;
    Rgb rgb;
};

// 8 named colors; names are embedded in labels and captions.
constexpr PaletteEntry kPalette[kPaletteSize] = {
    {"red", {220, 50, 47}},     {"green", {35, 140, 60}},  {"blue", {38, 80, 200}},
    {"yellow", {235, 200, 40}}, {"orange", {235, 120, 30}}, {"purple", {130, 60, 160}},
    {"cyan", {40, 180, 190}},   {"gray", {120, 120, 120}},
};

constexpr const char* kShapeNames[3] = {"cube", "cylinder", "cone"};
constexpr const char* kViewNames[3] = {"front", "side", "top"};
constexpr const char* kRelationNames[7] = {
    "left-of", "right-of", "above", "below", "in-front-of", "behind", "occludes-in-view",
};

// The occlusion check samples silhouette overlap on this grid; the
// depth-buffer oracle in the test suite works at the same resolution.
constexpr int kOcclusionGrid = 64;

} // namespace

const char* shape_name(Shape s) { return kShapeNames[static_cast<int>(s)]; }
const char* color_name(Color c) { return kPalette[static_cast<int>(c)].name; }
Rgb color_rgb(Color c) { return kPalette[static_cast<int>(c)].rgb; }
const char* view_name(View v) { return kViewNames[static_cast<int>(v)]; }
const char* relation_name(Relation r) { return kRelationNames[static_cast<int>(r)]; }

Scene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
    if (spec.count_min < 2 || spec.count_max < spec.count_min) {
        throw ConfigInvalid("scene count range must be >= 2");
    }
    if (spec.min_separation < 0) {
        throw ConfigInvalid("scene min separation must be >= 0");
    }

    Rng rng(seed);
    Scene scene;
    scene.bounds = spec.bounds;
    int count = static_cast<int>(rng.uniform_int(spec.count_min, spec.count_max));

    // (shape, color) combos drawn without replacement while any remain, so
    // labels stay unique without numbering in the common case.
    std::vector<std::pair<Shape, Color>> combos;
    for (int s = 0; s < 3; ++s)
        for (int c = 0; c < kPaletteSize; ++c)
            combos.emplace_back(static_cast<Shape>(s), static_cast<Color>(c));

    std::set<std::string> labels;
    int attempts = 0;
    for (int i = 0; i < count; ++i) {
        Primitive prim;
        prim.id = "p" + std::to_string(i);

        if (!combos.empty()) {
            std::vector<double> weights(combos.size());
            for (std::size_t k = 0; k < combos.size(); ++k)
                weights[k] = spec.shape_weights[static_cast<int>(combos[k].first)];
            std::size_t pick = rng.pick_weighted(weights);
            prim.shape = combos[pick].first;
            prim.color = combos[pick].second;
            combos.erase(combos.begin() + static_cast<std::ptrdiff_t>(pick));
        } else {
            prim.shape = static_cast<Shape>(rng.pick_weighted(
                {spec.shape_weights[0], spec.shape_weights[1], spec.shape_weights[2]}));
            prim.color = static_cast<Color>(rng.index(kPaletteSize));
        }

        std::string base = std::string(color_name(prim.color)) + " " + shape_name(prim.shape);
        prim.label = base;
        for (int suffix = 2; labels.count(prim.label) > 0; ++suffix)
            prim.label = base + " " + std::to_string(suffix);
        labels.insert(prim.label);

        if (prim.shape == Shape::cube) {
            prim.edge = rng.uniform(spec.size_min, spec.size_max);
        } else {
            prim.radius = rng.uniform(spec.size_min / 2, spec.size_max / 2);
            prim.height = rng.uniform(spec.size_min, spec.size_max);
        }

        Vec3 h = prim.half_extents();
        bool placed = false;
        while (!placed) {
            if (++attempts > spec.attempt_budget) {
                throw PlacementExhausted("could not place " + std::to_string(count) +
                                         " primitives within " +
                                         std::to_string(spec.attempt_budget) + " attempts");
            }
            Vec3 lo{spec.bounds.min.x + h.x, spec.bounds.min.y + h.y, spec.bounds.min.z + h.z};
            Vec3 hi{spec.bounds.max.x - h.x, spec.bounds.max.y - h.y, spec.bounds.max.z - h.z};
            if (lo.x > hi.x || lo.y > hi.y || lo.z > hi.z) continue; // primitive too large
            prim.center = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y),
                           rng.uniform(lo.z, hi.z)};
            Box3 box = prim.bounding_box();
            placed = true;
            for (const auto& other : scene.primitives) {
                Box3 ob = other.bounding_box();
                if (box.intersects(ob) || box_gap(box, ob) < spec.min_separation) {
                    placed = false;
                    break;
                }
            }
        }
        scene.primitives.push_back(prim);
    }
    return scene;
}

namespace {

// True when the two silhouettes overlap at any sample point of the grid.
bool silhouettes_overlap(const Outline2D& a, const Outline2D& b, const Box2& window) {
    float umin = static_cast<float>(window.min.x);
    float vmax = static_cast<float>(window.max.y);
    float pw = static_cast<float>(window.width()) / kOcclusionGrid;
    float ph = static_cast<float>(window.height()) / kOcclusionGrid;
    for (int j = 0; j < kOcclusionGrid; ++j) {
        float v = vmax - (static_cast<float>(j) + 0.5f) * ph;
        for (int i = 0; i < kOcclusionGrid; ++i) {
            float u = umin + (static_cast<float>(i) + 0.5f) * pw;
            if (outline_contains(a, u, v) && outline_contains(b, u, v)) return true;
        }
    }
    return false;
}

} // namespace

std::vector<RelationFact> spatial_relations(const Scene& scene) {
    std::vector<RelationFact> facts;
    const auto& prims = scene.primitives;

    for (std::size_t i = 0; i < prims.size(); ++i) {
        for (std::size_t j = 0; j < prims.size(); ++j) {
            if (i == j) continue;
            const auto& a = prims[i];
            const auto& b = prims[j];
            if (b.center.x - a.center.x > kTieTolerance)
                facts.push_back({a.id, b.id, Relation::left_of, std::nullopt});
            else if (a.center.x - b.center.x > kTieTolerance)
                facts.push_back({a.id, b.id, Relation::right_of, std::nullopt});
            if (b.center.y - a.center.y > kTieTolerance)
                facts.push_back({a.id, b.id, Relation::in_front_of, std::nullopt});
            else if (a.center.y - b.center.y > kTieTolerance)
                facts.push_back({a.id, b.id, Relation::behind, std::nullopt});
            if (a.center.z - b.center.z > kTieTolerance)
                facts.push_back({a.id, b.id, Relation::above, std::nullopt});
            else if (b.center.z - a.center.z > kTieTolerance)
                facts.push_back({a.id, b.id, Relation::below, std::nullopt});
        }
    }

    for (View view : {View::front, View::side, View::top}) {
        Box2 window = view_window(scene.bounds, view);
        std::vector<Outline2D> outlines(prims.size());
        std::vector<double> depths(prims.size());
        for (std::size_t i = 0; i < prims.size(); ++i) {
            outlines[i] = primitive_outline(prims[i], view);
            depths[i] = primitive_depth(prims[i], view);
        }
        for (std::size_t i = 0; i < prims.size(); ++i) {
            for (std::size_t j = 0; j < prims.size(); ++j) {
                if (i == j) continue;
                if (depths[i] + kTieTolerance >= depths[j]) continue; // need strict order
                if (silhouettes_overlap(outlines[i], outlines[j], window)) {
                    facts.push_back({prims[i].id, prims[j].id, Relation::occludes_in_view, view});
                }
            }
        }
    }
    return facts;
}

bool fact_holds(const RelationFact& fact, const std::vector<RelationFact>& facts) {
    return std::find(facts.begin(), facts.end(), fact) != facts.end();
}

nlohmann::ordered_json scene_to_json(const Scene& scene) {
    nlohmann::ordered_json j;
    j["primitives"] = nlohmann::ordered_json::array();
    for (const auto& p : scene.primitives) {
        nlohmann::ordered_json pj;
        pj["id"] = p.id;
        pj["shape"] = shape_name(p.shape);
        pj["center"] = {p.center.x, p.center.y, p.center.z};
        if (p.shape == Shape::cube) {
            pj["edge"] = p.edge;
        } else {
            pj["radius"] = p.radius;
            pj["height"] = p.height;
        }
        pj["color"] = color_name(p.color);
        pj["label"] = p.label;
        j["primitives"].push_back(pj);
    }
    j["bounds"] = {{"min", {scene.bounds.min.x, scene.bounds.min.y, scene.bounds.min.z}},
                   {"max", {scene.bounds.max.x, scene.bounds.max.y, scene.bounds.max.z}}};
    return j;
}

} // namespace ivq
