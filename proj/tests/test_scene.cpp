#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ivq/errors.hpp"
#include "ivq/render.hpp"
#include "ivq/rng.hpp"
#include "ivq/scene.hpp"
#include "oracle_raster.hpp"

using namespace ivq;

namespace {

Primitive make_cube(const std::string& id, Vec3 c, double edge, Color col = Color::red) {
    Primitive p;
    p.id = id;
    p.shape = Shape::cube;
    p.center = c;
    p.edge = edge;
    p.color = col;
    p.label = std::string(color_name(col)) + " cube " + id;
    return p;
}

Primitive make_cylinder(const std::string& id, Vec3 c, double r, double h,
                        Color col = Color::blue) {
    Primitive p;
    p.id = id;
    p.shape = Shape::cylinder;
    p.center = c;
    p.radius = r;
    p.height = h;
    p.color = col;
    p.label = std::string(color_name(col)) + " cylinder " + id;
    return p;
}

Primitive make_cone(const std::string& id, Vec3 c, double r, double h, Color col = Color::green) {
    Primitive p;
    p.id = id;
    p.shape = Shape::cone;
    p.center = c;
    p.radius = r;
    p.height = h;
    p.color = col;
    p.label = std::string(color_name(col)) + " cone " + id;
    return p;
}

bool has_fact(const std::vector<RelationFact>& facts, const std::string& s, const std::string& o,
              Relation r, std::optional<View> v = std::nullopt) {
    return fact_holds({s, o, r, v}, facts);
}

} // namespace

TEST_CASE("generate_scene places separated primitives inside bounds") {
    SceneSpec spec;
    spec.count_min = 2;
    spec.count_max = 2;
    spec.min_separation = 1.0;
    Scene scene = generate_scene(spec, 7);

    REQUIRE(scene.primitives.size() == 2);
    Box3 a = scene.primitives[0].bounding_box();
    Box3 b = scene.primitives[1].bounding_box();
    CHECK(!a.intersects(b));
    CHECK(box_gap(a, b) >= 1.0);
    CHECK(scene.bounds.contains(a));
    CHECK(scene.bounds.contains(b));
    CHECK(scene.primitives[0].label != scene.primitives[1].label);
}

TEST_CASE("generate_scene is deterministic for fixed spec and seed") {
    SceneSpec spec;
    spec.count_min = 3;
    spec.count_max = 5;
    auto a = scene_to_json(generate_scene(spec, 12345)).dump();
    auto b = scene_to_json(generate_scene(spec, 12345)).dump();
    CHECK(a == b);
    auto c = scene_to_json(generate_scene(spec, 12346)).dump();
    CHECK(a != c);
}

TEST_CASE("separation property holds across random seeds") {
    SceneSpec spec;
    spec.count_min = 2;
    spec.count_max = 5;
    spec.min_separation = 0.5;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Scene scene = generate_scene(spec, seed);
        for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
            Box3 bi = scene.primitives[i].bounding_box();
            CHECK(scene.bounds.contains(bi));
            for (std::size_t j = i + 1; j < scene.primitives.size(); ++j) {
                Box3 bj = scene.primitives[j].bounding_box();
                CHECK(!bi.intersects(bj));
                CHECK(box_gap(bi, bj) >= spec.min_separation);
            }
        }
    }
}

TEST_CASE("infeasible packing raises PlacementExhausted") {
    SceneSpec spec;
    spec.count_min = 50;
    spec.count_max = 50;
    spec.min_separation = 1.0;
    spec.bounds = {{0, 0, 0}, {2, 2, 2}};
    CHECK_THROWS_AS(generate_scene(spec, 1), PlacementExhausted);
}

TEST_CASE("axis relations from coordinate comparison") {
    Scene scene;
    scene.bounds = {{-2, -2, -2}, {6, 2, 2}};
    scene.primitives = {make_cube("cube", {0, 0, 0}, 1.0), make_cone("cone", {3, 0, 0}, 0.5, 1.0)};

    auto facts = spatial_relations(scene);
    CHECK(has_fact(facts, "cone", "cube", Relation::right_of));
    CHECK(has_fact(facts, "cube", "cone", Relation::left_of));
    // y and z are tied; no facts on those axes
    CHECK(!has_fact(facts, "cube", "cone", Relation::in_front_of));
    CHECK(!has_fact(facts, "cube", "cone", Relation::behind));
    CHECK(!has_fact(facts, "cube", "cone", Relation::above));
    CHECK(!has_fact(facts, "cube", "cone", Relation::below));
}

TEST_CASE("identical centers yield no axis facts") {
    Scene scene;
    scene.bounds = {{-2, -2, -2}, {2, 2, 2}};
    scene.primitives = {make_cube("a", {0, 0, 0}, 1.0), make_cube("b", {0, 0, 0}, 0.5, Color::blue)};
    auto facts = spatial_relations(scene);
    for (const auto& f : facts) CHECK(f.relation == Relation::occludes_in_view);
}

TEST_CASE("tie tolerance suppresses sub-tolerance deltas") {
    Scene scene;
    scene.bounds = {{-2, -2, -2}, {2, 2, 2}};
    scene.primitives = {make_cube("a", {0, 0, 0}, 0.5),
                        make_cube("b", {5e-10, 0, 0}, 0.5, Color::green)};
    auto facts = spatial_relations(scene);
    CHECK(!has_fact(facts, "a", "b", Relation::left_of));
    CHECK(!has_fact(facts, "b", "a", Relation::right_of));
}

TEST_CASE("occlusion example: cube hides cylinder in the front view") {
    Scene scene;
    scene.bounds = {{-3, -1, -3}, {3, 5, 3}};
    scene.primitives = {make_cube("cube", {0, 0, 0}, 2.0),
                        make_cylinder("cyl", {0, 3, 0}, 0.5, 1.0)};
    auto facts = spatial_relations(scene);
    CHECK(has_fact(facts, "cube", "cyl", Relation::occludes_in_view, View::front));
    CHECK(!has_fact(facts, "cyl", "cube", Relation::occludes_in_view, View::front));

    // cross-check against the depth-buffer oracle on the projected pair
    Box2 window = view_window(scene.bounds, View::front);
    auto oa = primitive_outline(scene.primitives[0], View::front);
    auto ob = primitive_outline(scene.primitives[1], View::front);
    CHECK(oracle::occludes(oa, primitive_depth(scene.primitives[0], View::front), ob,
                           primitive_depth(scene.primitives[1], View::front), window));
}

TEST_CASE("antisymmetry of directional facts on random scenes") {
    SceneSpec spec;
    spec.count_min = 2;
    spec.count_max = 5;
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        Scene scene = generate_scene(spec, seed);
        auto facts = spatial_relations(scene);
        auto inverse = [](Relation r) {
            switch (r) {
                case Relation::left_of: return Relation::right_of;
                case Relation::right_of: return Relation::left_of;
                case Relation::above: return Relation::below;
                case Relation::below: return Relation::above;
                case Relation::in_front_of: return Relation::behind;
                case Relation::behind: return Relation::in_front_of;
                default: return r;
            }
        };
        for (const auto& f : facts) {
            if (f.relation == Relation::occludes_in_view) continue;
            CHECK(has_fact(facts, f.object, f.subject, inverse(f.relation)));
        }
    }
}

TEST_CASE("occlusion facts agree with the depth-buffer oracle on random scenes") {
    SceneSpec spec;
    spec.count_min = 2;
    spec.count_max = 5;
    spec.min_separation = 0.2;
    for (std::uint64_t seed = 500; seed < 530; ++seed) {
        Scene scene = generate_scene(spec, seed);
        auto facts = spatial_relations(scene);
        for (View view : {View::front, View::side, View::top}) {
            Box2 window = view_window(scene.bounds, view);
            for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
                for (std::size_t j = 0; j < scene.primitives.size(); ++j) {
                    if (i == j) continue;
                    const auto& a = scene.primitives[i];
                    const auto& b = scene.primitives[j];
                    bool expected = oracle::occludes(
                        primitive_outline(a, view), primitive_depth(a, view),
                        primitive_outline(b, view), primitive_depth(b, view), window);
                    bool emitted = has_fact(facts, a.id, b.id, Relation::occludes_in_view, view);
                    CAPTURE(seed);
                    CHECK(emitted == expected);
                }
            }
        }
    }
}

TEST_CASE("scene JSON has stable field ordering") {
    SceneSpec spec;
    Scene scene = generate_scene(spec, 3);
    std::string dump = scene_to_json(scene).dump();
    CHECK(dump.find("\"primitives\"") < dump.find("\"bounds\""));
    CHECK(dump.find("\"id\"") < dump.find("\"shape\""));
}
