#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <zlib.h>

#include <cstring>

#include "ivq/errors.hpp"
#include "ivq/image_io.hpp"
#include "ivq/render.hpp"
#include "ivq/scene.hpp"
#include "oracle_raster.hpp"

using namespace ivq;

namespace {

Shape2D rect_shape(float cx, float cy, float hw, float hh, double depth, Rgb color, int idx) {
    Shape2D s;
    s.primitive_id = "s" + std::to_string(idx);
    s.scene_index = idx;
    s.outline.kind = OutlineKind::rect;
    s.outline.cx = cx;
    s.outline.cy = cy;
    s.outline.hw = hw;
    s.outline.hh = hh;
    s.depth = depth;
    s.color = color;
    return s;
}

bool all_pixels(const RasterImage& img, Rgb c) {
    for (std::size_t i = 0; i + 2 < img.pixels.size(); i += 3) {
        if (img.pixels[i] != c.r || img.pixels[i + 1] != c.g || img.pixels[i + 2] != c.b)
            return false;
    }
    return true;
}

Primitive small_cube(Vec3 center) {
    Primitive p;
    p.id = "p0";
    p.shape = Shape::cube;
    p.center = center;
    p.edge = 1e-6;
    p.label = "red cube";
    return p;
}

} // namespace

TEST_CASE("projection drops one coordinate per view") {
    Scene scene;
    scene.bounds = {{0, 0, 0}, {4, 4, 4}};
    scene.primitives = {small_cube({1, 2, 3})};

    auto front = project(scene, View::front);
    CHECK(front.shapes2d[0].outline.cx == doctest::Approx(1.0));
    CHECK(front.shapes2d[0].outline.cy == doctest::Approx(3.0));
    CHECK(front.shapes2d[0].depth == doctest::Approx(2.0));

    auto side = project(scene, View::side);
    CHECK(side.shapes2d[0].outline.cx == doctest::Approx(2.0));
    CHECK(side.shapes2d[0].outline.cy == doctest::Approx(3.0));
    CHECK(side.shapes2d[0].depth == doctest::Approx(1.0));

    auto top = project(scene, View::top);
    CHECK(top.shapes2d[0].outline.cx == doctest::Approx(1.0));
    CHECK(top.shapes2d[0].outline.cy == doctest::Approx(2.0));
    CHECK(top.shapes2d[0].depth == doctest::Approx(-3.0));
}

TEST_CASE("front and top views share the x footprint") {
    Primitive p;
    p.id = "p0";
    p.shape = Shape::cylinder;
    p.center = {3.5, 2.0, 1.5};
    p.radius = 0.75;
    p.height = 2.0;
    auto front = primitive_outline(p, View::front);
    auto top = primitive_outline(p, View::top);
    CHECK(front.cx == top.cx);
    CHECK(front.hw == top.hw); // radius either way
}

TEST_CASE("painter order puts the deeper shape first") {
    Scene scene;
    scene.bounds = {{0, 0, 0}, {10, 10, 10}};
    Primitive a = small_cube({5, 1, 5});
    a.id = "near";
    Primitive b = small_cube({5, 4, 5});
    b.id = "far";
    scene.primitives = {a, b};

    auto proj = project(scene, View::front);
    CHECK(proj.shapes2d[0].primitive_id == "far");
    CHECK(proj.shapes2d[1].primitive_id == "near");
}

TEST_CASE("empty projection rasterizes to a white image") {
    ViewProjection proj;
    auto img = rasterize(proj, 16, 12, {{0, 0}, {1, 1}});
    CHECK(img.width == 16);
    CHECK(img.height == 12);
    CHECK(all_pixels(img, kBackground));
}

TEST_CASE("full-window rectangle fills every pixel") {
    ViewProjection proj;
    proj.shapes2d = {rect_shape(0.5f, 0.5f, 0.6f, 0.6f, 1.0, {200, 0, 0}, 0)};
    auto img = rasterize(proj, 20, 20, {{0, 0}, {1, 1}});
    CHECK(all_pixels(img, {200, 0, 0}));
}

TEST_CASE("degenerate window is rejected") {
    ViewProjection proj;
    CHECK_THROWS_AS(rasterize(proj, 8, 8, {{1, 1}, {1, 2}}), DegenerateWindow);
}

TEST_CASE("overlapping rectangles: front wins and matches the depth-buffer oracle") {
    ViewProjection proj;
    proj.shapes2d = {
        rect_shape(0.45f, 0.5f, 0.25f, 0.25f, 5.0, {0, 0, 255}, 0),  // back, blue
        rect_shape(0.6f, 0.5f, 0.25f, 0.25f, 1.0, {255, 0, 0}, 1),   // front, red
    };
    // painter order: deeper first
    Box2 window{{0, 0}, {1, 1}};
    auto img = rasterize(proj, 64, 64, window);
    auto expected = oracle::depth_buffer_rasterize(proj, 64, 64, window);
    REQUIRE(img.pixels == expected.pixels);

    // overlap pixel is red
    CHECK(img.at(32, 32).r == 255);
    CHECK(img.at(32, 32).b == 0);
}

TEST_CASE("painter equals depth buffer on random generated scenes") {
    SceneSpec spec;
    spec.count_min = 2;
    spec.count_max = 5;
    spec.min_separation = 0.2;
    for (std::uint64_t seed = 900; seed < 925; ++seed) {
        Scene scene = generate_scene(spec, seed);
        for (View view : {View::front, View::side, View::top}) {
            auto proj = project(scene, view);
            Box2 window = view_window(scene.bounds, view);
            auto painted = rasterize(proj, 64, 64, window);
            auto oracle_img = oracle::depth_buffer_rasterize(proj, 64, 64, window);
            CAPTURE(seed);
            CAPTURE(view_name(view));
            REQUIRE(painted.pixels == oracle_img.pixels);
        }
    }
}

TEST_CASE("PPM bytes are bit-exact") {
    RasterImage img;
    img.width = 1;
    img.height = 1;
    img.pixels = {255, 255, 255};
    std::string expected = std::string("P6\n1 1\n255\n") + "\xFF\xFF\xFF";
    CHECK(encode_ppm(img) == expected);

    RasterImage two;
    two.width = 2;
    two.height = 1;
    two.pixels = {1, 2, 3, 4, 5, 6};
    std::string bytes = encode_ppm(two);
    CHECK(bytes.rfind("P6\n2 1\n255\n", 0) == 0);
    CHECK(bytes.size() == std::strlen("P6\n2 1\n255\n") + 6);
}

TEST_CASE("PPM round-trips through encode and decode") {
    RasterImage img;
    img.width = 5;
    img.height = 3;
    img.pixels.resize(45);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = static_cast<std::uint8_t>(i * 7);
    auto back = decode_ppm(encode_ppm(img));
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.pixels == img.pixels);
}

TEST_CASE("PNG output decodes back to the source pixels") {
    RasterImage img;
    img.width = 9;
    img.height = 4;
    img.pixels.resize(static_cast<std::size_t>(3) * 9 * 4);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        img.pixels[i] = static_cast<std::uint8_t>((i * 13) & 0xFF);

    std::string png = encode_png(img);
    REQUIRE(png.size() > 8);
    CHECK(std::memcmp(png.data(), "\x89PNG\r\n\x1a\n", 8) == 0);

    // walk the chunks, inflate IDAT, undo filter-0 rows
    std::string idat;
    std::size_t pos = 8;
    while (pos + 8 <= png.size()) {
        std::uint32_t len = (static_cast<std::uint8_t>(png[pos]) << 24) |
                            (static_cast<std::uint8_t>(png[pos + 1]) << 16) |
                            (static_cast<std::uint8_t>(png[pos + 2]) << 8) |
                            static_cast<std::uint8_t>(png[pos + 3]);
        std::string type = png.substr(pos + 4, 4);
        if (type == "IDAT") idat += png.substr(pos + 8, len);
        pos += 12 + len;
    }
    REQUIRE(!idat.empty());

    uLongf raw_len = static_cast<uLongf>((1 + 3 * img.width) * img.height);
    std::string raw(raw_len, '\0');
    REQUIRE(uncompress(reinterpret_cast<Bytef*>(raw.data()), &raw_len,
                       reinterpret_cast<const Bytef*>(idat.data()),
                       static_cast<uLong>(idat.size())) == Z_OK);

    for (int j = 0; j < img.height; ++j) {
        CHECK(raw[static_cast<std::size_t>(j) * (1 + 3 * img.width)] == 0);
        CHECK(std::memcmp(raw.data() + static_cast<std::size_t>(j) * (1 + 3 * img.width) + 1,
                          img.pixels.data() + static_cast<std::size_t>(3) * j * img.width,
                          static_cast<std::size_t>(3) * img.width) == 0);
    }
}

TEST_CASE("rasterization is byte deterministic") {
    SceneSpec spec;
    Scene scene = generate_scene(spec, 42);
    auto proj = project(scene, View::front);
    Box2 window = view_window(scene.bounds, View::front);
    auto a = rasterize(proj, 128, 128, window);
    auto b = rasterize(proj, 128, 128, window);
    CHECK(a.pixels == b.pixels);
    CHECK(encode_ppm(a) == encode_ppm(b));
}
