#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ivq/geometry.hpp"
#include "ivq/scene.hpp"

namespace ivq {

// 2D silhouettes produced by the orthographic projections. Parameters are
// float because rasterization (and the pixel-level oracles in the tests)
// operate in single precision; world geometry is converted once here.
enum class OutlineKind { rect, circle, triangle };

struct Outline2D {
    OutlineKind kind = OutlineKind::rect;
    // rect: center (cx, cy), half extents (hw, hh)
    // circle: center (cx, cy), radius hw
    // triangle: verts[0..2], counter-clockwise
    float cx = 0, cy = 0, hw = 0, hh = 0;
    std::array<std::array<float, 2>, 3> verts{};
};

struct Shape2D {
    std::string primitive_id;
    int scene_index = 0; // position in Scene::primitives
    Outline2D outline;
    double depth = 0.0; // smaller = closer to the viewer
    Rgb color{255, 255, 255};
};

struct ViewProjection {
    View view = View::front;
    std::vector<Shape2D> shapes2d; // back-to-front (painter's order)
};

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major RGB, 3 * width * height bytes

    Rgb at(int x, int y) const {
        std::size_t o = 3 * (static_cast<std::size_t>(y) * width + x);
        return {pixels[o], pixels[o + 1], pixels[o + 2]};
    }
};

inline constexpr Rgb kBackground{255, 255, 255};

// Orthographic drop of one coordinate: front (x,y,z)->(x,z) depth y,
// side ->(y,z) depth x, top ->(x,y) depth -z. Output is sorted back-to-front;
// depth ties break toward the later scene index drawn first, which keeps the
// painter pass pixel-identical to a strict-< depth buffer walked in scene
// order.
ViewProjection project(const Scene& scene, View view);

// 2D window of a view: the projection of `bounds` grown by `margin` of its
// span on each side.
Box2 view_window(const Box3& bounds, View view, double margin = 0.05);

// Painter's fill of the projection, white background, pixel centers tested.
// Throws DegenerateWindow when the window has zero area.
RasterImage rasterize(const ViewProjection& projection, int width, int height,
                      const Box2& window);

// Point-in-outline test using the same single-precision expressions as the
// raster kernels; used for the occlusion facts' sample-grid check.
bool outline_contains(const Outline2D& outline, float u, float v);

// Outline of one primitive in one view (also used for close-up images).
Outline2D primitive_outline(const Primitive& p, View view);
double primitive_depth(const Primitive& p, View view);

} // namespace ivq
