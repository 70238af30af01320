#include "ivq/render.hpp"

#include <algorithm>
#include <cmath>

#include "ivq/errors.hpp"
#include "ivq/kernels.hpp"

namespace ivq {

namespace {

// Drops one world coordinate per the axes convention.
Vec2 drop_axis(const Vec3& p, View view) {
    switch (view) {
        case View::front: return {p.x, p.z};
        case View::side: return {p.y, p.z};
        case View::top: return {p.x, p.y};
    }
    return {};
}

Outline2D make_rect(Vec2 c, double hw, double hh) {
    Outline2D o;
    o.kind = OutlineKind::rect;
    o.cx = static_cast<float>(c.x);
    o.cy = static_cast<float>(c.y);
    o.hw = static_cast<float>(hw);
    o.hh = static_cast<float>(hh);
    return o;
}

Outline2D make_circle(Vec2 c, double r) {
    Outline2D o;
    o.kind = OutlineKind::circle;
    o.cx = static_cast<float>(c.x);
    o.cy = static_cast<float>(c.y);
    o.hw = static_cast<float>(r);
    return o;
}

// Isoceles triangle: base corners then apex, counter-clockwise.
Outline2D make_triangle(Vec2 c, double hw, double hh) {
    Outline2D o;
    o.kind = OutlineKind::triangle;
    o.verts[0] = {static_cast<float>(c.x - hw), static_cast<float>(c.y - hh)};
    o.verts[1] = {static_cast<float>(c.x + hw), static_cast<float>(c.y - hh)};
    o.verts[2] = {static_cast<float>(c.x), static_cast<float>(c.y + hh)};
    return o;
}

} // namespace

Outline2D primitive_outline(const Primitive& p, View view) {
    Vec2 c = drop_axis(p.center, view);
    switch (p.shape) {
        case Shape::cube:
            return make_rect(c, p.edge / 2, p.edge / 2);
        case Shape::cylinder:
            return view == View::top ? make_circle(c, p.radius)
                                     : make_rect(c, p.radius, p.height / 2);
        case Shape::cone:
            return view == View::top ? make_circle(c, p.radius)
                                     : make_triangle(c, p.radius, p.height / 2);
    }
    return {};
}

double primitive_depth(const Primitive& p, View view) {
    switch (view) {
        case View::front: return p.center.y;
        case View::side: return p.center.x;
        case View::top: return -p.center.z;
    }
    return 0.0;
}

ViewProjection project(const Scene& scene, View view) {
    ViewProjection proj;
    proj.view = view;
    proj.shapes2d.reserve(scene.primitives.size());
    for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& p = scene.primitives[i];
        Shape2D s;
        s.primitive_id = p.id;
        s.scene_index = static_cast<int>(i);
        s.outline = primitive_outline(p, view);
        s.depth = primitive_depth(p, view);
        s.color = color_rgb(p.color);
        proj.shapes2d.push_back(std::move(s));
    }
    std::sort(proj.shapes2d.begin(), proj.shapes2d.end(), [](const Shape2D& a, const Shape2D& b) {
        if (a.depth != b.depth) return a.depth > b.depth;
        return a.scene_index > b.scene_index;
    });
    return proj;
}

Box2 view_window(const Box3& bounds, View view, double margin) {
    Vec2 lo = drop_axis(bounds.min, view);
    Vec2 hi = drop_axis(bounds.max, view);
    if (view == View::top) { // dropping z keeps (x, y) order intact
        lo = {bounds.min.x, bounds.min.y};
        hi = {bounds.max.x, bounds.max.y};
    }
    double mx = (hi.x - lo.x) * margin;
    double my = (hi.y - lo.y) * margin;
    return {{lo.x - mx, lo.y - my}, {hi.x + mx, hi.y + my}};
}

namespace {

struct OutlineBoundsV {
    float lo;
    float hi;
};

OutlineBoundsV outline_v_range(const Outline2D& o) {
    switch (o.kind) {
        case OutlineKind::rect: return {o.cy - o.hh, o.cy + o.hh};
        case OutlineKind::circle: return {o.cy - o.hw, o.cy + o.hw};
        case OutlineKind::triangle: {
            float lo = std::min({o.verts[0][1], o.verts[1][1], o.verts[2][1]});
            float hi = std::max({o.verts[0][1], o.verts[1][1], o.verts[2][1]});
            return {lo, hi};
        }
    }
    return {0, 0};
}

std::array<kernels::EdgeFn, 3> triangle_edges(const Outline2D& o) {
    std::array<kernels::EdgeFn, 3> edges{};
    for (int e = 0; e < 3; ++e) {
        const auto& p0 = o.verts[e];
        const auto& p1 = o.verts[(e + 1) % 3];
        edges[e].a = p0[1] - p1[1];
        edges[e].b = p1[0] - p0[0];
        edges[e].c = p0[0] * p1[1] - p1[0] * p0[1];
    }
    return edges;
}

} // namespace

bool outline_contains(const Outline2D& o, float u, float v) {
    switch (o.kind) {
        case OutlineKind::rect:
            return (u >= o.cx - o.hw) & (u <= o.cx + o.hw) & (v >= o.cy - o.hh) &
                   (v <= o.cy + o.hh);
        case OutlineKind::circle: {
            float dx = u - o.cx;
            float dy = v - o.cy;
            float dd = dx * dx + dy * dy;
            return dd <= o.hw * o.hw;
        }
        case OutlineKind::triangle: {
            auto edges = triangle_edges(o);
            for (const auto& e : edges) {
                float val = e.a * u + (e.b * v + e.c);
                if (!(val >= 0.0f)) return false;
            }
            return true;
        }
    }
    return false;
}

RasterImage rasterize(const ViewProjection& projection, int width, int height,
                      const Box2& window) {
    if (!(window.width() > 0) || !(window.height() > 0)) {
        throw DegenerateWindow("raster window has zero area");
    }
    const auto& k = kernels::active_table();

    RasterImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(3) * width * height);
    k.fill_span_rgb(img.pixels.data(), width * height, kBackground.r, kBackground.g,
                    kBackground.b);

    const float umin = static_cast<float>(window.min.x);
    const float vmax = static_cast<float>(window.max.y);
    const float pw = static_cast<float>(window.width()) / static_cast<float>(width);
    const float ph = static_cast<float>(window.height()) / static_cast<float>(height);

    std::vector<std::uint8_t> mask(static_cast<std::size_t>(width));

    for (const Shape2D& shape : projection.shapes2d) { // already back-to-front
        const Outline2D& o = shape.outline;
        OutlineBoundsV vr = outline_v_range(o);
        std::array<kernels::EdgeFn, 3> edges{};
        if (o.kind == OutlineKind::triangle) edges = triangle_edges(o);
        const float rr = o.hw * o.hw;

        for (int j = 0; j < height; ++j) {
            float v = vmax - (static_cast<float>(j) + 0.5f) * ph;
            // one-pixel slack keeps the prune sound against float jitter
            if (v < vr.lo - ph || v > vr.hi + ph) continue;

            switch (o.kind) {
                case OutlineKind::rect:
                    if ((v < o.cy - o.hh) | (v > o.cy + o.hh)) continue;
                    k.rect_mask_row(mask.data(), width, 0, umin, pw, o.cx - o.hw, o.cx + o.hw);
                    break;
                case OutlineKind::circle: {
                    float dy = v - o.cy;
                    if (dy * dy > rr) continue;
                    k.circle_mask_row(mask.data(), width, 0, umin, pw, v, o.cx, o.cy, rr);
                    break;
                }
                case OutlineKind::triangle:
                    k.tri_mask_row(mask.data(), width, 0, umin, pw, v, edges.data());
                    break;
            }

            kernels::Span span = k.mask_span(mask.data(), width);
            if (span.first < 0) continue;
            std::uint8_t* row = img.pixels.data() +
                                3 * (static_cast<std::size_t>(j) * width + span.first);
            k.fill_span_rgb(row, span.last - span.first + 1, shape.color.r, shape.color.g,
                            shape.color.b);
        }
    }
    return img;
}

} // namespace ivq
