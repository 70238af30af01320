#pragma once

// Test-only rasterization oracle. Re-implements pixel coverage and composition
// from scratch: per-pixel point-in-shape tests and a strict-< depth buffer
// walked in scene order, with no pruning, spans or kernel calls. The
// production painter pass must match it byte for byte.

#include <vector>

#include "ivq/render.hpp"

namespace ivq::oracle {

bool point_in_shape(const Outline2D& o, float u, float v);

RasterImage depth_buffer_rasterize(const ViewProjection& projection, int width, int height,
                                   const Box2& window);

// True when a covers at least one sample of the 64x64 grid also covered by b
// while strictly closer.
bool occludes(const Outline2D& a, double depth_a, const Outline2D& b, double depth_b,
              const Box2& window, int grid = 64);

} // namespace ivq::oracle
