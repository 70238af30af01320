#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace ivq::kernels {

// Raster inner loops, one scalar reference implementation and one AVX2
// implementation per kernel, selected once at startup. Pixels are tested at
// their centers: u(i) = umin + (float(i) + 0.5f) * pw on the horizontal axis,
// v(j) = vmax - (float(j) + 0.5f) * ph on the vertical axis. All variants of
// a kernel must produce byte-identical output for identical inputs; the
// expressions below are fixed and both lanes are compiled with
// -ffp-contract=off so scalar and vector float ops round identically.

// Edge function e(u,v) = a*u + b*v + c, >= 0 inside. Triangles are stored
// with counter-clockwise winding so all three edges are >= 0 in the interior.
struct EdgeFn {
    float a;
    float b;
    float c;
};

// mask[i] = 1 when xlo <= u(x0+i) <= xhi, else 0.
using RectMaskRowFn = void (*)(std::uint8_t* mask, int n, int x0, float umin, float pw,
                               float xlo, float xhi);

// mask[i] = 1 when (u-cx)^2 + (v-cy)^2 <= rr.
using CircleMaskRowFn = void (*)(std::uint8_t* mask, int n, int x0, float umin, float pw,
                                 float v, float cx, float cy, float rr);

// mask[i] = 1 when all three edge functions are >= 0 at (u, v).
using TriMaskRowFn = void (*)(std::uint8_t* mask, int n, int x0, float umin, float pw,
                              float v, const EdgeFn edges[3]);

// Contiguous RGB fill of n pixels starting at dst.
using FillSpanRgbFn = void (*)(std::uint8_t* dst, int n, std::uint8_t r, std::uint8_t g,
                               std::uint8_t b);

// First/last set byte in mask[0..n); {first, last} inclusive, first = -1 when
// the mask is empty. Convex outlines produce a single run per row, so a span
// plus a contiguous fill reproduces the per-pixel mask exactly.
struct Span {
    int first;
    int last;
};
using MaskSpanFn = Span (*)(const std::uint8_t* mask, int n);

struct KernelTable {
    RectMaskRowFn rect_mask_row;
    CircleMaskRowFn circle_mask_row;
    TriMaskRowFn tri_mask_row;
    FillSpanRgbFn fill_span_rgb;
    MaskSpanFn mask_span;
    const char* name;
};

const KernelTable& scalar_table();

// Null when this build or this machine has no AVX2 path.
const KernelTable* avx2_table();

// Active table, chosen once: AVX2 when the CPU supports it, scalar otherwise.
// The IVQ_KERNELS environment variable ("scalar" | "avx2") overrides the
// probe; forcing "avx2" on a machine without it aborts with a message.
const KernelTable& active_table();

bool cpu_has_avx2();

} // namespace ivq::kernels
