#include "ivq/kernels.hpp"

// Reference kernels. Kept branch-light and in the exact operation order the
// AVX2 lane mirrors; equivalence tests compare the two byte-for-byte.

namespace ivq::kernels {

namespace {

void rect_mask_row_scalar(std::uint8_t* mask, int n, int x0, float umin, float pw,
                          float xlo, float xhi) {
    for (int i = 0; i < n; ++i) {
        float u = umin + (static_cast<float>(x0 + i) + 0.5f) * pw;
        mask[i] = (u >= xlo) & (u <= xhi) ? 1 : 0;
    }
}

void circle_mask_row_scalar(std::uint8_t* mask, int n, int x0, float umin, float pw,
                            float v, float cx, float cy, float rr) {
    float dy = v - cy;
    float dy2 = dy * dy;
    for (int i = 0; i < n; ++i) {
        float u = umin + (static_cast<float>(x0 + i) + 0.5f) * pw;
        float dx = u - cx;
        float dd = dx * dx + dy2;
        mask[i] = dd <= rr ? 1 : 0;
    }
}

void tri_mask_row_scalar(std::uint8_t* mask, int n, int x0, float umin, float pw,
                         float v, const EdgeFn edges[3]) {
    // per-row constant part of each edge function
    float k0 = edges[0].b * v + edges[0].c;
    float k1 = edges[1].b * v + edges[1].c;
    float k2 = edges[2].b * v + edges[2].c;
    for (int i = 0; i < n; ++i) {
        float u = umin + (static_cast<float>(x0 + i) + 0.5f) * pw;
        float e0 = edges[0].a * u + k0;
        float e1 = edges[1].a * u + k1;
        float e2 = edges[2].a * u + k2;
        mask[i] = ((e0 >= 0.0f) & (e1 >= 0.0f) & (e2 >= 0.0f)) ? 1 : 0;
    }
}

void fill_span_rgb_scalar(std::uint8_t* dst, int n, std::uint8_t r, std::uint8_t g,
                          std::uint8_t b) {
    for (int i = 0; i < n; ++i) {
        dst[3 * i + 0] = r;
        dst[3 * i + 1] = g;
        dst[3 * i + 2] = b;
    }
}

Span mask_span_scalar(const std::uint8_t* mask, int n) {
    int first = -1;
    int last = -1;
    for (int i = 0; i < n; ++i) {
        if (mask[i]) {
            if (first < 0) first = i;
            last = i;
        }
    }
    return {first, last};
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable table = {
        rect_mask_row_scalar, circle_mask_row_scalar, tri_mask_row_scalar,
        fill_span_rgb_scalar, mask_span_scalar, "scalar",
    };
    return table;
}

} // namespace ivq::kernels
