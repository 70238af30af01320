#include "ivq/kernels.hpp"

// AVX2 lane. Mask kernels compute 8 pixel centers per iteration with the same
// mul/add/cmp sequence as the scalar lane (no FMA, so lane results match the
// scalar reference bit-for-bit), then expand the 8-bit movemask through a
// byte LUT. This file is compiled with -mavx2 and only ever called after the
// runtime CPU probe in kernels_dispatch.cpp.

#if defined(IVQ_BUILD_AVX2)

#include <immintrin.h>

#include <array>
#include <cstring>

namespace ivq::kernels {

namespace {

constexpr std::array<std::uint64_t, 256> make_bit_expand_table() {
    std::array<std::uint64_t, 256> t{};
    for (int m = 0; m < 256; ++m) {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            if (m & (1 << i)) v |= std::uint64_t{1} << (8 * i);
        }
        t[static_cast<std::size_t>(m)] = v;
    }
    return t;
}

constexpr std::array<std::uint64_t, 256> kBitExpand = make_bit_expand_table();

inline void write_mask8(std::uint8_t* dst, int bits) {
    std::uint64_t bytes = kBitExpand[static_cast<std::size_t>(bits)];
    std::memcpy(dst, &bytes, 8);
}

// u(x0+i..x0+i+7), same op order as the scalar lane.
inline __m256 pixel_centers(int x, float umin, float pw) {
    const __m256 offsets = _mm256_setr_ps(0.5f, 1.5f, 2.5f, 3.5f, 4.5f, 5.5f, 6.5f, 7.5f);
    __m256 idx = _mm256_add_ps(_mm256_set1_ps(static_cast<float>(x)), offsets);
    return _mm256_add_ps(_mm256_mul_ps(idx, _mm256_set1_ps(pw)), _mm256_set1_ps(umin));
}

void rect_mask_row_avx2(std::uint8_t* mask, int n, int x0, float umin, float pw,
                        float xlo, float xhi) {
    const __m256 lo = _mm256_set1_ps(xlo);
    const __m256 hi = _mm256_set1_ps(xhi);
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 u = pixel_centers(x0 + i, umin, pw);
        __m256 in = _mm256_and_ps(_mm256_cmp_ps(u, lo, _CMP_GE_OQ),
                                  _mm256_cmp_ps(u, hi, _CMP_LE_OQ));
        write_mask8(mask + i, _mm256_movemask_ps(in));
    }
    for (; i < n; ++i) {
        float u = umin + (static_cast<float>(x0 + i) + 0.5f) * pw;
        mask[i] = (u >= xlo) & (u <= xhi) ? 1 : 0;
    }
}

void circle_mask_row_avx2(std::uint8_t* mask, int n, int x0, float umin, float pw,
                          float v, float cx, float cy, float rr) {
    float dy = v - cy;
    float dy2 = dy * dy;
    const __m256 dy2v = _mm256_set1_ps(dy2);
    const __m256 cxv = _mm256_set1_ps(cx);
    const __m256 rrv = _mm256_set1_ps(rr);
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 u = pixel_centers(x0 + i, umin, pw);
        __m256 dx = _mm256_sub_ps(u, cxv);
        __m256 dd = _mm256_add_ps(_mm256_mul_ps(dx, dx), dy2v);
        write_mask8(mask + i, _mm256_movemask_ps(_mm256_cmp_ps(dd, rrv, _CMP_LE_OQ)));
    }
    for (; i < n; ++i) {
        float u = umin + (static_cast<float>(x0 + i) + 0.5f) * pw;
        float dx = u - cx;
        float dd = dx * dx + dy2;
        mask[i] = dd <= rr ? 1 : 0;
    }
}

void tri_mask_row_avx2(std::uint8_t* mask, int n, int x0, float umin, float pw,
                       float v, const EdgeFn edges[3]) {
    float k0 = edges[0].b * v + edges[0].c;
    float k1 = edges[1].b * v + edges[1].c;
    float k2 = edges[2].b * v + edges[2].c;
    const __m256 a0 = _mm256_set1_ps(edges[0].a);
    const __m256 a1 = _mm256_set1_ps(edges[1].a);
    const __m256 a2 = _mm256_set1_ps(edges[2].a);
    const __m256 k0v = _mm256_set1_ps(k0);
    const __m256 k1v = _mm256_set1_ps(k1);
    const __m256 k2v = _mm256_set1_ps(k2);
    const __m256 zero = _mm256_setzero_ps();
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 u = pixel_centers(x0 + i, umin, pw);
        __m256 e0 = _mm256_add_ps(_mm256_mul_ps(a0, u), k0v);
        __m256 e1 = _mm256_add_ps(_mm256_mul_ps(a1, u), k1v);
        __m256 e2 = _mm256_add_ps(_mm256_mul_ps(a2, u), k2v);
        __m256 in = _mm256_and_ps(_mm256_and_ps(_mm256_cmp_ps(e0, zero, _CMP_GE_OQ),
                                                _mm256_cmp_ps(e1, zero, _CMP_GE_OQ)),
                                  _mm256_cmp_ps(e2, zero, _CMP_GE_OQ));
        write_mask8(mask + i, _mm256_movemask_ps(in));
    }
    for (; i < n; ++i) {
        float u = umin + (static_cast<float>(x0 + i) + 0.5f) * pw;
        float e0 = edges[0].a * u + k0;
        float e1 = edges[1].a * u + k1;
        float e2 = edges[2].a * u + k2;
        mask[i] = ((e0 >= 0.0f) & (e1 >= 0.0f) & (e2 >= 0.0f)) ? 1 : 0;
    }
}

void fill_span_rgb_avx2(std::uint8_t* dst, int n, std::uint8_t r, std::uint8_t g,
                        std::uint8_t b) {
    // 96 bytes = lcm(3, 32): the RGB pattern tiles three 32-byte stores.
    alignas(32) std::uint8_t pattern[96];
    for (int i = 0; i < 32; ++i) {
        pattern[3 * i + 0] = r;
        pattern[3 * i + 1] = g;
        pattern[3 * i + 2] = b;
    }
    const __m256i p0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern));
    const __m256i p1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 32));
    const __m256i p2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern + 64));
    int i = 0;
    for (; i + 32 <= n; i += 32) {
        std::uint8_t* p = dst + 3 * i;
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), p0);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(p + 32), p1);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(p + 64), p2);
    }
    for (; i < n; ++i) {
        dst[3 * i + 0] = r;
        dst[3 * i + 1] = g;
        dst[3 * i + 2] = b;
    }
}

Span mask_span_avx2(const std::uint8_t* mask, int n) {
    const __m256i zero = _mm256_setzero_si256();
    int first = -1;
    int last = -1;
    int i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i chunk = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask + i));
        std::uint32_t nz = ~static_cast<std::uint32_t>(
            _mm256_movemask_epi8(_mm256_cmpeq_epi8(chunk, zero)));
        if (nz) {
            if (first < 0) first = i + __builtin_ctz(nz);
            last = i + 31 - __builtin_clz(nz);
        }
    }
    for (; i < n; ++i) {
        if (mask[i]) {
            if (first < 0) first = i;
            last = i;
        }
    }
    return {first, last};
}

} // namespace

const KernelTable* avx2_table() {
    static const KernelTable table = {
        rect_mask_row_avx2, circle_mask_row_avx2, tri_mask_row_avx2,
        fill_span_rgb_avx2, mask_span_avx2, "avx2",
    };
    return &table;
}

} // namespace ivq::kernels

#else // !IVQ_BUILD_AVX2

namespace ivq::kernels {

const KernelTable* avx2_table() { return nullptr; }

} // namespace ivq::kernels

#endif
