#pragma once

#include <string>

#include "ivq/render.hpp"

namespace ivq {

enum class ImageFormat { ppm, png };

const char* image_extension(ImageFormat f);
ImageFormat image_format_from_string(const std::string& name);

// P6 binary, header "P6\n<w> <h>\n255\n" followed by raw RGB. Bit-exact.
std::string encode_ppm(const RasterImage& img);
RasterImage decode_ppm(const std::string& bytes);

// 8-bit RGB truecolor, single zlib-compressed IDAT, filter type 0 rows.
std::string encode_png(const RasterImage& img);

void emit_image(const RasterImage& img, ImageFormat format, const std::string& path);

RasterImage read_ppm_file(const std::string& path);

} // namespace ivq
