#include "ivq/image_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "ivq/errors.hpp"

namespace ivq {

const char* image_extension(ImageFormat f) { return f == ImageFormat::ppm ? "ppm" : "png"; }

ImageFormat image_format_from_string(const std::string& name) {
    if (name == "ppm") return ImageFormat::ppm;
    if (name == "png") return ImageFormat::png;
    throw ConfigInvalid("unknown image format: " + name);
}

std::string encode_ppm(const RasterImage& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

RasterImage decode_ppm(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255) {
        throw IoFailure("not an 8-bit P6 PPM");
    }
    in.get(); // single whitespace byte after the header
    RasterImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(3) * w * h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw IoFailure("PPM pixel payload truncated");
    }
    return img;
}

namespace {

void append_u32_be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>(v & 0xFF));
}

void append_chunk(std::string& out, const char type[4], const std::string& data) {
    append_u32_be(out, static_cast<std::uint32_t>(data.size()));
    std::size_t crc_start = out.size();
    out.append(type, 4);
    out.append(data);
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
              static_cast<uInt>(out.size() - crc_start)));
    append_u32_be(out, crc);
}

} // namespace

std::string encode_png(const RasterImage& img) {
    // raw scanlines, filter byte 0 per row
    std::string raw;
    raw.reserve(static_cast<std::size_t>(img.height) * (1 + 3 * img.width));
    for (int j = 0; j < img.height; ++j) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(img.pixels.data() +
                                                 3 * static_cast<std::size_t>(j) * img.width),
                   3 * static_cast<std::size_t>(img.width));
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                  6) != Z_OK) {
        throw IoFailure("zlib compression failed");
    }
    compressed.resize(bound);

    std::string ihdr;
    append_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
    append_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // truecolor
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace

    std::string out("\x89PNG\r\n\x1a\n", 8);
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", compressed);
    append_chunk(out, "IEND", "");
    return out;
}

void emit_image(const RasterImage& img, ImageFormat format, const std::string& path) {
    std::string bytes = format == ImageFormat::ppm ? encode_ppm(img) : encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoFailure("write failed: " + path);
}

RasterImage read_ppm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_ppm(buf.str());
}

} // namespace ivq
