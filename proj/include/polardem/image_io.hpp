// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polardem/error.hpp"
#include "polardem/image.hpp"

namespace polardem {

/// Integer code image as stored in a file, before normalization.
struct RawCodes {
    int width = 0;
    int height = 0;
    int channels = 0;        // 1 or 3
    int container_bits = 0;  // 8 or 16
    int maxval = 0;          // PNM maxval or 2^bits - 1 (PNG, from sBIT when present)
    std::vector<std::uint16_t> codes;  // interleaved
};

namespace detail {

inline std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

inline int max_code(int bits) { return (1 << bits) - 1; }

inline std::vector<unsigned char> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline RawCodes read_pnm(const std::filesystem::path& path) {
    const std::vector<unsigned char> bytes = slurp(path);
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> long {
        skip_space();
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw Error(ErrorCode::IoError, "malformed PNM header in " + path.string());
        }
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > 1'000'000'000) throw Error(ErrorCode::IoError, "PNM header value too large");
        }
        return v;
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw Error(ErrorCode::UnsupportedFormat, "not a binary PGM/PPM: " + path.string());
    }
    pos = 2;
    RawCodes rc;
    rc.channels = bytes[1] == '5' ? 1 : 3;
    const long w = read_int();
    const long h = read_int();
    const long maxval = read_int();
    if (w < 1 || h < 1) throw Error(ErrorCode::IoError, "PNM has zero size: " + path.string());
    if (maxval < 1 || maxval > 65535) {
        throw Error(ErrorCode::UnsupportedFormat, "PNM maxval out of range: " + std::to_string(maxval));
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw Error(ErrorCode::IoError, "malformed PNM header in " + path.string());
    }
    ++pos;
    rc.width = static_cast<int>(w);
    rc.height = static_cast<int>(h);
    rc.maxval = static_cast<int>(maxval);
    rc.container_bits = maxval > 255 ? 16 : 8;
    const std::size_t count = static_cast<std::size_t>(w) * h * rc.channels;
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() - pos < count * bpp) {
        throw Error(ErrorCode::IoError, "truncated PNM data in " + path.string());
    }
    rc.codes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        rc.codes[i] = bpp == 2 ? static_cast<std::uint16_t>((bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1])
                               : bytes[pos + i];
    }
    return rc;
}

inline void write_pnm(const RawCodes& rc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << (rc.channels == 1 ? "P5" : "P6") << '\n'
        << rc.width << ' ' << rc.height << '\n'
        << rc.maxval << '\n';
    std::vector<unsigned char> buf;
    buf.reserve(rc.codes.size() * 2);
    for (std::uint16_t c : rc.codes) {
        if (rc.maxval > 255) buf.push_back(static_cast<unsigned char>(c >> 8));
        buf.push_back(static_cast<unsigned char>(c & 0xff));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

struct PngReadContext {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    std::vector<png_byte> pixels;
    std::vector<png_bytep> rows;
    std::string error;
    RawCodes result;

    ~PngReadContext() {
        png_destroy_read_struct(png ? &png : nullptr, info ? &info : nullptr, nullptr);
        if (file) std::fclose(file);
    }
};

inline void png_error_handler(png_structp png, png_const_charp msg) {
    auto* ctx = static_cast<PngReadContext*>(png_get_error_ptr(png));
    if (ctx) ctx->error = msg;
    png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

inline RawCodes read_png(const std::filesystem::path& path) {
    auto ctx = std::make_unique<PngReadContext>();
    ctx->file = std::fopen(path.string().c_str(), "rb");
    if (!ctx->file) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    png_byte sig[8];
    if (std::fread(sig, 1, 8, ctx->file) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw Error(ErrorCode::UnsupportedFormat, "not a PNG file: " + path.string());
    }
    ctx->png = png_create_read_struct(PNG_LIBPNG_VER_STRING, ctx.get(), png_error_handler,
                                      png_warning_handler);
    if (!ctx->png) throw Error(ErrorCode::IoError, "libpng init failed");
    ctx->info = png_create_info_struct(ctx->png);
    if (!ctx->info) throw Error(ErrorCode::IoError, "libpng init failed");

    // Only ctx (heap) is touched between setjmp and a possible longjmp.
    PngReadContext* c = ctx.get();
    if (setjmp(png_jmpbuf(c->png))) {
        throw Error(ErrorCode::IoError, "PNG decode failed for " + path.string() + ": " + c->error);
    }
    png_init_io(c->png, c->file);
    png_set_sig_bytes(c->png, 8);
    png_read_info(c->png, c->info);

    const png_uint_32 w = png_get_image_width(c->png, c->info);
    const png_uint_32 h = png_get_image_height(c->png, c->info);
    const int bit_depth = png_get_bit_depth(c->png, c->info);
    const int color_type = png_get_color_type(c->png, c->info);
    if (bit_depth != 8 && bit_depth != 16) {
        throw Error(ErrorCode::UnsupportedFormat,
                    "PNG bit depth " + std::to_string(bit_depth) + " in " + path.string());
    }
    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB) {
        throw Error(ErrorCode::UnsupportedFormat, "PNG must be grayscale or RGB: " + path.string());
    }
    RawCodes& rc = c->result;
    rc.width = static_cast<int>(w);
    rc.height = static_cast<int>(h);
    rc.channels = color_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
    rc.container_bits = bit_depth;
    rc.maxval = max_code(bit_depth);
    png_color_8p sbit = nullptr;
    if (png_get_sBIT(c->png, c->info, &sbit) && sbit) {
        const int sig_bits = rc.channels == 1 ? sbit->gray : sbit->green;
        if (sig_bits >= 1 && sig_bits <= bit_depth) rc.maxval = max_code(sig_bits);
    }

    const std::size_t rowbytes = png_get_rowbytes(c->png, c->info);
    c->pixels.resize(rowbytes * h);
    c->rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) c->rows[y] = c->pixels.data() + y * rowbytes;
    png_read_image(c->png, c->rows.data());
    png_read_end(c->png, nullptr);

    const std::size_t count = static_cast<std::size_t>(w) * h * rc.channels;
    rc.codes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        rc.codes[i] = bit_depth == 16
                          ? static_cast<std::uint16_t>((c->pixels[2 * i] << 8) | c->pixels[2 * i + 1])
                          : c->pixels[i];
    }
    return std::move(c->result);
}

struct PngWriteContext {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    std::vector<png_byte> pixels;
    std::vector<png_bytep> rows;
    std::string error;

    ~PngWriteContext() {
        png_destroy_write_struct(png ? &png : nullptr, info ? &info : nullptr);
        if (file) std::fclose(file);
    }
};

inline void png_write_error_handler(png_structp png, png_const_charp msg) {
    auto* ctx = static_cast<PngWriteContext*>(png_get_error_ptr(png));
    if (ctx) ctx->error = msg;
    png_longjmp(png, 1);
}

inline void write_png(const RawCodes& rc, int significant_bits, const std::filesystem::path& path) {
    auto ctx = std::make_unique<PngWriteContext>();
    const std::size_t count = rc.codes.size();
    const int bpp = rc.container_bits / 8;
    ctx->pixels.resize(count * bpp);
    for (std::size_t i = 0; i < count; ++i) {
        if (bpp == 2) {
            ctx->pixels[2 * i] = static_cast<png_byte>(rc.codes[i] >> 8);
            ctx->pixels[2 * i + 1] = static_cast<png_byte>(rc.codes[i] & 0xff);
        } else {
            ctx->pixels[i] = static_cast<png_byte>(rc.codes[i]);
        }
    }
    const std::size_t rowbytes = static_cast<std::size_t>(rc.width) * rc.channels * bpp;
    ctx->rows.resize(static_cast<std::size_t>(rc.height));
    for (int y = 0; y < rc.height; ++y) ctx->rows[static_cast<std::size_t>(y)] = ctx->pixels.data() + y * rowbytes;

    ctx->file = std::fopen(path.string().c_str(), "wb");
    if (!ctx->file) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    ctx->png = png_create_write_struct(PNG_LIBPNG_VER_STRING, ctx.get(), png_write_error_handler,
                                       png_warning_handler);
    if (!ctx->png) throw Error(ErrorCode::IoError, "libpng init failed");
    ctx->info = png_create_info_struct(ctx->png);
    if (!ctx->info) throw Error(ErrorCode::IoError, "libpng init failed");

    PngWriteContext* c = ctx.get();
    if (setjmp(png_jmpbuf(c->png))) {
        throw Error(ErrorCode::IoError, "PNG encode failed for " + path.string() + ": " + c->error);
    }
    png_init_io(c->png, c->file);
    png_set_IHDR(c->png, c->info, static_cast<png_uint_32>(rc.width),
                 static_cast<png_uint_32>(rc.height), rc.container_bits,
                 rc.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (significant_bits != rc.container_bits) {
        png_color_8 sbit{};
        const auto s = static_cast<png_byte>(significant_bits);
        sbit.red = sbit.green = sbit.blue = sbit.gray = s;
        png_set_sBIT(c->png, c->info, &sbit);
    }
    png_write_info(c->png, c->info);
    png_write_image(c->png, c->rows.data());
    png_write_end(c->png, nullptr);
}

inline RawCodes read_codes(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return read_png(path);
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
    throw Error(ErrorCode::UnsupportedFormat, "unknown image extension: " + path.string());
}

inline std::vector<PlaneImage> codes_to_planes(const RawCodes& rc, std::optional<int> bit_depth,
                                               const std::filesystem::path& path) {
    int divisor = rc.maxval;
    if (bit_depth) {
        if (*bit_depth < 1 || *bit_depth > rc.container_bits) {
            throw Error(ErrorCode::UnsupportedFormat,
                        "declared bit depth " + std::to_string(*bit_depth) + " does not fit the " +
                            std::to_string(rc.container_bits) + "-bit container of " + path.string());
        }
        divisor = max_code(*bit_depth);
    }
    std::vector<PlaneImage> planes(static_cast<std::size_t>(rc.channels),
                                   PlaneImage(rc.width, rc.height));
    const double scale = 1.0 / divisor;
    const std::size_t n = static_cast<std::size_t>(rc.width) * rc.height;
    for (std::size_t i = 0; i < n; ++i) {
        for (int ch = 0; ch < rc.channels; ++ch) {
            const std::uint16_t code = rc.codes[i * rc.channels + ch];
            if (code > divisor) {
                throw Error(ErrorCode::UnsupportedFormat,
                            "code " + std::to_string(code) + " exceeds the declared depth in " +
                                path.string());
            }
            planes[static_cast<std::size_t>(ch)].samples()[i] = code * scale;
        }
    }
    return planes;
}

inline std::uint16_t to_code(double v, int bit_depth) {
    const double c = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    return static_cast<std::uint16_t>(std::lround(c * max_code(bit_depth)));
}

inline void write_planes(std::span<const PlaneImage> planes, const std::filesystem::path& path,
                         int bit_depth) {
    if (bit_depth != 8 && bit_depth != 10 && bit_depth != 16) {
        throw Error(ErrorCode::UnsupportedFormat, "bit depth must be 8, 10 or 16");
    }
    for (const PlaneImage& p : planes) {
        require_nonempty(p, "write_image");
        require_same_shape(planes[0], p, "write_image");
    }
    RawCodes rc;
    rc.width = planes[0].width();
    rc.height = planes[0].height();
    rc.channels = static_cast<int>(planes.size());
    rc.container_bits = bit_depth > 8 ? 16 : 8;
    rc.maxval = max_code(bit_depth);
    const std::size_t n = planes[0].size();
    rc.codes.resize(n * planes.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t ch = 0; ch < planes.size(); ++ch)
            rc.codes[i * planes.size() + ch] = to_code(planes[ch].samples()[i], bit_depth);

    const std::string ext = lower_ext(path);
    if (ext == ".png") {
        write_png(rc, bit_depth, path);
    } else if ((ext == ".pgm" && rc.channels == 1) || (ext == ".ppm" && rc.channels == 3) ||
               ext == ".pnm") {
        write_pnm(rc, path);
    } else {
        throw Error(ErrorCode::UnsupportedFormat, "cannot write " + std::to_string(rc.channels) +
                                                      "-channel image as " + path.string());
    }
}

}  // namespace detail

/// Reads a grayscale image normalized to [0,1]. With no bit depth the
/// divisor comes from the file (PNM maxval, PNG sBIT or container depth).
inline PlaneImage read_image(const std::filesystem::path& path,
                             std::optional<int> bit_depth = std::nullopt) {
    const RawCodes rc = detail::read_codes(path);
    if (rc.channels != 1) {
        throw Error(ErrorCode::UnsupportedFormat, "expected a grayscale image: " + path.string());
    }
    return std::move(detail::codes_to_planes(rc, bit_depth, path)[0]);
}

inline RgbImage read_rgb_image(const std::filesystem::path& path,
                               std::optional<int> bit_depth = std::nullopt) {
    const RawCodes rc = detail::read_codes(path);
    if (rc.channels != 3) {
        throw Error(ErrorCode::UnsupportedFormat, "expected an RGB image: " + path.string());
    }
    auto planes = detail::codes_to_planes(rc, bit_depth, path);
    return {std::move(planes[0]), std::move(planes[1]), std::move(planes[2])};
}

/// Reads either kind; returns one or three planes.
inline std::vector<PlaneImage> read_planes(const std::filesystem::path& path,
                                           std::optional<int> bit_depth = std::nullopt) {
    return detail::codes_to_planes(detail::read_codes(path), bit_depth, path);
}

/// Writes code = round(clamp(v, 0, 1) * (2^depth - 1)). Depth 10 is stored
/// in 16-bit words. Format follows the extension (.png, .pgm, .ppm).
inline void write_image(const PlaneImage& img, const std::filesystem::path& path, int bit_depth) {
    detail::write_planes(std::span<const PlaneImage>(&img, 1), path, bit_depth);
}

inline void write_rgb_image(const RgbImage& rgb, const std::filesystem::path& path, int bit_depth) {
    detail::write_planes(std::span<const PlaneImage>(rgb), path, bit_depth);
}

}  // namespace polardem
