// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polardem/error.hpp"

namespace polardem {

/// Single-channel image of doubles, row-major. Coordinates are (x, y) with
/// x the column and y the row, y increasing downward.
class PlaneImage {
public:
    PlaneImage() = default;

    PlaneImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height) {
        check_dims(width, height);
        samples_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    PlaneImage(int width, int height, std::vector<double> samples)
        : width_(width), height_(height), samples_(std::move(samples)) {
        check_dims(width, height);
        if (samples_.size() != static_cast<std::size_t>(width) * height) {
            throw Error(ErrorCode::InvalidDimensions, "sample count does not match width*height");
        }
    }

    /// Builds an image from nested rows, top row first.
    static PlaneImage from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const int h = static_cast<int>(rows.size());
        const int w = h > 0 ? static_cast<int>(rows.begin()->size()) : 0;
        std::vector<double> s;
        s.reserve(static_cast<std::size_t>(w) * h);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != w) {
                throw Error(ErrorCode::InvalidDimensions, "ragged rows");
            }
            s.insert(s.end(), r.begin(), r.end());
        }
        return PlaneImage(w, h, std::move(s));
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    double& operator()(int x, int y) noexcept { return samples_[index(x, y)]; }
    double operator()(int x, int y) const noexcept { return samples_[index(x, y)]; }

    double* row(int y) noexcept { return samples_.data() + static_cast<std::size_t>(y) * width_; }
    const double* row(int y) const noexcept {
        return samples_.data() + static_cast<std::size_t>(y) * width_;
    }

    std::span<double> samples() noexcept { return samples_; }
    std::span<const double> samples() const noexcept { return samples_; }

    bool same_shape(const PlaneImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const PlaneImage&, const PlaneImage&) = default;

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1) {
            throw Error(ErrorCode::InvalidDimensions,
                        "image must be at least 1x1, got " + std::to_string(width) + "x" +
                            std::to_string(height));
        }
    }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

inline void require_nonempty(const PlaneImage& img, const char* what) {
    if (img.empty()) {
        throw Error(ErrorCode::InvalidDimensions, std::string(what) + ": empty image");
    }
}

inline void require_same_shape(const PlaneImage& a, const PlaneImage& b, const char* what) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
    }
}

/// Pointwise f(a) into a new image.
template <class F>
PlaneImage map(const PlaneImage& a, F&& f) {
    PlaneImage out(a.width(), a.height());
    auto src = a.samples();
    auto dst = out.samples();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
    return out;
}

/// Pointwise f(a, b) into a new image.
template <class F>
PlaneImage zip(const PlaneImage& a, const PlaneImage& b, F&& f) {
    require_same_shape(a, b, "zip");
    PlaneImage out(a.width(), a.height());
    auto sa = a.samples();
    auto sb = b.samples();
    auto dst = out.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) dst[i] = f(sa[i], sb[i]);
    return out;
}

inline PlaneImage abs(const PlaneImage& a) {
    return map(a, [](double v) { return std::abs(v); });
}

inline bool all_finite(const PlaneImage& a) {
    return std::all_of(a.samples().begin(), a.samples().end(),
                       [](double v) { return std::isfinite(v); });
}

using RgbImage = std::array<PlaneImage, 3>;

enum class BorderMode { Replicate, Symmetric };

/// Maps an out-of-range coordinate into [0, n).
inline int border_index(int i, int n, BorderMode mode) noexcept {
    if (i >= 0 && i < n) return i;
    if (mode == BorderMode::Replicate) return i < 0 ? 0 : n - 1;
    // Symmetric: edge sample repeated (-1 -> 0, n -> n-1), period 2n.
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

/// Odd-sized square correlation kernel anchored at its center.
class Kernel2D {
public:
    Kernel2D() = default;

    Kernel2D(int size, std::vector<double> taps) : size_(size), taps_(std::move(taps)) {
        if (size < 1 || size % 2 == 0) {
            throw Error(ErrorCode::InvalidParams, "kernel size must be odd");
        }
        if (taps_.size() != static_cast<std::size_t>(size) * size) {
            throw Error(ErrorCode::InvalidParams, "kernel tap count does not match size");
        }
    }

    static Kernel2D from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const int n = static_cast<int>(rows.size());
        std::vector<double> taps;
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != n) {
                throw Error(ErrorCode::InvalidParams, "kernel must be square");
            }
            taps.insert(taps.end(), r.begin(), r.end());
        }
        return Kernel2D(n, std::move(taps));
    }

    int size() const noexcept { return size_; }
    int anchor() const noexcept { return (size_ - 1) / 2; }
    /// Tap at kernel row r, column c.
    double tap(int r, int c) const noexcept {
        return taps_[static_cast<std::size_t>(r) * size_ + c];
    }
    std::span<const double> taps() const noexcept { return taps_; }

    double sum() const noexcept {
        double s = 0.0;
        for (double t : taps_) s += t;
        return s;
    }

    Kernel2D scaled(double f) const {
        std::vector<double> t = taps_;
        for (double& v : t) v *= f;
        return Kernel2D(size_, std::move(t));
    }

private:
    int size_ = 0;
    std::vector<double> taps_;
};

/// Anchored correlation: out(x, y) = sum_{r,c} tap(r, c) * img(x + c - a, y + r - a).
/// Taps are not flipped, so the top kernel row reaches the row above.
inline PlaneImage convolve(const PlaneImage& img, const Kernel2D& k,
                           BorderMode border = BorderMode::Replicate) {
    require_nonempty(img, "convolve");
    const int w = img.width();
    const int h = img.height();
    const int a = k.anchor();
    PlaneImage out(w, h);

    // Nonzero taps only; directional kernels are mostly zeros.
    struct Tap {
        int dx, dy;
        double v;
    };
    std::vector<Tap> taps;
    for (int r = 0; r < k.size(); ++r)
        for (int c = 0; c < k.size(); ++c)
            if (k.tap(r, c) != 0.0) taps.push_back({c - a, r - a, k.tap(r, c)});

    // Column lookup for the left/right margins.
    std::vector<int> xmap(static_cast<std::size_t>(w) + 2 * a);
    for (int x = -a; x < w + a; ++x) xmap[static_cast<std::size_t>(x + a)] = border_index(x, w, border);

    for (int y = 0; y < h; ++y) {
        double* dst = out.row(y);
        for (const Tap& t : taps) {
            const double* src = img.row(border_index(y + t.dy, h, border));
            const int lo = std::clamp(-t.dx, 0, w);
            const int hi = std::clamp(w - t.dx, lo, w);
            for (int x = 0; x < lo; ++x) dst[x] += t.v * src[xmap[static_cast<std::size_t>(x + t.dx + a)]];
            for (int x = lo; x < hi; ++x) dst[x] += t.v * src[x + t.dx];
            for (int x = hi; x < w; ++x) dst[x] += t.v * src[xmap[static_cast<std::size_t>(x + t.dx + a)]];
        }
    }
    return out;
}

/// Sum over the (2r+1)^2 window around each pixel, truncated at the image
/// border (out-of-range pixels contribute nothing).
inline PlaneImage box_sum(const PlaneImage& img, int radius) {
    require_nonempty(img, "box_sum");
    const int w = img.width();
    const int h = img.height();
    PlaneImage horiz(w, h);
    std::vector<double> prefix(static_cast<std::size_t>(w) + 1);
    for (int y = 0; y < h; ++y) {
        const double* src = img.row(y);
        prefix[0] = 0.0;
        for (int x = 0; x < w; ++x) prefix[static_cast<std::size_t>(x) + 1] = prefix[static_cast<std::size_t>(x)] + src[x];
        double* dst = horiz.row(y);
        for (int x = 0; x < w; ++x) {
            const int lo = std::max(0, x - radius);
            const int hi = std::min(w, x + radius + 1);
            dst[x] = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
        }
    }
    PlaneImage out(w, h);
    std::vector<double> acc(static_cast<std::size_t>(w), 0.0);
    // Running column sums over the sliding row window.
    for (int y = 0; y < std::min(h, radius); ++y) {
        const double* src = horiz.row(y);
        for (int x = 0; x < w; ++x) acc[static_cast<std::size_t>(x)] += src[x];
    }
    for (int y = 0; y < h; ++y) {
        const int add = y + radius;
        const int drop = y - radius - 1;
        if (add < h) {
            const double* src = horiz.row(add);
            for (int x = 0; x < w; ++x) acc[static_cast<std::size_t>(x)] += src[x];
        }
        if (drop >= 0) {
            const double* src = horiz.row(drop);
            for (int x = 0; x < w; ++x) acc[static_cast<std::size_t>(x)] -= src[x];
        }
        std::copy(acc.begin(), acc.end(), out.row(y));
    }
    return out;
}

/// Mean over the border-truncated (2r+1)^2 window.
inline PlaneImage box_mean(const PlaneImage& img, int radius) {
    PlaneImage sums = box_sum(img, radius);
    const int w = img.width();
    const int h = img.height();
    for (int y = 0; y < h; ++y) {
        const int ny = std::min(h, y + radius + 1) - std::max(0, y - radius);
        double* row = sums.row(y);
        for (int x = 0; x < w; ++x) {
            const int nx = std::min(w, x + radius + 1) - std::max(0, x - radius);
            row[x] /= static_cast<double>(nx * ny);
        }
    }
    return sums;
}

}  // namespace polardem
