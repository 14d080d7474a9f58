// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/polar.hpp"

namespace polardem {

enum class VizMode { Flat, Intensity };

inline VizMode viz_mode_from_string(const std::string& s) {
    if (s == "flat") return VizMode::Flat;
    if (s == "intensity") return VizMode::Intensity;
    throw Error(ErrorCode::InvalidParams, "viz mode must be 'flat' or 'intensity', got '" + s + "'");
}

/// h in degrees (any value, taken mod 360), s and v in [0, 1].
inline std::array<double, 3> hsv_to_rgb(double h, double s, double v) noexcept {
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    return {r + m, g + m, b + m};
}

/// Hue from AoP (hue = 2 * AoP, so the 180-degree AoP period spans the
/// color wheel once and 0 degrees is red), saturation from DoP.
inline std::array<double, 3> aop_dop_color(double aop_deg, double dop_value, double value) noexcept {
    return hsv_to_rgb(2.0 * aop_deg, std::clamp(dop_value, 0.0, 1.0), std::clamp(value, 0.0, 1.0));
}

inline RgbImage render_aop_dop(const StokesMaps& s, VizMode mode = VizMode::Flat) {
    const PlaneImage a = aop(s);
    const PlaneImage d = dop(s);
    const int w = s.s0.width();
    const int h = s.s0.height();
    RgbImage out{PlaneImage(w, h), PlaneImage(w, h), PlaneImage(w, h)};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = mode == VizMode::Intensity ? s.s0.samples()[i] / 2.0 : 1.0;
        const auto rgb = aop_dop_color(a.samples()[i], d.samples()[i], v);
        for (std::size_t c = 0; c < 3; ++c) out[c].samples()[i] = rgb[c];
    }
    return out;
}

/// Legend: AoP from -90 (left) to +90 (right), DoP from 1 (top) to 0 (bottom).
inline RgbImage aop_dop_legend(int width = 256, int height = 128) {
    RgbImage out{PlaneImage(width, height), PlaneImage(width, height), PlaneImage(width, height)};
    for (int y = 0; y < height; ++y) {
        const double d = height > 1 ? 1.0 - static_cast<double>(y) / (height - 1) : 1.0;
        for (int x = 0; x < width; ++x) {
            const double a = -90.0 + 180.0 * (x + 0.5) / width;
            const auto rgb = aop_dop_color(a, d, 1.0);
            for (std::size_t c = 0; c < 3; ++c) out[c](x, y) = rgb[c];
        }
    }
    return out;
}

}  // namespace polardem
