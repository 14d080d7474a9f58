// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <string>

#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/lattice.hpp"
#include "polardem/mosaic.hpp"

namespace polardem {

inline PolarizationStack demosaick_mpfa_lattice(const PlaneImage& raw, const MpfaPattern& pat,
                                                LatticeKernel kernel) {
    require_nonempty(raw, "demosaick_mpfa");
    PolarizationStack out;
    for (Angle a : kAngles) {
        out[a] = interpolate_lattice(raw, angle_mask(pat, a, raw.width(), raw.height()), kernel);
    }
    return out;
}

inline PolarizationStack demosaick_mpfa_bilinear(const PlaneImage& raw, const MpfaPattern& pat) {
    return demosaick_mpfa_lattice(raw, pat, LatticeKernel::Bilinear);
}

/// Catmull-Rom (a = -0.5) separable cubic on each orientation lattice.
inline PolarizationStack demosaick_mpfa_bicubic(const PlaneImage& raw, const MpfaPattern& pat) {
    return demosaick_mpfa_lattice(raw, pat, LatticeKernel::CatmullRom);
}

/// Each of the 12 (color, angle) lattices interpolated on its own. The G
/// lattices of a quad-Bayer tile are staggered; interpolate_lattice runs
/// rows first through each row's knots, then columns.
inline ColorPolarizationStack demosaick_cpfa_bilinear12(const PlaneImage& raw, const CpfaPattern& pat) {
    require_nonempty(raw, "demosaick_cpfa_bilinear12");
    ColorPolarizationStack out;
    for (Color c : kColors)
        for (Angle a : kAngles)
            out.plane(c, a) = interpolate_lattice(
                raw, color_angle_mask(pat, c, a, raw.width(), raw.height()), LatticeKernel::Bilinear);
    return out;
}

enum class BayerMethod { Bilinear, GradientCorrected };

inline BayerMethod bayer_method_from_string(const std::string& s) {
    if (s == "bilinear") return BayerMethod::Bilinear;
    if (s == "gradient" || s == "gradient_corrected") return BayerMethod::GradientCorrected;
    throw Error(ErrorCode::InvalidParams, "color method must be 'bilinear' or 'gradient', got '" + s + "'");
}

inline const char* to_string(BayerMethod m) noexcept {
    return m == BayerMethod::Bilinear ? "bilinear" : "gradient";
}

namespace detail {

/// Normalized convolution of one color's samples; exact at its own sites.
inline PlaneImage bayer_bilinear_channel(const PlaneImage& raw, const BayerPattern& pat, Color c) {
    const SampleMask mask = color_mask(pat, c, raw.width(), raw.height());
    const Kernel2D kernel =
        c == Color::G ? Kernel2D::from_rows({{0, 1, 0}, {1, 4, 1}, {0, 1, 0}})
                      : Kernel2D::from_rows({{1, 2, 1}, {2, 4, 2}, {1, 2, 1}});
    const PlaneImage num = convolve(mask.apply(raw), kernel);
    const PlaneImage den = convolve(mask.as_image(), kernel);
    PlaneImage out(raw.width(), raw.height());
    PlaneImage fallback;
    for (int y = 0; y < raw.height(); ++y) {
        for (int x = 0; x < raw.width(); ++x) {
            if (mask(x, y)) {
                out(x, y) = raw(x, y);
            } else if (den(x, y) > 0.0) {
                out(x, y) = num(x, y) / den(x, y);
            } else {
                // Only on images too small to hold a full period.
                if (fallback.empty()) fallback = interpolate_lattice(raw, mask);
                out(x, y) = fallback(x, y);
            }
        }
    }
    return out;
}

/// Gradient-corrected linear interpolation kernels (Malvar, He and Cutler),
/// taps in units of 1/8.
struct GradientKernels {
    Kernel2D green_at_rb = Kernel2D::from_rows({{0, 0, -1, 0, 0},
                                                {0, 0, 2, 0, 0},
                                                {-1, 2, 4, 2, -1},
                                                {0, 0, 2, 0, 0},
                                                {0, 0, -1, 0, 0}})
                               .scaled(1.0 / 8.0);
    // Target color lies left/right of the green site.
    Kernel2D rb_at_green_row = Kernel2D::from_rows({{0, 0, 0.5, 0, 0},
                                                    {0, -1, 0, -1, 0},
                                                    {-1, 4, 5, 4, -1},
                                                    {0, -1, 0, -1, 0},
                                                    {0, 0, 0.5, 0, 0}})
                                   .scaled(1.0 / 8.0);
    // Target color lies above/below the green site.
    Kernel2D rb_at_green_col = Kernel2D::from_rows({{0, 0, -1, 0, 0},
                                                    {0, -1, 4, -1, 0},
                                                    {0.5, 0, 5, 0, 0.5},
                                                    {0, -1, 4, -1, 0},
                                                    {0, 0, -1, 0, 0}})
                                   .scaled(1.0 / 8.0);
    Kernel2D rb_at_br = Kernel2D::from_rows({{0, 0, -1.5, 0, 0},
                                             {0, 2, 0, 2, 0},
                                             {-1.5, 0, 6, 0, -1.5},
                                             {0, 2, 0, 2, 0},
                                             {0, 0, -1.5, 0, 0}})
                            .scaled(1.0 / 8.0);
};

inline double apply_at(const PlaneImage& img, const Kernel2D& k, int x, int y) noexcept {
    double s = 0.0;
    const int a = k.anchor();
    for (int r = 0; r < k.size(); ++r)
        for (int c = 0; c < k.size(); ++c) {
            const double t = k.tap(r, c);
            if (t != 0.0) s += t * img(x + c - a, y + r - a);
        }
    return s;
}

}  // namespace detail

/// Color demosaicking of a Bayer mosaic. Sampled values are kept at their
/// own sites. The gradient-corrected method falls back to bilinear within
/// two pixels of the border.
inline RgbImage demosaick_bayer(const PlaneImage& raw, const BayerPattern& pat,
                                BayerMethod method = BayerMethod::GradientCorrected) {
    require_nonempty(raw, "demosaick_bayer");
    RgbImage out;
    for (Color c : kColors) out[static_cast<std::size_t>(index_of(c))] = detail::bayer_bilinear_channel(raw, pat, c);
    if (method == BayerMethod::Bilinear) return out;

    static const detail::GradientKernels kernels;
    const int w = raw.width();
    const int h = raw.height();
    for (int y = 2; y < h - 2; ++y) {
        for (int x = 2; x < w - 2; ++x) {
            const Color site = pat.color_at(x, y);
            for (Color target : kColors) {
                if (target == site) continue;
                const Kernel2D* k;
                if (target == Color::G) {
                    k = &kernels.green_at_rb;
                } else if (site == Color::G) {
                    k = pat.color_at(x + 1, y) == target ? &kernels.rb_at_green_row
                                                         : &kernels.rb_at_green_col;
                } else {
                    k = &kernels.rb_at_br;
                }
                out[static_cast<std::size_t>(index_of(target))](x, y) = detail::apply_at(raw, *k, x, y);
            }
        }
    }
    return out;
}

}  // namespace polardem
