// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <string>

#include "polardem/error.hpp"
#include "polardem/image.hpp"

namespace polardem {

/// Edge-aware guide construction for monochrome polarization mosaics.
///
/// Every 3x3 neighborhood of a 2x2 four-angle mosaic holds two independent
/// intensity estimates on each side of the center pixel: one from the
/// center's own orthogonal pair (0/90 or 45/135) and one from the other
/// pair. Both equal S0 on flat, unpolarized regions. Their average is a
/// one-sided intensity estimate; their difference flags intensity or
/// polarization edges on that side. The guide is the per-pixel average of
/// the four one-sided estimates weighted by the inverse of the locally
/// smoothed edge evidence.
namespace eari {

enum class Direction { North = 0, East = 1, West = 2, South = 3 };

inline constexpr std::array<Direction, 4> kDirections{Direction::North, Direction::East,
                                                      Direction::West, Direction::South};

inline const char* to_string(Direction d) noexcept {
    switch (d) {
        case Direction::North: return "n";
        case Direction::East: return "e";
        case Direction::West: return "w";
        case Direction::South: return "s";
    }
    return "?";
}

enum class Smoothing { OneSided, Full };

inline Smoothing smoothing_from_string(const std::string& s) {
    if (s == "onesided") return Smoothing::OneSided;
    if (s == "full") return Smoothing::Full;
    throw Error(ErrorCode::InvalidParams, "smoothing must be 'onesided' or 'full', got '" + s + "'");
}

inline const char* to_string(Smoothing s) noexcept {
    return s == Smoothing::OneSided ? "onesided" : "full";
}

struct Params {
    double epsilon = 1e-32;
    Smoothing smoothing = Smoothing::OneSided;

    void validate() const {
        if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidParams, "epsilon must be positive");
    }
};

/// Directional intensity kernel; the result is half the one-sided S0 estimate.
inline Kernel2D estimate_kernel(Direction d) {
    constexpr double e = 1.0 / 8.0;
    constexpr double q = 1.0 / 4.0;
    switch (d) {
        case Direction::North: return Kernel2D::from_rows({{e, q, e}, {e, q, e}, {0, 0, 0}});
        case Direction::East: return Kernel2D::from_rows({{0, e, e}, {0, q, q}, {0, e, e}});
        case Direction::West: return Kernel2D::from_rows({{e, e, 0}, {q, q, 0}, {e, e, 0}});
        case Direction::South: return Kernel2D::from_rows({{0, 0, 0}, {e, q, e}, {e, q, e}});
    }
    throw Error(ErrorCode::InvalidParams, "bad direction");
}

/// Difference between the two one-sided S0 estimates. East is the mirror
/// image of West so that every difference kernel sums to zero.
inline Kernel2D difference_kernel(Direction d) {
    constexpr double h = 0.5;
    switch (d) {
        case Direction::North: return Kernel2D::from_rows({{-h, 1, -h}, {h, -1, h}, {0, 0, 0}});
        case Direction::East: return Kernel2D::from_rows({{0, h, -h}, {0, -1, 1}, {0, h, -h}});
        case Direction::West: return Kernel2D::from_rows({{-h, h, 0}, {1, -1, 0}, {-h, h, 0}});
        case Direction::South: return Kernel2D::from_rows({{0, 0, 0}, {h, -1, h}, {-h, 1, -h}});
    }
    throw Error(ErrorCode::InvalidParams, "bad direction");
}

/// 5x5 normalized box. OneSided covers the center line plus the two lines
/// toward `d` (15 taps); Full covers all 25.
inline Kernel2D smoothing_kernel(Direction d, Smoothing s = Smoothing::OneSided) {
    std::vector<double> taps(25, 0.0);
    int count = 0;
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            bool on = true;
            if (s == Smoothing::OneSided) {
                switch (d) {
                    case Direction::North: on = r <= 2; break;
                    case Direction::South: on = r >= 2; break;
                    case Direction::West: on = c <= 2; break;
                    case Direction::East: on = c >= 2; break;
                }
            }
            if (on) {
                taps[static_cast<std::size_t>(r * 5 + c)] = 1.0;
                ++count;
            }
        }
    }
    for (double& t : taps) t /= count;
    return Kernel2D(5, std::move(taps));
}

using PerDirection = std::array<PlaneImage, 4>;

inline PlaneImage directional_estimate(const PlaneImage& raw, Direction d) {
    return convolve(raw, estimate_kernel(d), BorderMode::Replicate);
}

inline PlaneImage directional_difference(const PlaneImage& raw, Direction d) {
    return convolve(raw, difference_kernel(d), BorderMode::Replicate);
}

inline PerDirection directional_estimates(const PlaneImage& raw) {
    PerDirection out;
    for (Direction d : kDirections) out[static_cast<std::size_t>(d)] = directional_estimate(raw, d);
    return out;
}

inline PerDirection directional_differences(const PlaneImage& raw) {
    PerDirection out;
    for (Direction d : kDirections) out[static_cast<std::size_t>(d)] = directional_difference(raw, d);
    return out;
}

/// Smooths |delta| with the direction's 5x5 kernel; never negative.
inline PlaneImage smooth_abs_difference(const PlaneImage& delta, Direction d,
                                        Smoothing s = Smoothing::OneSided) {
    PlaneImage out = convolve(abs(delta), smoothing_kernel(d, s), BorderMode::Replicate);
    // Summation can leave -0.0 or tiny negatives from rounding on all-zero input.
    for (double& v : out.samples()) v = v > 0.0 ? v : 0.0;
    return out;
}

inline PlaneImage directional_weight(const PlaneImage& smoothed, const Params& params) {
    params.validate();
    const double eps = params.epsilon;
    return map(smoothed, [eps](double v) { return 1.0 / (v + eps); });
}

/// Every intermediate plane of one direction.
struct DirectionalField {
    Direction direction = Direction::North;
    PlaneImage estimate;
    PlaneImage difference;
    PlaneImage smoothed_difference;
    PlaneImage weight;
};

inline std::array<DirectionalField, 4> directional_fields(const PlaneImage& raw, const Params& params) {
    require_nonempty(raw, "directional_fields");
    params.validate();
    std::array<DirectionalField, 4> fields;
    for (Direction d : kDirections) {
        DirectionalField& f = fields[static_cast<std::size_t>(d)];
        f.direction = d;
        f.estimate = directional_estimate(raw, d);
        f.difference = directional_difference(raw, d);
        f.smoothed_difference = smooth_abs_difference(f.difference, d, params.smoothing);
        f.weight = directional_weight(f.smoothed_difference, params);
    }
    return fields;
}

/// Per-pixel average of the directional estimates weighted by their edge weights.
inline PlaneImage fuse(const std::array<DirectionalField, 4>& fields) {
    const PlaneImage& first = fields[0].estimate;
    PlaneImage out(first.width(), first.height());
    auto dst = out.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        double num = 0.0;
        double den = 0.0;
        for (const auto& f : fields) {
            const double w = f.weight.samples()[i];
            num += w * f.estimate.samples()[i];
            den += w;
        }
        dst[i] = num / den;
    }
    return out;
}

/// Edge-aware guide for an MPFA mosaic whose 2x2 cell holds orthogonal
/// polarizers on its diagonals (0/90 and 45/135), in any arrangement.
inline PlaneImage guide_image(const PlaneImage& raw, const Params& params = {}) {
    return fuse(directional_fields(raw, params));
}

/// Non-directional reference guides. Binomial is the equal-weight mean of
/// the four directional kernels ([1 2 1; 2 4 2; 1 2 1] / 16), which yields
/// half the intensity on any flat polarized patch. Box is the uniform 3x3 mean.
enum class PlainGuide { Binomial, Box };

inline PlaneImage plain_guide(const PlaneImage& raw, PlainGuide kind = PlainGuide::Binomial) {
    if (kind == PlainGuide::Box) {
        constexpr double n = 1.0 / 9.0;
        return convolve(raw, Kernel2D::from_rows({{n, n, n}, {n, n, n}, {n, n, n}}));
    }
    constexpr double a = 1.0 / 16.0;
    constexpr double b = 2.0 / 16.0;
    constexpr double c = 4.0 / 16.0;
    return convolve(raw, Kernel2D::from_rows({{a, b, a}, {b, c, b}, {a, b, a}}));
}

}  // namespace eari
}  // namespace polardem
