// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/mosaic.hpp"
#include "polardem/polar.hpp"

namespace polardem {

enum class SceneKind { Constant, Ramp, Step, Disk, Sinusoid };

inline SceneKind scene_kind_from_string(const std::string& s) {
    if (s == "constant") return SceneKind::Constant;
    if (s == "ramp") return SceneKind::Ramp;
    if (s == "step") return SceneKind::Step;
    if (s == "disk") return SceneKind::Disk;
    if (s == "sinusoid") return SceneKind::Sinusoid;
    throw Error(ErrorCode::InvalidParams, "unknown scene kind '" + s + "'");
}

inline const char* to_string(SceneKind k) noexcept {
    switch (k) {
        case SceneKind::Constant: return "constant";
        case SceneKind::Ramp: return "ramp";
        case SceneKind::Step: return "step";
        case SceneKind::Disk: return "disk";
        case SceneKind::Sinusoid: return "sinusoid";
    }
    return "?";
}

struct Stokes {
    double s0 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;

    static Stokes from_polar(double s0, double dop, double aop_deg) {
        const double t = 2.0 * aop_deg * std::numbers::pi / 180.0;
        return {s0, s0 * dop * std::cos(t), s0 * dop * std::sin(t)};
    }
};

/// Analytic scene description. Region `a` is the background (left of a
/// step, outside a disk, start of a ramp); region `b` the other side.
/// Colour scenes multiply each region's Stokes vector by its RGB tint.
struct SynthParams {
    SceneKind kind = SceneKind::Constant;
    int width = 64;
    int height = 64;
    Stokes a;
    Stokes b;
    std::array<double, 3> tint_a{1.0, 1.0, 1.0};
    std::array<double, 3> tint_b{1.0, 1.0, 1.0};
    // Step: b where (x + 0.5 - edge_x) cos(angle) + (y + 0.5 - edge_y) sin(angle) >= 0.
    // With angle 0 and integer edge_x = c the edge lies between columns c-1 and c.
    double edge_x = 32.0;
    double edge_y = 32.0;
    double edge_angle_deg = 0.0;
    double radius = 16.0;       // disk, centered on (edge_x, edge_y)
    double frequency = 0.05;    // sinusoid, cycles per pixel along edge_angle_deg
    double texture = 0.0;       // relative seeded S0 modulation amplitude

    void validate() const {
        if (width < 1 || height < 1) throw Error(ErrorCode::InvalidParams, "scene size must be positive");
        if (texture < 0.0 || texture >= 1.0) throw Error(ErrorCode::InvalidParams, "texture must be in [0, 1)");
        if (radius < 0.0) throw Error(ErrorCode::InvalidParams, "radius must be non-negative");
    }
};

namespace detail {

/// Uniform in [0, 1) from the top 53 bits; fixed across standard libraries.
inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
}

/// Blend factor toward region b at pixel (x, y), in [0, 1].
inline double region_b_weight(const SynthParams& p, int x, int y) {
    const double cx = x + 0.5;
    const double cy = y + 0.5;
    switch (p.kind) {
        case SceneKind::Constant: return 0.0;
        case SceneKind::Ramp: return p.width > 1 ? static_cast<double>(x) / (p.width - 1) : 0.0;
        case SceneKind::Step: {
            const double t = p.edge_angle_deg * std::numbers::pi / 180.0;
            return (cx - p.edge_x) * std::cos(t) + (cy - p.edge_y) * std::sin(t) >= 0.0 ? 1.0 : 0.0;
        }
        case SceneKind::Disk: {
            const double dx = cx - p.edge_x;
            const double dy = cy - p.edge_y;
            return dx * dx + dy * dy <= p.radius * p.radius ? 1.0 : 0.0;
        }
        case SceneKind::Sinusoid: {
            const double t = p.edge_angle_deg * std::numbers::pi / 180.0;
            const double u = x * std::cos(t) + y * std::sin(t);
            return 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * p.frequency * u);
        }
    }
    return 0.0;
}

/// Seeded smooth texture in [-1, 1]: mean of three random plane waves.
struct Texture {
    std::array<double, 3> fx{}, fy{}, phase{};

    explicit Texture(std::uint64_t seed) {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        for (std::size_t k = 0; k < 3; ++k) {
            const double f = uniform(rng, 0.02, 0.15);
            const double th = uniform(rng, 0.0, std::numbers::pi);
            fx[k] = f * std::cos(th);
            fy[k] = f * std::sin(th);
            phase[k] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        }
    }

    double operator()(int x, int y) const {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            s += std::sin(2.0 * std::numbers::pi * (fx[k] * x + fy[k] * y) + phase[k]);
        return s / 3.0;
    }
};

inline StokesMaps synth_stokes(const SynthParams& p, std::uint64_t seed, std::size_t channel, bool color) {
    p.validate();
    StokesMaps s{PlaneImage(p.width, p.height), PlaneImage(p.width, p.height),
                 PlaneImage(p.width, p.height)};
    const Texture tex(seed);
    const double ta = color ? p.tint_a[channel] : 1.0;
    const double tb = color ? p.tint_b[channel] : 1.0;
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            const double wb = region_b_weight(p, x, y);
            const double m = p.texture > 0.0 ? 1.0 + p.texture * tex(x, y) : 1.0;
            const double fa = (1.0 - wb) * ta * m;
            const double fb = wb * tb * m;
            s.s0(x, y) = fa * p.a.s0 + fb * p.b.s0;
            s.s1(x, y) = fa * p.a.s1 + fb * p.b.s1;
            s.s2(x, y) = fa * p.a.s2 + fb * p.b.s2;
        }
    }
    return s;
}

}  // namespace detail

/// Stokes-consistent monochrome stack: I_theta = (S0 + S1 cos 2theta + S2 sin 2theta) / 2.
/// The seed only drives the texture; equal inputs give bit-identical stacks.
inline PolarizationStack synth_scene(const SynthParams& p, std::uint64_t seed = 0) {
    return stack_from_stokes(detail::synth_stokes(p, seed, 1, false));
}

inline ColorPolarizationStack synth_color_scene(const SynthParams& p, std::uint64_t seed = 0) {
    ColorPolarizationStack out;
    for (Color c : kColors)
        out[c] = stack_from_stokes(detail::synth_stokes(p, seed, static_cast<std::size_t>(index_of(c)), true));
    return out;
}

/// Analytic Stokes maps of the monochrome scene.
inline StokesMaps synth_stokes(const SynthParams& p, std::uint64_t seed = 0) {
    return detail::synth_stokes(p, seed, 1, false);
}

/// Draws a scene of `kind` whose two regions differ in intensity, degree
/// and angle of polarization. Every generated intensity stays within [0, 1].
inline SynthParams random_synth_params(SceneKind kind, int width, int height, std::uint64_t seed,
                                       double texture = 0.15) {
    std::mt19937_64 rng(seed);
    using detail::uniform;
    SynthParams p;
    p.kind = kind;
    p.width = width;
    p.height = height;
    p.texture = texture;
    // Worst case intensity s0 (1 + dop) (1 + texture) / 2 <= 1.
    auto draw_state = [&](double aop_deg) {
        const double dop = uniform(rng, 0.05, 0.7);
        const double s0_max = 2.0 / ((1.0 + dop) * (1.0 + texture));
        const double s0 = uniform(rng, 0.15, 0.95) * s0_max;
        return Stokes::from_polar(s0, dop, aop_deg);
    };
    const double aop_a = uniform(rng, -90.0, 90.0);
    const double aop_b = aop_a + uniform(rng, 30.0, 150.0);
    p.a = draw_state(aop_a);
    p.b = draw_state(aop_b);
    for (std::size_t c = 0; c < 3; ++c) {
        p.tint_a[c] = uniform(rng, 0.35, 1.0);
        p.tint_b[c] = uniform(rng, 0.35, 1.0);
    }
    p.edge_x = uniform(rng, 0.3, 0.7) * width;
    p.edge_y = uniform(rng, 0.3, 0.7) * height;
    p.edge_angle_deg = uniform(rng, 0.0, 180.0);
    p.radius = uniform(rng, 0.15, 0.35) * std::min(width, height);
    p.frequency = uniform(rng, 0.03, 0.12);
    return p;
}

}  // namespace polardem
