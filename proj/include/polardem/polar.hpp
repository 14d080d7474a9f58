// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>

#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/mosaic.hpp"

namespace polardem {

/// Linear Stokes parameters. s0 lies in [0, 2] for inputs in [0, 1].
struct StokesMaps {
    PlaneImage s0;
    PlaneImage s1;
    PlaneImage s2;
};

/// s0 averages the two orthogonal-pair sums; s1 = I0 - I90, s2 = I45 - I135.
inline StokesMaps stokes_from_stack(const PolarizationStack& st) {
    st.validate("stokes_from_stack");
    const PlaneImage& i0 = st[Angle::A0];
    const PlaneImage& i45 = st[Angle::A45];
    const PlaneImage& i90 = st[Angle::A90];
    const PlaneImage& i135 = st[Angle::A135];
    StokesMaps s{PlaneImage(st.width(), st.height()), PlaneImage(st.width(), st.height()),
                 PlaneImage(st.width(), st.height())};
    for (std::size_t i = 0; i < i0.size(); ++i) {
        const double a = i0.samples()[i], b = i45.samples()[i], c = i90.samples()[i],
                     d = i135.samples()[i];
        s.s0.samples()[i] = 0.5 * ((a + c) + (b + d));
        s.s1.samples()[i] = a - c;
        s.s2.samples()[i] = b - d;
    }
    return s;
}

/// (I0 + I90) - (I45 + I135); zero for a physically consistent stack.
inline PlaneImage stokes_inconsistency(const PolarizationStack& st) {
    st.validate("stokes_inconsistency");
    PlaneImage out(st.width(), st.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples()[i] = (st[Angle::A0].samples()[i] + st[Angle::A90].samples()[i]) -
                           (st[Angle::A45].samples()[i] + st[Angle::A135].samples()[i]);
    }
    return out;
}

/// Malus-law intensity behind an ideal polarizer at `deg` degrees.
inline double polarizer_intensity(double s0, double s1, double s2, double deg) noexcept {
    const double t = 2.0 * deg * std::numbers::pi / 180.0;
    return 0.5 * (s0 + s1 * std::cos(t) + s2 * std::sin(t));
}

inline PolarizationStack stack_from_stokes(const StokesMaps& s) {
    require_same_shape(s.s0, s.s1, "stack_from_stokes");
    require_same_shape(s.s0, s.s2, "stack_from_stokes");
    PolarizationStack st;
    for (Angle a : kAngles) {
        PlaneImage p(s.s0.width(), s.s0.height());
        for (std::size_t i = 0; i < p.size(); ++i) {
            // Exact at the four sampled angles: cos/sin of 0, 90, 180, 270 degrees.
            const double s0 = s.s0.samples()[i], s1 = s.s1.samples()[i], s2 = s.s2.samples()[i];
            switch (a) {
                case Angle::A0: p.samples()[i] = 0.5 * (s0 + s1); break;
                case Angle::A45: p.samples()[i] = 0.5 * (s0 + s2); break;
                case Angle::A90: p.samples()[i] = 0.5 * (s0 - s1); break;
                case Angle::A135: p.samples()[i] = 0.5 * (s0 - s2); break;
            }
        }
        st[a] = std::move(p);
    }
    return st;
}

inline constexpr double kDopFloor = 1e-6;

/// sqrt(s1^2 + s2^2) / max(s0, 1e-6), clamped to [0, 1] unless `clamp` is false.
inline PlaneImage dop(const StokesMaps& s, bool clamp = true) {
    require_same_shape(s.s0, s.s1, "dop");
    require_same_shape(s.s0, s.s2, "dop");
    PlaneImage out(s.s0.width(), s.s0.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = std::hypot(s.s1.samples()[i], s.s2.samples()[i]) /
                         std::max(s.s0.samples()[i], kDopFloor);
        out.samples()[i] = clamp ? std::clamp(v, 0.0, 1.0) : v;
    }
    return out;
}

/// Maps any angle in degrees into (-90, 90].
inline double wrap_half_turn(double deg) noexcept {
    double r = std::fmod(deg, 180.0);
    if (r > 90.0) r -= 180.0;
    if (r <= -90.0) r += 180.0;
    return r;
}

/// Angle of polarization 0.5 * atan2(s2, s1) in degrees, range (-90, 90].
/// atan2(0, 0) = 0, so unpolarized pixels report 0.
inline double aop_degrees(double s1, double s2) noexcept {
    return wrap_half_turn(0.5 * std::atan2(s2, s1) * 180.0 / std::numbers::pi);
}

inline PlaneImage aop(const StokesMaps& s) {
    require_same_shape(s.s1, s.s2, "aop");
    PlaneImage out(s.s1.width(), s.s1.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.samples()[i] = aop_degrees(s.s1.samples()[i], s.s2.samples()[i]);
    return out;
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double mse(const PlaneImage& ref, const PlaneImage& test) {
    require_same_shape(ref, test, "mse");
    double acc = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = test.samples()[i] - ref.samples()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(ref.size());
}

inline double psnr_from_mse(double m, double peak) noexcept {
    if (m == 0.0) return kInfinity;
    return 10.0 * std::log10(peak * peak / m);
}

/// 10 log10(peak^2 / MSE); +inf when the images are identical.
inline double psnr(const PlaneImage& ref, const PlaneImage& test, double peak = 1.0) {
    return psnr_from_mse(mse(ref, test), peak);
}

/// PSNR with the MSE pooled over the three channels.
inline double cpsnr(const RgbImage& ref, const RgbImage& test, double peak = 1.0) {
    double m = 0.0;
    for (std::size_t c = 0; c < 3; ++c) m += mse(ref[c], test[c]);
    return psnr_from_mse(m / 3.0, peak);
}

/// RMSE of AoP differences wrapped into (-90, 90] degrees.
inline double angle_rmse(const PlaneImage& aop_ref, const PlaneImage& aop_test) {
    require_same_shape(aop_ref, aop_test, "angle_rmse");
    double acc = 0.0;
    for (std::size_t i = 0; i < aop_ref.size(); ++i) {
        const double d = wrap_half_turn(aop_test.samples()[i] - aop_ref.samples()[i]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(aop_ref.size()));
}

/// Columns of one results row: PSNR (or CPSNR) for I0, I45, I90, I135, S0,
/// S1, S2, DoP, then the AoP angle error in degrees.
inline constexpr std::array<std::string_view, 9> kMetricColumns{
    "I0", "I45", "I90", "I135", "S0", "S1", "S2", "DoP", "AoP"};

/// Peaks used for the PSNR columns. S0 spans [0, 2].
inline constexpr std::array<double, 8> kPsnrPeaks{1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0};

using MetricsRow = std::array<double, 9>;

inline MetricsRow mpfa_metrics(const PolarizationStack& truth, const PolarizationStack& est) {
    truth.validate("mpfa_metrics");
    est.validate("mpfa_metrics");
    require_same_shape(truth.planes[0], est.planes[0], "mpfa_metrics");
    const StokesMaps st = stokes_from_stack(truth);
    const StokesMaps se = stokes_from_stack(est);
    MetricsRow row{};
    for (Angle a : kAngles) row[static_cast<std::size_t>(index_of(a))] = psnr(truth[a], est[a], kPsnrPeaks[static_cast<std::size_t>(index_of(a))]);
    row[4] = psnr(st.s0, se.s0, kPsnrPeaks[4]);
    row[5] = psnr(st.s1, se.s1, kPsnrPeaks[5]);
    row[6] = psnr(st.s2, se.s2, kPsnrPeaks[6]);
    row[7] = psnr(dop(st), dop(se), kPsnrPeaks[7]);
    row[8] = angle_rmse(aop(st), aop(se));
    return row;
}

/// CPSNR per column; the AoP error is the mean of the per-channel errors.
inline MetricsRow cpfa_metrics(const ColorPolarizationStack& truth, const ColorPolarizationStack& est) {
    truth.validate("cpfa_metrics");
    est.validate("cpfa_metrics");
    require_same_shape(truth.channels[0].planes[0], est.channels[0].planes[0], "cpfa_metrics");
    std::array<StokesMaps, 3> st, se;
    for (std::size_t c = 0; c < 3; ++c) {
        st[c] = stokes_from_stack(truth.channels[c]);
        se[c] = stokes_from_stack(est.channels[c]);
    }
    auto rgb = [](auto&& pick, const auto& src) {
        return RgbImage{pick(src[0]), pick(src[1]), pick(src[2])};
    };
    MetricsRow row{};
    for (Angle a : kAngles) {
        auto pick = [a](const PolarizationStack& s) { return s[a]; };
        const std::size_t k = static_cast<std::size_t>(index_of(a));
        row[k] = cpsnr(rgb(pick, truth.channels), rgb(pick, est.channels), kPsnrPeaks[k]);
    }
    row[4] = cpsnr(rgb([](const StokesMaps& s) { return s.s0; }, st),
                   rgb([](const StokesMaps& s) { return s.s0; }, se), kPsnrPeaks[4]);
    row[5] = cpsnr(rgb([](const StokesMaps& s) { return s.s1; }, st),
                   rgb([](const StokesMaps& s) { return s.s1; }, se), kPsnrPeaks[5]);
    row[6] = cpsnr(rgb([](const StokesMaps& s) { return s.s2; }, st),
                   rgb([](const StokesMaps& s) { return s.s2; }, se), kPsnrPeaks[6]);
    row[7] = cpsnr(rgb([](const StokesMaps& s) { return dop(s); }, st),
                   rgb([](const StokesMaps& s) { return dop(s); }, se), kPsnrPeaks[7]);
    double ang = 0.0;
    for (std::size_t c = 0; c < 3; ++c) ang += angle_rmse(aop(st[c]), aop(se[c]));
    row[8] = ang / 3.0;
    return row;
}

}  // namespace polardem
