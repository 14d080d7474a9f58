// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <optional>

#include "polardem/eari.hpp"
#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/lattice.hpp"
#include "polardem/mosaic.hpp"

namespace polardem {

struct GuidedFilterParams {
    int radius = 2;
    double eps = 1e-4;

    void validate() const {
        if (radius < 1) throw Error(ErrorCode::InvalidParams, "guided filter radius must be >= 1");
        if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidParams, "guided filter eps must be >= 0");
    }
};

/// One orientation's samples; values off the mask are ignored.
struct SparsePlane {
    PlaneImage values;
    SampleMask mask;
};

/// Guided filter with window statistics restricted to masked pixels.
///
/// Per window: a = cov(I, p) / (var(I) + eps), b = mean(p) - a * mean(I),
/// over the masked pixels of the border-truncated (2r+1)^2 window. Windows
/// with one valid pixel use a = 0, b = that value; windows with none use the
/// mean of all valid samples. The output is mean(a) * I + mean(b), both
/// means taken over every window covering the pixel.
inline PlaneImage guided_filter(const PlaneImage& p, const PlaneImage& guide,
                                const std::optional<SampleMask>& mask,
                                const GuidedFilterParams& params) {
    require_nonempty(p, "guided_filter");
    require_same_shape(p, guide, "guided_filter");
    params.validate();
    const int w = p.width();
    const int h = p.height();
    const int r = params.radius;

    PlaneImage m = mask ? mask->as_image() : PlaneImage(w, h, 1.0);
    if (mask && (mask->width() != w || mask->height() != h)) {
        throw Error(ErrorCode::DimensionMismatch, "guided_filter: mask size");
    }
    const std::size_t n = p.size();
    PlaneImage mi(w, h), mp(w, h), mii(w, h), mip(w, h);
    double valid_sum = 0.0;
    double valid_count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mk = m.samples()[i];
        const double gi = guide.samples()[i];
        const double pi = mk != 0.0 ? p.samples()[i] : 0.0;
        mi.samples()[i] = mk * gi;
        mp.samples()[i] = pi;
        mii.samples()[i] = mk * gi * gi;
        mip.samples()[i] = mk * gi * pi;
        valid_sum += pi;
        valid_count += mk;
    }
    if (valid_count == 0.0) throw Error(ErrorCode::EmptyMask, "guided_filter: mask has no samples");
    const double global_mean = valid_sum / valid_count;

    const PlaneImage cnt = box_sum(m, r);
    const PlaneImage s_i = box_sum(mi, r);
    const PlaneImage s_p = box_sum(mp, r);
    const PlaneImage s_ii = box_sum(mii, r);
    const PlaneImage s_ip = box_sum(mip, r);

    PlaneImage a(w, h), b(w, h);
    for (std::size_t i = 0; i < n; ++i) {
        // Counts are sums of 0/1 and stay exact.
        const double c = cnt.samples()[i];
        if (c < 0.5) {
            a.samples()[i] = 0.0;
            b.samples()[i] = global_mean;
            continue;
        }
        const double mean_i = s_i.samples()[i] / c;
        const double mean_p = s_p.samples()[i] / c;
        if (c < 1.5) {
            a.samples()[i] = 0.0;
            b.samples()[i] = mean_p;
            continue;
        }
        const double var = std::max(0.0, s_ii.samples()[i] / c - mean_i * mean_i);
        const double cov = s_ip.samples()[i] / c - mean_i * mean_p;
        const double denom = var + params.eps;
        const double ak = denom > 1e-14 ? cov / denom : 0.0;
        a.samples()[i] = ak;
        b.samples()[i] = mean_p - ak * mean_i;
    }
    const PlaneImage mean_a = box_mean(a, r);
    const PlaneImage mean_b = box_mean(b, r);
    PlaneImage q(w, h);
    for (std::size_t i = 0; i < n; ++i) {
        q.samples()[i] = mean_a.samples()[i] * guide.samples()[i] + mean_b.samples()[i];
    }
    return q;
}

/// Guided-filter tentative estimate plus bilinearly interpolated residuals.
/// Sampled pixels come back unchanged.
inline PlaneImage residual_interpolate(const SparsePlane& sparse, const PlaneImage& guide,
                                       const GuidedFilterParams& params) {
    require_same_shape(sparse.values, guide, "residual_interpolate");
    if (sparse.mask.count() == 0) {
        throw Error(ErrorCode::EmptyMask, "residual_interpolate: no samples");
    }
    PlaneImage tentative = guided_filter(sparse.values, guide, sparse.mask, params);
    PlaneImage residual(guide.width(), guide.height());
    for (int y = 0; y < guide.height(); ++y)
        for (int x = 0; x < guide.width(); ++x)
            if (sparse.mask(x, y)) residual(x, y) = sparse.values(x, y) - tentative(x, y);
    const PlaneImage filled = interpolate_lattice(residual, sparse.mask, LatticeKernel::Bilinear);
    for (int y = 0; y < guide.height(); ++y)
        for (int x = 0; x < guide.width(); ++x)
            tentative(x, y) = sparse.mask(x, y) ? sparse.values(x, y) : tentative(x, y) + filled(x, y);
    return tentative;
}

/// Residual interpolation of all four orientations against one guide.
inline PolarizationStack demosaick_mpfa_ri(const PlaneImage& raw, const MpfaPattern& pat,
                                           const PlaneImage& guide, const GuidedFilterParams& gf) {
    require_nonempty(raw, "demosaick_mpfa_ri");
    require_same_shape(raw, guide, "demosaick_mpfa_ri");
    PolarizationStack out;
    for (Angle a : kAngles) {
        SparsePlane sparse{raw, angle_mask(pat, a, raw.width(), raw.height())};
        out[a] = residual_interpolate(sparse, guide, gf);
    }
    return out;
}

inline PolarizationStack demosaick_mpfa_eari(const PlaneImage& raw, const MpfaPattern& pat,
                                             const eari::Params& params = {},
                                             const GuidedFilterParams& gf = {}) {
    return demosaick_mpfa_ri(raw, pat, eari::guide_image(raw, params), gf);
}

/// Same pipeline with a non-directional guide.
inline PolarizationStack demosaick_mpfa_plain_ri(const PlaneImage& raw, const MpfaPattern& pat,
                                                 eari::PlainGuide kind = eari::PlainGuide::Binomial,
                                                 const GuidedFilterParams& gf = {}) {
    return demosaick_mpfa_ri(raw, pat, eari::plain_guide(raw, kind), gf);
}

}  // namespace polardem
