// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <string>

#include "polardem/baselines.hpp"
#include "polardem/eari.hpp"
#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/mosaic.hpp"
#include "polardem/ri.hpp"

namespace polardem {

enum class MpfaMethod { Bilinear, Bicubic, Eari, PlainRi };

inline MpfaMethod mpfa_method_from_string(const std::string& s) {
    if (s == "bilinear") return MpfaMethod::Bilinear;
    if (s == "bicubic") return MpfaMethod::Bicubic;
    if (s == "eari") return MpfaMethod::Eari;
    if (s == "nonedge" || s == "plain-ri") return MpfaMethod::PlainRi;
    throw Error(ErrorCode::InvalidParams,
                "MPFA method must be bilinear, bicubic, eari or nonedge, got '" + s + "'");
}

inline const char* to_string(MpfaMethod m) noexcept {
    switch (m) {
        case MpfaMethod::Bilinear: return "bilinear";
        case MpfaMethod::Bicubic: return "bicubic";
        case MpfaMethod::Eari: return "eari";
        case MpfaMethod::PlainRi: return "nonedge";
    }
    return "?";
}

struct MpfaOptions {
    MpfaMethod method = MpfaMethod::Eari;
    eari::Params eari;
    GuidedFilterParams gf;
    eari::PlainGuide plain_guide = eari::PlainGuide::Binomial;
};

inline PolarizationStack demosaick_mpfa(const PlaneImage& raw, const MpfaPattern& pat,
                                        const MpfaOptions& opts = {}) {
    switch (opts.method) {
        case MpfaMethod::Bilinear: return demosaick_mpfa_bilinear(raw, pat);
        case MpfaMethod::Bicubic: return demosaick_mpfa_bicubic(raw, pat);
        case MpfaMethod::Eari: return demosaick_mpfa_eari(raw, pat, opts.eari, opts.gf);
        case MpfaMethod::PlainRi: return demosaick_mpfa_plain_ri(raw, pat, opts.plain_guide, opts.gf);
    }
    throw Error(ErrorCode::InvalidParams, "unknown MPFA method");
}

struct BayerMosaic {
    PlaneImage mosaic;
    BayerPattern pattern;
};

inline void require_even(const PlaneImage& raw, const char* what) {
    require_nonempty(raw, what);
    if (raw.width() % 2 != 0 || raw.height() % 2 != 0) {
        throw Error(ErrorCode::OddDimensions,
                    std::string(what) + ": CPFA data needs even width and height, got " +
                        std::to_string(raw.width()) + "x" + std::to_string(raw.height()));
    }
}

/// Half-resolution Bayer mosaic of one polarizer angle: pixel (i, j) is the
/// `angle` site of 2x2 block (i, j).
inline BayerMosaic cpfa_extract_bayer(const PlaneImage& raw, const CpfaPattern& pat, Angle angle) {
    require_even(raw, "cpfa_extract_bayer");
    const auto [dx, dy] = pat.angles().offset_of(angle);
    PlaneImage out(raw.width() / 2, raw.height() / 2);
    for (int j = 0; j < out.height(); ++j)
        for (int i = 0; i < out.width(); ++i) out(i, j) = raw(2 * i + dx, 2 * j + dy);
    return {std::move(out), pat.blocks()};
}

/// Places each demosaicked half-resolution value back at the full-resolution
/// site it was measured from. Result: one dense MPFA mosaic per color, laid
/// out with the pattern's intra-block angle order.
inline std::array<PlaneImage, 3> cpfa_scatter_to_mpfa(const std::array<RgbImage, 4>& per_angle,
                                                      const CpfaPattern& pat) {
    const PlaneImage& ref = per_angle[0][0];
    require_nonempty(ref, "cpfa_scatter_to_mpfa");
    for (const RgbImage& rgb : per_angle)
        for (const PlaneImage& p : rgb) require_same_shape(ref, p, "cpfa_scatter_to_mpfa");
    const int w = ref.width() * 2;
    const int h = ref.height() * 2;
    std::array<PlaneImage, 3> out{PlaneImage(w, h), PlaneImage(w, h), PlaneImage(w, h)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const RgbImage& src = per_angle[static_cast<std::size_t>(index_of(pat.angle_at(x, y)))];
            for (std::size_t c = 0; c < 3; ++c) out[c](x, y) = src[c](x / 2, y / 2);
        }
    }
    return out;
}

/// Per-color MPFA mosaics from raw CPFA data: split by angle, color
/// demosaick each half-resolution Bayer mosaic, scatter back.
inline std::array<PlaneImage, 3> cpfa_to_mpfa(const PlaneImage& raw, const CpfaPattern& pat,
                                              BayerMethod color_method) {
    std::array<RgbImage, 4> per_angle;
    for (Angle a : kAngles) {
        const BayerMosaic bm = cpfa_extract_bayer(raw, pat, a);
        per_angle[static_cast<std::size_t>(index_of(a))] = demosaick_bayer(bm.mosaic, bm.pattern, color_method);
    }
    return cpfa_scatter_to_mpfa(per_angle, pat);
}

inline ColorPolarizationStack demosaick_cpfa(const PlaneImage& raw, const CpfaPattern& pat,
                                             BayerMethod color_method = BayerMethod::GradientCorrected,
                                             const MpfaOptions& mpfa = {}) {
    const std::array<PlaneImage, 3> mosaics = cpfa_to_mpfa(raw, pat, color_method);
    ColorPolarizationStack out;
    for (Color c : kColors) out[c] = demosaick_mpfa(mosaics[static_cast<std::size_t>(index_of(c))], pat.angles(), mpfa);
    return out;
}

}  // namespace polardem
