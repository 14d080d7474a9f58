// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "polardem/error.hpp"
#include "polardem/image.hpp"
#include "polardem/mosaic.hpp"

namespace polardem {

enum class LatticeKernel { Bilinear, CatmullRom };

namespace detail {

inline double catmull_rom(double p0, double p1, double p2, double p3, double t) noexcept {
    // a = -0.5 cubic convolution in Horner form.
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

/// Fills out[0..n) from knots at increasing positions `pos` with values
/// `val`. Constant beyond the outermost knots.
inline void interpolate_line(const std::vector<int>& pos, const std::vector<double>& val, int n,
                             LatticeKernel kernel, double* out, std::ptrdiff_t stride) {
    const int m = static_cast<int>(pos.size());
    int k = 0;
    for (int i = 0; i < n; ++i) {
        double v;
        if (i <= pos[0]) {
            v = val[0];
        } else if (i >= pos[m - 1]) {
            v = val[m - 1];
        } else {
            while (pos[k + 1] < i) ++k;
            if (pos[k + 1] == i) {
                v = val[k + 1];
            } else {
                const double t = static_cast<double>(i - pos[k]) / (pos[k + 1] - pos[k]);
                if (kernel == LatticeKernel::Bilinear) {
                    v = val[k] + t * (val[k + 1] - val[k]);
                } else {
                    const double p0 = val[k > 0 ? k - 1 : 0];
                    const double p3 = val[k + 2 < m ? k + 2 : m - 1];
                    v = catmull_rom(p0, val[k], val[k + 1], p3, t);
                }
            }
        }
        out[i * stride] = v;
    }
}

}  // namespace detail

/// Fills every pixel from the samples under `mask`: first along each row
/// that holds samples, then along every column through those rows. Sample
/// values are reproduced exactly. On rectangular lattices this is ordinary
/// separable interpolation; on staggered lattices (quad-Bayer G sites) the
/// row pass runs through each row's own knots.
inline PlaneImage interpolate_lattice(const PlaneImage& values, const SampleMask& mask,
                                      LatticeKernel kernel = LatticeKernel::Bilinear) {
    require_nonempty(values, "interpolate_lattice");
    const int w = values.width();
    const int h = values.height();
    if (mask.width() != w || mask.height() != h) {
        throw Error(ErrorCode::DimensionMismatch, "interpolate_lattice: mask size");
    }
    PlaneImage rows(w, h);
    std::vector<int> knot_rows;
    std::vector<int> pos;
    std::vector<double> val;
    for (int y = 0; y < h; ++y) {
        pos.clear();
        val.clear();
        for (int x = 0; x < w; ++x)
            if (mask(x, y)) {
                pos.push_back(x);
                val.push_back(values(x, y));
            }
        if (pos.empty()) continue;
        knot_rows.push_back(y);
        detail::interpolate_line(pos, val, w, kernel, rows.row(y), 1);
    }
    if (knot_rows.empty()) throw Error(ErrorCode::EmptyMask, "interpolate_lattice: no samples");

    PlaneImage out(w, h);
    val.resize(knot_rows.size());
    for (int x = 0; x < w; ++x) {
        for (std::size_t k = 0; k < knot_rows.size(); ++k) val[k] = rows(x, knot_rows[k]);
        detail::interpolate_line(knot_rows, val, h, kernel, out.row(0) + x, w);
    }
    return out;
}

}  // namespace polardem
