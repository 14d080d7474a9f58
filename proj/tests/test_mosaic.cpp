// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polardem/mosaic.hpp"

using namespace polardem;

namespace {

PolarizationStack constant_stack(int w, int h, double i0, double i45, double i90, double i135) {
    PolarizationStack st;
    st[Angle::A0] = PlaneImage(w, h, i0);
    st[Angle::A45] = PlaneImage(w, h, i45);
    st[Angle::A90] = PlaneImage(w, h, i90);
    st[Angle::A135] = PlaneImage(w, h, i135);
    return st;
}

}  // namespace

TEST(MpfaPattern, DefaultLayoutMosaic) {
    const PlaneImage raw = mosaic_mpfa(constant_stack(2, 2, 0.1, 0.2, 0.3, 0.4), MpfaPattern());
    EXPECT_EQ(raw, PlaneImage::from_rows({{0.3, 0.2}, {0.4, 0.1}}));
}

TEST(MpfaPattern, MasksPartitionThePlane) {
    const MpfaPattern pat;
    for (int h : {1, 2, 5})
        for (int w : {1, 3, 6}) {
            std::vector<int> hits(static_cast<std::size_t>(w * h), 0);
            for (Angle a : kAngles) {
                const SampleMask m = angle_mask(pat, a, w, h);
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x) hits[static_cast<std::size_t>(y * w + x)] += m(x, y);
            }
            for (int c : hits) EXPECT_EQ(c, 1);
        }
    EXPECT_EQ(angle_mask(pat, Angle::A0, 8, 8).count(), 16u);
}

TEST(MpfaPattern, OffsetsAndShift) {
    const MpfaPattern pat;
    EXPECT_EQ(pat.offset_of(Angle::A0), (std::array<int, 2>{1, 1}));
    EXPECT_EQ(pat.offset_of(Angle::A90), (std::array<int, 2>{0, 0}));
    const MpfaPattern s = pat.shifted(1, 1);
    EXPECT_EQ(s.angle_at(0, 0), Angle::A0);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) EXPECT_EQ(s.angle_at(x, y), pat.angle_at(x + 1, y + 1));
}

TEST(MpfaPattern, JsonRoundTripAndValidation) {
    const MpfaPattern pat = MpfaPattern::parse("[[0,45],[135,90]]");
    EXPECT_EQ(pat.angle_at(1, 1), Angle::A90);
    EXPECT_EQ(MpfaPattern::from_json(pat.to_json()), pat);
    EXPECT_THROW(MpfaPattern::parse("[[0,0],[135,90]]"), Error);
    EXPECT_THROW(MpfaPattern::parse("[[0,30],[135,90]]"), Error);
    EXPECT_THROW(MpfaPattern::parse("not json"), Error);
}

TEST(CpfaPattern, ColorAngleDensity) {
    const CpfaPattern pat{BayerPattern(), MpfaPattern()};
    EXPECT_EQ(color_angle_mask(pat, Color::G, Angle::A0, 4, 4).count(), 2u);
    EXPECT_EQ(color_angle_mask(pat, Color::R, Angle::A0, 4, 4).count(), 1u);
    EXPECT_EQ(color_angle_mask(pat, Color::B, Angle::A135, 8, 8).count(), 4u);
    // Quad-Bayer blocks: the top-left 2x2 block is all red.
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) EXPECT_EQ(pat.color_at(x, y), Color::R);
    EXPECT_EQ(pat.color_at(2, 0), Color::G);
    EXPECT_EQ(pat.color_at(3, 3), Color::B);
}

TEST(CpfaPattern, TokenTableMatchesObjectForm) {
    const nlohmann::json table = {{"R90", "R45", "G90", "G45"},
                                  {"R135", "R0", "G135", "G0"},
                                  {"G90", "G45", "B90", "B45"},
                                  {"G135", "G0", "B135", "B0"}};
    const CpfaPattern a = CpfaPattern::from_json(table);
    const CpfaPattern b = CpfaPattern::from_json(nlohmann::json::parse(
        R"({"bayer": [["R","G"],["G","B"]], "angles": [[90,45],[135,0]]})"));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, CpfaPattern::from_json(a.to_json()));
    nlohmann::json bad = table;
    bad[0][1] = "G45";
    EXPECT_THROW(CpfaPattern::from_json(bad), Error);
}

TEST(Mosaic, CpfaRoundTripPicksTheRightPlane) {
    std::mt19937_64 rng(7);
    ColorPolarizationStack st;
    for (Color c : kColors)
        for (Angle a : kAngles) st.plane(c, a) = oracle::random_image(8, 8, rng);
    const CpfaPattern pat{BayerPattern(), MpfaPattern()};
    const PlaneImage raw = mosaic_cpfa(st, pat);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) EXPECT_EQ(raw(x, y), st.plane(pat.color_at(x, y), pat.angle_at(x, y))(x, y));
    EXPECT_TRUE(cpfa_tiles_complete(8, 8));
    EXPECT_FALSE(cpfa_tiles_complete(6, 8));
}

TEST(Mosaic, MismatchedStackIsRejected) {
    PolarizationStack st = constant_stack(4, 4, 0, 0, 0, 0);
    st[Angle::A45] = PlaneImage(4, 3);
    try {
        mosaic_mpfa(st, MpfaPattern());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Mosaic, BayerAndMaskHelpers) {
    const RgbImage rgb{PlaneImage(4, 4, 0.1), PlaneImage(4, 4, 0.2), PlaneImage(4, 4, 0.3)};
    const PlaneImage raw = mosaic_bayer(rgb, BayerPattern());
    EXPECT_EQ(raw, PlaneImage::from_rows({{0.1, 0.2, 0.1, 0.2}, {0.2, 0.3, 0.2, 0.3},
                                          {0.1, 0.2, 0.1, 0.2}, {0.2, 0.3, 0.2, 0.3}}));
    const SampleMask g = color_mask(BayerPattern(), Color::G, 4, 4);
    EXPECT_EQ(g.count(), 8u);
    const PlaneImage kept = g.apply(raw);
    EXPECT_DOUBLE_EQ(kept(1, 0), 0.2);
    EXPECT_DOUBLE_EQ(kept(0, 0), 0.0);
}
