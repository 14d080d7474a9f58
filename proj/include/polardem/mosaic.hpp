// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polardem/error.hpp"
#include "polardem/image.hpp"

namespace polardem {

enum class Angle : int { A0 = 0, A45 = 1, A90 = 2, A135 = 3 };
enum class Color : int { R = 0, G = 1, B = 2 };

inline constexpr std::array<Angle, 4> kAngles{Angle::A0, Angle::A45, Angle::A90, Angle::A135};
inline constexpr std::array<Color, 3> kColors{Color::R, Color::G, Color::B};

constexpr int index_of(Angle a) noexcept { return static_cast<int>(a); }
constexpr int index_of(Color c) noexcept { return static_cast<int>(c); }
constexpr int degrees(Angle a) noexcept { return 45 * static_cast<int>(a); }

inline Angle angle_from_degrees(int deg) {
    switch (deg) {
        case 0: return Angle::A0;
        case 45: return Angle::A45;
        case 90: return Angle::A90;
        case 135: return Angle::A135;
        default:
            throw Error(ErrorCode::InvalidParams,
                        "polarizer angle must be 0, 45, 90 or 135, got " + std::to_string(deg));
    }
}

inline char color_letter(Color c) noexcept { return "RGB"[index_of(c)]; }

inline Color color_from_letter(const std::string& s) {
    if (s == "R" || s == "r") return Color::R;
    if (s == "G" || s == "g") return Color::G;
    if (s == "B" || s == "b") return Color::B;
    throw Error(ErrorCode::InvalidParams, "color must be R, G or B, got '" + s + "'");
}

/// 2x2 polarizer layout indexed by (row mod 2, col mod 2).
class MpfaPattern {
public:
    using Layout = std::array<std::array<Angle, 2>, 2>;

    /// Top-left 90, top-right 45, bottom-left 135, bottom-right 0.
    MpfaPattern() : MpfaPattern(Layout{{{Angle::A90, Angle::A45}, {Angle::A135, Angle::A0}}}) {}

    explicit MpfaPattern(const Layout& layout) : layout_(layout) {
        unsigned seen = 0;
        for (const auto& row : layout_)
            for (Angle a : row) seen |= 1u << index_of(a);
        if (seen != 0xfu) {
            throw Error(ErrorCode::InvalidParams, "MPFA layout must hold four distinct angles");
        }
    }

    Angle angle_at(int x, int y) const noexcept { return layout_[y & 1][x & 1]; }
    const Layout& layout() const noexcept { return layout_; }

    /// Cell offset (dx, dy) within the 2x2 period that carries `a`.
    std::array<int, 2> offset_of(Angle a) const noexcept {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (layout_[r][c] == a) return {c, r};
        return {0, 0};
    }

    /// Pattern whose cell (r, c) is this pattern's cell (r + dy, c + dx).
    MpfaPattern shifted(int dx, int dy) const {
        Layout l{};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) l[r][c] = layout_[(r + dy) & 1][(c + dx) & 1];
        return MpfaPattern(l);
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& row : layout_) j.push_back({degrees(row[0]), degrees(row[1])});
        return j;
    }

    /// Accepts [[90,45],[135,0]].
    static MpfaPattern from_json(const nlohmann::json& j) {
        if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
            !j[1].is_array() || j[1].size() != 2) {
            throw Error(ErrorCode::InvalidParams, "MPFA pattern must be a 2x2 table of angles");
        }
        Layout l{};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) l[r][c] = angle_from_degrees(j[r][c].get<int>());
        return MpfaPattern(l);
    }

    static MpfaPattern parse(const std::string& text) {
        try {
            return from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidParams, std::string("bad MPFA pattern: ") + e.what());
        }
    }

    friend bool operator==(const MpfaPattern&, const MpfaPattern&) = default;

private:
    Layout layout_;
};

/// 2x2 color filter layout; one R, one B, two G.
class BayerPattern {
public:
    using Layout = std::array<std::array<Color, 2>, 2>;

    BayerPattern() : BayerPattern(Layout{{{Color::R, Color::G}, {Color::G, Color::B}}}) {}

    explicit BayerPattern(const Layout& layout) : layout_(layout) {
        int count[3] = {0, 0, 0};
        for (const auto& row : layout_)
            for (Color c : row) ++count[index_of(c)];
        if (count[0] != 1 || count[1] != 2 || count[2] != 1) {
            throw Error(ErrorCode::InvalidParams, "Bayer layout needs one R, two G and one B");
        }
    }

    Color color_at(int x, int y) const noexcept { return layout_[y & 1][x & 1]; }
    const Layout& layout() const noexcept { return layout_; }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& row : layout_)
            j.push_back({std::string(1, color_letter(row[0])), std::string(1, color_letter(row[1]))});
        return j;
    }

    static BayerPattern from_json(const nlohmann::json& j) {
        if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2) {
            throw Error(ErrorCode::InvalidParams, "Bayer pattern must be a 2x2 table of colors");
        }
        Layout l{};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) l[r][c] = color_from_letter(j[r][c].get<std::string>());
        return BayerPattern(l);
    }

    friend bool operator==(const BayerPattern&, const BayerPattern&) = default;

private:
    Layout layout_;
};

/// Quad-Bayer color polarization layout: 2x2 same-color blocks in Bayer
/// order, each block carrying the four angles in one MPFA layout.
class CpfaPattern {
public:
    CpfaPattern() = default;
    CpfaPattern(BayerPattern blocks, MpfaPattern angles) : blocks_(blocks), angles_(angles) {}

    Color color_at(int x, int y) const noexcept { return blocks_.color_at(x >> 1, y >> 1); }
    Angle angle_at(int x, int y) const noexcept { return angles_.angle_at(x, y); }
    const BayerPattern& blocks() const noexcept { return blocks_; }
    const MpfaPattern& angles() const noexcept { return angles_; }

    nlohmann::json to_json() const {
        return {{"bayer", blocks_.to_json()}, {"angles", angles_.to_json()}};
    }

    /// Accepts {"bayer": [["R","G"],["G","B"]], "angles": [[90,45],[135,0]]}
    /// or a 4x4 table of tokens such as "R90".
    static CpfaPattern from_json(const nlohmann::json& j) {
        if (j.is_object()) {
            BayerPattern b = j.contains("bayer") ? BayerPattern::from_json(j.at("bayer")) : BayerPattern();
            MpfaPattern a = j.contains("angles") ? MpfaPattern::from_json(j.at("angles")) : MpfaPattern();
            return CpfaPattern(b, a);
        }
        if (!j.is_array() || j.size() != 4) {
            throw Error(ErrorCode::InvalidParams, "CPFA pattern must be an object or a 4x4 table");
        }
        std::array<std::array<std::string, 4>, 4> cells;
        for (int r = 0; r < 4; ++r) {
            if (!j[r].is_array() || j[r].size() != 4) {
                throw Error(ErrorCode::InvalidParams, "CPFA table rows must have 4 cells");
            }
            for (int c = 0; c < 4; ++c) cells[r][c] = j[r][c].get<std::string>();
        }
        auto color_of = [&](int r, int c) { return color_from_letter(cells[r][c].substr(0, 1)); };
        auto angle_of = [&](int r, int c) {
            try {
                return angle_from_degrees(std::stoi(cells[r][c].substr(1)));
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::InvalidParams, "bad CPFA cell '" + cells[r][c] + "'");
            }
        };
        BayerPattern::Layout bl{};
        MpfaPattern::Layout al{};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                bl[r][c] = color_of(2 * r, 2 * c);
                al[r][c] = angle_of(r, c);
            }
        const CpfaPattern pat{BayerPattern(bl), MpfaPattern(al)};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (pat.color_at(c, r) != color_of(r, c) || pat.angle_at(c, r) != angle_of(r, c)) {
                    throw Error(ErrorCode::InvalidParams,
                                "CPFA table is not a quad-Bayer layout with a shared block angle order");
                }
        return pat;
    }

    friend bool operator==(const CpfaPattern&, const CpfaPattern&) = default;

private:
    BayerPattern blocks_;
    MpfaPattern angles_;
};

/// Four aligned orientation planes.
struct PolarizationStack {
    std::array<PlaneImage, 4> planes;

    PlaneImage& operator[](Angle a) noexcept { return planes[static_cast<std::size_t>(index_of(a))]; }
    const PlaneImage& operator[](Angle a) const noexcept {
        return planes[static_cast<std::size_t>(index_of(a))];
    }
    int width() const noexcept { return planes[0].width(); }
    int height() const noexcept { return planes[0].height(); }

    void validate(const char* what) const {
        for (const auto& p : planes) {
            require_nonempty(p, what);
            require_same_shape(planes[0], p, what);
        }
    }

    static PolarizationStack uniform(const PlaneImage& p) { return {{p, p, p, p}}; }

    friend bool operator==(const PolarizationStack&, const PolarizationStack&) = default;
};

/// planes[color][angle]; 12 aligned planes.
struct ColorPolarizationStack {
    std::array<PolarizationStack, 3> channels;

    PolarizationStack& operator[](Color c) noexcept {
        return channels[static_cast<std::size_t>(index_of(c))];
    }
    const PolarizationStack& operator[](Color c) const noexcept {
        return channels[static_cast<std::size_t>(index_of(c))];
    }
    const PlaneImage& plane(Color c, Angle a) const noexcept { return (*this)[c][a]; }
    PlaneImage& plane(Color c, Angle a) noexcept { return (*this)[c][a]; }
    int width() const noexcept { return channels[0].width(); }
    int height() const noexcept { return channels[0].height(); }

    void validate(const char* what) const {
        for (const auto& ch : channels) {
            ch.validate(what);
            require_same_shape(channels[0].planes[0], ch.planes[0], what);
        }
    }

    friend bool operator==(const ColorPolarizationStack&, const ColorPolarizationStack&) = default;
};

/// Boolean plane marking sampled sites.
class SampleMask {
public:
    SampleMask() = default;
    SampleMask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool operator()(int x, int y) const noexcept {
        return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }
    void set(int x, int y, bool v) noexcept { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }

    PlaneImage as_image() const {
        PlaneImage img(width_, height_);
        for (std::size_t i = 0; i < bits_.size(); ++i) img.samples()[i] = bits_[i];
        return img;
    }

    /// values where the mask is set, zero elsewhere.
    PlaneImage apply(const PlaneImage& values) const {
        PlaneImage out(values.width(), values.height());
        for (std::size_t i = 0; i < bits_.size(); ++i) out.samples()[i] = bits_[i] ? values.samples()[i] : 0.0;
        return out;
    }

    template <class Pred>
    static SampleMask from(int width, int height, Pred&& pred) {
        SampleMask m(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) m.set(x, y, pred(x, y));
        return m;
    }

    friend bool operator==(const SampleMask&, const SampleMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

inline SampleMask angle_mask(const MpfaPattern& pat, Angle angle, int width, int height) {
    return SampleMask::from(width, height, [&](int x, int y) { return pat.angle_at(x, y) == angle; });
}

inline SampleMask angle_mask(const CpfaPattern& pat, Angle angle, int width, int height) {
    return angle_mask(pat.angles(), angle, width, height);
}

inline SampleMask color_angle_mask(const CpfaPattern& pat, Color color, Angle angle, int width,
                                   int height) {
    return SampleMask::from(width, height, [&](int x, int y) {
        return pat.color_at(x, y) == color && pat.angle_at(x, y) == angle;
    });
}

inline SampleMask color_mask(const BayerPattern& pat, Color color, int width, int height) {
    return SampleMask::from(width, height, [&](int x, int y) { return pat.color_at(x, y) == color; });
}

/// out(x, y) = stack[pattern(x, y)](x, y).
inline PlaneImage mosaic_mpfa(const PolarizationStack& stack, const MpfaPattern& pat) {
    stack.validate("mosaic_mpfa");
    PlaneImage out(stack.width(), stack.height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) out(x, y) = stack[pat.angle_at(x, y)](x, y);
    return out;
}

/// Width and height multiples of 4 keep every 4x4 tile complete.
inline bool cpfa_tiles_complete(int width, int height) noexcept {
    return width % 4 == 0 && height % 4 == 0;
}

inline PlaneImage mosaic_cpfa(const ColorPolarizationStack& stack, const CpfaPattern& pat) {
    stack.validate("mosaic_cpfa");
    PlaneImage out(stack.width(), stack.height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out(x, y) = stack.plane(pat.color_at(x, y), pat.angle_at(x, y))(x, y);
    return out;
}

inline PlaneImage mosaic_bayer(const RgbImage& rgb, const BayerPattern& pat) {
    for (const auto& p : rgb) require_same_shape(rgb[0], p, "mosaic_bayer");
    PlaneImage out(rgb[0].width(), rgb[0].height());
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x)
            out(x, y) = rgb[static_cast<std::size_t>(index_of(pat.color_at(x, y)))](x, y);
    return out;
}

}  // namespace polardem
