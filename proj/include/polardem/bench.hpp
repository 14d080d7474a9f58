// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "polardem/baselines.hpp"
#include "polardem/cpfa.hpp"
#include "polardem/error.hpp"
#include "polardem/image_io.hpp"
#include "polardem/mosaic.hpp"
#include "polardem/polar.hpp"
#include "polardem/synth.hpp"
#include "polardem/viz.hpp"

namespace polardem {

namespace fs = std::filesystem;

/// One ground-truth scene: four files, one per polarizer angle. Files are
/// RGB (12-channel scenes) or grayscale.
struct SceneRecord {
    std::string id;
    std::array<fs::path, 4> paths;  // indexed by Angle
    int bit_depth = 10;
    int width = 0;
    int height = 0;
    int channels = 0;
};

/// Manifest:
///   {"bit_depth": 10,
///    "scenes": [{"id": "s01", "files": {"0": "...", "45": "...", "90": "...", "135": "..."}}]}
/// Relative paths resolve against the manifest's directory. A scene may
/// override "bit_depth".
inline std::vector<SceneRecord> load_dataset(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open manifest " + manifest_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::DatasetError, std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!j.contains("scenes") || !j["scenes"].is_array()) {
        throw Error(ErrorCode::DatasetError, "manifest needs a 'scenes' array");
    }
    const fs::path root = manifest_path.parent_path();
    const int default_depth = j.value("bit_depth", 10);
    std::vector<SceneRecord> records;
    for (const auto& s : j["scenes"]) {
        SceneRecord rec;
        rec.id = s.value("id", "scene" + std::to_string(records.size()));
        rec.bit_depth = s.value("bit_depth", default_depth);
        if (!s.contains("files") || !s["files"].is_object()) {
            throw Error(ErrorCode::DatasetError, "scene " + rec.id + ": missing 'files'");
        }
        for (Angle a : kAngles) {
            const std::string key = std::to_string(degrees(a));
            if (!s["files"].contains(key)) {
                throw Error(ErrorCode::DatasetError,
                            "scene " + rec.id + ": missing file for angle " + key);
            }
            fs::path p = s["files"][key].get<std::string>();
            if (p.is_relative()) p = root / p;
            rec.paths[static_cast<std::size_t>(index_of(a))] = p;
        }
        for (Angle a : kAngles) {
            const fs::path& p = rec.paths[static_cast<std::size_t>(index_of(a))];
            if (!fs::exists(p)) {
                throw Error(ErrorCode::IoError, "scene " + rec.id + ": missing file " + p.string());
            }
            const RawCodes rc = detail::read_codes(p);
            if (a == Angle::A0) {
                rec.width = rc.width;
                rec.height = rc.height;
                rec.channels = rc.channels;
            } else if (rc.width != rec.width || rc.height != rec.height || rc.channels != rec.channels) {
                throw Error(ErrorCode::DatasetError,
                            "scene " + rec.id + ": angle " + std::to_string(degrees(a)) +
                                " does not match the 0-degree image");
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

/// Loads all 12 planes; grayscale files fill all three colors.
inline ColorPolarizationStack load_color_scene(const SceneRecord& rec) {
    ColorPolarizationStack out;
    for (Angle a : kAngles) {
        std::vector<PlaneImage> planes = read_planes(rec.paths[static_cast<std::size_t>(index_of(a))], rec.bit_depth);
        for (Color c : kColors) out.plane(c, a) = planes.size() == 3 ? planes[static_cast<std::size_t>(index_of(c))] : planes[0];
    }
    return out;
}

/// Monochrome ground truth: the green channel of RGB files.
inline PolarizationStack load_mono_scene(const SceneRecord& rec) {
    return load_color_scene(rec)[Color::G];
}

enum class ExperimentMode { Mpfa, Cpfa };

struct SyntheticSuite {
    std::vector<SceneKind> kinds{SceneKind::Step, SceneKind::Disk};
    int count = 20;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 1;
    double texture = 0.15;
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Mpfa;
    /// MPFA: bilinear, bicubic, eari, nonedge. CPFA: bilinear12, or any MPFA
    /// method run after color demosaicking.
    std::vector<std::string> methods{"bilinear", "bicubic", "eari"};
    MpfaPattern pattern;
    CpfaPattern cpfa_pattern;
    eari::Params eari;
    GuidedFilterParams gf;
    eari::PlainGuide plain_guide = eari::PlainGuide::Binomial;
    BayerMethod color_method = BayerMethod::GradientCorrected;
    std::optional<fs::path> dataset;
    std::optional<SyntheticSuite> synthetic;
    fs::path output_dir;
    bool save_images = false;
    int output_bit_depth = 16;
    int workers = 1;

    void validate() const {
        if (methods.empty()) throw Error(ErrorCode::InvalidParams, "experiment needs at least one method");
        if (!dataset && !synthetic) throw Error(ErrorCode::InvalidParams, "experiment needs a dataset or a synthetic suite");
        if (synthetic && synthetic->count < 1) throw Error(ErrorCode::InvalidParams, "synthetic suite needs at least one scene");
        if (synthetic && synthetic->kinds.empty()) throw Error(ErrorCode::InvalidParams, "synthetic suite needs at least one kind");
        if (workers < 1) throw Error(ErrorCode::InvalidParams, "workers must be >= 1");
        for (const auto& m : methods) {
            if (mode == ExperimentMode::Cpfa && m == "bilinear12") continue;
            mpfa_method_from_string(m);
        }
        eari.validate();
        gf.validate();
    }

    static ExperimentConfig from_json(const nlohmann::json& j, const fs::path& base = {}) {
        ExperimentConfig c;
        try {
            const std::string mode = j.value("mode", "mpfa");
            if (mode == "mpfa") c.mode = ExperimentMode::Mpfa;
            else if (mode == "cpfa") c.mode = ExperimentMode::Cpfa;
            else throw Error(ErrorCode::InvalidParams, "mode must be 'mpfa' or 'cpfa'");
            if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
            if (j.contains("pattern")) c.pattern = MpfaPattern::from_json(j["pattern"]);
            if (j.contains("cpfa_pattern")) c.cpfa_pattern = CpfaPattern::from_json(j["cpfa_pattern"]);
            if (j.contains("eari")) {
                c.eari.epsilon = j["eari"].value("epsilon", c.eari.epsilon);
                c.eari.smoothing = eari::smoothing_from_string(j["eari"].value("smoothing", "onesided"));
            }
            if (j.contains("gf")) {
                c.gf.radius = j["gf"].value("radius", c.gf.radius);
                c.gf.eps = j["gf"].value("eps", c.gf.eps);
            }
            const std::string pg = j.value("plain_guide", "binomial");
            if (pg == "binomial") c.plain_guide = eari::PlainGuide::Binomial;
            else if (pg == "box") c.plain_guide = eari::PlainGuide::Box;
            else throw Error(ErrorCode::InvalidParams, "plain_guide must be 'binomial' or 'box'");
            c.color_method = bayer_method_from_string(j.value("color_method", "gradient"));
            if (j.contains("dataset")) {
                fs::path p = j["dataset"].get<std::string>();
                c.dataset = p.is_relative() && !base.empty() ? base / p : p;
            }
            if (j.contains("synthetic")) {
                const auto& s = j["synthetic"];
                SyntheticSuite suite;
                if (s.contains("kinds")) {
                    suite.kinds.clear();
                    for (const auto& k : s["kinds"]) suite.kinds.push_back(scene_kind_from_string(k.get<std::string>()));
                }
                suite.count = s.value("count", suite.count);
                suite.width = s.value("width", suite.width);
                suite.height = s.value("height", suite.height);
                suite.seed = s.value("seed", suite.seed);
                suite.texture = s.value("texture", suite.texture);
                c.synthetic = suite;
            }
            if (j.contains("output_dir")) {
                fs::path p = j["output_dir"].get<std::string>();
                c.output_dir = p.is_relative() && !base.empty() ? base / p : p;
            }
            c.save_images = j.value("save_images", false);
            c.output_bit_depth = j.value("output_bit_depth", 16);
            c.workers = j.value("workers", 1);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::InvalidParams, std::string("bad experiment config: ") + e.what());
        }
        c.validate();
        return c;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["mode"] = mode == ExperimentMode::Mpfa ? "mpfa" : "cpfa";
        j["methods"] = methods;
        j["pattern"] = pattern.to_json();
        j["cpfa_pattern"] = cpfa_pattern.to_json();
        j["eari"] = {{"epsilon", eari.epsilon}, {"smoothing", eari::to_string(eari.smoothing)}};
        j["gf"] = {{"radius", gf.radius}, {"eps", gf.eps}};
        j["plain_guide"] = plain_guide == eari::PlainGuide::Binomial ? "binomial" : "box";
        j["color_method"] = to_string(color_method);
        if (dataset) j["dataset"] = dataset->string();
        if (synthetic) {
            std::vector<std::string> kinds;
            for (SceneKind k : synthetic->kinds) kinds.emplace_back(to_string(k));
            j["synthetic"] = {{"kinds", kinds},          {"count", synthetic->count},
                              {"width", synthetic->width}, {"height", synthetic->height},
                              {"seed", synthetic->seed},   {"texture", synthetic->texture}};
        }
        return j;
    }
};

/// Deterministic per-scene seed for synthetic suites.
inline std::uint64_t scene_seed(std::uint64_t base, std::size_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct SceneSource {
    std::string id;
    std::optional<SceneRecord> record;
    std::optional<SynthParams> params;
    std::uint64_t seed = 0;

    ColorPolarizationStack load_color() const {
        return record ? load_color_scene(*record) : synth_color_scene(*params, seed);
    }
    PolarizationStack load_mono() const {
        return record ? load_mono_scene(*record) : synth_scene(*params, seed);
    }
};

inline std::vector<SceneSource> experiment_scenes(const ExperimentConfig& cfg) {
    std::vector<SceneSource> out;
    if (cfg.dataset) {
        for (SceneRecord& r : load_dataset(*cfg.dataset)) out.push_back({r.id, r, std::nullopt, 0});
    }
    if (cfg.synthetic) {
        const SyntheticSuite& s = *cfg.synthetic;
        for (int i = 0; i < s.count; ++i) {
            const SceneKind kind = s.kinds[static_cast<std::size_t>(i) % s.kinds.size()];
            const std::uint64_t seed = scene_seed(s.seed, static_cast<std::size_t>(i));
            char id[64];
            std::snprintf(id, sizeof id, "synth_%s_%03d", to_string(kind), i);
            out.push_back({id, std::nullopt, random_synth_params(kind, s.width, s.height, seed, s.texture), seed});
        }
    }
    return out;
}

struct SceneResult {
    std::string scene;
    std::string method;
    std::optional<MetricsRow> row;
    std::string error;
};

struct MethodMean {
    std::string method;
    MetricsRow row{};
    int scenes = 0;
};

struct MetricsReport {
    std::vector<SceneResult> per_scene;  // scene-major, methods in config order
    std::vector<MethodMean> means;       // config order
    int failures = 0;
};

/// Arithmetic mean per method over the scenes that succeeded.
inline std::vector<MethodMean> average_rows(const std::vector<SceneResult>& rows,
                                            const std::vector<std::string>& methods) {
    std::vector<MethodMean> means;
    for (const std::string& m : methods) {
        MethodMean mm{m, {}, 0};
        for (const SceneResult& r : rows) {
            if (r.method != m || !r.row) continue;
            for (std::size_t k = 0; k < mm.row.size(); ++k) mm.row[k] += (*r.row)[k];
            ++mm.scenes;
        }
        if (mm.scenes > 0)
            for (double& v : mm.row) v /= mm.scenes;
        means.push_back(mm);
    }
    return means;
}

inline std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline std::string csv_preamble(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "# metric: " << (cfg.mode == ExperimentMode::Mpfa ? "PSNR" : "CPSNR")
       << " dB; AoP column is the angle RMSE in degrees"
       << (cfg.mode == ExperimentMode::Cpfa ? " averaged over RGB" : "") << "\n";
    os << "# psnr peaks: I0=1 I45=1 I90=1 I135=1 S0=2 S1=1 S2=1 DoP=1\n";
    if (cfg.synthetic) os << "# synthetic seed: " << cfg.synthetic->seed << "\n";
    os << "# config: " << cfg.to_json().dump() << "\n";
    return os.str();
}

inline std::string per_scene_csv(const ExperimentConfig& cfg, const MetricsReport& rep) {
    std::ostringstream os;
    os << csv_preamble(cfg) << "scene,method";
    for (auto c : kMetricColumns) os << ',' << c;
    os << ",error\n";
    for (const SceneResult& r : rep.per_scene) {
        os << r.scene << ',' << r.method;
        for (std::size_t k = 0; k < kMetricColumns.size(); ++k)
            os << ',' << (r.row ? format_metric((*r.row)[k]) : "");
        os << ',' << r.error << '\n';
    }
    return os.str();
}

inline std::string mean_csv(const ExperimentConfig& cfg, const MetricsReport& rep) {
    std::ostringstream os;
    os << csv_preamble(cfg) << "method,scenes";
    for (auto c : kMetricColumns) os << ',' << c;
    os << '\n';
    for (const MethodMean& m : rep.means) {
        os << m.method << ',' << m.scenes;
        for (double v : m.row) os << ',' << format_metric(v);
        os << '\n';
    }
    return os.str();
}

namespace detail {

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

inline void save_mono_outputs(const PolarizationStack& est, const fs::path& dir, int depth) {
    fs::create_directories(dir);
    for (Angle a : kAngles) write_image(est[a], dir / ("I" + std::to_string(degrees(a)) + ".png"), depth);
    const StokesMaps s = stokes_from_stack(est);
    write_rgb_image(render_aop_dop(s), dir / "aop_dop.png", 8);
}

inline void save_color_outputs(const ColorPolarizationStack& est, const fs::path& dir, int depth) {
    fs::create_directories(dir);
    for (Angle a : kAngles) {
        write_rgb_image(RgbImage{est.plane(Color::R, a), est.plane(Color::G, a), est.plane(Color::B, a)},
                        dir / ("I" + std::to_string(degrees(a)) + ".png"), depth);
    }
    write_rgb_image(render_aop_dop(stokes_from_stack(est[Color::G])), dir / "aop_dop.png", 8);
}

}  // namespace detail

/// Mosaic, demosaick and score every scene with every method. Failing
/// scenes are recorded and skipped. Output is independent of `workers`.
inline MetricsReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<SceneSource> scenes = experiment_scenes(cfg);
    const std::size_t nm = cfg.methods.size();
    std::vector<SceneResult> results(scenes.size() * nm);

    auto run_scene = [&](std::size_t si) {
        const SceneSource& src = scenes[si];
        for (std::size_t mi = 0; mi < nm; ++mi) {
            SceneResult& r = results[si * nm + mi];
            r.scene = src.id;
            r.method = cfg.methods[mi];
        }
        try {
            if (cfg.mode == ExperimentMode::Mpfa) {
                const PolarizationStack truth = src.load_mono();
                const PlaneImage raw = mosaic_mpfa(truth, cfg.pattern);
                for (std::size_t mi = 0; mi < nm; ++mi) {
                    SceneResult& r = results[si * nm + mi];
                    try {
                        MpfaOptions opts{mpfa_method_from_string(r.method), cfg.eari, cfg.gf, cfg.plain_guide};
                        const PolarizationStack est = demosaick_mpfa(raw, cfg.pattern, opts);
                        r.row = mpfa_metrics(truth, est);
                        if (cfg.save_images && !cfg.output_dir.empty())
                            detail::save_mono_outputs(est, cfg.output_dir / "images" / src.id / r.method, cfg.output_bit_depth);
                    } catch (const std::exception& e) {
                        r.error = e.what();
                    }
                }
            } else {
                const ColorPolarizationStack truth = src.load_color();
                const PlaneImage raw = mosaic_cpfa(truth, cfg.cpfa_pattern);
                for (std::size_t mi = 0; mi < nm; ++mi) {
                    SceneResult& r = results[si * nm + mi];
                    try {
                        ColorPolarizationStack est;
                        if (r.method == "bilinear12") {
                            est = demosaick_cpfa_bilinear12(raw, cfg.cpfa_pattern);
                        } else {
                            MpfaOptions opts{mpfa_method_from_string(r.method), cfg.eari, cfg.gf, cfg.plain_guide};
                            est = demosaick_cpfa(raw, cfg.cpfa_pattern, cfg.color_method, opts);
                        }
                        r.row = cpfa_metrics(truth, est);
                        if (cfg.save_images && !cfg.output_dir.empty())
                            detail::save_color_outputs(est, cfg.output_dir / "images" / src.id / r.method, cfg.output_bit_depth);
                    } catch (const std::exception& e) {
                        r.error = e.what();
                    }
                }
            }
        } catch (const std::exception& e) {
            for (std::size_t mi = 0; mi < nm; ++mi) results[si * nm + mi].error = e.what();
        }
    };

    const int workers = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(1, scenes.size())));
    if (workers <= 1) {
        for (std::size_t si = 0; si < scenes.size(); ++si) run_scene(si);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t si = next++; si < scenes.size(); si = next++) run_scene(si);
            });
        }
        for (auto& th : pool) th.join();
    }

    MetricsReport rep;
    rep.per_scene = std::move(results);
    for (SceneResult& r : rep.per_scene) {
        if (!r.row) ++rep.failures;
        // Keep CSV cells single-line.
        for (char& ch : r.error)
            if (ch == ',' || ch == '\n') ch = ';';
    }
    rep.means = average_rows(rep.per_scene, cfg.methods);
    if (!cfg.output_dir.empty()) {
        fs::create_directories(cfg.output_dir);
        detail::write_text(cfg.output_dir / "per_scene.csv", per_scene_csv(cfg, rep));
        detail::write_text(cfg.output_dir / "mean.csv", mean_csv(cfg, rep));
    }
    return rep;
}

}  // namespace polardem
