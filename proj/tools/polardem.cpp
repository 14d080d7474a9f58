// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

// polardem command-line front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polardem/polardem.hpp"

namespace fs = std::filesystem;
using namespace polardem;

namespace {

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidParams, p.string() + ": " + e.what());
    }
}

std::string angle_name(Angle a) { return "I" + std::to_string(degrees(a)); }

/// S0/2, (S1+1)/2, (S2+1)/2, DoP, (AoP+90)/180 and the AoP-DoP render.
void write_polar_products(const StokesMaps& s, const fs::path& dir, const std::string& prefix, int depth,
                          VizMode viz) {
    write_image(map(s.s0, [](double v) { return v / 2.0; }), dir / (prefix + "S0.png"), depth);
    write_image(map(s.s1, [](double v) { return (v + 1.0) / 2.0; }), dir / (prefix + "S1.png"), depth);
    write_image(map(s.s2, [](double v) { return (v + 1.0) / 2.0; }), dir / (prefix + "S2.png"), depth);
    write_image(dop(s), dir / (prefix + "DoP.png"), depth);
    write_image(map(aop(s), [](double v) { return (v + 90.0) / 180.0; }), dir / (prefix + "AoP.png"), depth);
    write_rgb_image(render_aop_dop(s, viz), dir / (prefix + "aop_dop.png"), 8);
}

PolarizationStack read_stack(const std::vector<std::string>& files, std::optional<int> depth) {
    PolarizationStack st;
    for (Angle a : kAngles) {
        const std::vector<PlaneImage> planes = read_planes(files[static_cast<std::size_t>(index_of(a))], depth);
        st[a] = planes.size() == 3 ? planes[1] : planes[0];
    }
    st.validate("input stack");
    return st;
}

struct MpfaArgs {
    std::string input;
    std::string output;
    std::string config;
    std::string method = "eari";
    std::string pattern;
    int radius = 2;
    double eps_gf = 1e-4;
    double epsilon = 1e-32;
    std::string smoothing = "onesided";
    std::string plain_guide = "binomial";
    int bit_depth = 0;
    int out_depth = 16;
    std::string viz = "flat";
    bool dump_guide = false;
};

/// Config file supplies defaults; flags given on the command line win.
MpfaOptions mpfa_options(const MpfaArgs& a, const CLI::App& cmd, MpfaPattern& pat) {
    MpfaOptions o;
    if (!a.config.empty()) {
        const nlohmann::json j = read_json(a.config);
        if (j.contains("method")) o.method = mpfa_method_from_string(j["method"].get<std::string>());
        if (j.contains("pattern")) pat = MpfaPattern::from_json(j["pattern"]);
        if (j.contains("eari")) {
            o.eari.epsilon = j["eari"].value("epsilon", o.eari.epsilon);
            o.eari.smoothing = eari::smoothing_from_string(j["eari"].value("smoothing", "onesided"));
        }
        if (j.contains("gf")) {
            o.gf.radius = j["gf"].value("radius", o.gf.radius);
            o.gf.eps = j["gf"].value("eps", o.gf.eps);
        }
    }
    auto given = [&](const char* name) {
        const CLI::Option* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if ((given("--method") || a.config.empty()) && a.method != "bilinear12") o.method = mpfa_method_from_string(a.method);
    if (given("--pattern")) pat = MpfaPattern::parse(a.pattern);
    if (given("--radius")) o.gf.radius = a.radius;
    if (given("--eps-gf")) o.gf.eps = a.eps_gf;
    if (given("--epsilon")) o.eari.epsilon = a.epsilon;
    if (given("--smoothing")) o.eari.smoothing = eari::smoothing_from_string(a.smoothing);
    o.plain_guide = a.plain_guide == "box" ? eari::PlainGuide::Box : eari::PlainGuide::Binomial;
    if (a.plain_guide != "box" && a.plain_guide != "binomial") {
        throw Error(ErrorCode::InvalidParams, "--plain-guide must be 'binomial' or 'box'");
    }
    o.eari.validate();
    o.gf.validate();
    return o;
}

std::optional<int> depth_or_auto(int d) { return d > 0 ? std::optional<int>(d) : std::nullopt; }

int run_demosaick_mpfa(const MpfaArgs& a, const CLI::App& cmd) {
    MpfaPattern pat;
    const MpfaOptions opts = mpfa_options(a, cmd, pat);
    const PlaneImage raw = read_image(a.input, depth_or_auto(a.bit_depth));
    const PolarizationStack st = demosaick_mpfa(raw, pat, opts);
    const fs::path out = a.output;
    fs::create_directories(out);
    for (Angle ang : kAngles) write_image(st[ang], out / (angle_name(ang) + ".png"), a.out_depth);
    write_polar_products(stokes_from_stack(st), out, "", a.out_depth, viz_mode_from_string(a.viz));
    if (a.dump_guide) {
        const PlaneImage guide = opts.method == MpfaMethod::PlainRi ? eari::plain_guide(raw, opts.plain_guide)
                                                                    : eari::guide_image(raw, opts.eari);
        write_image(guide, out / "guide.png", a.out_depth);
        if (opts.method != MpfaMethod::PlainRi) {
            for (const eari::DirectionalField& f : eari::directional_fields(raw, opts.eari)) {
                const std::string d = eari::to_string(f.direction);
                write_image(f.estimate, out / ("estimate_" + d + ".png"), a.out_depth);
                double wmax = 0.0;
                for (double v : f.smoothed_difference.samples()) wmax = std::max(wmax, v);
                const double scale = wmax > 0.0 ? 1.0 / wmax : 0.0;
                write_image(map(f.smoothed_difference, [scale](double v) { return v * scale; }),
                            out / ("edge_" + d + ".png"), a.out_depth);
            }
        }
    }
    std::printf("%s: %dx%d, method %s, wrote %s\n", a.input.c_str(), raw.width(), raw.height(),
                to_string(opts.method), out.string().c_str());
    return 0;
}

struct CpfaArgs {
    MpfaArgs mpfa;
    std::string pattern_file;
    std::string color_method = "gradient";
};

int run_demosaick_cpfa(const CpfaArgs& a, const CLI::App& cmd) {
    MpfaPattern ignored;
    const MpfaOptions opts = mpfa_options(a.mpfa, cmd, ignored);
    CpfaPattern pat{BayerPattern(), MpfaPattern()};
    if (!a.pattern_file.empty()) pat = CpfaPattern::from_json(read_json(a.pattern_file));
    const PlaneImage raw = read_image(a.mpfa.input, depth_or_auto(a.mpfa.bit_depth));
    if (!cpfa_tiles_complete(raw.width(), raw.height())) {
        std::fprintf(stderr, "warning: %dx%d is not a multiple of the 4x4 CPFA tile; border blocks are partial\n",
                     raw.width(), raw.height());
    }
    const bool bilinear12 = cmd.get_option("--method")->count() > 0 && a.mpfa.method == "bilinear12";
    const ColorPolarizationStack st = bilinear12
                                          ? demosaick_cpfa_bilinear12(raw, pat)
                                          : demosaick_cpfa(raw, pat, bayer_method_from_string(a.color_method), opts);
    const fs::path out = a.mpfa.output;
    fs::create_directories(out);
    const VizMode viz = viz_mode_from_string(a.mpfa.viz);
    for (Color c : kColors) {
        const std::string cn(1, color_letter(c));
        for (Angle ang : kAngles)
            write_image(st.plane(c, ang), out / (cn + "_" + angle_name(ang) + ".png"), a.mpfa.out_depth);
        write_polar_products(stokes_from_stack(st[c]), out, cn + "_", a.mpfa.out_depth, viz);
    }
    for (Angle ang : kAngles) {
        write_rgb_image(RgbImage{st.plane(Color::R, ang), st.plane(Color::G, ang), st.plane(Color::B, ang)},
                        out / (angle_name(ang) + "_rgb.png"), a.mpfa.out_depth);
    }
    std::printf("%s: %dx%d, method %s, wrote %s\n", a.mpfa.input.c_str(), raw.width(), raw.height(),
                bilinear12 ? "bilinear12" : to_string(opts.method), out.string().c_str());
    return 0;
}

struct BenchArgs {
    std::string config;
    std::string output_dir;
    std::string dataset;
    int workers = 0;
    bool save_images = false;
};

int run_bench(const BenchArgs& a) {
    const fs::path cfg_path = a.config;
    ExperimentConfig cfg;
    {
        nlohmann::json j = read_json(cfg_path);
        if (!a.dataset.empty()) {
            j["dataset"] = fs::absolute(a.dataset).string();
            j.erase("synthetic");
        }
        cfg = ExperimentConfig::from_json(j, cfg_path.parent_path());
    }
    if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
    if (a.workers > 0) cfg.workers = a.workers;
    if (a.save_images) cfg.save_images = true;
    const MetricsReport rep = run_experiment(cfg);

    std::printf("%-10s %6s", "method", "scenes");
    for (auto c : kMetricColumns) std::printf(" %8s", std::string(c).c_str());
    std::printf("\n");
    for (const MethodMean& m : rep.means) {
        std::printf("%-10s %6d", m.method.c_str(), m.scenes);
        for (double v : m.row) std::printf(" %8s", format_metric(v).c_str());
        std::printf("\n");
    }
    for (const SceneResult& r : rep.per_scene)
        if (!r.row) std::fprintf(stderr, "failed: %s / %s: %s\n", r.scene.c_str(), r.method.c_str(), r.error.c_str());
    if (!cfg.output_dir.empty()) std::printf("wrote %s\n", cfg.output_dir.string().c_str());
    return rep.failures == 0 ? 0 : 1;
}

struct SynthArgs {
    std::string output;
    std::string kind = "step";
    int count = 1;
    int width = 64;
    int height = 64;
    std::uint64_t seed = 1;
    double texture = 0.15;
    int depth = 16;
    bool color = false;
};

int run_synth(const SynthArgs& a) {
    const fs::path out = a.output;
    fs::create_directories(out);
    const SceneKind kind = scene_kind_from_string(a.kind);
    const CpfaPattern cpat{BayerPattern(), MpfaPattern()};
    nlohmann::json scenes = nlohmann::json::array();
    for (int i = 0; i < a.count; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "%03d", i);
        const std::uint64_t seed = scene_seed(a.seed, static_cast<std::size_t>(i));
        const SynthParams p = random_synth_params(kind, a.width, a.height, seed, a.texture);
        nlohmann::json files;
        const std::string stem = std::string("scene_") + id;
        if (a.color) {
            const ColorPolarizationStack st = synth_color_scene(p, seed);
            for (Angle ang : kAngles) {
                const std::string f = stem + "_" + std::to_string(degrees(ang)) + ".png";
                write_rgb_image(RgbImage{st.plane(Color::R, ang), st.plane(Color::G, ang), st.plane(Color::B, ang)},
                                out / f, a.depth);
                files[std::to_string(degrees(ang))] = f;
            }
            write_image(mosaic_cpfa(st, cpat), out / (std::string("raw_cpfa_") + id + ".png"), a.depth);
            write_image(mosaic_mpfa(st[Color::G], MpfaPattern()), out / (std::string("raw_mpfa_") + id + ".png"), a.depth);
        } else {
            const PolarizationStack st = synth_scene(p, seed);
            for (Angle ang : kAngles) {
                const std::string f = stem + "_" + std::to_string(degrees(ang)) + ".png";
                write_image(st[ang], out / f, a.depth);
                files[std::to_string(degrees(ang))] = f;
            }
            write_image(mosaic_mpfa(st, MpfaPattern()), out / (std::string("raw_mpfa_") + id + ".png"), a.depth);
        }
        scenes.push_back({{"id", stem}, {"files", files}, {"kind", to_string(kind)}, {"seed", seed}});
    }
    const nlohmann::json manifest = {{"bit_depth", a.depth}, {"scenes", scenes}};
    std::ofstream(out / "manifest.json") << manifest.dump(2) << "\n";
    std::printf("wrote %d %s scene(s) to %s\n", a.count, to_string(kind), out.string().c_str());
    return 0;
}

struct StackArgs {
    std::vector<std::string> inputs;
    std::string output;
    int bit_depth = 0;
    int out_depth = 16;
    std::string viz = "flat";
};

int run_stokes(const StackArgs& a) {
    const PolarizationStack st = read_stack(a.inputs, depth_or_auto(a.bit_depth));
    fs::create_directories(a.output);
    write_polar_products(stokes_from_stack(st), a.output, "", a.out_depth, viz_mode_from_string(a.viz));
    std::printf("wrote Stokes products to %s\n", a.output.c_str());
    return 0;
}

int run_viz(const StackArgs& a) {
    const PolarizationStack st = read_stack(a.inputs, depth_or_auto(a.bit_depth));
    const fs::path out = a.output;
    fs::create_directories(out);
    write_rgb_image(render_aop_dop(stokes_from_stack(st), viz_mode_from_string(a.viz)), out / "aop_dop.png", 8);
    write_rgb_image(aop_dop_legend(), out / "legend.png", 8);
    std::printf("wrote %s and %s\n", (out / "aop_dop.png").string().c_str(), (out / "legend.png").string().c_str());
    return 0;
}

void add_mpfa_flags(CLI::App* cmd, MpfaArgs& a, const std::string& methods) {
    cmd->add_option("input", a.input, "raw mosaic (PNG or PGM)")->required();
    cmd->add_option("output", a.output, "output directory")->required();
    cmd->add_option("--config", a.config, "JSON file with method, pattern, eari and gf settings");
    cmd->add_option("--method", a.method, methods);
    cmd->add_option("--radius", a.radius, "guided filter radius");
    cmd->add_option("--eps-gf", a.eps_gf, "guided filter regularization");
    cmd->add_option("--epsilon", a.epsilon, "edge weight regularization");
    cmd->add_option("--smoothing", a.smoothing, "edge evidence window: onesided or full");
    cmd->add_option("--plain-guide", a.plain_guide, "guide for nonedge: binomial or box");
    cmd->add_option("--bit-depth", a.bit_depth, "input bit depth (default: from file)");
    cmd->add_option("--output-bit-depth", a.out_depth, "8, 10 or 16");
    cmd->add_option("--viz", a.viz, "AoP-DoP render: flat or intensity");
}

void add_stack_flags(CLI::App* cmd, StackArgs& a) {
    cmd->add_option("paths", a.inputs, "I0 I45 I90 I135 images, then the output directory")
        ->required()
        ->expected(5);
    cmd->callback([&a] {
        a.output = a.inputs.back();
        a.inputs.pop_back();
    });
    cmd->add_option("--bit-depth", a.bit_depth, "input bit depth (default: from file)");
    cmd->add_option("--output-bit-depth", a.out_depth, "8, 10 or 16");
    cmd->add_option("--viz,--mode", a.viz, "flat or intensity");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarization filter array demosaicking"};
    app.require_subcommand(1);

    MpfaArgs mpfa;
    CLI::App* c_mpfa = app.add_subcommand("demosaick-mpfa", "demosaick a monochrome polarization mosaic");
    add_mpfa_flags(c_mpfa, mpfa, "bilinear, bicubic, nonedge or eari");
    c_mpfa->add_option("--pattern", mpfa.pattern, "2x2 angle layout as JSON, e.g. [[90,45],[135,0]]");
    c_mpfa->add_flag("--dump-guide", mpfa.dump_guide, "also write the guide and per-direction planes");

    CpfaArgs cpfa;
    CLI::App* c_cpfa = app.add_subcommand("demosaick-cpfa", "demosaick a color polarization (quad-Bayer) mosaic");
    add_mpfa_flags(c_cpfa, cpfa.mpfa, "bilinear12, or the MPFA method run after color demosaicking");
    c_cpfa->add_option("--pattern-file", cpfa.pattern_file, "CPFA pattern JSON");
    c_cpfa->add_option("--color-method", cpfa.color_method, "bilinear or gradient");

    BenchArgs bench;
    CLI::App* c_bench = app.add_subcommand("bench", "run a benchmark experiment");
    c_bench->add_option("config", bench.config, "experiment JSON")->required();
    c_bench->add_option("--output-dir", bench.output_dir, "directory for CSVs and images");
    c_bench->add_option("--dataset", bench.dataset, "dataset manifest (overrides the config)");
    c_bench->add_option("--workers", bench.workers, "worker threads");
    c_bench->add_flag("--save-images", bench.save_images, "write per-scene reconstructions");

    SynthArgs synth;
    CLI::App* c_synth = app.add_subcommand("synth", "generate synthetic scenes and a manifest");
    c_synth->add_option("output", synth.output, "output directory")->required();
    c_synth->add_option("--kind", synth.kind, "constant, ramp, step, disk or sinusoid");
    c_synth->add_option("--count", synth.count, "number of scenes");
    c_synth->add_option("--width", synth.width);
    c_synth->add_option("--height", synth.height);
    c_synth->add_option("--seed", synth.seed);
    c_synth->add_option("--texture", synth.texture, "relative intensity texture in [0, 1)");
    c_synth->add_option("--bit-depth", synth.depth, "8, 10 or 16");
    c_synth->add_flag("--color", synth.color, "write RGB scenes and a CPFA raw");

    StackArgs stokes;
    CLI::App* c_stokes = app.add_subcommand("stokes", "Stokes, DoP and AoP images from four orientation images");
    add_stack_flags(c_stokes, stokes);

    StackArgs viz;
    CLI::App* c_viz = app.add_subcommand("viz", "AoP-DoP false-color render plus legend");
    add_stack_flags(c_viz, viz);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_mpfa->parsed()) return run_demosaick_mpfa(mpfa, *c_mpfa);
        if (c_cpfa->parsed()) return run_demosaick_cpfa(cpfa, *c_cpfa);
        if (c_bench->parsed()) return run_bench(bench);
        if (c_synth->parsed()) return run_synth(synth);
        if (c_stokes->parsed()) return run_stokes(stokes);
        if (c_viz->parsed()) return run_viz(viz);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "polardem: %s\n", e.what());
        return 2;
    }
    return 0;
}
