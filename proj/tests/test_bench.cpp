// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polardem/bench.hpp"

namespace fs = std::filesystem;
using namespace polardem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "polardem_test_bench" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_scene(const fs::path& dir, const std::string& id, int w, int h, int depth) {
    for (Angle a : kAngles) {
        const double v = 0.2 + 0.1 * index_of(a);
        write_rgb_image(RgbImage{PlaneImage(w, h, v), PlaneImage(w, h, v / 2), PlaneImage(w, h, v / 4)},
                        dir / (id + "_" + std::to_string(degrees(a)) + ".png"), depth);
    }
}

nlohmann::json scene_entry(const std::string& id) {
    nlohmann::json files;
    for (Angle a : kAngles) files[std::to_string(degrees(a))] = id + "_" + std::to_string(degrees(a)) + ".png";
    return {{"id", id}, {"files", files}};
}

void write_json(const fs::path& p, const nlohmann::json& j) { std::ofstream(p) << j.dump(2); }

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidParams;
}

}  // namespace

TEST(Dataset, LoadsWellFormedManifest) {
    const fs::path dir = fresh_dir("two");
    write_scene(dir, "a", 8, 6, 10);
    write_scene(dir, "b", 8, 6, 10);
    write_json(dir / "manifest.json", {{"bit_depth", 10}, {"scenes", {scene_entry("a"), scene_entry("b")}}});
    const auto recs = load_dataset(dir / "manifest.json");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[1].id, "b");
    EXPECT_EQ(recs[0].width, 8);
    EXPECT_EQ(recs[0].channels, 3);
    const ColorPolarizationStack st = load_color_scene(recs[0]);
    EXPECT_NEAR(st.plane(Color::G, Angle::A90)(3, 3), 0.2, 1.0 / 1023);
    EXPECT_EQ(load_mono_scene(recs[0])[Angle::A90], st.plane(Color::G, Angle::A90));
}

TEST(Dataset, FullSizeTenBitScene) {
    const fs::path dir = fresh_dir("full");
    write_scene(dir, "s01", 1024, 768, 10);
    write_json(dir / "manifest.json", {{"bit_depth", 10}, {"scenes", {scene_entry("s01")}}});
    const auto recs = load_dataset(dir / "manifest.json");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].width, 1024);
    EXPECT_EQ(recs[0].height, 768);
    EXPECT_EQ(recs[0].bit_depth, 10);
}

TEST(Dataset, Errors) {
    const fs::path dir = fresh_dir("errors");
    write_scene(dir, "a", 4, 4, 8);
    nlohmann::json missing_angle = scene_entry("a");
    missing_angle["files"].erase("135");
    write_json(dir / "m1.json", {{"scenes", {missing_angle}}});
    try {
        load_dataset(dir / "m1.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DatasetError);
        EXPECT_NE(std::string(e.what()).find("135"), std::string::npos);
    }

    nlohmann::json missing_file = scene_entry("a");
    missing_file["files"]["45"] = "nope.png";
    write_json(dir / "m2.json", {{"scenes", {missing_file}}});
    try {
        load_dataset(dir / "m2.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
        EXPECT_NE(std::string(e.what()).find("scene a"), std::string::npos);
    }

    write_image(PlaneImage(4, 5), dir / "odd.png", 8);
    nlohmann::json mismatch = scene_entry("a");
    mismatch["files"]["90"] = "odd.png";
    write_json(dir / "m3.json", {{"scenes", {mismatch}}});
    EXPECT_EQ(code_of([&] { load_dataset(dir / "m3.json"); }), ErrorCode::DatasetError);
    EXPECT_EQ(code_of([&] { load_dataset(dir / "absent.json"); }), ErrorCode::IoError);
}

TEST(Synth, ConstantSceneFollowsMalusLaw) {
    SynthParams p;
    p.width = 4;
    p.height = 3;
    p.a = {1.0, 0.3, 0.2};
    const PolarizationStack st = synth_scene(p);
    EXPECT_DOUBLE_EQ(st[Angle::A0](2, 1), 0.65);
    EXPECT_DOUBLE_EQ(st[Angle::A45](2, 1), 0.6);
    EXPECT_DOUBLE_EQ(st[Angle::A90](2, 1), 0.35);
    EXPECT_DOUBLE_EQ(st[Angle::A135](2, 1), 0.4);
}

TEST(Synth, DopMatchesAnalyticValueAndSeedsAreDeterministic) {
    for (SceneKind k : {SceneKind::Ramp, SceneKind::Step, SceneKind::Disk, SceneKind::Sinusoid}) {
        const SynthParams p = random_synth_params(k, 32, 24, 77);
        const StokesMaps analytic = synth_stokes(p, 3);
        const PlaneImage d = dop(stokes_from_stack(synth_scene(p, 3)));
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double s0 = analytic.s0.samples()[i];
            EXPECT_NEAR(d.samples()[i], std::hypot(analytic.s1.samples()[i], analytic.s2.samples()[i]) / s0, 1e-12);
        }
        const PolarizationStack a = synth_scene(p, 3), b = synth_scene(p, 3);
        for (Angle ang : kAngles) {
            EXPECT_EQ(a[ang], b[ang]);
            for (double v : a[ang].samples()) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
        }
        const ColorPolarizationStack c = synth_color_scene(p, 3);
        for (Color col : kColors)
            for (Angle ang : kAngles)
                for (double v : c.plane(col, ang).samples()) EXPECT_LE(v, 1.0);
        EXPECT_EQ(scene_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(scene_kind_from_string("checker"), Error);
}

TEST(Experiment, ConstantSceneGivesInfiniteRow) {
    ExperimentConfig cfg;
    cfg.methods = {"bilinear", "eari"};
    cfg.synthetic = SyntheticSuite{{SceneKind::Constant}, 1, 16, 16, 1, 0.0};
    const MetricsReport rep = run_experiment(cfg);
    ASSERT_EQ(rep.per_scene.size(), 2u);
    EXPECT_EQ(rep.failures, 0);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ((*rep.per_scene[0].row)[k], kInfinity);
    EXPECT_EQ((*rep.per_scene[0].row)[8], 0.0);
    EXPECT_EQ(format_metric(kInfinity), "inf");
    EXPECT_EQ(format_metric(12.345678), "12.3457");
}

TEST(Experiment, CsvsAreByteIdenticalAcrossRunsAndWorkerCounts) {
    const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
    const nlohmann::json j = {{"methods", {"bilinear", "nonedge", "eari"}},
                              {"synthetic", {{"count", 4}, {"width", 24}, {"height", 24}, {"seed", 9}}}};
    ExperimentConfig cfg = ExperimentConfig::from_json(j);
    cfg.output_dir = a;
    cfg.save_images = true;
    run_experiment(cfg);
    cfg.output_dir = b;
    cfg.workers = 3;
    run_experiment(cfg);
    for (const char* f : {"per_scene.csv", "mean.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    const fs::path img = fs::path("images") / "synth_step_000" / "eari" / "I0.png";
    EXPECT_EQ(slurp(a / img), slurp(b / img));
    EXPECT_FALSE(slurp(a / img).empty());
    EXPECT_NE(slurp(a / "mean.csv").find("# synthetic seed: 9"), std::string::npos);
}

TEST(Experiment, MeansAreArithmeticMeansOfSceneRows) {
    ExperimentConfig cfg;
    cfg.methods = {"bilinear", "bicubic"};
    cfg.synthetic = SyntheticSuite{{SceneKind::Step, SceneKind::Disk}, 5, 20, 20, 4, 0.1};
    const MetricsReport rep = run_experiment(cfg);
    ASSERT_EQ(rep.means.size(), 2u);
    for (const MethodMean& m : rep.means) {
        EXPECT_EQ(m.scenes, 5);
        for (std::size_t k = 0; k < 9; ++k) {
            double acc = 0.0;
            for (const SceneResult& r : rep.per_scene)
                if (r.method == m.method) acc += (*r.row)[k];
            EXPECT_NEAR(m.row[k], acc / 5.0, 1e-12);
        }
    }
}

TEST(Experiment, MethodOrderingOnSyntheticSuite) {
    ExperimentConfig cfg;
    cfg.methods = {"bilinear", "bicubic", "eari"};
    cfg.synthetic = SyntheticSuite{};
    const MetricsReport rep = run_experiment(cfg);
    EXPECT_GE(rep.means[2].row[0], rep.means[1].row[0]);
    EXPECT_GE(rep.means[1].row[0], rep.means[0].row[0]);
}

TEST(Experiment, CpfaEariBeatsBilinear12OnEdgeSuite) {
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Cpfa;
    cfg.methods = {"bilinear12", "eari"};
    cfg.synthetic = SyntheticSuite{{SceneKind::Step, SceneKind::Disk}, 6, 32, 32, 2, 0.15};
    const MetricsReport rep = run_experiment(cfg);
    ASSERT_EQ(rep.failures, 0);
    ASSERT_EQ(rep.means.size(), 2u);
    EXPECT_GT(rep.means[1].row[0], rep.means[0].row[0]);
    EXPECT_GT(rep.means[1].row[4], rep.means[0].row[4]);
}

TEST(Experiment, FailingScenesAreRecorded) {
    const fs::path dir = fresh_dir("fail");
    write_scene(dir, "odd", 6, 6, 8);
    write_json(dir / "manifest.json", {{"bit_depth", 8}, {"scenes", {scene_entry("odd")}}});
    ExperimentConfig cfg;
    cfg.mode = ExperimentMode::Cpfa;
    cfg.methods = {"eari"};
    cfg.dataset = dir / "manifest.json";
    cfg.output_dir = dir / "out";
    const MetricsReport rep = run_experiment(cfg);
    EXPECT_EQ(rep.failures, 0);  // 6x6 is even; incomplete quad tiles are allowed
    write_scene(dir, "odd", 5, 6, 8);
    const MetricsReport rep2 = run_experiment(cfg);
    EXPECT_EQ(rep2.failures, 1);
    EXPECT_NE(rep2.per_scene[0].error.find("OddDimensions"), std::string::npos);
    EXPECT_NE(slurp(dir / "out" / "per_scene.csv").find("OddDimensions"), std::string::npos);
}

TEST(Experiment, ConfigValidation) {
    EXPECT_EQ(code_of([] { ExperimentConfig::from_json({{"methods", {"eari"}}}); }), ErrorCode::InvalidParams);
    EXPECT_EQ(code_of([] { ExperimentConfig::from_json({{"methods", nlohmann::json::array()}, {"synthetic", nlohmann::json::object()}}); }),
              ErrorCode::InvalidParams);
    EXPECT_EQ(code_of([] { ExperimentConfig::from_json({{"methods", {"bilinear12"}}, {"synthetic", nlohmann::json::object()}}); }),
              ErrorCode::InvalidParams);
    const ExperimentConfig c = ExperimentConfig::from_json(
        {{"mode", "cpfa"}, {"methods", {"bilinear12", "eari"}}, {"dataset", "m.json"}, {"gf", {{"radius", 3}}}}, "/data");
    EXPECT_EQ(*c.dataset, fs::path("/data/m.json"));
    EXPECT_EQ(c.gf.radius, 3);
    EXPECT_EQ(ExperimentConfig::from_json(c.to_json()).to_json(), c.to_json());
}
