// Copyright 2026 The polardem Authors
// Licensed under the Apache License, Version 2.0
// http://www.apache.org/licenses/LICENSE-2.0

// Acceptance checks. One PASS/FAIL/SKIP line per criterion; exit status is
// nonzero if any criterion fails.
//
// Criterion 7 needs the published 40-scene dataset. Point POLARDEM_DATASET
// at its manifest (see README) to run it.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "polardem/polardem.hpp"

namespace fs = std::filesystem;
using namespace polardem;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& check) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    if (v.outcome == Outcome::Fail) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", tag, id, title, v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Verdict kernel_identities() {
    const auto t0 = Clock::now();
    bool ok = true;
    for (eari::Direction d : eari::kDirections) {
        ok &= eari::estimate_kernel(d).sum() == 1.0;
        ok &= eari::difference_kernel(d).sum() == 0.0;
        for (eari::Smoothing s : {eari::Smoothing::OneSided, eari::Smoothing::Full}) {
            // Normalized box taps: check the integer count times 1/count.
            const Kernel2D k = eari::smoothing_kernel(d, s);
            int nonzero = 0;
            for (double t : k.taps()) nonzero += t != 0.0;
            for (double t : k.taps()) ok &= t == 0.0 || t == 1.0 / nonzero;
            ok &= std::abs(k.sum() - 1.0) <= 1e-15;
        }
    }
    const double dt = seconds_since(t0);
    ok &= dt < 1.0;
    return {ok ? Outcome::Pass : Outcome::Fail, "estimate kernels sum to 1, difference kernels to 0, smoothing kernels to 1 in all four directions"};
}

bool center_in_0_90(Angle a) { return a == Angle::A0 || a == Angle::A90; }

Verdict oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    const MpfaPattern pat;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const PlaneImage raw = mosaic_mpfa(oracle::random_stokes_stack(8, 8, rng), pat);
        const oracle::Side sides[4] = {oracle::Side::North, oracle::Side::East, oracle::Side::West,
                                       oracle::Side::South};
        for (eari::Direction d : eari::kDirections) {
            const PlaneImage x = eari::directional_estimate(raw, d);
            const PlaneImage delta = eari::directional_difference(raw, d);
            for (int py = 1; py < 7; ++py)
                for (int px = 1; px < 7; ++px) {
                    const auto e = oracle::side_estimates(raw, pat, px, py, sides[static_cast<int>(d)]);
                    const bool own_0_90 = center_in_0_90(pat.angle_at(px, py));
                    const double want_delta = own_0_90 ? e.est_45_135 - e.est_0_90 : e.est_0_90 - e.est_45_135;
                    worst = std::max(worst, std::abs(x(px, py) - (e.est_0_90 + e.est_45_135) / 4.0));
                    worst = std::max(worst, std::abs(delta(px, py) - want_delta));
                }
        }
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-12 && dt < 5.0 ? Outcome::Pass : Outcome::Fail,
            fmt("max deviation %.3g over 50 mosaics x 4 directions x 36 interior pixels", worst)};
}

Verdict constant_exactness() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double c : {0.0, 0.25, 0.731, 1.0}) {
        const PlaneImage raw(32, 24, c);
        const MpfaPattern pat;
        auto check = [&](const PlaneImage& p) {
            for (double v : p.samples()) worst = std::max(worst, std::abs(v - c));
        };
        check(eari::guide_image(raw));
        for (const PolarizationStack& st : {demosaick_mpfa_eari(raw, pat), demosaick_mpfa_bilinear(raw, pat),
                                            demosaick_mpfa_bicubic(raw, pat)})
            for (const PlaneImage& p : st.planes) check(p);
        const CpfaPattern cp{BayerPattern(), MpfaPattern()};
        for (BayerMethod m : {BayerMethod::Bilinear, BayerMethod::GradientCorrected}) {
            const ColorPolarizationStack st = demosaick_cpfa(raw, cp, m);
            for (const PolarizationStack& s : st.channels)
                for (const PlaneImage& p : s.planes) check(p);
        }
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-9 && dt < 5.0 ? Outcome::Pass : Outcome::Fail,
            fmt("max deviation %.3g from the constant (guide, EARI, bilinear, bicubic, CPFA)", worst)};
}

Verdict sample_fidelity() {
    std::mt19937_64 rng(4);
    const MpfaPattern pat;
    const CpfaPattern cp{BayerPattern(), MpfaPattern()};
    double worst = 0.0;
    int methods = 0;
    for (int trial = 0; trial < 3; ++trial) {
        const PlaneImage raw = mosaic_mpfa(oracle::random_stokes_stack(32, 32, rng), pat);
        std::vector<PolarizationStack> mono{demosaick_mpfa_bilinear(raw, pat), demosaick_mpfa_bicubic(raw, pat),
                                            demosaick_mpfa_eari(raw, pat), demosaick_mpfa_plain_ri(raw, pat)};
        for (const PolarizationStack& st : mono)
            for (int y = 0; y < 32; ++y)
                for (int x = 0; x < 32; ++x) worst = std::max(worst, std::abs(st[pat.angle_at(x, y)](x, y) - raw(x, y)));

        ColorPolarizationStack truth;
        for (Color c : kColors) truth[c] = oracle::random_stokes_stack(32, 32, rng);
        const PlaneImage craw = mosaic_cpfa(truth, cp);
        std::vector<ColorPolarizationStack> color{demosaick_cpfa_bilinear12(craw, cp),
                                                  demosaick_cpfa(craw, cp, BayerMethod::GradientCorrected),
                                                  demosaick_cpfa(craw, cp, BayerMethod::Bilinear)};
        for (const ColorPolarizationStack& st : color)
            for (int y = 0; y < 32; ++y)
                for (int x = 0; x < 32; ++x)
                    worst = std::max(worst, std::abs(st.plane(cp.color_at(x, y), cp.angle_at(x, y))(x, y) - craw(x, y)));
        methods = static_cast<int>(mono.size() + color.size());
    }
    return {worst <= 1e-12 ? Outcome::Pass : Outcome::Fail,
            fmt("max deviation %.3g at sampled sites across %.0f demosaickers", worst, methods)};
}

Verdict stokes_round_trip() {
    std::mt19937_64 rng(5);
    const PolarizationStack st = oracle::random_stokes_stack(10, 10, rng);
    const StokesMaps s = stokes_from_stack(st);
    double worst = 0.0;
    for (std::size_t i = 0; i < 100; ++i)
        for (Angle a : kAngles) {
            const double t = 2.0 * degrees(a) * std::numbers::pi / 180.0;
            const double regen = (s.s0.samples()[i] + s.s1.samples()[i] * std::cos(t) + s.s2.samples()[i] * std::sin(t)) / 2.0;
            worst = std::max(worst, std::abs(regen - st[a].samples()[i]));
        }
    const double wrap = angle_rmse(PlaneImage(1, 1, 89.0), PlaneImage(1, 1, -89.0));
    return {worst <= 1e-12 && wrap == 2.0 ? Outcome::Pass : Outcome::Fail,
            fmt("round-trip deviation %.3g on 100 pixels; AoP(89, -89) error %.17g deg", worst, wrap)};
}

Verdict edge_ordering() {
    const auto t0 = Clock::now();
    ExperimentConfig cfg;
    cfg.methods = {"eari", "nonedge", "bilinear"};
    cfg.synthetic = SyntheticSuite{{SceneKind::Step, SceneKind::Disk}, 20, 64, 64, 1, 0.15};
    const MetricsReport rep = run_experiment(cfg);
    const double e = rep.means[0].row[0], n = rep.means[1].row[0], b = rep.means[2].row[0];
    const double dt = seconds_since(t0);
    const bool ok = rep.failures == 0 && e > n && n > b && dt < 30.0;
    return {ok ? Outcome::Pass : Outcome::Fail,
            fmt("mean I0 PSNR: EARI %.3f > non-edge RI %.3f > bilinear %.3f dB", e, n, b)};
}

Verdict dataset_reproduction() {
    const char* env = std::getenv("POLARDEM_DATASET");
    if (env == nullptr || *env == '\0') return {Outcome::Skip, "set POLARDEM_DATASET to the dataset manifest to run"};
    const auto t0 = Clock::now();
    ExperimentConfig mono;
    mono.methods = {"bilinear", "eari"};
    mono.dataset = fs::path(env);
    const MetricsReport m = run_experiment(mono);
    ExperimentConfig color = mono;
    color.mode = ExperimentMode::Cpfa;
    color.methods = {"eari"};
    const MetricsReport c = run_experiment(color);
    const double dt = seconds_since(t0);

    const double bil_ref[4] = {42.34, 41.58, 42.50, 41.58};
    bool ok = m.failures == 0 && c.failures == 0 && dt < 1800.0;
    std::ostringstream os;
    os << "bilinear";
    for (int k = 0; k < 4; ++k) {
        ok &= std::abs(m.means[0].row[static_cast<std::size_t>(k)] - bil_ref[k]) <= 0.3;
        os << ' ' << fmt("%.2f", m.means[0].row[static_cast<std::size_t>(k)]);
    }
    const double eari_i0 = m.means[1].row[0], eari_aop = m.means[1].row[8], cpfa_i0 = c.means[0].row[0];
    ok &= std::abs(eari_i0 - 47.39) <= 1.0;
    ok &= std::abs(eari_aop - 17.13) <= 1.0;
    ok &= std::abs(cpfa_i0 - 39.41) <= 1.5;
    os << fmt("; EARI I0 %.2f dB, AoP %.2f deg; CPFA EARI CPSNR I0 %.2f dB", eari_i0, eari_aop, cpfa_i0)
       << fmt("; %.0f scenes", m.means[0].scenes);
    return {ok ? Outcome::Pass : Outcome::Fail, os.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        out[fs::relative(e.path(), dir).string()] = os.str();
    }
    return out;
}

Verdict determinism() {
    const fs::path root = fs::temp_directory_path() / "polardem_acceptance_determinism";
    fs::remove_all(root);
    std::size_t files = 0;
    bool ok = true;
    for (ExperimentMode mode : {ExperimentMode::Mpfa, ExperimentMode::Cpfa}) {
        ExperimentConfig cfg;
        cfg.mode = mode;
        cfg.methods = mode == ExperimentMode::Mpfa ? std::vector<std::string>{"bilinear", "bicubic", "nonedge", "eari"}
                                                   : std::vector<std::string>{"bilinear12", "eari"};
        cfg.synthetic = SyntheticSuite{{SceneKind::Step, SceneKind::Disk, SceneKind::Sinusoid}, 3, 32, 32, 11, 0.15};
        cfg.save_images = true;
        const std::string tag = mode == ExperimentMode::Mpfa ? "mpfa" : "cpfa";
        cfg.output_dir = root / (tag + "_1");
        run_experiment(cfg);
        cfg.output_dir = root / (tag + "_2");
        cfg.workers = 2;
        run_experiment(cfg);
        const auto a = snapshot(root / (tag + "_1"));
        const auto b = snapshot(root / (tag + "_2"));
        ok &= a == b && a.count("per_scene.csv") && a.count("mean.csv");
        files += a.size();
    }
    fs::remove_all(root);
    return {ok ? Outcome::Pass : Outcome::Fail,
            fmt("%.0f CSV and image files byte-identical across two runs", static_cast<double>(files))};
}

Verdict performance() {
    const SynthParams p = random_synth_params(SceneKind::Disk, 1024, 768, 3);
    const PlaneImage raw = mosaic_mpfa(synth_scene(p, 3), MpfaPattern());
    const PlaneImage craw = mosaic_cpfa(synth_color_scene(p, 3), CpfaPattern(BayerPattern(), MpfaPattern()));
    auto best_of = [](int n, const std::function<void()>& f) {
        double best = 1e9;
        for (int i = 0; i < n; ++i) {
            const auto t0 = Clock::now();
            f();
            best = std::min(best, seconds_since(t0));
        }
        return best;
    };
    const double mpfa = best_of(3, [&] { (void)demosaick_mpfa_eari(raw, MpfaPattern()); });
    const double cpfa = best_of(2, [&] { (void)demosaick_cpfa(craw, CpfaPattern(BayerPattern(), MpfaPattern())); });
    return {mpfa < 1.0 && cpfa < 4.0 ? Outcome::Pass : Outcome::Fail,
            fmt("1024x768 single-threaded: MPFA EARI %.3f s (< 1), CPFA %.3f s (< 4)", mpfa, cpfa)};
}

}  // namespace

int main() {
    report(1, "kernel identities", kernel_identities);
    report(2, "filter vs index-formula oracle", oracle_equivalence);
    report(3, "constant-scene exactness", constant_exactness);
    report(4, "sample fidelity", sample_fidelity);
    report(5, "Stokes round trip and AoP wrap", stokes_round_trip);
    report(6, "edge-awareness ordering", edge_ordering);
    report(7, "dataset reproduction", dataset_reproduction);
    report(8, "determinism", determinism);
    report(9, "performance", performance);
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
