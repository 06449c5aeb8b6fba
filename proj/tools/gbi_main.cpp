// Copyright 2026 the gbi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line pipeline: junction detection, prior fitting, building index
// computation, segmentation, evaluation, ablation and synthetic data
// generation. Exit codes: 0 ok, 1 runtime failure, 2 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "gbi/angle_prior.hpp"
#include "gbi/config.hpp"
#include "gbi/evaluation.hpp"
#include "gbi/image_io.hpp"
#include "gbi/junction.hpp"
#include "gbi/l_junction.hpp"
#include "gbi/raster.hpp"
#include "gbi/saliency.hpp"
#include "gbi/synthetic.hpp"

namespace fs = std::filesystem;
using namespace gbi;

namespace {

// Writes through a temp file and renames, so readers never see partials.
template <typename WriteFn>
void atomic_write(const std::string& path, WriteFn&& write) {
    const std::string tmp = path + ".tmp";
    write(tmp);
    fs::rename(tmp, path);
}

std::vector<std::string> list_images(const std::string& dir) {
    std::vector<std::string> names;
    if (!fs::is_directory(dir))
        throw IoError(dir + " is not a directory");
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file())
            continue;
        const std::string ext = e.path().extension().string();
        if (ext == ".png" || ext == ".pgm")
            names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

// Runs fn(i) for i in [0, n) with `jobs` workers; each worker keeps the
// OpenMP kernels single-threaded so the machine is not oversubscribed.
void parallel_images(int n, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (int t = 0; t < jobs; ++t) {
        workers.emplace_back([&, t] {
#ifdef _OPENMP
            omp_set_num_threads(1);
#endif
            try {
                for (int i = next++; i < n; i = next++)
                    fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers)
        w.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

Raster draw_overlay(const Raster& img, const std::vector<Junction>& junctions) {
    Raster out = img;
    for (const Junction& j : junctions) {
        for (const Branch& b : j.branches) {
            const int steps = std::max(2, static_cast<int>(2.0 * b.scale));
            for (int t = 0; t <= steps; ++t) {
                const double f = b.scale * t / steps;
                const int x = static_cast<int>(std::lround(j.x + f * std::cos(b.theta)));
                const int y = static_cast<int>(std::lround(j.y + f * std::sin(b.theta)));
                if (out.in_bounds(x, y))
                    out.at(x, y) = 1.0;
            }
        }
        if (out.in_bounds(j.x, j.y))
            out.at(j.x, j.y) = 0.0;
    }
    return out;
}

AnglePriorModel load_model_or_default(const std::string& path) {
    return path.empty() ? default_model() : load_model(path);
}

SaliencyParams ablation_variant(SaliencyParams base, int stage) {
    // stage 0: raw saliency, 1: +neighbor, 2: +angle, 3: +shadow (full)
    base.use_neighbors = stage >= 1;
    base.use_angle_prior = stage >= 2;
    base.use_shadow = stage >= 3;
    return base;
}

struct LabeledSamples {
    std::vector<double> building;
    std::vector<double> background;
};

LabeledSamples collect_beta_samples(const std::string& dataset, const Config& cfg,
                                    bool verbose) {
    const std::string scene_dir = (fs::path(dataset) / "scenes").string();
    const std::string mask_dir = (fs::path(dataset) / "masks").string();
    const auto names = list_images(scene_dir);
    if (names.empty())
        throw IoError("no images under " + scene_dir);

    std::vector<LabeledSamples> per_image(names.size());
    parallel_images(static_cast<int>(names.size()), cfg.jobs, [&](int i) {
        const Raster img = load_image((fs::path(scene_dir) / names[i]).string());
        const Raster mask = load_mask((fs::path(mask_dir) / names[i]).string());
        if (!img.same_dims(mask))
            throw ParameterError(names[i] + ": image and mask dimensions differ");
        const auto junctions = detect_junctions(img, cfg.detect);
        for (const Junction& j : junctions) {
            for (const LJunction& lj : decompose(j)) {
                switch (label_junction(lj, mask, cfg.prior_overlap_threshold)) {
                case RegionLabel::kBuilding:
                    per_image[i].building.push_back(lj.beta());
                    break;
                case RegionLabel::kBackground:
                    per_image[i].background.push_back(lj.beta());
                    break;
                case RegionLabel::kDiscarded:
                    break;
                }
            }
        }
        if (verbose)
            std::fprintf(stderr, "  %s: %zu building / %zu background\n", names[i].c_str(),
                         per_image[i].building.size(), per_image[i].background.size());
    });

    LabeledSamples all;
    for (const auto& s : per_image) {
        all.building.insert(all.building.end(), s.building.begin(), s.building.end());
        all.background.insert(all.background.end(), s.background.begin(), s.background.end());
    }
    return all;
}

void write_histogram_csv(const std::string& path, const LabeledSamples& samples,
                         const AnglePriorModel& model) {
    const int bins = 64;
    std::vector<double> hb(bins, 0.0), hg(bins, 0.0);
    for (double b : samples.building)
        hb[std::min(bins - 1, static_cast<int>(b / kPi * bins))] += 1.0;
    for (double b : samples.background)
        hg[std::min(bins - 1, static_cast<int>(b / kPi * bins))] += 1.0;
    const double wb = samples.building.empty() ? 0.0
                                               : bins / (kPi * samples.building.size());
    const double wg = samples.background.empty() ? 0.0
                                                 : bins / (kPi * samples.background.size());
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << "beta,building_density,building_pdf,background_density,background_pdf\n";
    for (int i = 0; i < bins; ++i) {
        const double beta = (i + 0.5) * kPi / bins;
        out << beta << ',' << hb[i] * wb << ',' << pdf(model.building, beta) << ','
            << hg[i] * wg << ',' << pdf(model.background, beta) << '\n';
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Geometric building index toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --config/--seed/--jobs after the subcommand

    std::string config_path;
    unsigned seed_flag = 0;
    bool seed_set = false;
    int jobs_flag = -1;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seed", seed_flag, "override the configured RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--jobs", jobs_flag, "worker threads for dataset commands");

    // junctions
    auto* cmd_junctions = app.add_subcommand("junctions", "detect junctions in one image");
    std::string jn_image, jn_csv, jn_overlay;
    cmd_junctions->add_option("--image", jn_image, "input image (PNG or PGM)")->required();
    cmd_junctions->add_option("--out-csv", jn_csv, "junction CSV output")->required();
    cmd_junctions->add_option("--overlay", jn_overlay, "optional branch overlay image");

    // fit-prior
    auto* cmd_fit = app.add_subcommand("fit-prior", "fit the included-angle prior");
    std::string fit_dataset, fit_out, fit_hist;
    cmd_fit->add_option("--dataset", fit_dataset, "directory with scenes/ and masks/")
        ->required();
    cmd_fit->add_option("--out", fit_out, "model JSON output")->required();
    cmd_fit->add_option("--hist", fit_hist, "optional histogram CSV output");

    // gbi
    auto* cmd_gbi = app.add_subcommand("gbi", "compute the building index map");
    std::string gbi_image, gbi_model, gbi_out, gbi_raw;
    bool no_angle = false, no_neighbor = false, no_shadow = false, no_blur = false;
    cmd_gbi->add_option("--image", gbi_image, "input image")->required();
    cmd_gbi->add_option("--model", gbi_model, "angle prior JSON (bundled prior when omitted)");
    cmd_gbi->add_option("--out", gbi_out, "heatmap output (PNG or PGM)")->required();
    cmd_gbi->add_option("--raw-csv", gbi_raw, "dump nonzero raw pixels as CSV");
    cmd_gbi->add_flag("--no-angle", no_angle, "drop the angle prior from g1");
    cmd_gbi->add_flag("--no-neighbor", no_neighbor, "drop the pairwise term");
    cmd_gbi->add_flag("--no-shadow", no_shadow, "drop shadow suppression");
    cmd_gbi->add_flag("--no-blur", no_blur, "drop the final Gaussian blur");

    // segment
    auto* cmd_segment = app.add_subcommand("segment", "threshold a heatmap");
    std::string seg_heatmap, seg_out;
    double seg_t = 0.5;
    cmd_segment->add_option("--heatmap", seg_heatmap, "heatmap image")->required();
    cmd_segment->add_option("--threshold", seg_t, "threshold in [0,1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd_segment->add_option("--out", seg_out, "binary output image")->required();

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "threshold-sweep evaluation");
    std::string eval_pred, eval_gt, eval_json, eval_prdir;
    cmd_eval->add_option("--pred", eval_pred, "directory of prediction heatmaps")->required();
    cmd_eval->add_option("--gt", eval_gt, "directory of ground-truth masks")->required();
    cmd_eval->add_option("--out-json", eval_json, "dataset summary JSON")->required();
    cmd_eval->add_option("--pr-dir", eval_prdir, "write per-image PR curves here");

    // ablate
    auto* cmd_ablate = app.add_subcommand("ablate", "raw/+neighbor/+angle/+shadow comparison");
    std::string ab_dataset, ab_model, ab_out;
    cmd_ablate->add_option("--dataset", ab_dataset, "directory with scenes/ and masks/")
        ->required();
    cmd_ablate->add_option("--model", ab_model, "angle prior JSON (bundled prior when omitted)");
    cmd_ablate->add_option("--out", ab_out, "variant CSV output")->required();

    // gen-scenes
    auto* cmd_gen = app.add_subcommand("gen-scenes", "generate a synthetic labeled suite");
    std::string gen_out;
    int gen_count = 20;
    cmd_gen->add_option("--out", gen_out, "output directory")->required();
    cmd_gen->add_option("--count", gen_count, "number of scenes")->check(CLI::PositiveNumber);

    // dump-config
    auto* cmd_dump = app.add_subcommand("dump-config", "print the effective configuration");
    std::string dump_out;
    cmd_dump->add_option("--out", dump_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Config cfg;
    if (!config_path.empty())
        cfg.apply_file(config_path);
    if (seed_set)
        cfg.seed = seed_flag;
    if (jobs_flag >= 0)
        cfg.jobs = jobs_flag;
    cfg.validate();

    if (cmd_junctions->parsed()) {
        const Raster img = load_image(jn_image);
        const auto junctions = detect_junctions(img, cfg.detect);
        atomic_write(jn_csv, [&](const std::string& p) { save_junctions_csv(junctions, p); });
        if (!jn_overlay.empty()) {
            const Raster overlay = draw_overlay(img, junctions);
            atomic_write(jn_overlay, [&](const std::string& p) { save_image(overlay, p); });
        }
        std::printf("%zu junctions -> %s\n", junctions.size(), jn_csv.c_str());
    } else if (cmd_fit->parsed()) {
        const LabeledSamples samples = collect_beta_samples(fit_dataset, cfg, true);
        const int need = 30;
        if (static_cast<int>(samples.building.size()) < need ||
            static_cast<int>(samples.background.size()) < need) {
            std::fprintf(stderr,
                         "fit-prior: need at least %d labeled junctions per class, got "
                         "%zu building / %zu background\n",
                         need, samples.building.size(), samples.background.size());
            return 1;
        }
        AnglePriorModel model;
        model.building = em_fit(samples.building, cfg.prior_building_components, cfg.seed);
        model.background = em_fit(samples.background, cfg.prior_background_components,
                                  cfg.seed + 1);
        model.prior_building = static_cast<double>(samples.building.size()) /
                               static_cast<double>(samples.building.size() +
                                                   samples.background.size());
        atomic_write(fit_out, [&](const std::string& p) { save_model(model, p); });
        if (!fit_hist.empty())
            atomic_write(fit_hist,
                         [&](const std::string& p) { write_histogram_csv(p, samples, model); });
        std::printf("model (%zu building / %zu background samples) -> %s\n",
                    samples.building.size(), samples.background.size(), fit_out.c_str());
    } else if (cmd_gbi->parsed()) {
        const Raster img = load_image(gbi_image);
        const AnglePriorModel model = load_model_or_default(gbi_model);
        SaliencyParams sal = cfg.saliency;
        sal.use_angle_prior = !no_angle;
        sal.use_neighbors = !no_neighbor;
        sal.use_shadow = !no_shadow;
        sal.use_blur = !no_blur;
        const GbiMap map = compute_gbi(img, model, cfg.detect, sal);
        atomic_write(gbi_out, [&](const std::string& p) { save_image(map.final, p); });
        if (!gbi_raw.empty()) {
            atomic_write(gbi_raw, [&](const std::string& p) {
                std::ofstream out(p);
                if (!out)
                    throw IoError("cannot write " + p);
                out << "x,y,value\n";
                out.precision(17);
                for (int y = 0; y < map.raw.height(); ++y)
                    for (int x = 0; x < map.raw.width(); ++x)
                        if (map.raw.at(x, y) != 0.0)
                            out << x << ',' << y << ',' << map.raw.at(x, y) << '\n';
            });
        }
        std::printf("GBI map -> %s\n", gbi_out.c_str());
    } else if (cmd_segment->parsed()) {
        const Raster heat = load_image(seg_heatmap);
        Raster bin(heat.width(), heat.height());
        for (std::size_t i = 0; i < heat.size(); ++i)
            bin.data()[i] = heat.data()[i] >= seg_t ? 1.0 : 0.0;
        atomic_write(seg_out, [&](const std::string& p) { save_image(bin, p); });
    } else if (cmd_eval->parsed()) {
        const auto names = list_images(eval_pred);
        if (names.empty())
            throw IoError("no prediction images under " + eval_pred);
        std::vector<std::string> missing;
        for (const auto& n : names)
            if (!fs::exists(fs::path(eval_gt) / n))
                missing.push_back(n);
        if (!missing.empty()) {
            std::fprintf(stderr, "eval: missing ground truth for:\n");
            for (const auto& n : missing)
                std::fprintf(stderr, "  %s\n", n.c_str());
            return 1;
        }
        if (!eval_prdir.empty())
            fs::create_directories(eval_prdir);
        std::vector<EvalReport> reports(names.size());
        parallel_images(static_cast<int>(names.size()), cfg.jobs, [&](int i) {
            const Raster pred = load_image((fs::path(eval_pred) / names[i]).string());
            const Raster gt = load_mask((fs::path(eval_gt) / names[i]).string());
            reports[i] = evaluate_image(pred, gt, cfg.eval_threshold_step);
            if (!eval_prdir.empty()) {
                const std::string csv =
                    (fs::path(eval_prdir) / (fs::path(names[i]).stem().string() + ".csv"))
                        .string();
                atomic_write(csv, [&](const std::string& p) { save_pr_csv(reports[i], p); });
            }
        });
        const DatasetSummary summary = evaluate_dataset(reports);
        nlohmann::json per_image = nlohmann::json::array();
        for (std::size_t i = 0; i < names.size(); ++i)
            per_image.push_back({{"image", names[i]},
                                 {"ap", reports[i].ap},
                                 {"best_f", reports[i].best_f},
                                 {"best_threshold", reports[i].best_threshold}});
        nlohmann::json j{{"map", summary.map}, {"mean_f", summary.mean_f},
                         {"images", per_image}};
        atomic_write(eval_json, [&](const std::string& p) {
            std::ofstream out(p);
            if (!out)
                throw IoError("cannot write " + p);
            out << j.dump(2) << '\n';
        });
        std::printf("mAP %.4f  mean best F %.4f  (%zu images)\n", summary.map, summary.mean_f,
                    names.size());
    } else if (cmd_ablate->parsed()) {
        const std::string scene_dir = (fs::path(ab_dataset) / "scenes").string();
        const std::string mask_dir = (fs::path(ab_dataset) / "masks").string();
        const auto names = list_images(scene_dir);
        if (names.empty())
            throw IoError("no images under " + scene_dir);
        const AnglePriorModel model = load_model_or_default(ab_model);
        const char* variant_names[4] = {"raw", "+neighbor", "+angle", "+shadow"};
        std::vector<std::array<EvalReport, 4>> reports(names.size());
        parallel_images(static_cast<int>(names.size()), cfg.jobs, [&](int i) {
            const Raster img = load_image((fs::path(scene_dir) / names[i]).string());
            const Raster mask = load_mask((fs::path(mask_dir) / names[i]).string());
            const auto junctions = detect_junctions(img, cfg.detect);
            for (int v = 0; v < 4; ++v) {
                const GbiMap map = compute_gbi_from_junctions(
                    junctions, img, model, ablation_variant(cfg.saliency, v));
                reports[i][v] = evaluate_image(map.final, mask, cfg.eval_threshold_step);
            }
        });
        atomic_write(ab_out, [&](const std::string& p) {
            std::ofstream out(p);
            if (!out)
                throw IoError("cannot write " + p);
            out << "variant,map,f\n";
            out.precision(17);
            for (int v = 0; v < 4; ++v) {
                std::vector<EvalReport> rs;
                for (const auto& r : reports)
                    rs.push_back(r[v]);
                const DatasetSummary s = evaluate_dataset(rs);
                out << variant_names[v] << ',' << s.map << ',' << s.mean_f << '\n';
                std::printf("%-10s mAP %.4f  F %.4f\n", variant_names[v], s.map, s.mean_f);
            }
        });
    } else if (cmd_gen->parsed()) {
        generate_suite(gen_out, gen_count, cfg.seed, cfg.scenes);
        std::printf("%d scenes -> %s\n", gen_count, gen_out.c_str());
    } else if (cmd_dump->parsed()) {
        if (dump_out.empty()) {
            cfg.dump(std::cout);
        } else {
            atomic_write(dump_out, [&](const std::string& p) {
                std::ofstream out(p);
                if (!out)
                    throw IoError("cannot write " + p);
                cfg.dump(out);
            });
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
