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

#include "gbi/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gbi/image_io.hpp"
#include "gbi/l_junction.hpp"

namespace gbi {

namespace {

double vertex_angle(const Vec2& u, const Vec2& v) {
    const double a1 = std::atan2(u.y, u.x);
    const double a2 = std::atan2(v.y, v.x);
    return included_angle(a1, a2);
}

void append_corners(const BuildingSpec& b, std::vector<GroundTruthCorner>& out) {
    const Vec2 p = b.corner;
    const Vec2 e1 = b.edge1;
    const Vec2 e2 = b.edge2;
    const Vec2 n1{-e1.x, -e1.y};
    const Vec2 n2{-e2.x, -e2.y};
    out.push_back({p, vertex_angle(e1, e2)});
    out.push_back({p + e1, vertex_angle(n1, e2)});
    out.push_back({p + e2, vertex_angle(e1, n2)});
    out.push_back({p + e1 + e2, vertex_angle(n1, n2)});
}

}  // namespace

RenderedScene render(const SceneSpec& spec) {
    if (spec.background < 0.0 || spec.background > 1.0)
        throw ParameterError("render: background intensity outside [0,1]");

    RenderedScene scene{Raster(spec.width, spec.height, spec.background),
                        Raster(spec.width, spec.height, 0.0),
                        {}};

    for (const BuildingSpec& b : spec.buildings) {
        if (b.intensity < 0.0 || b.intensity > 1.0)
            throw ParameterError("render: building intensity outside [0,1]");
        const Parallelogram r(b.corner, b.edge1, b.edge2);
        for (const Vec2& v : r.vertices())
            if (v.x < 0.0 || v.x > spec.width - 1 || v.y < 0.0 || v.y > spec.height - 1)
                throw ParameterError("render: building outside image bounds");
        for (const PixelPos& p : covered_pixels(r, spec.width, spec.height)) {
            if (scene.mask.at(p.x, p.y) == 1.0)
                throw ParameterError("render: overlapping buildings");
            scene.image.at(p.x, p.y) = b.intensity;
            scene.mask.at(p.x, p.y) = 1.0;
        }
        append_corners(b, scene.corners);
    }

    if (spec.shadow_darkness > 0.0) {
        const double shade = std::max(spec.background - spec.shadow_darkness, 0.0);
        for (const BuildingSpec& b : spec.buildings) {
            const Parallelogram s(b.corner + spec.shadow_offset, b.edge1, b.edge2);
            for (const PixelPos& p : covered_pixels(s, spec.width, spec.height))
                if (scene.mask.at(p.x, p.y) == 0.0)
                    scene.image.at(p.x, p.y) = shade;
        }
    }

    if (spec.noise_sigma > 0.0) {
        std::mt19937 rng(spec.seed);
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (double& v : scene.image.data())
            v = std::clamp(v + noise(rng), 0.0, 1.0);
    }
    return scene;
}

SceneSpec random_scene(unsigned seed, const SuiteParams& params) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SceneSpec spec;
    spec.width = params.width;
    spec.height = params.height;
    spec.seed = seed ^ 0x9e3779b9u;
    spec.background = 0.15 + 0.15 * unit(rng);
    spec.noise_sigma = params.noise_sigma;

    const double contrast =
        params.min_contrast + (params.max_contrast - params.min_contrast) * unit(rng);
    if (params.shadows) {
        const double len = 3.0 + 3.0 * unit(rng);
        spec.shadow_offset = Vec2(len * std::cos(kPi / 4.0), len * std::sin(kPi / 4.0));
        spec.shadow_darkness = (0.5 + 0.3 * unit(rng)) * contrast;
    } else {
        spec.shadow_darkness = 0.0;
    }

    std::uniform_int_distribution<int> count_dist(params.min_buildings, params.max_buildings);
    const int wanted = count_dist(rng);
    const double margin = params.border_margin;

    for (int attempts = 0; attempts < 400 && static_cast<int>(spec.buildings.size()) < wanted;
         ++attempts) {
        const double l1 =
            params.min_edge + (params.max_edge - params.min_edge) * unit(rng);
        const double l2 =
            params.min_edge + (params.max_edge - params.min_edge) * unit(rng);
        const double phi = kPi * unit(rng);
        // Mostly right angles with occasional oblique parallelograms.
        const double gamma =
            unit(rng) < 0.7 ? kPi / 2.0 : kPi / 2.0 + (unit(rng) - 0.5) * (kPi / 6.0);
        BuildingSpec b;
        b.edge1 = Vec2(l1 * std::cos(phi), l1 * std::sin(phi));
        b.edge2 = Vec2(l2 * std::cos(phi + gamma), l2 * std::sin(phi + gamma));
        const Vec2 center(margin + (params.width - 2 * margin) * unit(rng),
                          margin + (params.height - 2 * margin) * unit(rng));
        b.corner = center - (b.edge1 + b.edge2) * 0.5;
        // Slight per-building contrast jitter, same ballpark within a scene
        // so the max-normalized gradient keeps every edge comparable.
        b.intensity = std::min(spec.background + contrast * (0.9 + 0.2 * unit(rng)), 0.95);

        const Parallelogram r(b.corner, b.edge1, b.edge2);
        bool ok = true;
        for (const Vec2& v : r.vertices())
            if (v.x < margin || v.x > params.width - 1 - margin || v.y < margin ||
                v.y > params.height - 1 - margin)
                ok = false;
        // Keep buildings (and their shadows) apart so corners stay isolated.
        const double gap = 10.0;
        for (const BuildingSpec& other : spec.buildings) {
            if (!ok)
                break;
            const Parallelogram o(other.corner, other.edge1, other.edge2);
            double min_x1 = 1e9, max_x1 = -1e9, min_y1 = 1e9, max_y1 = -1e9;
            for (const Vec2& v : r.vertices()) {
                min_x1 = std::min(min_x1, v.x);
                max_x1 = std::max(max_x1, v.x);
                min_y1 = std::min(min_y1, v.y);
                max_y1 = std::max(max_y1, v.y);
            }
            double min_x2 = 1e9, max_x2 = -1e9, min_y2 = 1e9, max_y2 = -1e9;
            for (const Vec2& v : o.vertices()) {
                min_x2 = std::min(min_x2, v.x);
                max_x2 = std::max(max_x2, v.x);
                min_y2 = std::min(min_y2, v.y);
                max_y2 = std::max(max_y2, v.y);
            }
            if (!(max_x1 + gap < min_x2 || max_x2 + gap < min_x1 || max_y1 + gap < min_y2 ||
                  max_y2 + gap < min_y1))
                ok = false;
        }
        if (ok)
            spec.buildings.push_back(b);
    }
    return spec;
}

void generate_suite(const std::string& dir, int n, unsigned seed, const SuiteParams& params) {
    if (n < 1)
        throw ParameterError("generate_suite: need n >= 1");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir) / "scenes", ec);
    fs::create_directories(fs::path(dir) / "masks", ec);
    fs::create_directories(fs::path(dir) / "corners", ec);
    if (ec)
        throw IoError("cannot create suite directories under " + dir);

    for (int i = 0; i < n; ++i) {
        const SceneSpec spec = random_scene(seed + static_cast<unsigned>(i) * 1000003u, params);
        const RenderedScene scene = render(spec);
        char name[16];
        std::snprintf(name, sizeof(name), "%03d", i);
        save_pgm(scene.image, (fs::path(dir) / "scenes" / (std::string(name) + ".pgm")).string());
        save_pgm(scene.mask, (fs::path(dir) / "masks" / (std::string(name) + ".pgm")).string());
        save_corners_csv(scene.corners,
                         (fs::path(dir) / "corners" / (std::string(name) + ".csv")).string());
    }
}

void save_corners_csv(const std::vector<GroundTruthCorner>& corners, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << "x,y,beta\n";
    out.precision(17);
    for (const GroundTruthCorner& c : corners)
        out << c.position.x << ',' << c.position.y << ',' << c.beta << '\n';
    if (!out)
        throw IoError("write failed: " + path);
}

std::vector<GroundTruthCorner> load_corners_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(path + ": empty corners file");
    std::vector<GroundTruthCorner> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        GroundTruthCorner c;
        char comma;
        if (!(ss >> c.position.x >> comma >> c.position.y >> comma >> c.beta))
            throw FormatError(path + ": malformed corners row: " + line);
        out.push_back(c);
    }
    return out;
}

}  // namespace gbi
