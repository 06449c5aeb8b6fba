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

#ifndef GBI_SYNTHETIC_HPP
#define GBI_SYNTHETIC_HPP

#include <string>
#include <vector>

#include "gbi/common.hpp"
#include "gbi/raster.hpp"

namespace gbi {

/// One parallelogram building: corner plus two edge vectors.
struct BuildingSpec {
    Vec2 corner;
    Vec2 edge1;
    Vec2 edge2;
    double intensity = 0.7;
};

struct SceneSpec {
    int width = 160;
    int height = 160;
    std::vector<BuildingSpec> buildings;
    double background = 0.2;
    Vec2 shadow_offset{4.0, 4.0};
    double shadow_darkness = 0.0;  ///< 0 disables shadows
    double noise_sigma = 0.0;
    unsigned seed = 0;
};

struct GroundTruthCorner {
    Vec2 position;
    double beta = 0.0;  ///< included angle of the incident edges, in (0, pi]
};

struct RenderedScene {
    Raster image;
    Raster mask;  ///< 1 on building pixels
    std::vector<GroundTruthCorner> corners;
};

/// Rasterizes buildings over the background, casts optional shadows
/// (never over building pixels), and adds clipped Gaussian noise.
/// Rejects specs with out-of-bounds or overlapping buildings.
RenderedScene render(const SceneSpec& spec);

struct SuiteParams {
    int width = 160;
    int height = 160;
    int min_buildings = 2;
    int max_buildings = 5;
    double min_edge = 16.0;
    double max_edge = 48.0;
    double min_contrast = 0.3;
    double max_contrast = 0.5;
    double noise_sigma = 0.02;
    bool shadows = true;
    int border_margin = 4;
};

/// Deterministic random scene spec for the given seed.
SceneSpec random_scene(unsigned seed, const SuiteParams& params);

/// Writes scenes/NNN.pgm, masks/NNN.pgm and corners/NNN.csv under dir.
void generate_suite(const std::string& dir, int n, unsigned seed, const SuiteParams& params);

/// CSV with header x,y,beta.
void save_corners_csv(const std::vector<GroundTruthCorner>& corners, const std::string& path);
std::vector<GroundTruthCorner> load_corners_csv(const std::string& path);

}  // namespace gbi

#endif  // GBI_SYNTHETIC_HPP
