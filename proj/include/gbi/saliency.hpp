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

#ifndef GBI_SALIENCY_HPP
#define GBI_SALIENCY_HPP

#include <vector>

#include "gbi/angle_prior.hpp"
#include "gbi/junction.hpp"
#include "gbi/l_junction.hpp"
#include "gbi/raster.hpp"

namespace gbi {

struct SaliencyParams {
    int neighbor_k = 4;              ///< neighbor cap
    double scale_ratio_limit = 3.0;  ///< max branch-scale ratio between neighbors
    double distance_factor = 1.0;    ///< scales the tau distance bound
    bool squared_exponential = false; ///< exp(-d^2/tau^2) instead of exp(-d/tau)
    int blur_side = 5;
    double blur_sigma = 0.5;
    int tophat_side = 51;
    bool use_angle_prior = true;
    bool use_neighbors = true;
    bool use_shadow = true;
    bool use_blur = true;
};

struct SaliencyRecord {
    LJunction junction;
    double g1 = 0.0;             ///< first-order saliency, in [0,1]
    double g2 = 0.0;             ///< pairwise saliency, >= 0
    std::vector<int> neighbors;  ///< indices into the junction list
};

struct GbiMap {
    Raster raw;    ///< accumulated index
    Raster final;  ///< blurred, shadow-suppressed, min-max normalized
};

/// First-order geometric saliency: (1 - rho) * posterior_building(beta).
double first_order(const LJunction& j, const AnglePriorModel& model);

/// Up to k nearest junctions by center distance, subject to a strict
/// distance bound (distance_factor times the junction's max branch scale)
/// and a symmetric max-branch-scale ratio limit. Ties break by index.
std::vector<int> find_neighbors(const std::vector<LJunction>& all, int idx,
                                const SaliencyParams& params);

/// Pairwise geometric saliency: distance-weighted sum of neighbors' g1.
double pairwise(const std::vector<LJunction>& all, const std::vector<SaliencyRecord>& records,
                int idx, const SaliencyParams& params);

/// Computes g1/g2 for every junction. When use_angle_prior is off, g1 is
/// the raw saliency (1 - rho); when use_neighbors is off, g2 stays 0.
std::vector<SaliencyRecord> score_junctions(const std::vector<LJunction>& all,
                                            const AnglePriorModel& model,
                                            const SaliencyParams& params);

/// Adds g1 + g2 to every pixel of each junction's parallelogram; overlaps
/// sum. Per-pixel sums are accumulated in junction index order so the
/// result is bitwise deterministic regardless of thread count.
Raster accumulate_gbi(const std::vector<SaliencyRecord>& records, int width, int height);

/// Optional 5x5 blur, optional multiplicative shadow suppression by
/// 1 - normalized black top-hat of the brightness channel, then min-max
/// normalization to [0,1].
GbiMap finalize_gbi(const Raster& raw, const Raster& brightness, const SaliencyParams& params);

/// Full pipeline: detect, decompose, score, accumulate, finalize.
GbiMap compute_gbi(const Raster& img, const AnglePriorModel& model,
                   const DetectionParams& det_params, const SaliencyParams& sal_params);

/// As compute_gbi but reusing already detected junctions.
GbiMap compute_gbi_from_junctions(const std::vector<Junction>& junctions, const Raster& img,
                                  const AnglePriorModel& model, const SaliencyParams& sal_params);

}  // namespace gbi

#endif  // GBI_SALIENCY_HPP
