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

#ifndef GBI_JUNCTION_HPP
#define GBI_JUNCTION_HPP

#include <string>
#include <vector>

#include "gbi/common.hpp"
#include "gbi/raster.hpp"

namespace gbi {

struct Branch {
    double scale = 0.0;  ///< pixels, > 0
    double theta = 0.0;  ///< radians in [0, 2*pi)
};

/// Multi-branch junction: position, per-branch scale/orientation, and an
/// a-contrario significance rho in [0,1] (smaller is more reliable).
struct Junction {
    int x = 0;
    int y = 0;
    std::vector<Branch> branches;
    double rho = 1.0;
};

struct DetectionParams {
    /// Candidate seed scales, strictly increasing.
    std::vector<double> scales{5, 10, 15, 20, 30};
    int orientation_bins = 128;

    /// Angular tolerance delta(s) = atan(delta_arm / s), clipped to
    /// [delta_min, delta_max]; keeps the sector roughly delta_arm*2 px wide
    /// at its arc.
    double delta_arm = 1.5;
    double delta_min = 0.02;
    double delta_max = kPi / 4.0;

    /// Meaningfulness threshold: junctions with rho <= epsilon are kept.
    double epsilon = 1.0;

    /// Non-max suppression radius; <= 0 selects the smallest seed scale.
    double nms_radius = 0.0;

    /// Number of a-contrario tests charged to each candidate. "position"
    /// charges scales x orientation_bins; "image" additionally multiplies by
    /// the pixel count.
    enum class TestCount { kPerPosition, kPerImage };
    TestCount test_count = TestCount::kPerPosition;

    /// Pre-smoothing applied before the gradient (0 disables).
    int pre_smooth_side = 3;
    double pre_smooth_sigma = 0.5;

    /// Cap for anisotropic branch extension.
    double max_refined_scale = 60.0;

    /// Two-branch candidates whose included angle is within this tolerance
    /// of pi are straight-edge points, not junctions, and are discarded.
    double straight_edge_tol = 0.3;

    /// Minimum angular separation between branches of one junction; two
    /// rays closer than this ride the same edge ribbon.
    double min_branch_separation = 0.25;

    /// Branch support must be anchored at the junction point: the mean
    /// alignment over the innermost anchor_radius pixels of the sector has
    /// to exceed anchor_quality (the chance level is ~0.264). Rejects rays
    /// that only pick up an edge several pixels away from p.
    double anchor_radius = 4.0;
    double anchor_quality = 0.55;

    double delta(double s) const;
    double effective_nms_radius() const;
    void validate() const;
};

/// Expected per-pixel pairwise strength under uniformly random gradient
/// orientations: (2*sqrt(2) - 2) / pi.
double null_mean_per_pixel();

/// Pixels q != p with |pq| <= s and circular distance(angle(pq), theta)
/// <= delta, clipped to the image bounds.
std::vector<std::pair<int, int>> sector_pixels(int px, int py, double s, double theta,
                                               double delta, int width, int height);

/// Alignment weight between an edge direction and the direction of pq:
/// max(|cos(d)| - |sin(d)|, 0) for d = edge_angle - alpha(pq).
double alignment_weight(double angle_diff);

/// Strength contributed by pixel q to a branch rooted at p: the normalized
/// gradient magnitude at q times the alignment of the local edge direction
/// (gradient rotated by pi/2) with pq.
double pairwise_strength(int qx, int qy, int px, int py, const GradientField& grad);

/// Sum of pairwise_strength over sector_pixels(p, s, theta, delta).
double branch_strength(int px, int py, double s, double theta, const GradientField& grad,
                       double delta);

/// Minimal branch strength over the junction's branches.
double junction_strength(const Junction& j, const GradientField& grad,
                         const DetectionParams& params);

/// Hoeffding tail bound on the weakest branch under the uniform-orientation
/// null, times test_count, clamped to [0,1].
double significance(const Junction& j, const GradientField& grad,
                    const DetectionParams& params, double test_count);

/// Extends each branch ring by ring while the marginal strength beats the
/// null mean, re-estimates orientations, and recomputes rho.
Junction refine_anisotropic_scales(const Junction& j, const GradientField& grad,
                                   const DetectionParams& params, double test_count);

/// Full detector: candidate scan over (position, scale, orientation),
/// junction formation, NFA filtering, non-max suppression by rho, and
/// anisotropic refinement. Deterministic regardless of thread count.
std::vector<Junction> detect_junctions(const Raster& img, const DetectionParams& params);

/// CSV with header x,y,rho,m followed by m (scale,theta) pairs per row.
void save_junctions_csv(const std::vector<Junction>& js, const std::string& path);

}  // namespace gbi

#endif  // GBI_JUNCTION_HPP
