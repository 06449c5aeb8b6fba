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

#ifndef GBI_REFERENCE_HPP
#define GBI_REFERENCE_HPP

#include <vector>

#include "gbi/evaluation.hpp"
#include "gbi/l_junction.hpp"
#include "gbi/raster.hpp"
#include "gbi/saliency.hpp"

// Straightforward single-threaded implementations of the parallel kernels.
// They exist to check the optimized versions (the test suites compare the
// two paths) and as baselines for the benchmark target. Kept deliberately
// naive: direct window scans and per-pixel loops, no shared intermediates.
namespace gbi::reference {

/// Direct 2-D convolution with an explicitly sampled, normalized Gaussian
/// kernel; edge replication.
Raster gaussian_blur(const Raster& img, int side, double sigma);

/// O(side^2) window scan per pixel.
Raster dilate(const Raster& img, const StructuringElement& se);
Raster erode(const Raster& img, const StructuringElement& se);
Raster black_top_hat(const Raster& img, const StructuringElement& se);

/// Checks every pixel of the image against the sector predicate.
std::vector<std::pair<int, int>> sector_pixels(int px, int py, double s, double theta,
                                               double delta, int width, int height);

/// Explicit summation over the brute-force sector.
double branch_strength(int px, int py, double s, double theta, const GradientField& grad,
                       double delta);

/// All-pixel contains() scan.
std::vector<PixelPos> covered_pixels(const Parallelogram& r, int width, int height);

/// Per-pixel loop over all junctions in index order.
Raster accumulate_gbi(const std::vector<SaliencyRecord>& records, int width, int height);

/// Exhaustive filter-then-sort neighbor search.
std::vector<int> find_neighbors(const std::vector<LJunction>& all, int idx,
                                const SaliencyParams& params);

/// Single-threaded per-pixel tally.
Confusion confusion(const Raster& pred, const Raster& gt, double t);

/// Average precision from a dense threshold sweep (default step 1e-4).
double average_precision_dense(const Raster& pred, const Raster& gt, double step = 1e-4);

}  // namespace gbi::reference

#endif  // GBI_REFERENCE_HPP
