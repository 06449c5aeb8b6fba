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

#include "gbi/reference.hpp"

#include <algorithm>
#include <cmath>

#include "gbi/junction.hpp"

namespace gbi::reference {

Raster gaussian_blur(const Raster& img, int side, double sigma) {
    if (side < 1 || side % 2 == 0)
        throw ParameterError("reference blur: kernel side must be odd");
    if (sigma <= 0.0)
        throw ParameterError("reference blur: sigma must be > 0");
    const int r = side / 2;
    std::vector<double> k(static_cast<std::size_t>(side) * side);
    double sum = 0.0;
    for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) {
            const double v = std::exp(-0.5 * (i * i + j * j) / (sigma * sigma));
            k[static_cast<std::size_t>(j + r) * side + (i + r)] = v;
            sum += v;
        }
    for (double& v : k)
        v /= sum;

    Raster out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int j = -r; j <= r; ++j)
                for (int i = -r; i <= r; ++i)
                    acc += k[static_cast<std::size_t>(j + r) * side + (i + r)] *
                           img.at_clamped(x + i, y + j);
            out.at(x, y) = acc;
        }
    }
    return out;
}

namespace {

template <typename Cmp>
Raster window_extremum(const Raster& img, int radius, Cmp better) {
    Raster out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double best = img.at(x, y);
            for (int j = -radius; j <= radius; ++j)
                for (int i = -radius; i <= radius; ++i) {
                    const double v = img.at_clamped(x + i, y + j);
                    if (better(v, best))
                        best = v;
                }
            out.at(x, y) = best;
        }
    }
    return out;
}

}  // namespace

Raster dilate(const Raster& img, const StructuringElement& se) {
    return window_extremum(img, se.radius(), std::greater<double>());
}

Raster erode(const Raster& img, const StructuringElement& se) {
    return window_extremum(img, se.radius(), std::less<double>());
}

Raster black_top_hat(const Raster& img, const StructuringElement& se) {
    const Raster closed = reference::erode(reference::dilate(img, se), se);
    Raster out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(x, y) = std::max(closed.at(x, y) - img.at(x, y), 0.0);
    return out;
}

std::vector<std::pair<int, int>> sector_pixels(int px, int py, double s, double theta,
                                               double delta, int width, int height) {
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (x == px && y == py)
                continue;
            const double dx = x - px;
            const double dy = y - py;
            if (dx * dx + dy * dy > s * s)
                continue;
            const double alpha = wrap_angle(std::atan2(dy, dx));
            if (circular_distance(alpha, theta) <= delta)
                out.emplace_back(x, y);
        }
    }
    return out;
}

double branch_strength(int px, int py, double s, double theta, const GradientField& grad,
                       double delta) {
    double sum = 0.0;
    for (const auto& [qx, qy] :
         sector_pixels(px, py, s, theta, delta, grad.magnitude.width(), grad.magnitude.height()))
        sum += pairwise_strength(qx, qy, px, py, grad);
    return sum;
}

std::vector<PixelPos> covered_pixels(const Parallelogram& r, int width, int height) {
    std::vector<PixelPos> out;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (r.contains(Vec2(x, y)))
                out.push_back({x, y});
    return out;
}

Raster accumulate_gbi(const std::vector<SaliencyRecord>& records, int width, int height) {
    Raster out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (const SaliencyRecord& rec : records)
                if (Parallelogram(rec.junction).contains(Vec2(x, y)))
                    out.at(x, y) += rec.g1 + rec.g2;
    return out;
}

std::vector<int> find_neighbors(const std::vector<LJunction>& all, int idx,
                                const SaliencyParams& params) {
    const LJunction& self = all[idx];
    const double tau = params.distance_factor * self.max_branch_scale();
    std::vector<int> admitted;
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
        if (i == idx)
            continue;
        const double d = (all[i].center() - self.center()).norm();
        const double a = self.max_branch_scale();
        const double b = all[i].max_branch_scale();
        if (d < tau && a <= params.scale_ratio_limit * b && b <= params.scale_ratio_limit * a)
            admitted.push_back(i);
    }
    std::stable_sort(admitted.begin(), admitted.end(), [&](int a, int b) {
        const double da = (all[a].center() - self.center()).norm();
        const double db = (all[b].center() - self.center()).norm();
        if (da != db)
            return da < db;
        return a < b;
    });
    if (static_cast<int>(admitted.size()) > params.neighbor_k)
        admitted.resize(params.neighbor_k);
    return admitted;
}

Confusion confusion(const Raster& pred, const Raster& gt, double t) {
    if (!pred.same_dims(gt))
        throw ParameterError("reference confusion: dimension mismatch");
    Confusion c;
    for (int y = 0; y < pred.height(); ++y) {
        for (int x = 0; x < pred.width(); ++x) {
            const bool p = pred.at(x, y) >= t;
            const bool g = gt.at(x, y) != 0.0;
            if (p && g)
                ++c.tp;
            else if (p)
                ++c.fp;
            else if (g)
                ++c.fn;
            else
                ++c.tn;
        }
    }
    return c;
}

double average_precision_dense(const Raster& pred, const Raster& gt, double step) {
    std::vector<ThresholdEntry> entries;
    const int n = static_cast<int>(std::lround(1.0 / step));
    entries.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * step;
        const Confusion c = reference::confusion(pred, gt, t);
        const auto [p, r] = precision_recall(c);
        entries.push_back({t, p, r, 0.0});
    }
    return average_precision(entries);
}

}  // namespace gbi::reference
