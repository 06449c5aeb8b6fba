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

#include "gbi/saliency.hpp"

#include <algorithm>
#include <cmath>

namespace gbi {

double first_order(const LJunction& j, const AnglePriorModel& model) {
    return (1.0 - j.rho) * posterior_building(model, j.beta());
}

std::vector<int> find_neighbors(const std::vector<LJunction>& all, int idx,
                                const SaliencyParams& params) {
    if (params.neighbor_k <= 0)
        return {};
    const LJunction& self = all[idx];
    const Vec2 c = self.center();
    const double tau = params.distance_factor * self.max_branch_scale();
    const double ratio_cap = params.scale_ratio_limit;

    std::vector<std::pair<double, int>> admitted;  // (distance, index)
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
        if (i == idx)
            continue;
        const double d = (all[i].center() - c).norm();
        if (!(d < tau))
            continue;
        const double s_self = self.max_branch_scale();
        const double s_other = all[i].max_branch_scale();
        if (s_self > ratio_cap * s_other || s_other > ratio_cap * s_self)
            continue;
        admitted.emplace_back(d, i);
    }
    std::stable_sort(admitted.begin(), admitted.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return a.second < b.second;
    });
    if (static_cast<int>(admitted.size()) > params.neighbor_k)
        admitted.resize(params.neighbor_k);

    std::vector<int> out;
    out.reserve(admitted.size());
    for (const auto& [d, i] : admitted)
        out.push_back(i);
    return out;
}

double pairwise(const std::vector<LJunction>& all, const std::vector<SaliencyRecord>& records,
                int idx, const SaliencyParams& params) {
    const LJunction& self = all[idx];
    const Vec2 c = self.center();
    const double tau = params.distance_factor * self.max_branch_scale();
    if (tau <= 0.0)
        return 0.0;
    double g2 = 0.0;
    for (int n : records[idx].neighbors) {
        const double d = (all[n].center() - c).norm();
        const double w = params.squared_exponential ? std::exp(-(d * d) / (tau * tau))
                                                    : std::exp(-d / tau);
        g2 += w * records[n].g1;
    }
    return g2;
}

std::vector<SaliencyRecord> score_junctions(const std::vector<LJunction>& all,
                                            const AnglePriorModel& model,
                                            const SaliencyParams& params) {
    const int n = static_cast<int>(all.size());
    std::vector<SaliencyRecord> records(n);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        records[i].junction = all[i];
        records[i].g1 = params.use_angle_prior ? first_order(all[i], model)
                                               : 1.0 - all[i].rho;
        if (params.use_neighbors)
            records[i].neighbors = find_neighbors(all, i, params);
    }
    if (params.use_neighbors) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            records[i].g2 = pairwise(all, records, i, params);
    }
    return records;
}

Raster accumulate_gbi(const std::vector<SaliencyRecord>& records, int width, int height) {
    // Gather per pixel rather than scatter per junction: each pixel's sum is
    // built in junction index order, which keeps the floating-point result
    // independent of the thread count.
    struct Entry {
        int index;
        int x0, x1;
        Parallelogram region;
        double value;
    };
    std::vector<std::vector<Entry>> rows(height);
    for (int i = 0; i < static_cast<int>(records.size()); ++i) {
        const Parallelogram r(records[i].junction);
        double minx = r.origin.x, maxx = r.origin.x, miny = r.origin.y, maxy = r.origin.y;
        for (const Vec2& v : r.vertices()) {
            minx = std::min(minx, v.x);
            maxx = std::max(maxx, v.x);
            miny = std::min(miny, v.y);
            maxy = std::max(maxy, v.y);
        }
        const int x0 = std::max(0, static_cast<int>(std::ceil(minx)));
        const int x1 = std::min(width - 1, static_cast<int>(std::floor(maxx)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(miny)));
        const int y1 = std::min(height - 1, static_cast<int>(std::floor(maxy)));
        if (x0 > x1 || y0 > y1)
            continue;
        const double v = records[i].g1 + records[i].g2;
        for (int y = y0; y <= y1; ++y)
            rows[y].push_back({i, x0, x1, r, v});
    }

    Raster out(width, height);
#pragma omp parallel for schedule(dynamic, 4)
    for (int y = 0; y < height; ++y) {
        for (const Entry& e : rows[y]) {
            for (int x = e.x0; x <= e.x1; ++x)
                if (e.region.contains(Vec2(x, y)))
                    out.at(x, y) += e.value;
        }
    }
    return out;
}

GbiMap finalize_gbi(const Raster& raw, const Raster& brightness, const SaliencyParams& params) {
    if (!raw.same_dims(brightness))
        throw ParameterError("finalize_gbi: raw and brightness dimensions differ");

    GbiMap map;
    map.raw = raw;
    Raster work = params.use_blur ? gaussian_blur(raw, params.blur_side, params.blur_sigma) : raw;

    if (params.use_shadow) {
        const Raster tophat =
            min_max_normalize(black_top_hat(brightness, StructuringElement(params.tophat_side)));
        const int w = work.width();
        const int h = work.height();
#pragma omp parallel for schedule(static)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                work.at(x, y) *= 1.0 - tophat.at(x, y);
    }

    map.final = min_max_normalize(work);
    return map;
}

GbiMap compute_gbi(const Raster& img, const AnglePriorModel& model,
                   const DetectionParams& det_params, const SaliencyParams& sal_params) {
    const std::vector<Junction> junctions = detect_junctions(img, det_params);
    return compute_gbi_from_junctions(junctions, img, model, sal_params);
}

GbiMap compute_gbi_from_junctions(const std::vector<Junction>& junctions, const Raster& img,
                                  const AnglePriorModel& model,
                                  const SaliencyParams& sal_params) {
    std::vector<LJunction> ljs;
    for (const Junction& j : junctions) {
        const auto parts = decompose(j);
        ljs.insert(ljs.end(), parts.begin(), parts.end());
    }
    const auto records = score_junctions(ljs, model, sal_params);
    const Raster raw = accumulate_gbi(records, img.width(), img.height());
    return finalize_gbi(raw, img, sal_params);
}

}  // namespace gbi
