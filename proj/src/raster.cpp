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

#include "gbi/raster.hpp"

#include <algorithm>
#include <cmath>

namespace gbi {

Raster::Raster(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw ParameterError("Raster dimensions must be >= 1");
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

double Raster::at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return at(x, y);
}

double Raster::max_value() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_)
        m = std::max(m, v);
    return m;
}

double Raster::min_value() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_)
        m = std::min(m, v);
    return m;
}

double Raster::mean() const {
    if (data_.empty())
        return 0.0;
    double s = 0.0;
    for (double v : data_)
        s += v;
    return s / static_cast<double>(data_.size());
}

bool Raster::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v))
            return false;
    return true;
}

StructuringElement::StructuringElement(int side_px) : side(side_px) {
    if (side < 1 || side % 2 == 0)
        throw ParameterError("structuring element side must be odd and >= 1");
}

namespace {

// Sampled Gaussian taps normalized to sum exactly 1: the center tap absorbs
// the normalization residual so constants are preserved bitwise.
std::vector<double> gaussian_kernel(int side, double sigma) {
    const int r = side / 2;
    std::vector<double> k(side);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[i + r] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += k[i + r];
    }
    for (double& v : k)
        v /= sum;
    double rest = 0.0;
    for (int i = 0; i < side; ++i)
        if (i != r)
            rest += k[i];
    k[r] = 1.0 - rest;
    return k;
}

}  // namespace

Raster gaussian_blur(const Raster& img, int side, double sigma) {
    if (side < 1 || side % 2 == 0)
        throw ParameterError("gaussian_blur: kernel side must be odd");
    if (sigma <= 0.0)
        throw ParameterError("gaussian_blur: sigma must be > 0");

    const std::vector<double> kernel = gaussian_kernel(side, sigma);
    const int r = side / 2;
    const int w = img.width();
    const int h = img.height();

    Raster tmp(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                acc += kernel[i + r] * img.at_clamped(x + i, y);
            tmp.at(x, y) = acc;
        }
    }

    Raster out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                acc += kernel[i + r] * tmp.at_clamped(x, y + i);
            out.at(x, y) = acc;
        }
    }
    return out;
}

GradientField gradient_field(const Raster& img) {
    const int w = img.width();
    const int h = img.height();
    if (w < 2 || h < 2)
        throw ParameterError("gradient_field: image must be at least 2x2");

    GradientField g{Raster(w, h), Raster(w, h)};

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double dx, dy;
            if (x == 0)
                dx = img.at(1, y) - img.at(0, y);
            else if (x == w - 1)
                dx = img.at(w - 1, y) - img.at(w - 2, y);
            else
                dx = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
            if (y == 0)
                dy = img.at(x, 1) - img.at(x, 0);
            else if (y == h - 1)
                dy = img.at(x, h - 1) - img.at(x, h - 2);
            else
                dy = 0.5 * (img.at(x, y + 1) - img.at(x, y - 1));

            const double mag = std::hypot(dx, dy);
            g.magnitude.at(x, y) = mag;
            g.orientation.at(x, y) = mag > 0.0 ? wrap_angle(std::atan2(dy, dx)) : 0.0;
        }
    }

    const double maxmag = g.magnitude.max_value();
    if (maxmag > 0.0) {
#pragma omp parallel for schedule(static)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                g.magnitude.at(x, y) /= maxmag;
    }
    return g;
}

namespace {

enum class Extremum { kMax, kMin };

// 1-D sliding window extremum along rows or columns with clamped borders.
Raster square_filter_pass(const Raster& img, int radius, Extremum mode, bool horizontal) {
    const int w = img.width();
    const int h = img.height();
    Raster out(w, h);

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double best = img.at(x, y);
            for (int i = -radius; i <= radius; ++i) {
                const double v = horizontal ? img.at_clamped(x + i, y)
                                            : img.at_clamped(x, y + i);
                best = mode == Extremum::kMax ? std::max(best, v) : std::min(best, v);
            }
            out.at(x, y) = best;
        }
    }
    return out;
}

}  // namespace

Raster dilate(const Raster& img, const StructuringElement& se) {
    Raster tmp = square_filter_pass(img, se.radius(), Extremum::kMax, true);
    return square_filter_pass(tmp, se.radius(), Extremum::kMax, false);
}

Raster erode(const Raster& img, const StructuringElement& se) {
    Raster tmp = square_filter_pass(img, se.radius(), Extremum::kMin, true);
    return square_filter_pass(tmp, se.radius(), Extremum::kMin, false);
}

Raster close(const Raster& img, const StructuringElement& se) {
    return erode(dilate(img, se), se);
}

Raster black_top_hat(const Raster& img, const StructuringElement& se) {
    Raster closed = close(img, se);
    const int w = img.width();
    const int h = img.height();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            closed.at(x, y) = std::max(closed.at(x, y) - img.at(x, y), 0.0);
    return closed;
}

Raster min_max_normalize(const Raster& img) {
    const double lo = img.min_value();
    const double hi = img.max_value();
    Raster out(img.width(), img.height());
    if (hi - lo <= 0.0)
        return out;
    const int w = img.width();
    const int h = img.height();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = (img.at(x, y) - lo) / (hi - lo);
    return out;
}

}  // namespace gbi
