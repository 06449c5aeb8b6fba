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

#ifndef GBI_RASTER_HPP
#define GBI_RASTER_HPP

#include <cstddef>
#include <vector>

#include "gbi/common.hpp"

namespace gbi {

/// Single-channel image on a pixel grid, row-major doubles.
/// Pixel (x, y) has its center at integer coordinates (x, y).
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    /// at() with coordinates clamped to the grid (edge replication).
    double at_clamped(int x, int y) const;

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_dims(const Raster& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    double max_value() const;
    double min_value() const;
    double mean() const;

    /// True when every value is finite.
    bool all_finite() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Flat square structuring element with odd side.
struct StructuringElement {
    int side = 51;

    explicit StructuringElement(int side_px = 51);
    int radius() const { return side / 2; }
};

/// Normalized gradient magnitude plus raw gradient direction.
struct GradientField {
    Raster magnitude;    ///< |grad| / max over image, in [0,1]
    Raster orientation;  ///< atan2(dy, dx) folded into [0, 2*pi)
};

/// Separable Gaussian convolution with edge replication. `side` must be odd.
Raster gaussian_blur(const Raster& img, int side, double sigma);

/// Central differences in the interior, one-sided at the borders.
/// Requires width >= 2 and height >= 2.
GradientField gradient_field(const Raster& img);

/// Grayscale dilation (max filter) by a flat square, edge replication.
Raster dilate(const Raster& img, const StructuringElement& se);
/// Grayscale erosion (min filter) by a flat square, edge replication.
Raster erode(const Raster& img, const StructuringElement& se);
/// Morphological closing: erode(dilate(img)).
Raster close(const Raster& img, const StructuringElement& se);
/// close(img) - img, elementwise; nonnegative.
Raster black_top_hat(const Raster& img, const StructuringElement& se);

/// (v - min) / (max - min). A constant input maps to all zeros.
Raster min_max_normalize(const Raster& img);

}  // namespace gbi

#endif  // GBI_RASTER_HPP
