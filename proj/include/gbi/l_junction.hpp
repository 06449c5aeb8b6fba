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

#ifndef GBI_L_JUNCTION_HPP
#define GBI_L_JUNCTION_HPP

#include <array>
#include <string>
#include <vector>

#include "gbi/common.hpp"
#include "gbi/junction.hpp"

namespace gbi {

/// Two-branch junction. The branches span a parallelogram whose center is
/// the junction center c.
struct LJunction {
    Vec2 corner;          ///< branch origin p
    double scale1 = 0.0;  ///< |nu1|
    double theta1 = 0.0;
    double scale2 = 0.0;  ///< |nu2|
    double theta2 = 0.0;
    double rho = 1.0;     ///< inherited from the source junction

    Vec2 branch1() const { return {scale1 * std::cos(theta1), scale1 * std::sin(theta1)}; }
    Vec2 branch2() const { return {scale2 * std::cos(theta2), scale2 * std::sin(theta2)}; }
    /// Midpoint of the two branch endpoints = parallelogram center.
    Vec2 center() const;
    /// Included angle of the branches, folded into (0, pi].
    double beta() const { return included_angle(theta1, theta2); }
    double max_branch_scale() const { return std::max(scale1, scale2); }
};

/// Region spanned by an L-junction's branches: p, p+nu1, p+nu1+nu2, p+nu2.
struct Parallelogram {
    Vec2 origin;
    Vec2 edge1;
    Vec2 edge2;

    Parallelogram(Vec2 origin_, Vec2 edge1_, Vec2 edge2_)
        : origin(origin_), edge1(edge1_), edge2(edge2_) {}
    explicit Parallelogram(const LJunction& j)
        : origin(j.corner), edge1(j.branch1()), edge2(j.branch2()) {}

    std::array<Vec2, 4> vertices() const;
    double area() const { return std::fabs(edge1.cross(edge2)); }

    /// Closed-region test: pt = origin + a*edge1 + b*edge2 with a, b in [0,1].
    bool contains(const Vec2& pt) const;
};

struct PixelPos {
    int x = 0;
    int y = 0;
    bool operator==(const PixelPos&) const = default;
};

/// Integer pixel centers inside the parallelogram, clipped to
/// [0,width) x [0,height). Enumerated by bounding-box scan, row-major.
std::vector<PixelPos> covered_pixels(const Parallelogram& r, int width, int height);

/// Splits a junction into one LJunction per unordered branch pair.
/// Pairs with included angle below 1e-6 or above pi - 1e-6 are dropped.
std::vector<LJunction> decompose(const Junction& j);

/// CSV with header x,y,cx,cy,s1,theta1,s2,theta2,beta,rho.
void save_l_junctions_csv(const std::vector<LJunction>& js, const std::string& path);

}  // namespace gbi

#endif  // GBI_L_JUNCTION_HPP
