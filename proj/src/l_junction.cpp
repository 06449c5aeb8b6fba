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

#include "gbi/l_junction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace gbi {

namespace {
constexpr double kDegenerateAngle = 1e-6;
}

Vec2 LJunction::center() const {
    const Vec2 q1 = corner + branch1();
    const Vec2 q2 = corner + branch2();
    return {(q1.x + q2.x) * 0.5, (q1.y + q2.y) * 0.5};
}

std::array<Vec2, 4> Parallelogram::vertices() const {
    return {origin, origin + edge1, origin + edge1 + edge2, origin + edge2};
}

bool Parallelogram::contains(const Vec2& pt) const {
    const double det = edge1.cross(edge2);
    if (det == 0.0)
        return false;
    const Vec2 d = pt - origin;
    const double a = d.cross(edge2) / det;
    const double b = edge1.cross(d) / det;
    return a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0;
}

std::vector<PixelPos> covered_pixels(const Parallelogram& r, int width, int height) {
    double minx = r.origin.x, maxx = r.origin.x;
    double miny = r.origin.y, maxy = r.origin.y;
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

    std::vector<PixelPos> out;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (r.contains(Vec2(x, y)))
                out.push_back({x, y});
    return out;
}

std::vector<LJunction> decompose(const Junction& j) {
    std::vector<LJunction> out;
    const int m = static_cast<int>(j.branches.size());
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            LJunction lj;
            lj.corner = Vec2(j.x, j.y);
            lj.scale1 = j.branches[a].scale;
            lj.theta1 = j.branches[a].theta;
            lj.scale2 = j.branches[b].scale;
            lj.theta2 = j.branches[b].theta;
            lj.rho = j.rho;
            const double beta = lj.beta();
            if (beta < kDegenerateAngle || beta > kPi - kDegenerateAngle)
                continue;
            out.push_back(lj);
        }
    }
    return out;
}

void save_l_junctions_csv(const std::vector<LJunction>& js, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << "x,y,cx,cy,s1,theta1,s2,theta2,beta,rho\n";
    out.precision(17);
    for (const LJunction& j : js) {
        const Vec2 c = j.center();
        out << j.corner.x << ',' << j.corner.y << ',' << c.x << ',' << c.y << ','
            << j.scale1 << ',' << j.theta1 << ',' << j.scale2 << ',' << j.theta2 << ','
            << j.beta() << ',' << j.rho << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path);
}

}  // namespace gbi
