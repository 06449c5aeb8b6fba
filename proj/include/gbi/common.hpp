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

#ifndef GBI_COMMON_HPP
#define GBI_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace gbi {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Unreadable or unwritable files.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed file contents (bad magic, bad bit depth, invalid model file).
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Arguments violating an operation's preconditions.
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

/// Folds any angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0)
        a += kTwoPi;
    // fmod can return exactly 2*pi after the correction when a is a tiny
    // negative number.
    if (a >= kTwoPi)
        a = 0.0;
    return a;
}

/// Distance along the unit circle: min(|a-b|, 2*pi - |a-b|).
inline double circular_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

/// Included angle between two branch orientations, folded into (0, pi].
inline double included_angle(double theta1, double theta2) {
    double d = std::fabs(theta1 - theta2);
    d = std::fmod(d, kTwoPi);
    d = std::min(d, kTwoPi - d);
    return d > kPi ? kTwoPi - d : d;
}

/// Signed difference a-b wrapped into (-pi, pi].
inline double wrap_signed(double d) {
    d = std::fmod(d, kTwoPi);
    if (d > kPi)
        d -= kTwoPi;
    if (d <= -kPi)
        d += kTwoPi;
    return d;
}

}  // namespace gbi

#endif  // GBI_COMMON_HPP
