// Copyright 2026 The qpe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>

namespace qpelab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle to [0, 2pi).
inline double wrap_angle(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2pi.
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Signed difference a - b reduced to (-pi, pi].
inline double signed_angle_difference(double a, double b) {
    double d = wrap_angle(a - b);
    return d > kPi ? d - kTwoPi : d;
}

/// min(|a - b|, 2pi - |a - b|) for angles taken modulo 2pi.
inline double wrapped_distance(double a, double b) {
    return std::abs(signed_angle_difference(a, b));
}

}  // namespace qpelab
