// SPDX-License-Identifier: Apache-2.0
//
// srsaoa - 5G NR SRS uplink angle-of-arrival simulation laboratory
// Copyright (C) 2026 srsaoa contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef srsaoa_common_H
#define srsaoa_common_H

#include <complex>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace srsaoa
{

using cpx = std::complex<double>;
using cvec = std::vector<cpx>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0; // m/s

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

// Wrap an angle to [-pi, pi)
inline double wrap_to_pi(double x)
{
    double y = std::fmod(x + pi, 2.0 * pi);
    if (y < 0.0)
        y += 2.0 * pi;
    return y - pi;
}

} // namespace srsaoa

#endif
