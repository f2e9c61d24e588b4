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

#ifndef srsaoa_array_H
#define srsaoa_array_H

#include <algorithm>

#include "srsaoa/common.hpp"

namespace srsaoa
{

struct ula_geometry
{
    int n_elements = 3;
    double element_spacing = 0.0; // meters
    double carrier_freq = 0.0;    // Hz

    double wavelength() const { return speed_of_light / carrier_freq; }

    void validate() const
    {
        if (n_elements < 2)
            throw std::invalid_argument("ula_geometry: need at least two elements");
        if (element_spacing <= 0.0)
            throw std::invalid_argument("ula_geometry: element spacing must be positive");
        if (element_spacing > wavelength() / 2.0 + 1e-12)
            throw std::invalid_argument("ula_geometry: spacing above lambda/2 aliases");
    }
};

inline ula_geometry make_half_wavelength_ula(int n_elements, double carrier_freq)
{
    ula_geometry g;
    g.n_elements = n_elements;
    g.carrier_freq = carrier_freq;
    g.element_spacing = 0.5 * g.wavelength();
    return g;
}

// Element m responds with exp(-j 2 pi f_c m d sin(theta) / c); element 0 is
// the phase reference.
inline cvec steering_vector(const ula_geometry &geom, double theta_deg)
{
    if (!(std::abs(theta_deg) < 90.0))
        throw std::domain_error("steering_vector: angle must lie in (-90, 90) degrees");

    const double step =
        -2.0 * pi * geom.carrier_freq * geom.element_spacing * std::sin(deg2rad(theta_deg)) /
        speed_of_light;
    cvec a(geom.n_elements);
    for (int m = 0; m < geom.n_elements; ++m)
        a[m] = cpx(std::cos(step * m), std::sin(step * m));
    return a;
}

struct propagation_path
{
    double azimuth_deg = 0.0; // (-90, 90), measured from array broadside
    double delay_s = 0.0;
    cpx gain{1.0, 0.0};
};

struct vec3
{
    double x = 0.0, y = 0.0, z = 0.0;
};

inline vec3 operator-(const vec3 &a, const vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline vec3 operator+(const vec3 &a, const vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline vec3 operator*(double s, const vec3 &a) { return {s * a.x, s * a.y, s * a.z}; }
inline double norm(const vec3 &a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }

// Flat ground plus one vertical wall segment, everything else free space.
// The receive array sits at rx_position with its axis along +y, so broadside
// points along +x and a path arriving from direction u maps to the conical
// angle asin(u . y_hat).
struct scene_geometry
{
    vec3 tx_position;
    vec3 rx_position;
    double ground_height = 0.0;
    cpx ground_reflection{-0.7, 0.0};

    bool has_wall = true;
    // Wall: vertical plane y = wall_standoff, spanning x in [wall_x_min,
    // wall_x_max], from the ground up to wall_height.
    double wall_standoff = 25.0;
    double wall_x_min = 10.0;
    double wall_x_max = 22.5;
    double wall_height = 10.0;
    cpx wall_reflection{0.5, 0.0};

    void validate() const
    {
        if (tx_position.z <= ground_height || rx_position.z <= ground_height)
            throw std::invalid_argument("scene_geometry: endpoints must be above ground");
        if (norm(tx_position - rx_position) == 0.0)
            throw std::invalid_argument("scene_geometry: tx and rx coincide");
    }
};

namespace detail
{
inline double arrival_azimuth_deg(const vec3 &from_rx)
{
    const double s = from_rx.y / norm(from_rx);
    return rad2deg(std::asin(std::clamp(s, -1.0, 1.0)));
}
} // namespace detail

// Deterministic image-method ray set: LOS, ground bounce, and the wall bounce
// when its specular point lies on the wall segment. Gains follow free-space
// 1/distance spreading times the reflection coefficient; delays are absolute
// path length over c.
inline std::vector<propagation_path> compute_scene_paths(const scene_geometry &scene,
                                                         const ula_geometry &geom)
{
    (void)geom; // isotropic elements: geometry enters via the steering model only
    scene.validate();

    std::vector<propagation_path> paths;

    const vec3 rx = scene.rx_position;
    const vec3 tx = scene.tx_position;

    // line of sight
    {
        const vec3 d = tx - rx;
        propagation_path p;
        p.azimuth_deg = detail::arrival_azimuth_deg(d);
        p.delay_s = norm(d) / speed_of_light;
        p.gain = cpx(1.0 / norm(d), 0.0);
        paths.push_back(p);
    }

    // ground bounce: mirror the transmitter across the ground plane
    {
        const vec3 img{tx.x, tx.y, 2.0 * scene.ground_height - tx.z};
        const vec3 d = img - rx;
        propagation_path p;
        p.azimuth_deg = detail::arrival_azimuth_deg(d);
        p.delay_s = norm(d) / speed_of_light;
        p.gain = scene.ground_reflection / norm(d);
        paths.push_back(p);
    }

    // wall bounce: mirror across the plane y = wall_standoff, keep the path
    // only if the specular point falls inside the wall segment
    if (scene.has_wall)
    {
        const vec3 img{tx.x, 2.0 * scene.wall_standoff - tx.y, tx.z};
        const vec3 d = img - rx;
        if (d.y != 0.0)
        {
            const double t = (scene.wall_standoff - rx.y) / d.y;
            if (t > 0.0 && t < 1.0)
            {
                const vec3 sp = rx + t * d;
                if (sp.x >= scene.wall_x_min && sp.x <= scene.wall_x_max &&
                    sp.z >= scene.ground_height && sp.z <= scene.ground_height + scene.wall_height)
                {
                    propagation_path p;
                    p.azimuth_deg = detail::arrival_azimuth_deg(d);
                    p.delay_s = norm(d) / speed_of_light;
                    p.gain = scene.wall_reflection / norm(d);
                    paths.push_back(p);
                }
            }
        }
    }

    return paths;
}

// Shift delays so the earliest path sits at zero; the receiver recovers the
// bulk offset during synchronization anyway.
inline std::vector<propagation_path> remove_bulk_delay(std::vector<propagation_path> paths)
{
    if (paths.empty())
        return paths;
    double min_delay = paths.front().delay_s;
    for (const auto &p : paths)
        min_delay = std::min(min_delay, p.delay_s);
    for (auto &p : paths)
        p.delay_s -= min_delay;
    return paths;
}

} // namespace srsaoa

#endif
