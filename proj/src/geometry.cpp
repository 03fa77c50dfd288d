// SPDX-License-Identifier: Apache-2.0
//
// xlprec: iterative RZF precoding for subarray XL-MIMO downlinks
// Copyright (C) 2026 The xlprec authors
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

#include "xlprec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "xlprec/errors.hpp"

namespace xlprec {

ArrayGeometry build_geometry(std::size_t antennas, std::size_t subarrays, double carrier_hz,
                             double spacing_wavelengths) {
    if (antennas == 0 || subarrays == 0)
        throw ConfigError(fmt::format("antenna count ({}) and subarray count ({}) must be positive",
                                      antennas, subarrays));
    if (antennas % subarrays != 0)
        throw ConfigError(fmt::format("antenna count {} is not divisible by subarray count {}",
                                      antennas, subarrays));
    if (!(carrier_hz > 0.0))
        throw ConfigError(fmt::format("carrier frequency must be positive, got {}", carrier_hz));
    if (!(spacing_wavelengths > 0.0))
        throw ConfigError(
            fmt::format("antenna spacing must be positive, got {} wavelengths", spacing_wavelengths));

    ArrayGeometry g;
    g.antennas = antennas;
    g.subarrays = subarrays;
    g.spacing = spacing_wavelengths * (kSpeedOfLight / carrier_hz);
    g.positions.resize(antennas);
    for (std::size_t m = 0; m < antennas; ++m)
        g.positions[m] = static_cast<double>(m) * g.spacing;
    return g;
}

std::size_t antennas_for_length(double length_m, std::size_t subarrays, double carrier_hz,
                                double spacing_wavelengths) {
    if (!(length_m > 0.0) || subarrays == 0 || !(carrier_hz > 0.0) || !(spacing_wavelengths > 0.0))
        throw ConfigError("array length, subarray count, carrier and spacing must be positive");
    const double spacing = spacing_wavelengths * (kSpeedOfLight / carrier_hz);
    // Small slack so that an aperture given to four decimals still admits its
    // intended antenna count.
    const auto implied = static_cast<std::size_t>(std::floor(length_m / spacing + 1e-6));
    const std::size_t m = implied - implied % subarrays;
    if (m == 0)
        throw ConfigError(fmt::format("array length {} m holds fewer than {} antennas", length_m,
                                      subarrays));
    return m;
}

UserLayout drop_users(RandomStream& rng, std::size_t users, std::size_t groups, double cell_side,
                      double min_dist, const ArrayGeometry& geometry) {
    if (users == 0 || groups == 0)
        throw ConfigError("user count and group count must be positive");
    if (users % groups != 0)
        throw ConfigError(
            fmt::format("user count {} is not divisible by group count {}", users, groups));
    if (!(cell_side > 0.0))
        throw ConfigError(fmt::format("cell side must be positive, got {}", cell_side));
    if (!(min_dist >= 0.0) || min_dist >= cell_side * std::numbers::sqrt2)
        throw ConfigError(fmt::format("minimum distance {} m must lie in [0, cell diagonal)", min_dist));

    UserLayout layout;
    layout.users = users;
    layout.groups = groups;
    layout.positions.resize(users);
    layout.distances.resize(static_cast<Eigen::Index>(users),
                            static_cast<Eigen::Index>(geometry.antennas));

    for (std::size_t k = 0; k < users; ++k) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < kMaxDropAttempts && !placed; ++attempt) {
            const double x = rng.uniform(0.0, cell_side);
            const double y = rng.uniform(0.0, cell_side);
            bool ok = true;
            for (std::size_t m = 0; m < geometry.antennas; ++m) {
                const double d = std::hypot(x - geometry.positions[m], y);
                if (d < min_dist) {
                    ok = false;
                    break;
                }
                layout.distances(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = d;
            }
            if (ok) {
                layout.positions[k] = {x, y};
                placed = true;
            }
        }
        if (!placed)
            throw GeometryError(fmt::format(
                "could not place user {} at least {} m from the array after {} attempts", k,
                min_dist, kMaxDropAttempts));
    }
    return layout;
}

std::size_t VisibilityRegion::visible_count() const {
    return static_cast<std::size_t>(std::count(visible.begin(), visible.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> visibility_mask(const ArrayGeometry& geometry, double center,
                                          double length) {
    const double lo = std::clamp(center - 0.5 * length, 0.0, geometry.length());
    const double hi = std::clamp(center + 0.5 * length, 0.0, geometry.length());
    std::vector<std::uint8_t> mask(geometry.antennas, 0);
    for (std::size_t m = 0; m < geometry.antennas; ++m) {
        const double p = geometry.positions[m];
        mask[m] = (p >= lo && p <= hi) ? 1 : 0;
    }
    return mask;
}

double vr_log_location(const ArrayGeometry& geometry, double scale, double sigma,
                       VrLengthModel model) {
    const double target = scale * geometry.length();
    switch (model) {
    case VrLengthModel::LogMean:
        return target;
    case VrLengthModel::LinearMean:
        if (!(target > 0.0))
            throw ConfigError("linear-mean VR length needs a positive mean");
        return std::log(target) - 0.5 * sigma * sigma;
    }
    return target;
}

VisibilityRegion sample_vr(RandomStream& rng, const ArrayGeometry& geometry, double mu_log,
                           double sigma) {
    return sample_vr(rng, geometry, mu_log, sigma, std::vector<std::uint8_t>(geometry.antennas, 1));
}

VisibilityRegion sample_vr(RandomStream& rng, const ArrayGeometry& geometry, double mu_log,
                           double sigma, const std::vector<std::uint8_t>& eligible) {
    if (eligible.size() != geometry.antennas)
        throw ConfigError("eligibility mask length does not match the array");
    if (!(sigma > 0.0))
        throw ConfigError(fmt::format("VR length sigma must be positive, got {}", sigma));
    for (std::size_t attempt = 0; attempt < kMaxVrAttempts; ++attempt) {
        VisibilityRegion vr;
        vr.center = rng.uniform(0.0, geometry.length());
        vr.length = rng.lognormal(mu_log, sigma);
        vr.visible = visibility_mask(geometry, vr.center, vr.length);
        for (std::size_t m = 0; m < geometry.antennas; ++m)
            if (vr.visible[m] && eligible[m])
                return vr;
    }
    throw GeometryError(
        fmt::format("no visibility region covering an antenna after {} draws", kMaxVrAttempts));
}

} // namespace xlprec
