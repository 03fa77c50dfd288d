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

#ifndef XLPREC_GEOMETRY_HPP
#define XLPREC_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "xlprec/rng.hpp"

namespace xlprec {

inline constexpr double kSpeedOfLight = 3.0e8;

// Uniform linear array along the x axis, antenna m at x = m * spacing, split
// into S contiguous subarrays of M/S antennas. Subarray indices are 0-based.
struct ArrayGeometry {
    std::size_t antennas = 0;
    std::size_t subarrays = 0;
    double spacing = 0.0;
    std::vector<double> positions;

    std::size_t subarray_size() const { return antennas / subarrays; }
    std::size_t subarray_of(std::size_t antenna) const { return antenna / subarray_size(); }
    std::size_t subarray_begin(std::size_t s) const { return s * subarray_size(); }
    // Physical aperture N = M * spacing.
    double length() const { return static_cast<double>(antennas) * spacing; }
};

ArrayGeometry build_geometry(std::size_t antennas, std::size_t subarrays, double carrier_hz,
                             double spacing_wavelengths);

// Largest multiple of `subarrays` whose aperture does not exceed `length_m`.
std::size_t antennas_for_length(double length_m, std::size_t subarrays, double carrier_hz,
                                double spacing_wavelengths);

struct UserLayout {
    std::size_t users = 0;
    std::size_t groups = 0;
    std::vector<std::array<double, 2>> positions;
    // users x antennas, meters.
    Eigen::MatrixXd distances;

    std::size_t group_size() const { return users / groups; }
    std::size_t group_of(std::size_t user) const { return user / group_size(); }
};

inline constexpr std::size_t kMaxDropAttempts = 10000;

// Drops K users uniformly over [0, cell_side]^2 with the array on the edge
// y = 0, rejecting positions closer than min_dist to any antenna.
UserLayout drop_users(RandomStream& rng, std::size_t users, std::size_t groups,
                      double cell_side, double min_dist, const ArrayGeometry& geometry);

struct VisibilityRegion {
    double center = 0.0;
    double length = 0.0;
    std::vector<std::uint8_t> visible;

    std::size_t visible_count() const;
};

// Antenna m is visible iff its position lies in [c - l/2, c + l/2] clamped to
// the aperture [0, N].
std::vector<std::uint8_t> visibility_mask(const ArrayGeometry& geometry, double center,
                                          double length);

enum class VrLengthModel {
    // 0.1N is the mean of log(l).
    LogMean,
    // 0.1N is E[l]; the log-mean is shifted by -sigma^2/2.
    LinearMean,
};

// Log-domain location of the VR length for a mean parameter of `scale * N`.
double vr_log_location(const ArrayGeometry& geometry, double scale, double sigma,
                       VrLengthModel model);

inline constexpr std::size_t kMaxVrAttempts = 10000;

// c ~ U(0, N), l ~ LN(mu_log, sigma); regions that see no antenna are redrawn.
VisibilityRegion sample_vr(RandomStream& rng, const ArrayGeometry& geometry, double mu_log,
                           double sigma);

// As above, but a region is only accepted once it covers at least one antenna
// flagged in `eligible`.
VisibilityRegion sample_vr(RandomStream& rng, const ArrayGeometry& geometry, double mu_log,
                           double sigma, const std::vector<std::uint8_t>& eligible);

} // namespace xlprec

#endif
