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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "xlprec/errors.hpp"
#include "xlprec/geometry.hpp"

using namespace xlprec;

namespace {

// Interval test evaluated directly on the antenna positions.
std::vector<std::uint8_t> brute_force_mask(const ArrayGeometry& g, double c, double l) {
    const double lo = std::max(0.0, c - l / 2.0);
    const double hi = std::min(g.length(), c + l / 2.0);
    std::vector<std::uint8_t> mask(g.antennas);
    for (std::size_t m = 0; m < g.antennas; ++m)
        mask[m] = g.positions[m] >= lo && g.positions[m] <= hi;
    return mask;
}

} // namespace

TEST_CASE("non-divisible antenna count names both values") {
    try {
        (void)build_geometry(100, 3, 2.6e9, 2.0);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("100") != std::string::npos);
        CHECK(msg.find('3') != std::string::npos);
    }
}

TEST_CASE("default array spacing and aperture") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    const double wavelength = 3.0e8 / 2.6e9;
    CHECK(g.spacing == doctest::Approx(2.0 * wavelength).epsilon(1e-14));
    CHECK(g.spacing == doctest::Approx(0.23077).epsilon(1e-4));
    CHECK(g.length() == doctest::Approx(22.846).epsilon(1e-4));
    CHECK(g.subarray_size() == 33);
}

TEST_CASE("small array positions and partition") {
    const ArrayGeometry g = build_geometry(6, 2, 3.0e9, 0.5);
    CHECK(g.spacing == doctest::Approx(0.05));
    REQUIRE(g.positions.size() == 6);
    for (std::size_t m = 0; m < 6; ++m) {
        CHECK(g.positions[m] == doctest::Approx(0.05 * static_cast<double>(m)));
        CHECK(g.subarray_of(m) == (m < 3 ? 0u : 1u));
    }
}

TEST_CASE("positions increase with a constant gap and subarrays cover the array once") {
    for (const std::size_t m : {3u, 33u, 99u, 198u}) {
        const ArrayGeometry g = build_geometry(m, 3, 2.6e9, 2.0);
        for (std::size_t i = 1; i < m; ++i)
            CHECK(g.positions[i] - g.positions[i - 1] == doctest::Approx(g.spacing));
        std::vector<int> owner_count(m, 0);
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t i = g.subarray_begin(s); i < g.subarray_begin(s) + g.subarray_size(); ++i) {
                ++owner_count[i];
                CHECK(g.subarray_of(i) == s);
            }
        for (const int c : owner_count)
            CHECK(c == 1);
        CHECK(g.length() == doctest::Approx(static_cast<double>(m) * g.spacing));
    }
}

TEST_CASE("antenna count derived from the aperture rounds down to whole subarrays") {
    CHECK(antennas_for_length(23.061, 3, 2.6e9, 2.0) == 99);
    // 100 antennas fit exactly, 2 subarrays need an even count.
    CHECK(antennas_for_length(100 * 0.05, 2, 3.0e9, 0.5) == 100);
    CHECK(antennas_for_length(101 * 0.05, 2, 3.0e9, 0.5) == 100);
}

TEST_CASE("users are grouped in contiguous index blocks") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    RandomStream rng = seed_stream(42, 0);
    const UserLayout u = drop_users(rng, 32, 2, 100.0, 30.0, g);
    CHECK(u.group_size() == 16);
    for (std::size_t k = 0; k < 32; ++k)
        CHECK(u.group_of(k) == (k < 16 ? 0u : 1u));
}

TEST_CASE("user distances respect the minimum and match the positions") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        RandomStream rng = seed_stream(9, trial);
        const UserLayout u = drop_users(rng, 2, 2, 100.0, 30.0, g);
        REQUIRE(u.distances.rows() == 2);
        REQUIRE(u.distances.cols() == 99);
        for (std::size_t k = 0; k < 2; ++k) {
            const auto [x, y] = u.positions[k];
            CHECK(x >= 0.0);
            CHECK(x <= 100.0);
            CHECK(y >= 0.0);
            CHECK(y <= 100.0);
            for (std::size_t m = 0; m < 99; ++m) {
                const double d = std::hypot(x - g.positions[m], y);
                CHECK(u.distances(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) ==
                      doctest::Approx(d).epsilon(1e-12));
                CHECK(d >= 30.0);
            }
        }
    }
}

TEST_CASE("same seed gives the same layout and regions") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    RandomStream a = seed_stream(42, 3), b = seed_stream(42, 3);
    const UserLayout ua = drop_users(a, 32, 2, 100.0, 30.0, g);
    const UserLayout ub = drop_users(b, 32, 2, 100.0, 30.0, g);
    CHECK(ua.positions == ub.positions);
    CHECK(ua.distances == ub.distances);
    const double mu = vr_log_location(g, 0.1, 0.1, VrLengthModel::LogMean);
    const VisibilityRegion va = sample_vr(a, g, mu, 0.1);
    const VisibilityRegion vb = sample_vr(b, g, mu, 0.1);
    CHECK(va.center == vb.center);
    CHECK(va.length == vb.length);
    CHECK(va.visible == vb.visible);
}

TEST_CASE("an infeasible minimum distance is reported") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    RandomStream rng = seed_stream(1, 0);
    CHECK_THROWS_AS(drop_users(rng, 2, 2, 1.0, 1.4, g), GeometryError);
    CHECK_THROWS_AS(drop_users(rng, 31, 2, 100.0, 30.0, g), ConfigError);
}

TEST_CASE("visibility mask edge cases") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    const auto full = visibility_mask(g, g.length() / 2.0, g.length());
    CHECK(std::count(full.begin(), full.end(), 1) == 99);
    const auto first = visibility_mask(g, 0.0, g.spacing);
    CHECK(first[0] == 1);
    CHECK(std::count(first.begin(), first.end(), 1) == 1);
}

TEST_CASE("sampled regions match the brute-force interval test") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    for (const auto model : {VrLengthModel::LogMean, VrLengthModel::LinearMean}) {
        const double mu = vr_log_location(g, 0.1, 0.1, model);
        RandomStream rng = seed_stream(17, static_cast<std::uint64_t>(model));
        for (int i = 0; i < 500; ++i) {
            const VisibilityRegion vr = sample_vr(rng, g, mu, 0.1);
            CHECK(vr.center >= 0.0);
            CHECK(vr.center <= g.length());
            CHECK(vr.visible == brute_force_mask(g, vr.center, vr.length));
            CHECK(vr.visible_count() >= 1);
        }
    }
}

TEST_CASE("regions restricted to eligible antennas always cover one") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    std::vector<std::uint8_t> eligible(99, 0);
    for (std::size_t m = 66; m < 99; ++m)
        eligible[m] = 1;
    const double mu = vr_log_location(g, 0.1, 0.1, VrLengthModel::LogMean);
    RandomStream rng = seed_stream(23, 0);
    for (int i = 0; i < 300; ++i) {
        const VisibilityRegion vr = sample_vr(rng, g, mu, 0.1, eligible);
        bool hit = false;
        for (std::size_t m = 0; m < 99; ++m)
            hit = hit || (vr.visible[m] && eligible[m]);
        CHECK(hit);
    }
}

TEST_CASE("length parameter interpretations") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    const double target = 0.1 * g.length();
    CHECK(vr_log_location(g, 0.1, 0.1, VrLengthModel::LogMean) == doctest::Approx(target));
    const double mu = vr_log_location(g, 0.1, 0.1, VrLengthModel::LinearMean);
    CHECK(mu == doctest::Approx(std::log(target) - 0.005));
    // Under the linear reading the sample mean of the length is 0.1 N.
    RandomStream rng = seed_stream(4, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        sum += rng.lognormal(mu, 0.1);
    CHECK(sum / n == doctest::Approx(target).epsilon(2e-3));
}
