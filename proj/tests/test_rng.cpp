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

#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "xlprec/rng.hpp"

using xlprec::RandomStream;
using xlprec::seed_stream;

namespace {

// Reference SplitMix64 finaliser, written out independently of the library.
std::uint64_t splitmix_finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

std::uint64_t reference_draw(std::uint64_t master, std::uint64_t trial, std::uint64_t index) {
    const std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    const std::uint64_t key = splitmix_finalize(trial * golden + 0xD1B54A32D192ED03ULL);
    return splitmix_finalize(splitmix_finalize(master + (index + 1) * golden) ^ key);
}

std::vector<std::uint64_t> draws(RandomStream rng, std::size_t n) {
    std::vector<std::uint64_t> out(n);
    for (auto& v : out)
        v = rng();
    return out;
}

} // namespace

TEST_CASE("stream output follows the counter-based construction") {
    RandomStream rng = seed_stream(42, 0);
    for (std::uint64_t i = 0; i < 64; ++i)
        CHECK(rng() == reference_draw(42, 0, i));
    RandomStream other = seed_stream(7, 123456789);
    for (std::uint64_t i = 0; i < 64; ++i)
        CHECK(other() == reference_draw(7, 123456789, i));
}

TEST_CASE("identical keys give identical streams") {
    CHECK(draws(seed_stream(42, 7), 1000) == draws(seed_stream(42, 7), 1000));
}

TEST_CASE("neighbouring trials give distinct streams") {
    const auto a = draws(seed_stream(42, 0), 1000);
    const auto b = draws(seed_stream(42, 1), 1000);
    CHECK(a != b);
    CHECK(a.front() != b.front());
}

TEST_CASE("neighbouring master seeds share no draws in the first ten thousand") {
    const auto a = draws(seed_stream(42, 0), 10000);
    const auto b = draws(seed_stream(43, 0), 10000);
    CHECK(a.front() != b.front());
    const std::unordered_set<std::uint64_t> seen(a.begin(), a.end());
    std::size_t shared = 0;
    for (const auto v : b)
        shared += seen.count(v);
    CHECK(shared == 0);
}

TEST_CASE("copies replay the same sequence") {
    RandomStream a = seed_stream(5, 9);
    (void)a();
    RandomStream b = a;
    CHECK(a.counter() == b.counter());
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
}

TEST_CASE("uniform draws lie in the unit interval with the right moments") {
    RandomStream rng = seed_stream(1, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    // Five standard errors.
    CHECK(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(var - 1.0 / 12.0) < 1e-3);
}

TEST_CASE("normal and complex normal draws have unit variance") {
    RandomStream rng = seed_stream(2, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, energy = 0.0;
    std::complex<double> csum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
        const auto z = rng.complex_normal();
        energy += std::norm(z);
        csum += z;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(sum2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(energy / n - 1.0) < 5.0 * std::sqrt(1.0 / n));
    CHECK(std::abs(csum) / n < 5.0 / std::sqrt(n));
}

TEST_CASE("lognormal draws have the requested log-moments") {
    RandomStream rng = seed_stream(3, 0);
    const int n = 100000;
    const double mu = std::log(2.3), sigma = 0.1;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.lognormal(mu, sigma);
        REQUIRE(v > 0.0);
        const double l = std::log(v);
        sum += l;
        sum2 += l * l;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - mu) < 5.0 * sigma / std::sqrt(n));
    CHECK(std::abs(std::sqrt(sum2 / n - mean * mean) - sigma) < 1.5e-3);
}
