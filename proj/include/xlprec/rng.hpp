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

#ifndef XLPREC_RNG_HPP
#define XLPREC_RNG_HPP

#include <complex>
#include <cstdint>
#include <limits>

namespace xlprec {

// Counter-based random stream keyed by (master seed, trial index).
//
// Every output is a pure function of (master, trial, counter), so sub-streams
// never share state and the sequence is identical on every platform. The
// mixing function is the SplitMix64 finalizer applied twice with the key
// folded in between rounds. Satisfies UniformRandomBitGenerator so it can be
// handed to <random> algorithms, but all distributions used by the simulator
// are implemented here to keep results portable.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master, std::uint64_t trial);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second variate is cached.
    double normal();

    // exp(N(mu, sigma^2)).
    double lognormal(double mu, double sigma);

    // Circularly-symmetric complex Gaussian with unit variance.
    std::complex<double> complex_normal();

    std::uint64_t master() const noexcept { return master_; }
    std::uint64_t trial() const noexcept { return trial_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t master_;
    std::uint64_t trial_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Derives the sub-stream of one Monte-Carlo trial.
inline RandomStream seed_stream(std::uint64_t master_seed, std::uint64_t trial) {
    return RandomStream(master_seed, trial);
}

} // namespace xlprec

#endif
