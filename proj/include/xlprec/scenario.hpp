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

#ifndef XLPREC_SCENARIO_HPP
#define XLPREC_SCENARIO_HPP

#include <cmath>
#include <cstddef>

#include "xlprec/channel.hpp"
#include "xlprec/geometry.hpp"
#include "xlprec/rng.hpp"

namespace xlprec {

// Physical set-up of one Monte-Carlo trial. Defaults follow the reference
// deployment: 99-antenna ULA at 2.6 GHz with 2-wavelength spacing, three
// subarrays, 32 users in two groups over a 100 m square cell.
struct Scenario {
    std::size_t antennas = 99;
    std::size_t subarrays = 3;
    double carrier_hz = 2.6e9;
    double spacing_wavelengths = 2.0;

    std::size_t users = 32;
    std::size_t groups = 2;
    double cell_side = 100.0;
    double min_dist = 30.0;

    ChannelModel channel;

    double sigma2_dbm = -50.0;
    // Normalised transmit power P / sigma^2.
    double snr_db = -5.0;

    double noise_power() const { return std::pow(10.0, (sigma2_dbm - 30.0) / 10.0); }
    double transmit_power() const { return noise_power() * std::pow(10.0, snr_db / 10.0); }
    // xi = sigma^2 / P = 1 / SNR.
    double xi() const { return std::pow(10.0, -snr_db / 10.0); }
};

struct TrialDraw {
    ArrayGeometry geometry;
    UserLayout layout;
    ChannelDraw channel;
};

TrialDraw draw_trial(const Scenario& scenario, RandomStream& rng);

} // namespace xlprec

#endif
