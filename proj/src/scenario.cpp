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

#include "xlprec/scenario.hpp"

namespace xlprec {

TrialDraw draw_trial(const Scenario& scenario, RandomStream& rng) {
    TrialDraw draw;
    draw.geometry = build_geometry(scenario.antennas, scenario.subarrays, scenario.carrier_hz,
                                   scenario.spacing_wavelengths);
    draw.layout = drop_users(rng, scenario.users, scenario.groups, scenario.cell_side,
                             scenario.min_dist, draw.geometry);
    draw.channel = draw_channel(rng, draw.geometry, draw.layout, scenario.channel);
    return draw;
}

} // namespace xlprec
