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
//
// Experiment configuration.
//
// The document format is a small TOML subset: `[section]` headers,
// `key = value` pairs, `#` comments, quoted strings and `[a, b, c]` arrays.
// A key may also be written in dotted form (`solver.T = 5`) outside any
// section, which is the grammar accepted by `--set` on the command line.

#ifndef XLPREC_CONFIG_HPP
#define XLPREC_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xlprec/linsolve.hpp"
#include "xlprec/scenario.hpp"

namespace xlprec {

enum class Experiment { Convergence, SeVsM, Ber, Flops };

std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view name);

inline constexpr double kDefaultArrayLength = 23.061;

struct ExperimentConfig {
    // Antenna count; derived from `array_length_m` when unset.
    std::optional<std::size_t> antennas;
    double array_length_m = kDefaultArrayLength;
    // Alternative to power.snr_db: transmit power in dBm.
    std::optional<double> transmit_power_dbm;

    Scenario scenario;
    // Experiments run every solver for exactly T steps unless stop_early is set.
    IterativeOptions solver = [] {
        IterativeOptions o;
        o.stop_early = false;
        return o;
    }();
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};

    Experiment experiment = Experiment::Convergence;
    std::uint64_t seed = 42;
    // Per-scenario default when unset: 50 for convergence, 200 for se_vs_m.
    std::optional<std::size_t> trials;
    std::size_t threads = 1;

    std::vector<std::size_t> m_grid{33, 66, 99, 132, 165, 198};
    std::vector<double> snr_grid_db{0.0, 5.0, 10.0, 15.0, 20.0};
    std::uint64_t ber_min_bits = 2'000'000;
    std::size_t symbols_per_channel = 16;
    std::vector<std::int64_t> k_grid{5, 10, 15, 20, 25, 30};
    std::size_t convergence_steps = 5;

    std::string output_path;
    // Informational wall-clock column; off by default so CSVs stay
    // byte-reproducible.
    bool timing = false;

    std::size_t effective_trials() const;
};

// Applies one `key = value` setting. `value` is the raw right-hand side.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Applies a `key=value` override as given to `--set`.
void apply_override(ExperimentConfig& config, std::string_view assignment);

// Checks cross-field constraints and resolves derived fields (M from N,
// SNR from transmit power).
void validate(ExperimentConfig& config);

// Parses a document onto the defaults and validates the result.
ExperimentConfig parse_config(std::string_view text);

// Parses onto an existing configuration without validating, so that
// overrides can be layered before a final validate().
void merge_config(ExperimentConfig& config, std::string_view text);

} // namespace xlprec

#endif
