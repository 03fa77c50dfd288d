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

#include "xlprec/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>

#include "xlprec/errors.hpp"
#include "xlprec/geometry.hpp"
#include "xlprec/metrics.hpp"

namespace xlprec {

std::string_view to_string(Experiment experiment) {
    switch (experiment) {
    case Experiment::Convergence: return "convergence";
    case Experiment::SeVsM: return "se_vs_m";
    case Experiment::Ber: return "ber";
    case Experiment::Flops: return "flops";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    if (name == "convergence") return Experiment::Convergence;
    if (name == "se_vs_m") return Experiment::SeVsM;
    if (name == "ber") return Experiment::Ber;
    if (name == "flops") return Experiment::Flops;
    throw ConfigError(fmt::format(
        "unknown experiment '{}' (expected convergence, se_vs_m, ber or flops)", name));
}

std::size_t ExperimentConfig::effective_trials() const {
    if (trials)
        return *trials;
    return experiment == Experiment::Convergence ? 50 : 200;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void type_error(std::string_view key, std::string_view expected,
                             std::string_view raw) {
    throw ConfigError(fmt::format("{}: expected {}, got '{}'", key, expected, raw));
}

[[noreturn]] void constraint_error(std::string_view key, std::string_view what) {
    throw ConfigError(fmt::format("{}: {}", key, what));
}

std::string_view unquote(std::string_view key, std::string_view raw) {
    raw = trim(raw);
    if (raw.size() >= 2 && (raw.front() == '"' || raw.front() == '\'')) {
        if (raw.back() != raw.front())
            type_error(key, "a terminated string", raw);
        return raw.substr(1, raw.size() - 2);
    }
    return raw;
}

std::string as_string(std::string_view key, std::string_view raw) {
    const std::string_view v = unquote(key, raw);
    if (v.empty())
        type_error(key, "a non-empty string", raw);
    return std::string(v);
}

double as_double(std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size() || v.empty() || !std::isfinite(out))
        type_error(key, "a finite number", raw);
    return out;
}

std::int64_t as_int(std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    std::int64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || end != v.data() + v.size() || v.empty())
        type_error(key, "an integer", raw);
    return out;
}

std::uint64_t as_count(std::string_view key, std::string_view raw) {
    const std::int64_t v = as_int(key, raw);
    if (v < 0)
        type_error(key, "a non-negative integer", raw);
    return static_cast<std::uint64_t>(v);
}

bool as_bool(std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    if (v == "true") return true;
    if (v == "false") return false;
    type_error(key, "true or false", raw);
}

// Accepts `[a, b, c]` or a bare `a, b, c`.
std::vector<std::string_view> as_list(std::string_view key, std::string_view raw) {
    std::string_view v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']')
            type_error(key, "a bracketed list", raw);
        v = trim(v.substr(1, v.size() - 2));
    }
    std::vector<std::string_view> items;
    if (v.empty())
        return items;
    std::size_t pos = 0;
    while (true) {
        const auto comma = v.find(',', pos);
        const std::string_view item = trim(v.substr(pos, comma - pos));
        if (item.empty())
            type_error(key, "a list without empty items", raw);
        items.push_back(item);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return items;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view key, std::string_view raw)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"geometry.M", [](auto& c, auto k, auto v) { c.antennas = as_count(k, v); }},
        {"geometry.N", [](auto& c, auto k, auto v) { c.array_length_m = as_double(k, v); }},
        {"geometry.S", [](auto& c, auto k, auto v) { c.scenario.subarrays = as_count(k, v); }},
        {"geometry.carrier_hz", [](auto& c, auto k, auto v) { c.scenario.carrier_hz = as_double(k, v); }},
        {"geometry.spacing_wavelengths",
         [](auto& c, auto k, auto v) { c.scenario.spacing_wavelengths = as_double(k, v); }},

        {"users.K", [](auto& c, auto k, auto v) { c.scenario.users = as_count(k, v); }},
        {"users.L", [](auto& c, auto k, auto v) { c.scenario.groups = as_count(k, v); }},
        {"users.cell_side", [](auto& c, auto k, auto v) { c.scenario.cell_side = as_double(k, v); }},
        {"users.min_dist", [](auto& c, auto k, auto v) { c.scenario.min_dist = as_double(k, v); }},

        {"channel.Omega", [](auto& c, auto k, auto v) { c.scenario.channel.omega = as_double(k, v); }},
        {"channel.nu", [](auto& c, auto k, auto v) { c.scenario.channel.nu = as_double(k, v); }},
        {"channel.rho", [](auto& c, auto k, auto v) { c.scenario.channel.rho = as_double(k, v); }},
        {"channel.vr_scale", [](auto& c, auto k, auto v) { c.scenario.channel.vr_scale = as_double(k, v); }},
        {"channel.vr_sigma", [](auto& c, auto k, auto v) { c.scenario.channel.vr_sigma = as_double(k, v); }},
        {"channel.vr_interpretation",
         [](auto& c, auto k, auto v) {
             const std::string s = as_string(k, v);
             if (s == "log_mean") c.scenario.channel.vr_model = VrLengthModel::LogMean;
             else if (s == "linear_mean") c.scenario.channel.vr_model = VrLengthModel::LinearMean;
             else type_error(k, "log_mean or linear_mean", v);
         }},
        {"channel.normalization",
         [](auto& c, auto k, auto v) {
             const std::string s = as_string(k, v);
             if (s == "none") c.scenario.channel.normalization = GainNormalization::None;
             else if (s == "antenna_mean") c.scenario.channel.normalization = GainNormalization::AntennaMean;
             else if (s == "user_energy") c.scenario.channel.normalization = GainNormalization::UserEnergy;
             else type_error(k, "none, antenna_mean or user_energy", v);
         }},

        {"power.sigma2_dbm", [](auto& c, auto k, auto v) { c.scenario.sigma2_dbm = as_double(k, v); }},
        {"power.snr_db", [](auto& c, auto k, auto v) { c.scenario.snr_db = as_double(k, v); }},
        {"power.P_dbm", [](auto& c, auto k, auto v) { c.transmit_power_dbm = as_double(k, v); }},

        {"solver.method",
         [](auto& c, auto k, auto v) {
             std::vector<Method> methods;
             const auto items = as_list(k, v);
             if (items.size() == 1 && unquote(k, items[0]) == "all") {
                 methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
             } else {
                 for (const auto item : items) {
                     try {
                         methods.push_back(parse_method(unquote(k, item)));
                     } catch (const ConfigError& e) {
                         constraint_error(k, e.what());
                     }
                 }
             }
             c.methods = std::move(methods);
         }},
        {"solver.T", [](auto& c, auto k, auto v) { c.solver.iterations = as_count(k, v); }},
        {"solver.omega", [](auto& c, auto k, auto v) { c.solver.relaxation = as_double(k, v); }},
        {"solver.eps", [](auto& c, auto k, auto v) { c.solver.tolerance = as_double(k, v); }},
        {"solver.stop_early", [](auto& c, auto k, auto v) { c.solver.stop_early = as_bool(k, v); }},
        {"solver.w0",
         [](auto& c, auto k, auto v) {
             const std::string s = as_string(k, v);
             if (s == "zero") c.solver.start = InitialGuess::Zero;
             else if (s == "diagonal") c.solver.start = InitialGuess::Diagonal;
             else type_error(k, "zero or diagonal", v);
         }},
        {"solver.pcg_variant",
         [](auto& c, auto k, auto v) {
             const std::string s = as_string(k, v);
             if (s == "textbook") c.solver.pcg_variant = PcgVariant::Textbook;
             else if (s == "scaled_system") c.solver.pcg_variant = PcgVariant::ScaledSystem;
             else type_error(k, "textbook or scaled_system", v);
         }},

        {"run.seed", [](auto& c, auto k, auto v) { c.seed = as_count(k, v); }},
        {"run.trials", [](auto& c, auto k, auto v) { c.trials = as_count(k, v); }},
        {"run.threads", [](auto& c, auto k, auto v) { c.threads = as_count(k, v); }},
        {"run.experiment",
         [](auto& c, auto k, auto v) {
             try {
                 c.experiment = parse_experiment(as_string(k, v));
             } catch (const ConfigError& e) {
                 constraint_error(k, e.what());
             }
         }},

        {"se.M_grid",
         [](auto& c, auto k, auto v) {
             c.m_grid.clear();
             for (const auto item : as_list(k, v))
                 c.m_grid.push_back(as_count(k, item));
         }},
        {"ber.snr_grid",
         [](auto& c, auto k, auto v) {
             c.snr_grid_db.clear();
             for (const auto item : as_list(k, v))
                 c.snr_grid_db.push_back(as_double(k, item));
         }},
        {"ber.min_bits", [](auto& c, auto k, auto v) { c.ber_min_bits = as_count(k, v); }},
        {"ber.symbols_per_channel",
         [](auto& c, auto k, auto v) { c.symbols_per_channel = as_count(k, v); }},
        {"flops.K_grid",
         [](auto& c, auto k, auto v) {
             c.k_grid.clear();
             for (const auto item : as_list(k, v))
                 c.k_grid.push_back(as_int(k, item));
         }},
        {"convergence.T_max", [](auto& c, auto k, auto v) { c.convergence_steps = as_count(k, v); }},

        {"output.path", [](auto& c, auto k, auto v) { c.output_path = as_string(k, v); }},
        {"output.timing", [](auto& c, auto k, auto v) { c.timing = as_bool(k, v); }},
    };
    return table;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quote) {
            if (ch == quote)
                quote = 0;
        } else if (ch == '"' || ch == '\'') {
            quote = ch;
        } else if (ch == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

} // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end())
        throw ConfigError(fmt::format("{}: unknown key", key));
    it->second(config, key, value);
}

void apply_override(ExperimentConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError(fmt::format("override '{}' is not of the form key=value", assignment));
    const std::string_view key = trim(assignment.substr(0, eq));
    if (key.empty())
        throw ConfigError(fmt::format("override '{}' has an empty key", assignment));
    apply_setting(config, key, assignment.substr(eq + 1));
}

void merge_config(ExperimentConfig& config, std::string_view text) {
    std::string section;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(fmt::format("line {}: malformed section header '{}'", line_no, line));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("line {}: expected key = value, got '{}'", line_no, line));
        const std::string_view name = trim(line.substr(0, eq));
        if (name.empty())
            throw ConfigError(fmt::format("line {}: empty key", line_no));
        const std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
        if (!seen.insert(key).second)
            throw ConfigError(fmt::format("{}: duplicate key (line {})", key, line_no));
        apply_setting(config, key, line.substr(eq + 1));
    }
}

void validate(ExperimentConfig& c) {
    Scenario& s = c.scenario;
    auto positive = [](std::string_view key, double v) {
        if (!(v > 0.0))
            constraint_error(key, fmt::format("must be positive (got {})", v));
    };

    positive("geometry.carrier_hz", s.carrier_hz);
    positive("geometry.spacing_wavelengths", s.spacing_wavelengths);
    positive("geometry.N", c.array_length_m);
    if (s.subarrays != kTopologySubarrays)
        constraint_error("geometry.S", fmt::format("only the {}-subarray topology is modelled (got {})",
                                                   kTopologySubarrays, s.subarrays));
    if (c.antennas) {
        if (*c.antennas == 0)
            constraint_error("geometry.M", "must be at least 1");
        if (*c.antennas % s.subarrays != 0)
            constraint_error("geometry.M", fmt::format("M = {} is not divisible by geometry.S = {}",
                                                       *c.antennas, s.subarrays));
        s.antennas = *c.antennas;
    } else {
        s.antennas = antennas_for_length(c.array_length_m, s.subarrays, s.carrier_hz,
                                         s.spacing_wavelengths);
        if (s.antennas == 0)
            constraint_error("geometry.N", "array is shorter than one antenna per subarray");
    }

    if (s.groups != kTopologyGroups)
        constraint_error("users.L", fmt::format("only the {}-group topology is modelled (got {})",
                                                kTopologyGroups, s.groups));
    if (s.users == 0)
        constraint_error("users.K", "must be at least 1");
    if (s.users % s.groups != 0)
        constraint_error("users.K", fmt::format("K = {} is not divisible by users.L = {}", s.users,
                                                s.groups));
    positive("users.cell_side", s.cell_side);
    if (s.min_dist < 0.0)
        constraint_error("users.min_dist", "must be non-negative");

    positive("channel.Omega", s.channel.omega);
    if (s.channel.nu < 0.0)
        constraint_error("channel.nu", "must be non-negative");
    if (s.channel.rho < 0.0 || s.channel.rho >= 1.0)
        constraint_error("channel.rho", fmt::format("must lie in [0, 1) (got {})", s.channel.rho));
    positive("channel.vr_scale", s.channel.vr_scale);
    if (s.channel.vr_sigma < 0.0)
        constraint_error("channel.vr_sigma", "must be non-negative");

    if (c.transmit_power_dbm)
        s.snr_db = *c.transmit_power_dbm - s.sigma2_dbm;

    if (c.methods.empty())
        constraint_error("solver.method", "at least one method is required");
    if (c.solver.iterations == 0)
        constraint_error("solver.T", "must be at least 1");
    positive("solver.omega", c.solver.relaxation);
    positive("solver.eps", c.solver.tolerance);

    if (c.trials && *c.trials == 0)
        constraint_error("run.trials", "must be at least 1");
    if (c.threads == 0)
        constraint_error("run.threads", "must be at least 1");

    if (c.m_grid.empty())
        constraint_error("se.M_grid", "must not be empty");
    for (const std::size_t m : c.m_grid)
        if (m == 0 || m % s.subarrays != 0)
            constraint_error("se.M_grid", fmt::format("M = {} is not a positive multiple of "
                                                      "geometry.S = {}", m, s.subarrays));
    if (c.snr_grid_db.empty())
        constraint_error("ber.snr_grid", "must not be empty");
    if (c.ber_min_bits == 0)
        constraint_error("ber.min_bits", "zero bits configured");
    if (c.ber_min_bits < kMinBerBits)
        constraint_error("ber.min_bits", fmt::format("must be at least {} (got {})", kMinBerBits,
                                                     c.ber_min_bits));
    if (c.symbols_per_channel == 0)
        constraint_error("ber.symbols_per_channel", "must be at least 1");
    if (c.k_grid.empty())
        constraint_error("flops.K_grid", "must not be empty");
    for (const std::int64_t k : c.k_grid)
        if (k < 1)
            constraint_error("flops.K_grid", fmt::format("K = {} must be at least 1", k));
    if (c.convergence_steps == 0)
        constraint_error("convergence.T_max", "must be at least 1");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    merge_config(config, text);
    validate(config);
    return config;
}

} // namespace xlprec
