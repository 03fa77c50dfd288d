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
// Command-line front end: one subcommand per scenario.
//
//   xlprec <convergence|se_vs_m|ber|flops> [--config FILE] [--set KEY=VALUE]...
//          [--seed N] [--out FILE] [--threads N] [--trials N] [--timing]
//   xlprec channel [--trial N] ...        dump one realization as CSV
//
// Output goes to --out, else output.path, else $XLPREC_OUT_DIR/<scenario>.csv,
// else ./<scenario>.csv. `--out -` writes the CSV to stdout. A run manifest
// is written next to the CSV as <out>.manifest.json. Failures exit nonzero
// with a single JSON line on stderr.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xlprec/config.hpp"
#include "xlprec/errors.hpp"
#include "xlprec/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 1;

int fail(std::string_view kind, std::string_view message, int code) {
    const nlohmann::ordered_json line = {
        {"status", "error"}, {"kind", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << line.dump() << '\n';
    return code;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw xlprec::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::string default_output(const std::string& stem) {
    const char* dir = std::getenv("XLPREC_OUT_DIR");
    const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : ".";
    return (base / (stem + ".csv")).string();
}

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::size_t> trials;
    std::string out;
    bool timing = false;
    std::size_t trial = 0;
};

xlprec::ExperimentConfig load(const Options& o) {
    xlprec::ExperimentConfig cfg;
    if (!o.config_path.empty())
        xlprec::merge_config(cfg, read_file(o.config_path));
    for (const auto& s : o.overrides)
        xlprec::apply_override(cfg, s);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.threads)
        cfg.threads = *o.threads;
    if (o.trials)
        cfg.trials = *o.trials;
    if (o.timing)
        cfg.timing = true;
    if (!o.out.empty())
        cfg.output_path = o.out;
    xlprec::validate(cfg);
    return cfg;
}

int run_scenario(xlprec::ExperimentConfig cfg, xlprec::Experiment experiment) {
    cfg.experiment = experiment;
    const std::string path = cfg.output_path.empty()
                                 ? default_output(std::string(xlprec::to_string(experiment)))
                                 : cfg.output_path;
    const bool to_stdout = path == "-";

    std::ofstream file;
    if (!to_stdout) {
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty())
            std::filesystem::create_directories(parent);
        file.open(path, std::ios::binary | std::ios::trunc);
        if (!file)
            return fail("io", "cannot open output file '" + path + "'", kExitRuntime);
    }
    std::ostream& csv = to_stdout ? std::cout : file;

    xlprec::ManifestInfo info;
    info.csv_path = to_stdout ? "-" : path;
    int code = 0;
    try {
        info.rows = xlprec::run_experiment(cfg, csv);
    } catch (const xlprec::Error& e) {
        info.truncated = true;
        info.error = e.what();
        code = fail(e.kind(), e.what(), e.kind() == "config" ? kExitConfig : kExitRuntime);
    } catch (const std::exception& e) {
        info.truncated = true;
        info.error = e.what();
        code = fail("internal", e.what(), kExitRuntime);
    }
    if (!to_stdout) {
        file.close();
        info.timestamp = xlprec::utc_timestamp();
        std::ofstream manifest(path + ".manifest.json", std::ios::binary | std::ios::trunc);
        manifest << xlprec::manifest_json(cfg, info);
    }
    return code;
}

int run_channel(const xlprec::ExperimentConfig& cfg, std::size_t trial) {
    const std::string path = cfg.output_path.empty() ? default_output("channel") : cfg.output_path;
    if (path == "-") {
        xlprec::dump_channel(cfg, trial, std::cout);
        return 0;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        return fail("io", "cannot open output file '" + path + "'", kExitRuntime);
    xlprec::dump_channel(cfg, trial, file);
    return 0;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "Configuration file (TOML subset)");
    cmd->add_option("--set", o.overrides, "Override a key, e.g. --set solver.T=8")->take_all();
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--out", o.out, "Output CSV path ('-' for stdout)");
    cmd->add_option("--threads", o.threads, "Worker threads");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative RZF precoding simulator for subarray XL-MIMO downlinks"};
    app.set_version_flag("--version", std::string(xlprec::version()));
    app.require_subcommand(1);

    Options opt;
    struct Entry {
        xlprec::Experiment experiment;
        CLI::App* cmd;
    };
    std::vector<Entry> scenarios;
    for (const auto e : {xlprec::Experiment::Convergence, xlprec::Experiment::SeVsM,
                         xlprec::Experiment::Ber, xlprec::Experiment::Flops}) {
        const std::string name(xlprec::to_string(e));
        CLI::App* cmd = app.add_subcommand(name, "Run the " + name + " scenario");
        add_common(cmd, opt);
        cmd->add_flag("--timing", opt.timing, "Add a wall-clock column (flops scenario)");
        scenarios.push_back({e, cmd});
    }
    CLI::App* channel = app.add_subcommand("channel", "Dump one channel realization as CSV");
    add_common(channel, opt);
    channel->add_option("--trial", opt.trial, "Trial index of the realization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kExitConfig);
    }

    try {
        const xlprec::ExperimentConfig cfg = load(opt);
        if (channel->parsed())
            return run_channel(cfg, opt.trial);
        for (const Entry& s : scenarios)
            if (s.cmd->parsed())
                return run_scenario(cfg, s.experiment);
    } catch (const xlprec::Error& e) {
        return fail(e.kind(), e.what(), e.kind() == "config" ? kExitConfig : kExitRuntime);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitRuntime);
    }
    return fail("usage", "no subcommand", kExitConfig);
}
