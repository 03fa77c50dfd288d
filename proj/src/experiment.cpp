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

#include "xlprec/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "xlprec/channel.hpp"
#include "xlprec/errors.hpp"
#include "xlprec/flops.hpp"
#include "xlprec/metrics.hpp"
#include "xlprec/precoder.hpp"

#ifndef XLPREC_VERSION
#define XLPREC_VERSION "0.0.0-unknown"
#endif

namespace xlprec {

std::string_view version() { return XLPREC_VERSION; }

namespace {

std::string real(double v) { return fmt::format("{:.10e}", v); }

std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            line += ',';
        line += cells[i];
    }
    return line;
}

class CsvSink {
public:
    explicit CsvSink(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& columns) { out_ << join(columns) << '\n'; }

    void row(const std::vector<std::string>& cells) {
        out_ << join(cells) << '\n';
        ++rows_;
    }

    void truncate(std::string_view kind, std::string message) {
        std::replace(message.begin(), message.end(), ',', ';');
        std::replace(message.begin(), message.end(), '\n', ' ');
        out_ << "#truncated," << kind << ',' << message << '\n';
        out_.flush();
    }

    void flush() { out_.flush(); }
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t rows_ = 0;
};

void run_convergence(const ExperimentConfig& c, CsvSink& sink) {
    const ConvergenceTrace trace =
        convergence_trace(c.scenario, c.methods, c.convergence_steps, c.effective_trials(),
                          c.seed, c.solver, c.threads);
    for (std::size_t m = 0; m < trace.methods.size(); ++m)
        for (std::size_t t = 0; t < trace.curves[m].size(); ++t)
            sink.row({std::string(to_string(trace.methods[m])), std::to_string(t),
                      real(trace.curves[m][t])});
}

void run_se_vs_m(const ExperimentConfig& c, CsvSink& sink) {
    const std::size_t trials = c.effective_trials();
    for (const std::size_t m : c.m_grid) {
        Scenario at = c.scenario;
        at.antennas = m;
        const auto estimates = sum_se(at, c.methods, c.solver, trials, c.seed, c.threads);
        for (std::size_t i = 0; i < c.methods.size(); ++i)
            sink.row({std::to_string(m), std::string(to_string(c.methods[i])),
                      real(estimates[i].mean), real(estimates[i].sem), std::to_string(trials)});
        sink.flush();
    }
}

void run_ber(const ExperimentConfig& c, CsvSink& sink) {
    BerOptions opt;
    opt.seed = c.seed;
    opt.min_bits = c.ber_min_bits;
    opt.symbols_per_channel = c.symbols_per_channel;
    opt.threads = c.threads;
    const auto reports = ber_montecarlo(c.scenario, c.methods, c.snr_grid_db, opt, c.solver);
    for (const BerReport& r : reports)
        for (std::size_t p = 0; p < r.snr_grid_db.size(); ++p)
            sink.row({std::string(to_string(r.method)), real(r.snr_grid_db[p]), real(r.ber[p]),
                      std::to_string(r.errors[p]), std::to_string(r.bits_simulated)});
}

// Median wall-clock seconds of one K x K solve with the configured period.
double time_solve(const ExperimentConfig& c, Method method, std::int64_t k) {
    RandomStream rng = seed_stream(c.seed, static_cast<std::uint64_t>(k));
    const Eigen::Index n = static_cast<Eigen::Index>(k);
    Eigen::MatrixXcd h(2 * n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < 2 * n; ++i)
            h(i, j) = rng.complex_normal();
    const HpdSystem sys = gram_regularized(h, 1.0);
    const Eigen::VectorXcd s = sys.rhs.col(0);
    IterativeOptions opt = c.solver;
    opt.stop_early = false;
    constexpr int kRepeats = 7;
    std::vector<double> seconds;
    for (int r = 0; r < kRepeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        const SolverOutcome out = solve(method, sys.matrix, s, opt);
        const auto stop = std::chrono::steady_clock::now();
        if (out.solution.size() != n)
            throw AssemblyError("timing solve returned a vector of the wrong size");
        seconds.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::nth_element(seconds.begin(), seconds.begin() + kRepeats / 2, seconds.end());
    return seconds[kRepeats / 2];
}

void run_flops(const ExperimentConfig& c, CsvSink& sink) {
    const auto t = static_cast<std::int64_t>(c.solver.iterations);
    for (const Method method : c.methods) {
        for (const std::int64_t k : c.k_grid) {
            const FlopModel model = flop_model(method, k, t);
            std::vector<std::string> cells{std::string(to_string(method)), std::to_string(k),
                                           std::to_string(t), std::to_string(model.total_flops)};
            if (c.timing)
                cells.push_back(real(time_solve(c, method, k)));
            sink.row(cells);
        }
    }
}

std::string_view model_name(VrLengthModel m) {
    return m == VrLengthModel::LogMean ? "log_mean" : "linear_mean";
}

std::string_view normalization_name(GainNormalization g) {
    switch (g) {
    case GainNormalization::None: return "none";
    case GainNormalization::AntennaMean: return "antenna_mean";
    case GainNormalization::UserEnergy: return "user_energy";
    }
    return "unknown";
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
    const Scenario& s = c.scenario;
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (const Method m : c.methods)
        methods.push_back(std::string(to_string(m)));
    nlohmann::ordered_json j;
    j["geometry"] = {{"M", s.antennas},
                     {"N", c.array_length_m},
                     {"S", s.subarrays},
                     {"carrier_hz", s.carrier_hz},
                     {"spacing_wavelengths", s.spacing_wavelengths}};
    j["users"] = {{"K", s.users}, {"L", s.groups}, {"cell_side", s.cell_side},
                  {"min_dist", s.min_dist}};
    j["channel"] = {{"Omega", s.channel.omega},
                    {"nu", s.channel.nu},
                    {"rho", s.channel.rho},
                    {"vr_scale", s.channel.vr_scale},
                    {"vr_sigma", s.channel.vr_sigma},
                    {"vr_interpretation", model_name(s.channel.vr_model)},
                    {"normalization", normalization_name(s.channel.normalization)}};
    j["power"] = {{"sigma2_dbm", s.sigma2_dbm}, {"snr_db", s.snr_db}};
    j["solver"] = {{"method", methods},
                   {"T", c.solver.iterations},
                   {"omega", c.solver.relaxation},
                   {"eps", c.solver.tolerance},
                   {"stop_early", c.solver.stop_early},
                   {"w0", c.solver.start == InitialGuess::Zero ? "zero" : "diagonal"},
                   {"pcg_variant",
                    c.solver.pcg_variant == PcgVariant::Textbook ? "textbook" : "scaled_system"}};
    j["run"] = {{"seed", c.seed}, {"trials", c.effective_trials()}, {"threads", c.threads},
                {"experiment", to_string(c.experiment)}};
    j["se"] = {{"M_grid", c.m_grid}};
    j["ber"] = {{"snr_grid", c.snr_grid_db}, {"min_bits", c.ber_min_bits},
                {"symbols_per_channel", c.symbols_per_channel}};
    j["flops"] = {{"K_grid", c.k_grid}};
    j["convergence"] = {{"T_max", c.convergence_steps}};
    j["output"] = {{"path", c.output_path}, {"timing", c.timing}};
    return j;
}

} // namespace

std::vector<std::string> csv_columns(Experiment experiment, bool timing) {
    switch (experiment) {
    case Experiment::Convergence: return {"method", "t", "median_error"};
    case Experiment::SeVsM: return {"M", "method", "sum_se", "std_error", "trials"};
    case Experiment::Ber: return {"method", "snr_db", "ber", "bit_errors", "bits"};
    case Experiment::Flops:
        if (timing)
            return {"method", "K", "T", "flops", "seconds_per_solve"};
        return {"method", "K", "T", "flops"};
    }
    return {};
}

std::size_t run_experiment(const ExperimentConfig& config, std::ostream& csv) {
    CsvSink sink(csv);
    sink.header(csv_columns(config.experiment, config.timing));
    try {
        switch (config.experiment) {
        case Experiment::Convergence: run_convergence(config, sink); break;
        case Experiment::SeVsM: run_se_vs_m(config, sink); break;
        case Experiment::Ber: run_ber(config, sink); break;
        case Experiment::Flops: run_flops(config, sink); break;
        }
    } catch (const Error& e) {
        sink.truncate(e.kind(), e.what());
        throw;
    } catch (const std::exception& e) {
        sink.truncate("internal", e.what());
        throw;
    }
    sink.flush();
    return sink.rows();
}

std::string manifest_json(const ExperimentConfig& config, const ManifestInfo& info) {
    nlohmann::ordered_json j;
    j["tool"] = "xlprec";
    j["version"] = std::string(version());
    j["experiment"] = std::string(to_string(config.experiment));
    j["seed"] = config.seed;
    j["timestamp"] = info.timestamp;
    j["csv"] = info.csv_path;
    j["columns"] = csv_columns(config.experiment, config.timing);
    j["rows"] = info.rows;
    j["truncated"] = info.truncated;
    if (!info.error.empty())
        j["error"] = info.error;
    j["config"] = config_json(config);
    return j.dump(2) + "\n";
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void dump_channel(const ExperimentConfig& config, std::size_t trial, std::ostream& csv) {
    RandomStream rng = seed_stream(config.seed, trial);
    const TrialDraw draw = draw_trial(config.scenario, rng);
    const ChannelRealization& r = draw.channel.realization;
    csv << "antenna,user,subarray,group,re,im\n";
    for (Eigen::Index k = 0; k < r.users(); ++k) {
        for (Eigen::Index a = 0; a < r.antennas(); ++a) {
            const auto v = r.stacked(a, k);
            csv << a << ',' << k << ',' << draw.geometry.subarray_of(static_cast<std::size_t>(a))
                << ',' << draw.layout.group_of(static_cast<std::size_t>(k)) << ',' << real(v.real())
                << ',' << real(v.imag()) << '\n';
        }
    }
    csv.flush();
}

} // namespace xlprec
