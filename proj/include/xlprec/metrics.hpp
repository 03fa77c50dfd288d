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

#ifndef XLPREC_METRICS_HPP
#define XLPREC_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xlprec/channel.hpp"
#include "xlprec/linsolve.hpp"
#include "xlprec/precoder.hpp"
#include "xlprec/scenario.hpp"

namespace xlprec {

struct LinkReport {
    Eigen::VectorXd sinr;
    Eigen::VectorXd se_per_user;
    double sum_se = 0.0;
    double noise_power = 0.0;
};

// Per-user SINR with intra-group, cross-group (through the shared centre
// subarray) and noise terms, for unit-power symbols.
LinkReport link_sinr(const ChannelRealization& channel, const BlockPrecoder& precoder,
                    double sigma2);

LinkReport link_report(Eigen::VectorXd sinr, double sigma2);

struct MeanEstimate {
    double mean = 0.0;
    // Standard error of the mean; zero for a single sample.
    double sem = 0.0;
    std::size_t samples = 0;
};

MeanEstimate estimate_mean(std::span<const double> samples);

// Sum SE of one trial for each method, all sharing the same channel.
std::vector<double> trial_sum_se(const TrialDraw& draw, std::span<const Method> methods,
                                 const Scenario& scenario, const IterativeOptions& options);

// Monte-Carlo sum SE per method over `trials` seeded trials.
std::vector<MeanEstimate> sum_se(const Scenario& scenario, std::span<const Method> methods,
                                 const IterativeOptions& options, std::size_t trials,
                                 std::uint64_t seed, std::size_t threads = 1);

// Per-trial sample matrix (trials x methods) behind sum_se, for paired tests.
Eigen::MatrixXd sum_se_samples(const Scenario& scenario, std::span<const Method> methods,
                               const IterativeOptions& options, std::size_t trials,
                               std::uint64_t seed, std::size_t threads = 1);

// QPSK with Gray mapping, unit symbol energy.
std::complex<double> qpsk_modulate(unsigned bits);
unsigned qpsk_detect(std::complex<double> symbol);

struct BerOptions {
    std::uint64_t seed = 42;
    std::uint64_t min_bits = 2'000'000;
    std::size_t symbols_per_channel = 16;
    std::size_t threads = 1;
};

inline constexpr std::uint64_t kMinBerBits = 100'000;

struct BerReport {
    Method method = Method::Direct;
    std::vector<double> snr_grid_db;
    std::vector<double> ber;
    std::vector<std::uint64_t> errors;
    std::uint64_t bits_simulated = 0;
    std::string modulation = "qpsk-gray";
};

// Bit errors over `symbols` QPSK vectors sent through y = H^H G s + n, detected
// per user against the effective gain of its own stream.
std::uint64_t count_bit_errors(RandomStream& rng, const Eigen::MatrixXcd& effective,
                               double sigma2, std::size_t symbols);

// One report per method; every method sees the same channels, bits and noise.
std::vector<BerReport> ber_montecarlo(const Scenario& scenario, std::span<const Method> methods,
                                      std::span<const double> snr_grid_db,
                                      const BerOptions& ber, const IterativeOptions& options);

struct ConvergenceTrace {
    std::vector<Method> methods;
    // curves[m][t]: median normalised least-square error of methods[m] at step t.
    std::vector<std::vector<double>> curves;
};

// Median over trials (and the three subarray systems of each trial) of
// ||P w_t - s||^2 / ||s||^2 for random QPSK right-hand sides.
ConvergenceTrace convergence_trace(const Scenario& scenario, std::span<const Method> methods,
                                   std::size_t max_iterations, std::size_t trials,
                                   std::uint64_t seed, const IterativeOptions& options,
                                   std::size_t threads = 1);

} // namespace xlprec

#endif
