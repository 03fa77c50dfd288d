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

#include "xlprec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "xlprec/errors.hpp"
#include "xlprec/parallel.hpp"

namespace xlprec {

using cplx = std::complex<double>;

LinkReport link_report(Eigen::VectorXd sinr, double sigma2) {
    LinkReport r;
    r.se_per_user = (1.0 + sinr.array()).log() / std::numbers::ln2;
    r.sum_se = r.se_per_user.sum();
    r.sinr = std::move(sinr);
    r.noise_power = sigma2;
    return r;
}

LinkReport link_sinr(const ChannelRealization& channel, const BlockPrecoder& precoder,
                    double sigma2) {
    if (!(sigma2 > 0.0))
        throw DomainError(fmt::format("noise power must be positive, got {}", sigma2));
    if (channel.stacked.rows() != precoder.stacked.rows() ||
        channel.stacked.cols() != precoder.stacked.cols())
        throw AssemblyError("channel and precoder shapes differ");
    // Row k holds user k's received gain from every stream.
    const Eigen::MatrixXcd effective = channel.stacked.adjoint() * precoder.stacked;
    const Eigen::Index k = effective.rows();
    Eigen::VectorXd sinr(k);
    for (Eigen::Index u = 0; u < k; ++u) {
        const double signal = std::norm(effective(u, u));
        double interference = 0.0;
        for (Eigen::Index j = 0; j < k; ++j)
            if (j != u)
                interference += std::norm(effective(u, j));
        sinr[u] = signal / (interference + sigma2);
    }
    return link_report(std::move(sinr), sigma2);
}

MeanEstimate estimate_mean(std::span<const double> samples) {
    MeanEstimate e;
    e.samples = samples.size();
    if (samples.empty())
        throw DomainError("mean of an empty sample");
    double sum = 0.0;
    for (double x : samples)
        sum += x;
    e.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double x : samples)
            ss += (x - e.mean) * (x - e.mean);
        const double n = static_cast<double>(samples.size());
        e.sem = std::sqrt(ss / (n - 1.0) / n);
    }
    return e;
}

std::vector<double> trial_sum_se(const TrialDraw& draw, std::span<const Method> methods,
                                 const Scenario& scenario, const IterativeOptions& options) {
    const ChannelBlocks blocks = assemble_blocks(draw.channel.realization);
    const double xi = scenario.xi();
    const double power = scenario.transmit_power();
    const double sigma2 = scenario.noise_power();
    std::vector<double> out;
    out.reserve(methods.size());
    for (Method m : methods) {
        const BlockPrecoder g = build_precoder(blocks, xi, power, m, options);
        out.push_back(link_sinr(draw.channel.realization, g, sigma2).sum_se);
    }
    return out;
}

Eigen::MatrixXd sum_se_samples(const Scenario& scenario, std::span<const Method> methods,
                               const IterativeOptions& options, std::size_t trials,
                               std::uint64_t seed, std::size_t threads) {
    if (trials == 0)
        throw ConfigError("sum SE needs at least one trial");
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(trials),
                            static_cast<Eigen::Index>(methods.size()));
    parallel_for(trials, threads, [&](std::size_t t) {
        RandomStream rng = seed_stream(seed, t);
        const TrialDraw draw = draw_trial(scenario, rng);
        const std::vector<double> se = trial_sum_se(draw, methods, scenario, options);
        for (std::size_t m = 0; m < se.size(); ++m)
            samples(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(m)) = se[m];
    });
    return samples;
}

std::vector<MeanEstimate> sum_se(const Scenario& scenario, std::span<const Method> methods,
                                 const IterativeOptions& options, std::size_t trials,
                                 std::uint64_t seed, std::size_t threads) {
    const Eigen::MatrixXd samples = sum_se_samples(scenario, methods, options, trials, seed, threads);
    std::vector<MeanEstimate> out;
    for (Eigen::Index m = 0; m < samples.cols(); ++m) {
        const Eigen::VectorXd col = samples.col(m);
        out.push_back(estimate_mean(std::span<const double>(col.data(), static_cast<std::size_t>(col.size()))));
    }
    return out;
}

cplx qpsk_modulate(unsigned bits) {
    constexpr double a = std::numbers::sqrt2 / 2.0;
    return {(bits & 1u) ? -a : a, (bits & 2u) ? -a : a};
}

unsigned qpsk_detect(cplx symbol) {
    return (symbol.real() < 0.0 ? 1u : 0u) | (symbol.imag() < 0.0 ? 2u : 0u);
}

std::uint64_t count_bit_errors(RandomStream& rng, const Eigen::MatrixXcd& effective,
                               double sigma2, std::size_t symbols) {
    const Eigen::Index k = effective.rows();
    const double noise_scale = std::sqrt(sigma2);
    std::vector<unsigned> bits(static_cast<std::size_t>(k));
    Eigen::VectorXcd s(k);
    std::uint64_t errors = 0;
    for (std::size_t n = 0; n < symbols; ++n) {
        for (Eigen::Index u = 0; u < k; ++u) {
            bits[static_cast<std::size_t>(u)] = static_cast<unsigned>(rng() >> 62);
            s[u] = qpsk_modulate(bits[static_cast<std::size_t>(u)]);
        }
        const Eigen::VectorXcd y = effective * s;
        for (Eigen::Index u = 0; u < k; ++u) {
            const cplx received = y[u] + noise_scale * rng.complex_normal();
            const cplx gain = effective(u, u);
            const cplx equalized = gain == cplx(0.0, 0.0) ? received : received / gain;
            const unsigned diff = qpsk_detect(equalized) ^ bits[static_cast<std::size_t>(u)];
            errors += (diff & 1u) + ((diff >> 1) & 1u);
        }
    }
    return errors;
}

std::vector<BerReport> ber_montecarlo(const Scenario& scenario, std::span<const Method> methods,
                                      std::span<const double> snr_grid_db, const BerOptions& ber,
                                      const IterativeOptions& options) {
    if (snr_grid_db.empty())
        throw ConfigError("BER needs a non-empty SNR grid");
    if (ber.min_bits == 0)
        throw ConfigError("BER needs a positive number of bits per point");
    if (ber.min_bits < kMinBerBits)
        throw ConfigError(fmt::format("BER needs at least {} bits per point (got {})", kMinBerBits,
                                      ber.min_bits));
    if (ber.symbols_per_channel == 0)
        throw ConfigError("BER needs at least one symbol vector per channel");

    const std::uint64_t bits_per_channel =
        2ULL * scenario.users * static_cast<std::uint64_t>(ber.symbols_per_channel);
    const std::size_t channels =
        static_cast<std::size_t>((ber.min_bits + bits_per_channel - 1) / bits_per_channel);
    const std::size_t points = snr_grid_db.size();
    const std::size_t nm = methods.size();

    // errors[trial][point * nm + method]
    std::vector<std::vector<std::uint64_t>> errors(channels, std::vector<std::uint64_t>(points * nm));
    parallel_for(channels, ber.threads, [&](std::size_t t) {
        RandomStream rng = seed_stream(ber.seed, t);
        const TrialDraw draw = draw_trial(scenario, rng);
        const ChannelBlocks blocks = assemble_blocks(draw.channel.realization);
        for (std::size_t p = 0; p < points; ++p) {
            Scenario at = scenario;
            at.snr_db = snr_grid_db[p];
            const RandomStream payload =
                seed_stream(ber.seed, (1ULL << 40) + static_cast<std::uint64_t>(t) * points + p);
            for (std::size_t m = 0; m < nm; ++m) {
                const BlockPrecoder g =
                    build_precoder(blocks, at.xi(), at.transmit_power(), methods[m], options);
                const Eigen::MatrixXcd effective = blocks.stacked.adjoint() * g.stacked;
                RandomStream stream = payload;
                errors[t][p * nm + m] =
                    count_bit_errors(stream, effective, at.noise_power(), ber.symbols_per_channel);
            }
        }
    });

    std::vector<BerReport> reports(nm);
    const std::uint64_t bits = bits_per_channel * channels;
    for (std::size_t m = 0; m < nm; ++m) {
        BerReport& r = reports[m];
        r.method = methods[m];
        r.snr_grid_db.assign(snr_grid_db.begin(), snr_grid_db.end());
        r.bits_simulated = bits;
        for (std::size_t p = 0; p < points; ++p) {
            std::uint64_t e = 0;
            for (std::size_t t = 0; t < channels; ++t)
                e += errors[t][p * nm + m];
            r.errors.push_back(e);
            r.ber.push_back(static_cast<double>(e) / static_cast<double>(bits));
        }
    }
    return reports;
}

namespace {

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double hi = v[n / 2];
    if (n % 2 == 1)
        return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
    return 0.5 * (lo + hi);
}

} // namespace

ConvergenceTrace convergence_trace(const Scenario& scenario, std::span<const Method> methods,
                                   std::size_t max_iterations, std::size_t trials,
                                   std::uint64_t seed, const IterativeOptions& options,
                                   std::size_t threads) {
    if (max_iterations == 0)
        throw ConfigError("convergence trace needs at least one iteration");
    if (trials == 0)
        throw ConfigError("convergence trace needs at least one trial");

    IterativeOptions opt = options;
    opt.iterations = max_iterations;
    opt.stop_early = false;
    opt.initial.reset();
    opt.record_iterates = false;

    const std::size_t nm = methods.size();
    const std::size_t steps = max_iterations + 1;
    // samples[trial][(block * nm + method) * steps + t]
    std::vector<std::vector<double>> samples(trials, std::vector<double>(3 * nm * steps));
    parallel_for(trials, threads, [&](std::size_t trial) {
        RandomStream rng = seed_stream(seed, trial);
        const TrialDraw draw = draw_trial(scenario, rng);
        const ChannelBlocks blocks = assemble_blocks(draw.channel.realization);
        const Eigen::MatrixXcd* channels[3] = {&blocks.first, &blocks.centre, &blocks.second};
        for (std::size_t b = 0; b < 3; ++b) {
            const HpdSystem sys = gram_regularized(*channels[b], scenario.xi());
            Eigen::VectorXcd s(sys.dimension());
            for (Eigen::Index i = 0; i < s.size(); ++i)
                s[i] = qpsk_modulate(static_cast<unsigned>(rng() >> 62));
            for (std::size_t m = 0; m < nm; ++m) {
                double* row = &samples[trial][(b * nm + m) * steps];
                if (methods[m] == Method::Direct) {
                    const Eigen::VectorXcd w = direct_solve(sys.matrix, s).solution;
                    const double r = (sys.matrix * w - s).squaredNorm() / s.squaredNorm();
                    row[0] = 1.0;
                    for (std::size_t t = 1; t < steps; ++t)
                        row[t] = r;
                    continue;
                }
                const SolverOutcome out = solve(methods[m], sys.matrix, s, opt);
                for (std::size_t t = 0; t < steps; ++t)
                    row[t] = t < out.residual_trace.size() ? out.residual_trace[t]
                                                           : out.residual_trace.back();
            }
        }
    });

    ConvergenceTrace trace;
    trace.methods.assign(methods.begin(), methods.end());
    trace.curves.assign(nm, std::vector<double>(steps));
    std::vector<double> pool;
    pool.reserve(trials * 3);
    for (std::size_t m = 0; m < nm; ++m) {
        for (std::size_t t = 0; t < steps; ++t) {
            pool.clear();
            for (std::size_t trial = 0; trial < trials; ++trial)
                for (std::size_t b = 0; b < 3; ++b)
                    pool.push_back(samples[trial][(b * nm + m) * steps + t]);
            trace.curves[m][t] = median(pool);
        }
    }
    return trace;
}

} // namespace xlprec
