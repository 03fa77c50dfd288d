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

#include "xlprec/precoder.hpp"

#include <cmath>

#include <fmt/format.h>

#include "xlprec/errors.hpp"

namespace xlprec {

HpdSystem gram_regularized(const Eigen::MatrixXcd& channel, double xi) {
    if (!(xi > 0.0))
        throw DomainError(fmt::format("regularisation factor must be positive, got {}", xi));
    const Eigen::Index k = channel.cols();
    HpdSystem sys;
    Eigen::MatrixXcd p = channel.adjoint() * channel;
    p.diagonal().array() += xi;
    sys.matrix = 0.5 * (p + p.adjoint());
    sys.rhs = Eigen::MatrixXcd::Identity(k, k);
    sys.xi = xi;
    return sys;
}

namespace {

PrecoderBlock normalize(const Eigen::MatrixXcd& channel, const Eigen::MatrixXcd& inverse,
                        double power) {
    if (!(power > 0.0))
        throw DomainError(fmt::format("power budget must be positive, got {}", power));
    PrecoderBlock block;
    block.unnormalized = channel * inverse;
    const double trace = block.unnormalized.squaredNorm();
    if (!(trace > 0.0) || !std::isfinite(trace))
        throw DegenerateChannelError(
            fmt::format("tr(F^H F) = {} leaves no power direction", trace));
    block.beta = std::sqrt(power / trace);
    block.precoder = block.beta * block.unnormalized;
    return block;
}

} // namespace

PrecoderBlock rzf_direct(const Eigen::MatrixXcd& channel, double xi, double power) {
    const HpdSystem sys = gram_regularized(channel, xi);
    return normalize(channel, Cholesky(sys.matrix).solve(sys.rhs), power);
}

PrecoderBlock rzf_iterative(const Eigen::MatrixXcd& channel, double xi, double power,
                            Method method, const IterativeOptions& options) {
    if (options.iterations == 0)
        throw DomainError("iterative precoding needs at least one iteration");
    const HpdSystem sys = gram_regularized(channel, xi);
    const Eigen::Index k = sys.dimension();
    Eigen::MatrixXcd inverse(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        inverse.col(j) = solve(method, sys.matrix, Eigen::VectorXcd(sys.rhs.col(j)), options).solution;
    return normalize(channel, inverse, power);
}

PrecoderBlock rzf(Method method, const Eigen::MatrixXcd& channel, double xi, double power,
                  const IterativeOptions& options) {
    if (method == Method::Direct)
        return rzf_direct(channel, xi, power);
    return rzf_iterative(channel, xi, power, method, options);
}

Eigen::VectorXcd transmit_iterative(const Eigen::MatrixXcd& channel, double xi, double beta,
                                    const Eigen::VectorXcd& symbols, Method method,
                                    const IterativeOptions& options) {
    const HpdSystem sys = gram_regularized(channel, xi);
    return beta * channel * solve(method, sys.matrix, symbols, options).solution;
}

Eigen::MatrixXcd BlockPrecoder::centre_group(std::size_t group) const {
    const Eigen::Index k1 = first.precoder.cols();
    return group == 0 ? Eigen::MatrixXcd(centre.precoder.leftCols(k1))
                      : Eigen::MatrixXcd(centre.precoder.rightCols(centre.precoder.cols() - k1));
}

BlockPrecoder assemble_precoder(PrecoderBlock first, PrecoderBlock centre, PrecoderBlock second) {
    BlockPrecoder g;
    g.stacked = stack_blocks({first.precoder, centre.precoder, second.precoder});
    g.first = std::move(first);
    g.centre = std::move(centre);
    g.second = std::move(second);
    return g;
}

BlockPrecoder build_precoder(const ChannelBlocks& blocks, double xi, double power, Method method,
                             const IterativeOptions& options) {
    return assemble_precoder(rzf(method, blocks.first, xi, power, options),
                             rzf(method, blocks.centre, xi, power, options),
                             rzf(method, blocks.second, xi, power, options));
}

} // namespace xlprec
