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

#ifndef XLPREC_PRECODER_HPP
#define XLPREC_PRECODER_HPP

#include <Eigen/Dense>

#include "xlprec/channel.hpp"
#include "xlprec/linsolve.hpp"

namespace xlprec {

// P = H^H H + xi I, symmetrised. The right-hand sides are the unit vectors.
HpdSystem gram_regularized(const Eigen::MatrixXcd& channel, double xi);

// G = beta F with F = H P^{-1} and beta = sqrt(power / tr(F^H F)).
struct PrecoderBlock {
    Eigen::MatrixXcd precoder;
    Eigen::MatrixXcd unnormalized;
    double beta = 0.0;
};

PrecoderBlock rzf_direct(const Eigen::MatrixXcd& channel, double xi, double power);

// Approximate inverse built column by column from P x_j = e_j, each solved
// with `options.iterations` steps of `method`. beta is taken from the
// approximate F so the block still radiates exactly `power`.
PrecoderBlock rzf_iterative(const Eigen::MatrixXcd& channel, double xi, double power,
                            Method method, const IterativeOptions& options);

PrecoderBlock rzf(Method method, const Eigen::MatrixXcd& channel, double xi, double power,
                  const IterativeOptions& options);

// Per-symbol transmit path x = beta H w with P w = s solved iteratively.
Eigen::VectorXcd transmit_iterative(const Eigen::MatrixXcd& channel, double xi, double beta,
                                    const Eigen::VectorXcd& symbols, Method method,
                                    const IterativeOptions& options);

struct BlockPrecoder {
    PrecoderBlock first;
    PrecoderBlock centre;
    PrecoderBlock second;
    Eigen::MatrixXcd stacked;

    // [G_c1 | G_c2] split of the centre block by user group.
    Eigen::MatrixXcd centre_group(std::size_t group) const;
};

BlockPrecoder assemble_precoder(PrecoderBlock first, PrecoderBlock centre, PrecoderBlock second);

// Builds the three per-subarray RZF blocks with a shared xi and a per-block
// power budget.
BlockPrecoder build_precoder(const ChannelBlocks& blocks, double xi, double power, Method method,
                             const IterativeOptions& options);

} // namespace xlprec

#endif
