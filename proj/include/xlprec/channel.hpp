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

#ifndef XLPREC_CHANNEL_HPP
#define XLPREC_CHANNEL_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "xlprec/geometry.hpp"
#include "xlprec/rng.hpp"

namespace xlprec {

// Three-subarray / two-group interference topology: group 0 is served by
// subarrays {0, 1}, group 1 by subarrays {1, 2}; the central subarray 1 is
// shared. Rows of every stacked matrix follow subarray order (first, centre,
// second) and columns follow user order (group 0 then group 1).
inline constexpr std::size_t kTopologySubarrays = 3;
inline constexpr std::size_t kTopologyGroups = 2;
inline constexpr std::size_t kCentreSubarray = 1;

// True when subarray `s` carries signal for user group `group`.
constexpr bool serves(std::size_t s, std::size_t group) {
    return s == kCentreSubarray || s == (group == 0 ? 0 : 2);
}

// w = omega * d^-nu, elementwise.
Eigen::VectorXd path_loss(const Eigen::VectorXd& distances, double omega, double nu);

// Exponential correlation R[i][j] = rho^|i-j|.
Eigen::MatrixXd build_correlation(std::size_t antennas, double rho);
inline Eigen::MatrixXd build_correlation(const ArrayGeometry& geometry, double rho) {
    return build_correlation(geometry.antennas, rho);
}

struct CovarianceModel {
    Eigen::MatrixXd correlation;
    std::vector<std::uint8_t> visible;
    // D R D with every entry outside the subarray diagonal blocks set to zero.
    Eigen::MatrixXd theta;
};

CovarianceModel make_covariance(const Eigen::MatrixXd& correlation, const VisibilityRegion& vr,
                                const ArrayGeometry& geometry);

// Hermitian PSD square root by eigendecomposition; eigenvalues below 1e-12
// are clamped to zero and anything below -1e-10 is rejected.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& theta);

// One draw of sqrt(w) .* (Theta^{1/2} z) over the whole array for one user.
// Invisible antennas are exact zeros.
Eigen::VectorXcd sample_user_channel(RandomStream& rng, const CovarianceModel& cov,
                                     const Eigen::VectorXd& gains, const ArrayGeometry& geometry);

struct BlockTriple {
    Eigen::MatrixXcd first;
    Eigen::MatrixXcd centre;
    Eigen::MatrixXcd second;
};

// Stacks [first 0; centre; 0 second]. first has K_1 columns, second K_2,
// centre K_1 + K_2; all three share the row count M_s.
Eigen::MatrixXcd stack_blocks(const BlockTriple& blocks);

// Inverse of stack_blocks for a stacked matrix with `group_size` users per group.
BlockTriple split_blocks(const Eigen::MatrixXcd& stacked, std::size_t group_size);

struct ChannelRealization {
    std::size_t subarray_size = 0;
    std::size_t group_size = 0;
    // M x K: each user's channel over the whole array before the topology
    // removes links to the subarray that does not serve its group.
    Eigen::MatrixXcd per_user;
    // M x K large-scale gains.
    Eigen::MatrixXd gains;
    // M x K with the block-zero layout applied.
    Eigen::MatrixXcd stacked;

    Eigen::Index antennas() const { return stacked.rows(); }
    Eigen::Index users() const { return stacked.cols(); }
    // h_{s,k}: user k's channel to subarray s (length M_s).
    Eigen::VectorXcd h(std::size_t s, std::size_t k) const;
};

struct ChannelBlocks {
    Eigen::MatrixXcd first;
    Eigen::MatrixXcd centre;
    Eigen::MatrixXcd second;
    Eigen::MatrixXcd stacked;
};

ChannelRealization make_realization(const ArrayGeometry& geometry, const UserLayout& layout,
                                    Eigen::MatrixXcd per_user, Eigen::MatrixXd gains);

ChannelBlocks assemble_blocks(const ChannelRealization& realization);

enum class GainNormalization {
    // Physical gains omega * d^-nu.
    None,
    // Unit mean gain over all (antenna, user) pairs.
    AntennaMean,
    // Unit mean over users of the expected channel energy E||h_k||^2 on
    // the subarrays serving each user.
    UserEnergy,
};

struct ChannelModel {
    double omega = 4.0;
    double nu = 3.0;
    double rho = 0.8;
    double vr_scale = 0.1;
    double vr_sigma = 0.1;
    VrLengthModel vr_model = VrLengthModel::LogMean;
    // Transmit power is quoted relative to this reference channel gain.
    GainNormalization normalization = GainNormalization::AntennaMean;
};

struct ChannelDraw {
    std::vector<VisibilityRegion> regions;
    ChannelRealization realization;
};

// VRs, path loss, correlated small-scale fading and block assembly for one trial.
ChannelDraw draw_channel(RandomStream& rng, const ArrayGeometry& geometry,
                         const UserLayout& layout, const ChannelModel& model);

} // namespace xlprec

#endif
