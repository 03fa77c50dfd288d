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

#include "xlprec/channel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "xlprec/errors.hpp"

namespace xlprec {

Eigen::VectorXd path_loss(const Eigen::VectorXd& distances, double omega, double nu) {
    if (!(omega > 0.0) || !(nu >= 0.0))
        throw DomainError(fmt::format("path loss needs omega > 0 and nu >= 0 (got {}, {})", omega, nu));
    Eigen::VectorXd w(distances.size());
    for (Eigen::Index i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0))
            throw DomainError(fmt::format("distance {} at index {} is not positive", distances[i], i));
        w[i] = omega * std::pow(distances[i], -nu);
    }
    return w;
}

Eigen::MatrixXd build_correlation(std::size_t antennas, double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw ConfigError(fmt::format("correlation coefficient {} is outside [0, 1)", rho));
    const auto n = static_cast<Eigen::Index>(antennas);
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            r(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
    return r;
}

CovarianceModel make_covariance(const Eigen::MatrixXd& correlation, const VisibilityRegion& vr,
                                const ArrayGeometry& geometry) {
    const auto m = static_cast<Eigen::Index>(geometry.antennas);
    if (correlation.rows() != m || correlation.cols() != m ||
        vr.visible.size() != geometry.antennas)
        throw ModelError("correlation and visibility sizes do not match the array");

    CovarianceModel cov;
    cov.correlation = correlation;
    cov.visible = vr.visible;
    cov.theta = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!vr.visible[static_cast<std::size_t>(i)])
            continue;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (!vr.visible[static_cast<std::size_t>(j)])
                continue;
            if (geometry.subarray_of(static_cast<std::size_t>(i)) !=
                geometry.subarray_of(static_cast<std::size_t>(j)))
                continue;
            cov.theta(i, j) = correlation(i, j);
        }
    }
    return cov;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& theta) {
    if (theta.size() == 0)
        return theta;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(theta);
    if (eig.info() != Eigen::Success)
        throw ModelError("eigendecomposition of the covariance failed");
    Eigen::VectorXd values = eig.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < -1e-10)
            throw ModelError(fmt::format("covariance is not PSD: eigenvalue {}", values[i]));
        values[i] = values[i] < 1e-12 ? 0.0 : std::sqrt(values[i]);
    }
    return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::VectorXcd sample_user_channel(RandomStream& rng, const CovarianceModel& cov,
                                     const Eigen::VectorXd& gains, const ArrayGeometry& geometry) {
    const auto m = static_cast<Eigen::Index>(geometry.antennas);
    if (gains.size() != m)
        throw ModelError("gain vector length does not match the array");
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(m);
    const std::size_t ms = geometry.subarray_size();
    for (std::size_t s = 0; s < geometry.subarrays; ++s) {
        std::vector<Eigen::Index> idx;
        for (std::size_t a = s * ms; a < (s + 1) * ms; ++a)
            if (cov.visible[a])
                idx.push_back(static_cast<Eigen::Index>(a));
        // Empty intersection: the block stays an exact zero.
        if (idx.empty())
            continue;
        const auto n = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd block(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                block(i, j) = cov.theta(idx[i], idx[j]);
        const Eigen::MatrixXd root = psd_sqrt(block);
        Eigen::VectorXcd z(n);
        for (Eigen::Index i = 0; i < n; ++i)
            z[i] = rng.complex_normal();
        const Eigen::VectorXcd hb = root.cast<std::complex<double>>() * z;
        for (Eigen::Index i = 0; i < n; ++i)
            h[idx[i]] = std::sqrt(gains[idx[i]]) * hb[i];
    }
    return h;
}

Eigen::MatrixXcd stack_blocks(const BlockTriple& b) {
    const Eigen::Index ms = b.centre.rows();
    const Eigen::Index k1 = b.first.cols();
    const Eigen::Index k2 = b.second.cols();
    if (b.first.rows() != ms || b.second.rows() != ms || b.centre.cols() != k1 + k2)
        throw AssemblyError(fmt::format(
            "block shapes {}x{}, {}x{}, {}x{} do not form the three-subarray layout",
            b.first.rows(), b.first.cols(), b.centre.rows(), b.centre.cols(), b.second.rows(),
            b.second.cols()));
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(3 * ms, k1 + k2);
    out.block(0, 0, ms, k1) = b.first;
    out.block(ms, 0, ms, k1 + k2) = b.centre;
    out.block(2 * ms, k1, ms, k2) = b.second;
    return out;
}

BlockTriple split_blocks(const Eigen::MatrixXcd& stacked, std::size_t group_size) {
    const auto k1 = static_cast<Eigen::Index>(group_size);
    if (stacked.rows() % 3 != 0 || stacked.cols() != 2 * k1)
        throw TopologyError(fmt::format("a {}x{} matrix does not fit 3 subarrays and 2 groups of {}",
                                        stacked.rows(), stacked.cols(), group_size));
    const Eigen::Index ms = stacked.rows() / 3;
    return {stacked.block(0, 0, ms, k1), stacked.block(ms, 0, ms, 2 * k1),
            stacked.block(2 * ms, k1, ms, k1)};
}

Eigen::VectorXcd ChannelRealization::h(std::size_t s, std::size_t k) const {
    const auto ms = static_cast<Eigen::Index>(subarray_size);
    return stacked.col(static_cast<Eigen::Index>(k))
        .segment(static_cast<Eigen::Index>(s) * ms, ms);
}

ChannelRealization make_realization(const ArrayGeometry& geometry, const UserLayout& layout,
                                    Eigen::MatrixXcd per_user, Eigen::MatrixXd gains) {
    if (geometry.subarrays != kTopologySubarrays || layout.groups != kTopologyGroups)
        throw TopologyError(fmt::format(
            "only 3 subarrays and 2 user groups are supported (got S={}, L={})",
            geometry.subarrays, layout.groups));
    const auto m = static_cast<Eigen::Index>(geometry.antennas);
    const auto k = static_cast<Eigen::Index>(layout.users);
    if (per_user.rows() != m || per_user.cols() != k || gains.rows() != m || gains.cols() != k)
        throw ModelError("per-user channel shape does not match geometry and layout");

    ChannelRealization r;
    r.subarray_size = geometry.subarray_size();
    r.group_size = layout.group_size();
    r.per_user = std::move(per_user);
    r.gains = std::move(gains);
    r.stacked = r.per_user;
    const auto ms = static_cast<Eigen::Index>(r.subarray_size);
    for (Eigen::Index u = 0; u < k; ++u) {
        const std::size_t group = layout.group_of(static_cast<std::size_t>(u));
        for (std::size_t s = 0; s < kTopologySubarrays; ++s)
            if (!serves(s, group))
                r.stacked.col(u).segment(static_cast<Eigen::Index>(s) * ms, ms).setZero();
    }
    return r;
}

ChannelBlocks assemble_blocks(const ChannelRealization& realization) {
    BlockTriple t = split_blocks(realization.stacked, realization.group_size);
    return {std::move(t.first), std::move(t.centre), std::move(t.second), realization.stacked};
}

ChannelDraw draw_channel(RandomStream& rng, const ArrayGeometry& geometry,
                         const UserLayout& layout, const ChannelModel& model) {
    const auto m = static_cast<Eigen::Index>(geometry.antennas);
    const auto k = static_cast<Eigen::Index>(layout.users);
    const double mu = vr_log_location(geometry, model.vr_scale, model.vr_sigma, model.vr_model);
    const Eigen::MatrixXd correlation = build_correlation(geometry, model.rho);

    ChannelDraw draw;
    draw.regions.reserve(layout.users);
    Eigen::MatrixXd gains(m, k);
    for (Eigen::Index u = 0; u < k; ++u)
        gains.col(u) = path_loss(layout.distances.row(u).transpose(), model.omega, model.nu);

    // A region that only covers the subarray not serving the user's group
    // would leave the user without a channel, so it is drawn again.
    std::vector<std::uint8_t> eligible(geometry.antennas);
    for (Eigen::Index u = 0; u < k; ++u) {
        const std::size_t group = layout.group_of(static_cast<std::size_t>(u));
        for (std::size_t a = 0; a < geometry.antennas; ++a)
            eligible[a] = serves(geometry.subarray_of(a), group) ? 1 : 0;
        draw.regions.push_back(sample_vr(rng, geometry, mu, model.vr_sigma, eligible));
    }

    switch (model.normalization) {
    case GainNormalization::None:
        break;
    case GainNormalization::AntennaMean:
        gains /= gains.mean();
        break;
    case GainNormalization::UserEnergy: {
        double energy = 0.0;
        for (Eigen::Index u = 0; u < k; ++u) {
            const std::size_t group = layout.group_of(static_cast<std::size_t>(u));
            const auto& vis = draw.regions[static_cast<std::size_t>(u)].visible;
            for (Eigen::Index a = 0; a < m; ++a)
                if (vis[static_cast<std::size_t>(a)] &&
                    serves(geometry.subarray_of(static_cast<std::size_t>(a)), group))
                    energy += gains(a, u);
        }
        gains /= energy / static_cast<double>(k);
        break;
    }
    }

    Eigen::MatrixXcd per_user(m, k);
    for (Eigen::Index u = 0; u < k; ++u) {
        const CovarianceModel cov =
            make_covariance(correlation, draw.regions[static_cast<std::size_t>(u)], geometry);
        per_user.col(u) = sample_user_channel(rng, cov, gains.col(u), geometry);
    }
    draw.realization = make_realization(geometry, layout, std::move(per_user), std::move(gains));
    return draw;
}

} // namespace xlprec
