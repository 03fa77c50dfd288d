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

#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "xlprec/channel.hpp"
#include "xlprec/errors.hpp"
#include "xlprec/scenario.hpp"

using namespace xlprec;

namespace {

VisibilityRegion region(const ArrayGeometry& g, double c, double l) {
    VisibilityRegion vr;
    vr.center = c;
    vr.length = l;
    vr.visible = visibility_mask(g, c, l);
    return vr;
}

UserLayout fixed_layout(std::size_t users, std::size_t antennas, double d) {
    UserLayout u;
    u.users = users;
    u.groups = 2;
    u.positions.assign(users, {0.0, d});
    u.distances = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(users),
                                            static_cast<Eigen::Index>(antennas), d);
    return u;
}

} // namespace

TEST_CASE("path loss values") {
    const Eigen::VectorXd w = path_loss(Eigen::VectorXd::Constant(5, 30.0), 4.0, 3.0);
    for (Eigen::Index i = 0; i < 5; ++i)
        CHECK(w[i] == doctest::Approx(1.48148e-4).epsilon(1e-5));
    const Eigen::VectorXd one = path_loss(Eigen::VectorXd::LinSpaced(4, 1.0, 7.0), 1.0, 0.0);
    CHECK(one.isApprox(Eigen::VectorXd::Ones(4)));
    const Eigen::VectorXd two = path_loss((Eigen::VectorXd(2) << 1.0, 2.0).finished(), 4.0, 3.0);
    CHECK(two[0] == doctest::Approx(4.0));
    CHECK(two[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(path_loss((Eigen::VectorXd(2) << 1.0, 0.0).finished(), 4.0, 3.0), DomainError);
}

TEST_CASE("exponential correlation values and bounds") {
    CHECK(build_correlation(5, 0.0).isApprox(Eigen::MatrixXd::Identity(5, 5)));
    Eigen::MatrixXd expected(3, 3);
    expected << 1.0, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 1.0;
    CHECK(build_correlation(3, 0.5).isApprox(expected, 1e-15));
    CHECK_THROWS_AS(build_correlation(3, 1.0), ConfigError);
    CHECK_THROWS_AS(build_correlation(3, -0.1), ConfigError);
}

TEST_CASE("correlation matrices are positive definite") {
    for (const double rho : {0.0, 0.3, 0.5, 0.8, 0.95, 0.99}) {
        for (const std::size_t m : {2u, 16u, 64u}) {
            const Eigen::MatrixXd r = build_correlation(m, rho);
            CHECK((r - r.transpose()).norm() == 0.0);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
            CHECK(eig.eigenvalues().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("covariance keeps only visible entries inside subarray blocks") {
    const ArrayGeometry g = build_geometry(12, 3, 2.6e9, 2.0);
    const Eigen::MatrixXd r = build_correlation(g, 0.7);
    const VisibilityRegion vr = region(g, 5.5 * g.spacing, 5.0 * g.spacing);
    const CovarianceModel cov = make_covariance(r, vr, g);
    for (Eigen::Index i = 0; i < 12; ++i) {
        for (Eigen::Index j = 0; j < 12; ++j) {
            const bool keep = vr.visible[static_cast<std::size_t>(i)] &&
                              vr.visible[static_cast<std::size_t>(j)] &&
                              g.subarray_of(static_cast<std::size_t>(i)) ==
                                  g.subarray_of(static_cast<std::size_t>(j));
            CHECK(cov.theta(i, j) == (keep ? r(i, j) : 0.0));
        }
    }
    CHECK((cov.theta - cov.theta.transpose()).norm() == 0.0);
}

TEST_CASE("positive semi-definite square root") {
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(4, 4);
    theta.topLeftCorner(2, 2) << 1.0, 0.5, 0.5, 1.0;
    const Eigen::MatrixXd root = psd_sqrt(theta);
    CHECK((root * root - theta).norm() < 1e-14);
    CHECK(root.bottomRows(2).norm() == doctest::Approx(0.0).epsilon(1e-15));
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(1, 1) = -1e-3;
    CHECK_THROWS_AS(psd_sqrt(bad), ModelError);
}

TEST_CASE("out-of-region antennas carry exactly zero energy") {
    const ArrayGeometry g = build_geometry(99, 3, 2.6e9, 2.0);
    const Eigen::MatrixXd r = build_correlation(g, 0.8);
    RandomStream rng = seed_stream(5, 0);
    const double mu = vr_log_location(g, 0.1, 0.1, VrLengthModel::LogMean);
    for (int i = 0; i < 200; ++i) {
        const VisibilityRegion vr = sample_vr(rng, g, mu, 0.1);
        const CovarianceModel cov = make_covariance(r, vr, g);
        const Eigen::VectorXcd h = sample_user_channel(rng, cov, Eigen::VectorXd::Ones(99), g);
        double outside = 0.0, inside = 0.0;
        for (std::size_t m = 0; m < 99; ++m)
            (vr.visible[m] ? inside : outside) += std::norm(h[static_cast<Eigen::Index>(m)]);
        CHECK(outside == 0.0);
        CHECK(inside > 0.0);
    }
}

TEST_CASE("a subarray outside the region gives an exact zero block") {
    const ArrayGeometry g = build_geometry(9, 3, 2.6e9, 2.0);
    const VisibilityRegion vr = region(g, 1.0 * g.spacing, 2.0 * g.spacing);
    const CovarianceModel cov = make_covariance(build_correlation(g, 0.5), vr, g);
    RandomStream rng = seed_stream(6, 0);
    const Eigen::VectorXcd h = sample_user_channel(rng, cov, Eigen::VectorXd::Ones(9), g);
    CHECK(h.segment(3, 6).norm() == 0.0);
    CHECK(h.head(3).norm() > 0.0);
}

TEST_CASE("white unit-gain channel has identity sample covariance") {
    const ArrayGeometry g = build_geometry(6, 3, 2.6e9, 2.0);
    const CovarianceModel cov =
        make_covariance(build_correlation(g, 0.0), region(g, g.length() / 2, 2 * g.length()), g);
    RandomStream rng = seed_stream(7, 0);
    const int n = 100000;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(6, 6);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXcd h = sample_user_channel(rng, cov, Eigen::VectorXd::Ones(6), g);
        acc += h * h.adjoint();
    }
    acc /= static_cast<double>(n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(6, 6);
    CHECK((acc - id).norm() / id.norm() < 0.02);
}

TEST_CASE("sample covariance matches the weighted block covariance") {
    const ArrayGeometry g = build_geometry(12, 3, 2.6e9, 2.0);
    const Eigen::MatrixXd r = build_correlation(g, 0.6);
    const VisibilityRegion vr = region(g, 6.0 * g.spacing, 9.0 * g.spacing);
    const CovarianceModel cov = make_covariance(r, vr, g);
    const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(12, 0.5, 2.0);
    RandomStream rng = seed_stream(8, 0);
    const int n = 20000;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(12, 12);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXcd h = sample_user_channel(rng, cov, w, g);
        acc += h * h.adjoint();
    }
    acc /= static_cast<double>(n);
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd expected = sw.asDiagonal() * cov.theta * sw.asDiagonal();
    CHECK((acc - expected.cast<std::complex<double>>()).norm() / expected.norm() < 0.03);
}

TEST_CASE("stacked channel has the three-subarray zero pattern") {
    Scenario sc;
    RandomStream rng = seed_stream(42, 0);
    const TrialDraw draw = draw_trial(sc, rng);
    const ChannelRealization& r = draw.channel.realization;
    REQUIRE(r.antennas() == 99);
    REQUIRE(r.users() == 32);
    CHECK(r.stacked.block(0, 16, 33, 16).norm() == 0.0);
    CHECK(r.stacked.block(66, 0, 33, 16).norm() == 0.0);
    const ChannelBlocks b = assemble_blocks(r);
    CHECK(b.first.rows() == 33);
    CHECK(b.first.cols() == 16);
    CHECK(b.centre.rows() == 33);
    CHECK(b.centre.cols() == 32);
    CHECK(b.second.rows() == 33);
    CHECK(b.second.cols() == 16);
    CHECK(b.first == r.stacked.block(0, 0, 33, 16));
    CHECK(b.centre == r.stacked.block(33, 0, 33, 32));
    CHECK(b.second == r.stacked.block(66, 16, 33, 16));
    for (std::size_t k = 0; k < 32; ++k)
        CHECK(r.h(1, k) == r.stacked.col(static_cast<Eigen::Index>(k)).segment(33, 33));
}

TEST_CASE("every user keeps a nonzero channel on a serving subarray") {
    Scenario sc;
    for (std::uint64_t t = 0; t < 30; ++t) {
        RandomStream rng = seed_stream(11, t);
        const TrialDraw draw = draw_trial(sc, rng);
        for (Eigen::Index k = 0; k < 32; ++k)
            CHECK(draw.channel.realization.stacked.col(k).norm() > 0.0);
    }
}

TEST_CASE("block split and stack round-trip bit-exactly") {
    RandomStream rng = seed_stream(3, 3);
    BlockTriple t;
    auto fill = [&](Eigen::Index r, Eigen::Index c) {
        Eigen::MatrixXcd m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i)
                m(i, j) = rng.complex_normal();
        return m;
    };
    t.first = fill(4, 1);
    t.centre = fill(4, 2);
    t.second = fill(4, 1);
    const Eigen::MatrixXcd stacked = stack_blocks(t);
    CHECK(stacked.rows() == 12);
    CHECK(stacked.cols() == 2);
    const BlockTriple back = split_blocks(stacked, 1);
    CHECK(back.first == t.first);
    CHECK(back.centre == t.centre);
    CHECK(back.second == t.second);
    t.second = fill(3, 1);
    CHECK_THROWS_AS(stack_blocks(t), AssemblyError);
}

TEST_CASE("single user per group") {
    const ArrayGeometry g = build_geometry(6, 3, 2.6e9, 2.0);
    const UserLayout u = fixed_layout(2, 6, 40.0);
    ChannelModel model;
    RandomStream rng = seed_stream(1, 1);
    const ChannelDraw d = draw_channel(rng, g, u, model);
    const ChannelBlocks b = assemble_blocks(d.realization);
    CHECK(b.centre.cols() == 2);
    CHECK(b.first.cols() == 1);
    CHECK(b.second.cols() == 1);
}

TEST_CASE("only the three-subarray two-group topology is accepted") {
    const ArrayGeometry g = build_geometry(8, 4, 2.6e9, 2.0);
    const UserLayout u = fixed_layout(2, 8, 40.0);
    CHECK_THROWS_AS(make_realization(g, u, Eigen::MatrixXcd::Zero(8, 2), Eigen::MatrixXd::Ones(8, 2)),
                    TopologyError);
}

TEST_CASE("normalised channels do not depend on the path-loss scale") {
    Scenario a, b;
    b.channel.omega = 400.0;
    RandomStream ra = seed_stream(9, 4), rb = seed_stream(9, 4);
    const TrialDraw da = draw_trial(a, ra);
    const TrialDraw db = draw_trial(b, rb);
    const Eigen::MatrixXcd& ha = da.channel.realization.stacked;
    const Eigen::MatrixXcd& hb = db.channel.realization.stacked;
    CHECK((ha - hb).norm() <= 1e-12 * ha.norm());
    CHECK(da.channel.realization.gains.mean() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unnormalised gains follow the path-loss law") {
    Scenario sc;
    sc.channel.normalization = GainNormalization::None;
    RandomStream rng = seed_stream(2, 2);
    const TrialDraw d = draw_trial(sc, rng);
    for (Eigen::Index k = 0; k < 32; ++k)
        for (Eigen::Index m = 0; m < 99; m += 7)
            CHECK(d.channel.realization.gains(m, k) ==
                  doctest::Approx(4.0 / std::pow(d.layout.distances(k, m), 3.0)).epsilon(1e-12));
}
