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
// Shared fixtures for the unit suites.

#ifndef XLPREC_TESTS_SUPPORT_HPP
#define XLPREC_TESTS_SUPPORT_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "xlprec/rng.hpp"

namespace xlprec::testing {

inline Eigen::MatrixXcd random_matrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = rng.complex_normal();
    return m;
}

inline Eigen::VectorXcd random_vector(RandomStream& rng, Eigen::Index n) {
    return random_matrix(rng, n, 1).col(0);
}

// A^H A + shift I with A tall, so the result is well conditioned.
inline Eigen::MatrixXcd random_hpd(RandomStream& rng, Eigen::Index n, double shift = 0.1) {
    const Eigen::MatrixXcd a = random_matrix(rng, 2 * n, n);
    Eigen::MatrixXcd p = a.adjoint() * a;
    p.diagonal().array() += shift;
    return 0.5 * (p + p.adjoint());
}

inline double relative_error(const Eigen::VectorXcd& x, const Eigen::VectorXcd& ref) {
    return (x - ref).norm() / ref.norm();
}

} // namespace xlprec::testing

#endif
