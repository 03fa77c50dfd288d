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

#ifndef XLPREC_LINSOLVE_HPP
#define XLPREC_LINSOLVE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace xlprec {

// A Hermitian positive definite matrix P = H^H H + xi I with its right-hand
// sides stored column-wise.
struct HpdSystem {
    Eigen::MatrixXcd matrix;
    Eigen::MatrixXcd rhs;
    double xi = 0.0;

    Eigen::Index dimension() const { return matrix.rows(); }
};

enum class Method { Direct, GaussSeidel, Jor, Cg, JacPcg };

std::string_view to_string(Method method);
// Accepts direct|rzf, gs, jor, cg, jacpcg.
Method parse_method(std::string_view name);

inline constexpr Method kAllMethods[] = {Method::Direct, Method::GaussSeidel, Method::Jor,
                                         Method::Cg, Method::JacPcg};

enum class PcgVariant {
    // Recurrences run on C^{-1}P with the Euclidean inner product r^H r.
    ScaledSystem,
    // Textbook PCG: true residual r, z = C^{-1} r, inner product r^H z.
    Textbook,
};

enum class InitialGuess {
    Zero,
    // w0 = diag(P)^{-1} s.
    Diagonal,
};

struct IterativeOptions {
    std::size_t iterations = 5;
    double tolerance = 1e-6;
    // When false every solver runs exactly `iterations` steps.
    bool stop_early = true;
    double relaxation = 0.5;
    // Starting point when `initial` is unset.
    InitialGuess start = InitialGuess::Zero;
    // Explicit starting point; overrides `start`.
    std::optional<Eigen::VectorXcd> initial;
    PcgVariant pcg_variant = PcgVariant::Textbook;
    // Jac-PCG only: replace C = diag(P) by the identity.
    bool identity_preconditioner = false;
    bool record_iterates = false;
};

struct SolverOutcome {
    Eigen::VectorXcd solution;
    std::size_t iterations = 0;
    // ||P w_t - s||^2 / ||s||^2 for t = 0..iterations (unnormalised when s = 0).
    std::vector<double> residual_trace;
    bool converged = false;
    // Residual grew over the run or became non-finite.
    bool diverged = false;
    // w_0..w_T when IterativeOptions::record_iterates is set.
    std::vector<Eigen::VectorXcd> iterates;
};

struct Splitting {
    Eigen::VectorXcd diagonal;
    Eigen::MatrixXcd lower;
    Eigen::MatrixXcd upper;
};

// P = D + Lo + Up with Lo, Up strictly triangular.
Splitting split(const Eigen::MatrixXcd& matrix);

bool is_hermitian(const Eigen::MatrixXcd& matrix, double tolerance = 1e-12);

// Lower-triangular Cholesky factor L with P = L L^H.
class Cholesky {
public:
    explicit Cholesky(const Eigen::MatrixXcd& matrix);

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
    const Eigen::MatrixXcd& factor() const noexcept { return lower_; }

private:
    Eigen::MatrixXcd lower_;
};

SolverOutcome direct_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs);

// Gauss-Seidel: one in-place forward sweep with (D + Lo) per iteration.
SolverOutcome gs_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                       const IterativeOptions& options = {});

// Explicit Gauss-Seidel iteration w <- A w + b with A = -(D+Lo)^{-1} Up and
// b = (D+Lo)^{-1} s formed up front by forward substitution. Matches the
// flop model's initialisation step; the sweep form above is the one used in
// simulations.
struct GsIteration {
    Eigen::MatrixXcd iteration;
    Eigen::VectorXcd offset;
};
GsIteration gs_explicit_init(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs);
SolverOutcome gs_solve_explicit(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                                const IterativeOptions& options = {});

// Jacobi over-relaxation w <- w + omega D^{-1}(s - P w).
SolverOutcome jor_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                        const IterativeOptions& options = {});

SolverOutcome cg_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                       const IterativeOptions& options = {});

// Conjugate gradient with the Jacobi preconditioner C = diag(P).
SolverOutcome jacpcg_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                           const IterativeOptions& options = {});

SolverOutcome solve(Method method, const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                    const IterativeOptions& options = {});

// One outcome per right-hand side column.
std::vector<SolverOutcome> solve(Method method, const HpdSystem& system,
                                 const IterativeOptions& options = {});

inline constexpr Eigen::Index kConditionNumberMaxDimension = 512;

// lambda_max / lambda_min by dense eigendecomposition.
double condition_number(const Eigen::MatrixXcd& matrix);

// D^{-1/2} P D^{-1/2}.
Eigen::MatrixXcd jacobi_scaled(const Eigen::MatrixXcd& matrix);

} // namespace xlprec

#endif
