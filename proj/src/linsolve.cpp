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

#include "xlprec/linsolve.hpp"

#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "xlprec/errors.hpp"

namespace xlprec {

using cplx = std::complex<double>;

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Direct: return "direct";
    case Method::GaussSeidel: return "gs";
    case Method::Jor: return "jor";
    case Method::Cg: return "cg";
    case Method::JacPcg: return "jacpcg";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "direct" || name == "rzf") return Method::Direct;
    if (name == "gs") return Method::GaussSeidel;
    if (name == "jor") return Method::Jor;
    if (name == "cg") return Method::Cg;
    if (name == "jacpcg") return Method::JacPcg;
    throw ConfigError(fmt::format("unknown solver '{}' (expected direct, gs, jor, cg or jacpcg)", name));
}

namespace {

void check_square(const Eigen::MatrixXcd& p, const Eigen::VectorXcd& s) {
    if (p.rows() != p.cols() || p.rows() != s.size())
        throw DomainError(fmt::format("system of size {}x{} with a right-hand side of length {}",
                                      p.rows(), p.cols(), s.size()));
}

void check_options(const IterativeOptions& opt, Eigen::Index n) {
    if (opt.iterations == 0)
        throw DomainError("iteration count must be at least 1");
    if (opt.initial && opt.initial->size() != n)
        throw DomainError("initial guess has the wrong length");
}

Eigen::VectorXcd initial_guess(const IterativeOptions& opt, const Eigen::MatrixXcd& p,
                               const Eigen::VectorXcd& s) {
    if (opt.initial)
        return *opt.initial;
    if (opt.start == InitialGuess::Diagonal)
        return s.cwiseQuotient(p.diagonal());
    return Eigen::VectorXcd::Zero(p.rows());
}

// Records the normalised squared residual of each iterate and decides when
// to stop.
class Monitor {
public:
    Monitor(const Eigen::MatrixXcd& p, const Eigen::VectorXcd& s, const IterativeOptions& opt,
            SolverOutcome& out)
        : p_(p), s_(s), opt_(opt), out_(out) {
        const double n2 = s.squaredNorm();
        scale_ = n2 > 0.0 ? 1.0 / n2 : 1.0;
    }

    // Returns true when the caller should stop.
    bool record(const Eigen::VectorXcd& w) {
        const double r = (p_ * w - s_).squaredNorm() * scale_;
        out_.residual_trace.push_back(r);
        if (opt_.record_iterates)
            out_.iterates.push_back(w);
        if (!std::isfinite(r))
            return true;
        return opt_.stop_early && std::sqrt(r) <= opt_.tolerance;
    }

    void finish(Eigen::VectorXcd w, std::size_t iterations) {
        out_.solution = std::move(w);
        out_.iterations = iterations;
        const auto& tr = out_.residual_trace;
        const double last = tr.back();
        out_.converged = std::isfinite(last) && std::sqrt(last) <= opt_.tolerance;
        out_.diverged = !std::isfinite(last) || last > tr.front();
    }

private:
    const Eigen::MatrixXcd& p_;
    const Eigen::VectorXcd& s_;
    const IterativeOptions& opt_;
    SolverOutcome& out_;
    double scale_ = 1.0;
};

Eigen::VectorXcd checked_diagonal(const Eigen::MatrixXcd& p, bool preconditioner) {
    Eigen::VectorXcd d = p.diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] == cplx(0.0, 0.0)) {
            const auto msg = fmt::format("zero diagonal entry at index {}", i);
            if (preconditioner)
                throw PreconditionerError(msg);
            throw SplittingError(msg);
        }
    }
    return d;
}

// Conjugate-gradient recurrences shared by every Krylov variant.
//
//   q = A m,  alpha = r^H z / m^H q,  w += alpha m,  r -= alpha q,
//   z = Z r,  m = z + (r'^H z' / r^H z) m
//
// Classical CG:      A = P,        r0 = s - P w0,             Z = I.
// Scaled-system PCG: A = C^{-1}P,  r0 = C^{-1}(s - P w0),     Z = I.
// Textbook PCG:      A = P,        r0 = s - P w0,             Z = C^{-1}.
// Z is applied as an elementwise product so a unit preconditioner leaves
// every intermediate bit-identical to classical CG. `hermitian` enables the
// curvature check, which only makes sense when A is Hermitian.
SolverOutcome krylov(const Eigen::MatrixXcd& p, const Eigen::VectorXcd& s,
                     const Eigen::MatrixXcd& a, Eigen::VectorXcd r, Eigen::VectorXcd w,
                     const Eigen::VectorXd* z_scale, bool hermitian, const IterativeOptions& opt) {
    SolverOutcome out;
    Monitor monitor(p, s, opt, out);
    if (monitor.record(w)) {
        monitor.finish(std::move(w), 0);
        return out;
    }
    auto precondition = [z_scale](const Eigen::VectorXcd& v) {
        Eigen::VectorXcd out = v;
        if (z_scale)
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out[i] *= (*z_scale)[i];
        return out;
    };
    Eigen::VectorXcd z = precondition(r);
    Eigen::VectorXcd m = z;
    double rho = r.dot(z).real();
    std::size_t t = 0;
    while (t < opt.iterations) {
        if (rho == 0.0)
            break;
        const Eigen::VectorXcd q = a * m;
        const cplx curvature = m.dot(q);
        if (!std::isfinite(curvature.real()) || curvature == cplx(0.0, 0.0) ||
            (hermitian && curvature.real() <= 0.0))
            throw NotHpdError(fmt::format("non-positive curvature {}{:+}i at iteration {}",
                                          curvature.real(), curvature.imag(), t + 1),
                              t + 1);
        const cplx alpha = rho / curvature;
        w += alpha * m;
        r -= alpha * q;
        z = precondition(r);
        const double rho_next = r.dot(z).real();
        m = z + (rho_next / rho) * m;
        rho = rho_next;
        ++t;
        if (monitor.record(w))
            break;
    }
    monitor.finish(std::move(w), t);
    return out;
}

} // namespace

Splitting split(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols())
        throw DomainError("splitting needs a square matrix");
    Splitting sp;
    sp.diagonal = matrix.diagonal();
    sp.lower = matrix.triangularView<Eigen::StrictlyLower>();
    sp.upper = matrix.triangularView<Eigen::StrictlyUpper>();
    return sp;
}

bool is_hermitian(const Eigen::MatrixXcd& matrix, double tolerance) {
    if (matrix.rows() != matrix.cols())
        return false;
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tolerance * scale;
}

Cholesky::Cholesky(const Eigen::MatrixXcd& matrix) {
    const Eigen::Index n = matrix.rows();
    if (matrix.cols() != n)
        throw DomainError("Cholesky needs a square matrix");
    lower_ = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = matrix(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k)
            pivot -= std::norm(lower_(j, k));
        if (!(pivot > 0.0))
            throw NotHpdError(fmt::format("Cholesky pivot {} is not positive ({})", j, pivot),
                              static_cast<std::size_t>(j));
        const double ljj = std::sqrt(pivot);
        lower_(j, j) = ljj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            cplx acc = matrix(i, j);
            for (Eigen::Index k = 0; k < j; ++k)
                acc -= lower_(i, k) * std::conj(lower_(j, k));
            lower_(i, j) = acc / ljj;
        }
    }
}

Eigen::VectorXcd Cholesky::solve(const Eigen::VectorXcd& rhs) const {
    const Eigen::Index n = lower_.rows();
    if (rhs.size() != n)
        throw DomainError("right-hand side length does not match the factor");
    Eigen::VectorXcd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx acc = rhs[i];
        for (Eigen::Index k = 0; k < i; ++k)
            acc -= lower_(i, k) * y[k];
        y[i] = acc / lower_(i, i);
    }
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        cplx acc = y[i];
        for (Eigen::Index k = i + 1; k < n; ++k)
            acc -= std::conj(lower_(k, i)) * x[k];
        x[i] = acc / lower_(i, i);
    }
    return x;
}

Eigen::MatrixXcd Cholesky::solve(const Eigen::MatrixXcd& rhs) const {
    Eigen::MatrixXcd x(rhs.rows(), rhs.cols());
    for (Eigen::Index c = 0; c < rhs.cols(); ++c)
        x.col(c) = solve(Eigen::VectorXcd(rhs.col(c)));
    return x;
}

SolverOutcome direct_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs) {
    check_square(matrix, rhs);
    SolverOutcome out;
    out.solution = Cholesky(matrix).solve(rhs);
    const double n2 = rhs.squaredNorm();
    out.residual_trace = {n2 > 0.0 ? 1.0 : 0.0};
    out.iterations = 0;
    out.converged = true;
    return out;
}

SolverOutcome gs_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                       const IterativeOptions& options) {
    check_square(matrix, rhs);
    check_options(options, matrix.rows());
    const Eigen::VectorXcd d = checked_diagonal(matrix, false);
    const Eigen::Index n = matrix.rows();

    SolverOutcome out;
    Monitor monitor(matrix, rhs, options, out);
    Eigen::VectorXcd w = initial_guess(options, matrix, rhs);
    std::size_t t = 0;
    if (!monitor.record(w)) {
        while (t < options.iterations) {
            for (Eigen::Index i = 0; i < n; ++i) {
                cplx acc = rhs[i];
                for (Eigen::Index j = 0; j < n; ++j)
                    if (j != i)
                        acc -= matrix(i, j) * w[j];
                w[i] = acc / d[i];
            }
            ++t;
            if (monitor.record(w))
                break;
        }
    }
    monitor.finish(std::move(w), t);
    return out;
}

GsIteration gs_explicit_init(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs) {
    check_square(matrix, rhs);
    checked_diagonal(matrix, false);
    const Eigen::Index n = matrix.rows();
    // (D + Lo) [A, b] = [-Up, s]
    Eigen::MatrixXcd augmented(n, n + 1);
    augmented.leftCols(n) = -Eigen::MatrixXcd(matrix.triangularView<Eigen::StrictlyUpper>());
    augmented.col(n) = rhs;
    const Eigen::MatrixXcd lower = matrix.triangularView<Eigen::Lower>();
    const Eigen::MatrixXcd solved = lower.triangularView<Eigen::Lower>().solve(augmented);
    return {solved.leftCols(n), solved.col(n)};
}

SolverOutcome gs_solve_explicit(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                                const IterativeOptions& options) {
    check_options(options, matrix.rows());
    const GsIteration it = gs_explicit_init(matrix, rhs);
    SolverOutcome out;
    Monitor monitor(matrix, rhs, options, out);
    Eigen::VectorXcd w = initial_guess(options, matrix, rhs);
    std::size_t t = 0;
    if (!monitor.record(w)) {
        while (t < options.iterations) {
            w = it.iteration * w + it.offset;
            ++t;
            if (monitor.record(w))
                break;
        }
    }
    monitor.finish(std::move(w), t);
    return out;
}

SolverOutcome jor_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                        const IterativeOptions& options) {
    check_square(matrix, rhs);
    check_options(options, matrix.rows());
    if (!(options.relaxation > 0.0))
        throw DomainError(fmt::format("JOR relaxation must be positive, got {}", options.relaxation));
    const Eigen::VectorXcd scaled = options.relaxation * checked_diagonal(matrix, false).cwiseInverse();

    SolverOutcome out;
    Monitor monitor(matrix, rhs, options, out);
    Eigen::VectorXcd w = initial_guess(options, matrix, rhs);
    std::size_t t = 0;
    if (!monitor.record(w)) {
        while (t < options.iterations) {
            // Every component reads only the previous sweep.
            w += scaled.cwiseProduct(rhs - matrix * w);
            ++t;
            if (monitor.record(w))
                break;
        }
    }
    monitor.finish(std::move(w), t);
    return out;
}

SolverOutcome cg_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                       const IterativeOptions& options) {
    check_square(matrix, rhs);
    check_options(options, matrix.rows());
    Eigen::VectorXcd w = initial_guess(options, matrix, rhs);
    Eigen::VectorXcd r = rhs - matrix * w;
    return krylov(matrix, rhs, matrix, std::move(r), std::move(w), nullptr, true, options);
}

SolverOutcome jacpcg_solve(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                           const IterativeOptions& options) {
    check_square(matrix, rhs);
    check_options(options, matrix.rows());
    const Eigen::Index n = matrix.rows();
    // The diagonal of an HPD matrix is real and positive.
    const Eigen::VectorXd c = options.identity_preconditioner
                                  ? Eigen::VectorXd::Ones(n)
                                  : Eigen::VectorXd(checked_diagonal(matrix, true).real());
    Eigen::VectorXcd w = initial_guess(options, matrix, rhs);

    if (options.pcg_variant == PcgVariant::Textbook) {
        const Eigen::VectorXd inv = c.cwiseInverse();
        Eigen::VectorXcd r = rhs - matrix * w;
        return krylov(matrix, rhs, matrix, std::move(r), std::move(w), &inv, true, options);
    }

    // C^{-1}P formed once per solve.
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = matrix(i, j) / c[i];
    Eigen::VectorXcd r = rhs - matrix * w;
    for (Eigen::Index i = 0; i < n; ++i)
        r[i] /= c[i];
    return krylov(matrix, rhs, a, std::move(r), std::move(w), nullptr,
                  options.identity_preconditioner, options);
}

SolverOutcome solve(Method method, const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                    const IterativeOptions& options) {
    switch (method) {
    case Method::Direct: return direct_solve(matrix, rhs);
    case Method::GaussSeidel: return gs_solve(matrix, rhs, options);
    case Method::Jor: return jor_solve(matrix, rhs, options);
    case Method::Cg: return cg_solve(matrix, rhs, options);
    case Method::JacPcg: return jacpcg_solve(matrix, rhs, options);
    }
    throw DomainError("unknown solver");
}

std::vector<SolverOutcome> solve(Method method, const HpdSystem& system,
                                 const IterativeOptions& options) {
    std::vector<SolverOutcome> out;
    out.reserve(static_cast<std::size_t>(system.rhs.cols()));
    for (Eigen::Index c = 0; c < system.rhs.cols(); ++c)
        out.push_back(solve(method, system.matrix, Eigen::VectorXcd(system.rhs.col(c)), options));
    return out;
}

double condition_number(const Eigen::MatrixXcd& matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw DomainError("condition number needs a non-empty square matrix");
    if (matrix.rows() > kConditionNumberMaxDimension)
        throw DomainError(fmt::format("condition number is limited to n <= {} (got {})",
                                      kConditionNumberMaxDimension, matrix.rows()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(matrix, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0))
        throw NotHpdError(fmt::format("smallest eigenvalue {} is not positive", lo), 0);
    return hi / lo;
}

Eigen::MatrixXcd jacobi_scaled(const Eigen::MatrixXcd& matrix) {
    const Eigen::VectorXd d = matrix.diagonal().real().cwiseSqrt().cwiseInverse();
    return d.asDiagonal() * matrix * d.asDiagonal();
}

} // namespace xlprec
