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

#ifndef XLPREC_ERRORS_HPP
#define XLPREC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xlprec {

// Base of every error raised by the library. kind() is a stable token used
// by the CLI's machine-readable error line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& what) : Error("geometry", what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

struct ModelError : Error {
    explicit ModelError(const std::string& what) : Error("model", what) {}
};

struct TopologyError : Error {
    explicit TopologyError(const std::string& what) : Error("topology", what) {}
};

struct SplittingError : Error {
    explicit SplittingError(const std::string& what) : Error("splitting", what) {}
};

struct PreconditionerError : Error {
    explicit PreconditionerError(const std::string& what) : Error("preconditioner", what) {}
};

struct DegenerateChannelError : Error {
    explicit DegenerateChannelError(const std::string& what) : Error("degenerate_channel", what) {}
};

struct AssemblyError : Error {
    explicit AssemblyError(const std::string& what) : Error("assembly", what) {}
};

// Raised when a matrix handed to a solver turns out not to be Hermitian
// positive definite. index() is the failing pivot (Cholesky) or iteration
// (Krylov curvature check).
class NotHpdError : public Error {
public:
    NotHpdError(const std::string& what, std::size_t index)
        : Error("not_hpd", what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace xlprec

#endif
