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

#include "xlprec/flops.hpp"

#include <fmt/format.h>

#include "xlprec/errors.hpp"

namespace xlprec {

namespace {

void require(std::int64_t k, std::int64_t t) {
    if (k < 1)
        throw DomainError(fmt::format("flop model needs K >= 1 (got {})", k));
    if (t < 1)
        throw DomainError(fmt::format("flop model needs T >= 1 (got {})", t));
}

} // namespace

std::int64_t flops_direct(std::int64_t k) {
    require(k, 1);
    return 4 * k * k * k + k - 1;
}

std::int64_t flops_gs(std::int64_t k, std::int64_t t) {
    require(k, t);
    return (4 * k * k * k - 3 * k * k + k) + t * (8 * k * k - 8 * k);
}

std::int64_t flops_jor(std::int64_t k, std::int64_t t) {
    require(k, t);
    return (2 * k * k + k + 1) + t * (8 * k * k - 8 * k);
}

std::int64_t flops_cg(std::int64_t k, std::int64_t t) {
    require(k, t);
    return t * (8 * k * k + 46 * k - 6);
}

std::int64_t flops_jacpcg(std::int64_t k, std::int64_t t) {
    return flops_cg(k, t) + 4 * k * k + 2 * k;
}

FlopModel flop_model(Method method, std::int64_t k, std::int64_t t) {
    FlopModel f;
    f.method = method;
    f.dimension = k;
    f.iterations = method == Method::Direct ? 0 : t;
    switch (method) {
    case Method::Direct:
        f.init_flops = flops_direct(k);
        break;
    case Method::GaussSeidel:
        f.init_flops = flops_gs(k, 1) - (8 * k * k - 8 * k);
        f.per_iter_flops = 8 * k * k - 8 * k;
        break;
    case Method::Jor:
        f.init_flops = 2 * k * k + k + 1;
        f.per_iter_flops = 8 * k * k - 8 * k;
        break;
    case Method::Cg:
        f.per_iter_flops = 8 * k * k + 46 * k - 6;
        break;
    case Method::JacPcg:
        f.init_flops = 4 * k * k + 2 * k;
        f.per_iter_flops = 8 * k * k + 46 * k - 6;
        break;
    }
    require(k, t);
    f.total_flops = f.init_flops + f.iterations * f.per_iter_flops;
    return f;
}

} // namespace xlprec
