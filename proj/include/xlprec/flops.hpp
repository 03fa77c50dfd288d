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

#ifndef XLPREC_FLOPS_HPP
#define XLPREC_FLOPS_HPP

#include <cstdint>

#include "xlprec/linsolve.hpp"

namespace xlprec {

// Real-flop cost model for obtaining the regularised inverse of a K x K
// Gram matrix. Only the closed-form terms are counted.
struct FlopModel {
    Method method = Method::Direct;
    std::int64_t dimension = 0;
    std::int64_t iterations = 0;
    std::int64_t init_flops = 0;
    std::int64_t per_iter_flops = 0;
    std::int64_t total_flops = 0;
};

// Cholesky, triangular inverse and product: 4K^3 + K - 1.
std::int64_t flops_direct(std::int64_t k);
// (4K^3 - 3K^2 + K) + T (8K^2 - 8K).
std::int64_t flops_gs(std::int64_t k, std::int64_t t);
// (2K^2 + K + 1) + T (8K^2 - 8K).
std::int64_t flops_jor(std::int64_t k, std::int64_t t);
// T (8K^2 + 46K - 6).
std::int64_t flops_cg(std::int64_t k, std::int64_t t);
// CG plus a one-off C^{-1}P preprocessing of 4K^2 + 2K.
std::int64_t flops_jacpcg(std::int64_t k, std::int64_t t);

FlopModel flop_model(Method method, std::int64_t k, std::int64_t t);

} // namespace xlprec

#endif
