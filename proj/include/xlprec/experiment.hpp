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
// Scenario runners and CSV emission.
//
// CSV schemas (one scenario per file, header row first):
//
//   convergence  method,t,median_error
//   se_vs_m      M,method,sum_se,std_error,trials
//   ber          method,snr_db,ber,bit_errors,bits
//   flops        method,K,T,flops            (+ seconds_per_solve with timing)
//
// Reals are printed as %.10e so that identical runs are byte-identical. A
// run that fails part way ends with a `#truncated,<kind>,<message>` row.

#ifndef XLPREC_EXPERIMENT_HPP
#define XLPREC_EXPERIMENT_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "xlprec/config.hpp"

namespace xlprec {

std::string_view version();

std::vector<std::string> csv_columns(Experiment experiment, bool timing);

// Runs the configured scenario, streaming rows into `csv`. Returns the
// number of data rows. On failure the truncation row is written and
// flushed before the exception propagates.
std::size_t run_experiment(const ExperimentConfig& config, std::ostream& csv);

struct ManifestInfo {
    std::string csv_path;
    std::size_t rows = 0;
    bool truncated = false;
    std::string error;
    std::string timestamp;
};

// Run manifest (config, seed, code version, timestamp) as a JSON document.
std::string manifest_json(const ExperimentConfig& config, const ManifestInfo& info);

// ISO-8601 UTC time of the call.
std::string utc_timestamp();

// Writes channel realization `trial` as complex pairs:
// antenna,user,subarray,group,re,im (block-zero layout applied).
void dump_channel(const ExperimentConfig& config, std::size_t trial, std::ostream& csv);

} // namespace xlprec

#endif
