// SPDX-License-Identifier: Apache-2.0
//
// blindcfo: blind multiuser carrier-frequency offset estimation
// Copyright (C) 2026 The blindcfo authors
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "blindcfo/pll.hpp"

namespace blindcfo::harness
{

enum class Method
{
    blind,
    pilot,
};

std::string_view to_string(Method method) noexcept;
Method method_from_string(std::string_view name);

/// Monte-Carlo experiment description. The JSON form uses exactly these field names; P, N and
/// snr_db accept either a number or a list. An empty N or snr_db list means "use the sweep default".
struct ExperimentConfig
{
    int K = 2;
    std::vector<int> P{2, 4};
    std::vector<int> N;
    std::vector<double> snr_db;
    std::string constellation = "4QAM";
    Method method = Method::blind;
    int channels = 300;
    int runs_per_channel = 20;
    std::uint64_t master_seed = 1;
    double freq_gain = 4e-3;
    double phase_gain = 0.2;
    int pilot_length = 32;
    int threads = 0; // 0 = hardware concurrency

    pll::PllConfig pll() const;

    /// Throws invalid_configuration on P < K, non-positive counts, bad gains or unknown constellation.
    void validate() const;
};

inline const std::vector<int> default_length_grid{256, 512, 1024, 2048};
inline const std::vector<double> default_snr_grid{0, 5, 10, 15, 20, 25, 30};
inline constexpr int default_length = 1024;
inline constexpr double default_snr_db = 30.0;

/// Strict parse: unknown keys and wrongly typed values throw invalid_configuration.
ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &cfg);
ExperimentConfig load_config(const std::string &path);

} // namespace blindcfo::harness
