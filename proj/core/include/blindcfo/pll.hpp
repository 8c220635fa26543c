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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "blindcfo/constellation.hpp"
#include "blindcfo/types.hpp"

namespace blindcfo::pll
{

/// Second-order decision-directed loop. The frequency word is in cycles/symbol, the phase in radians.
struct PllConfig
{
    double freq_gain = 4e-3;
    double phase_gain = 0.2;
    double f_init = 0.0;

    /// Throws invalid_configuration unless both gains are positive and phase_gain < 1.
    void validate() const;
};

inline constexpr std::size_t lock_window = 200;
inline constexpr double lock_threshold = 0.1; // rad

struct PllTrace
{
    std::vector<cx> corrected;
    std::vector<std::size_t> decisions;
    std::vector<double> phase_history; // phase applied to sample i
    std::vector<double> freq_history;  // frequency word after the update at sample i
    std::vector<double> error_history; // phase detector output at sample i
    std::optional<std::size_t> locked_at;

    std::size_t size() const { return corrected.size(); }
};

/// Runs the loop over `stream`:
///   u = x[i] exp(-j phi), d = nearest(u), e = arg(u conj(d)),
///   freq += freq_gain e, phi += phase_gain e + 2 pi freq.
/// locked_at is the start of the first lock_window-sample window whose mean |e| is below lock_threshold.
PllTrace pll_track(std::span<const cx> stream, const Constellation &constellation, const PllConfig &config);

/// Mean frequency word over the final quarter of the post-lock region; nullopt if the loop never locked.
std::optional<double> locked_frequency(const PllTrace &trace);

} // namespace blindcfo::pll
