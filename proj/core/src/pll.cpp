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

#include "blindcfo/pll.hpp"

#include <algorithm>
#include <cmath>

#include "blindcfo/error.hpp"

namespace blindcfo::pll
{

void PllConfig::validate() const
{
    if (!(freq_gain > 0.0) || !(phase_gain > 0.0))
        throw Error(ErrorCode::invalid_configuration, "PLL gains must be positive");
    if (!(phase_gain < 1.0))
        throw Error(ErrorCode::invalid_configuration, "PLL phase gain must be < 1 for stability");
    if (!std::isfinite(f_init))
        throw Error(ErrorCode::invalid_configuration, "PLL initial frequency must be finite");
}

PllTrace pll_track(std::span<const cx> stream, const Constellation &constellation, const PllConfig &config)
{
    config.validate();
    if (stream.empty())
        throw Error(ErrorCode::invalid_configuration, "PLL input stream is empty");
    if (constellation.empty())
        throw Error(ErrorCode::invalid_configuration, "PLL needs a reference constellation");

    const std::size_t n = stream.size();
    PllTrace trace;
    trace.corrected.resize(n);
    trace.decisions.resize(n);
    trace.phase_history.resize(n);
    trace.freq_history.resize(n);
    trace.error_history.resize(n);

    double phase = 0.0;
    double freq = wrap_frequency(config.f_init);
    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const cx u = stream[i] * std::polar(1.0, -phase);
        const std::size_t d = constellation.nearest(u);
        const double e = std::arg(u * std::conj(constellation.point(d)));

        trace.corrected[i] = u;
        trace.decisions[i] = d;
        trace.phase_history[i] = phase;
        trace.error_history[i] = e;

        freq = wrap_frequency(freq + config.freq_gain * e);
        phase = wrap_phase(phase + config.phase_gain * e + two_pi * freq);
        trace.freq_history[i] = freq;

        window_sum += std::abs(e);
        if (i >= lock_window)
            window_sum -= std::abs(trace.error_history[i - lock_window]);
        if (!trace.locked_at && i + 1 >= lock_window && window_sum < lock_threshold * lock_window)
            trace.locked_at = i + 1 - lock_window;
    }
    return trace;
}

std::optional<double> locked_frequency(const PllTrace &trace)
{
    if (!trace.locked_at)
        return std::nullopt;
    const std::size_t n = trace.size();
    const std::size_t begin = std::max(*trace.locked_at, n - n / 4);
    // Frequency words live on a circle; average the phasors so a lock near +-1/2 is not torn apart.
    cx acc{0.0, 0.0};
    for (std::size_t i = begin; i < n; ++i)
        acc += std::polar(1.0, two_pi * trace.freq_history[i]);
    return wrap_frequency(std::arg(acc) / two_pi);
}

} // namespace blindcfo::pll
