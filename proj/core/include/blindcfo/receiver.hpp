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

#include <vector>

#include "blindcfo/bss.hpp"
#include "blindcfo/cfo.hpp"
#include "blindcfo/constellation.hpp"
#include "blindcfo/pll.hpp"
#include "blindcfo/sigmodel.hpp"

namespace blindcfo::pll
{

struct ReceiverOptions
{
    /// When false the decoupled streams go straight into the loop (PLL-only receiver).
    bool coarse_compensation = true;
};

struct ReceiverOutput
{
    bss::SeparationResult separation; // A_hat and the decoupled streams
    cfo::CfoEstimates coarse;         // per A_hat column, zero when coarse compensation is off
    CMatrix derotated;                // K x N input of the loops
    std::vector<PllTrace> traces;     // one per stream
    std::vector<double> total_frequency; // coarse + locked (or final) loop frequency, wrapped

    /// K x N decision indices taken from the traces.
    IndexMatrix decisions() const;
};

/// estimate_mixing -> ls_equalize -> phase_matrix -> fit_cfo -> derotate -> pll_track per stream.
/// The loop frequency starts at config.f_init (zero by default) because the coarse CFO is already removed.
ReceiverOutput run_receiver(const sigmodel::PolyphaseObservations &observations, int users,
                            const Constellation &constellation, const PllConfig &config,
                            const ReceiverOptions &options = {});

/// Loop stage shared by the blind and pilot-aided receivers: derotate each stream by its coarse
/// estimate, track it, and fill derotated/traces/total_frequency of `out`.
void track_streams(ReceiverOutput &out, const Constellation &constellation, const PllConfig &config);

} // namespace blindcfo::pll
