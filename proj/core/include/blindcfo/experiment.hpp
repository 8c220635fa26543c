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

#include <optional>
#include <ostream>
#include <vector>

#include "blindcfo/baseline.hpp"
#include "blindcfo/config.hpp"
#include "blindcfo/receiver.hpp"
#include "blindcfo/scoring.hpp"
#include "blindcfo/sigmodel.hpp"

namespace blindcfo::harness
{

/// Everything needed to reproduce one trial.
struct TrialSpec
{
    sigmodel::ChannelRealization channel;
    int length = default_length;
    double snr_db = default_snr_db;
    Method method = Method::blind;
    Constellation constellation = Constellation::qam4();
    pll::PllConfig pll;
    int pilot_length = 32;
    Seed data_seed = 0; // symbols, noise and pilots derive from this
};

struct TrialResult
{
    std::vector<double> squared_cfo_error; // per user, matched by the symbol alignment
    long bit_errors = 0;
    long bit_count = 0;
    std::optional<std::size_t> lock_time; // latest lock index over users, none if any stream never locked
    double isr_db = 0.0;

    double mse() const;
    double ber() const;
};

/// Full intermediate state of a trial, used by the CLI dumps and by the acceptance tests.
struct TrialOutcome
{
    sigmodel::SymbolFrame frame;
    sigmodel::VirtualChannel mixing;
    sigmodel::PolyphaseObservations observations;
    pll::ReceiverOutput receiver;
    Alignment alignment; // over the scored columns
    int first_scored = 0; // pilot symbols are not scored
    TrialResult result;
};

TrialOutcome simulate_trial(const TrialSpec &spec);
TrialResult run_trial(const TrialSpec &spec);

/// Two-user example channel: f = (-0.1552, 0.4335), a = (0.3173-0.6483j, 0.1625+0.5867j);
/// the delays are drawn uniformly in [0, 1/P) from `seed`.
sigmodel::ChannelRealization two_user_example_channel(int oversampling, Seed seed);

/// Same gains and CFOs with the delays fixed at the first and third quartile of [0, 1/P).
sigmodel::ChannelRealization two_user_example_channel(int oversampling);

enum class SweepAxis
{
    length,
    snr,
};

struct SweepRecord
{
    double axis = 0.0;
    int P = 0;
    Method method = Method::blind;
    double mse = 0.0;
    double mse_stderr = 0.0;
    double ber = 0.0;
    double ber_stderr = 0.0;
    int trials = 0;
    int failed = 0;
};

/// Trial seeds: channel c is drawn from mix(master, c); run r of channel c uses mix(master, c, r)
/// for its data, independently of the axis value and of P.
Seed channel_seed(Seed master, int channel);
Seed run_seed(Seed master, int channel, int run);

/// Aggregates a set of trial results (deterministic summation order).
SweepRecord aggregate(const std::vector<TrialResult> &results, int failed);

/// Grid point trials in index order (channel-major); failed trials are nullopt.
std::vector<std::optional<TrialResult>> run_grid_point(const ExperimentConfig &cfg, int oversampling, int length,
                                                       double snr_db);

/// Sweeps cfg.P x axis values. Throws sweep_failed if more than 1% of a grid point's trials fail.
std::vector<SweepRecord> run_sweep(const ExperimentConfig &cfg, SweepAxis axis);

inline constexpr const char *sweep_csv_header = "axis,p,method,mse_cfo,mse_stderr,ber,ber_stderr,trials,failed";
void write_sweep_csv(std::ostream &out, const std::vector<SweepRecord> &records);

} // namespace blindcfo::harness
