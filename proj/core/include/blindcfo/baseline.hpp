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
#include <vector>

#include "blindcfo/constellation.hpp"
#include "blindcfo/receiver.hpp"
#include "blindcfo/types.hpp"

/// Pilot-aided multi-CFO reference receiver: per-user peak search of the cross-correlation between
/// the DTFT of a known pilot and the received polyphase samples.
namespace blindcfo::baseline
{

struct PilotSet
{
    CMatrix pilots;      // K x L
    IndexMatrix indices; // K x L
    int users() const { return static_cast<int>(pilots.rows()); }
    int length() const { return static_cast<int>(pilots.cols()); }
};

inline constexpr double max_pilot_correlation = 0.3;
inline constexpr int default_pilot_attempts = 1000;

/// Draws random pilots from the alphabet until every pair has normalized correlation magnitude
/// below max_pilot_correlation. Throws pilot_generation_failure when the attempt budget runs out.
PilotSet generate_pilots(int users, int length, const Constellation &constellation, Seed seed,
                         int max_attempts = default_pilot_attempts);

/// Largest |<p_a, p_b>| / L over user pairs (0 for a single user).
double pilot_cross_correlation(const PilotSet &pilots);

/// J(f) = sum_m | sum_i Y[m, i] conj(pilot[i]) exp(-j 2 pi f i) |^2
double correlation_objective(const CMatrix &pilot_observations, const CVector &pilot, double f);

/// Grid search of J over [-1/2, 1/2) with quadratic refinement around the peak.
/// grid_step defaults to 1 / (8 L). Throws no_peak for a flat objective.
std::vector<double> pilot_cfo_estimate(const CMatrix &pilot_observations, const PilotSet &pilots,
                                       std::optional<double> grid_step = std::nullopt);

/// Least-squares P x K channel from the pilot prefix given per-user CFO estimates:
/// A_hat = Y_p S^H (S S^H)^{-1}, S[k, i] = pilot_k[i] exp(j 2 pi f_k i).
CMatrix pilot_channel_estimate(const CMatrix &pilot_observations, const PilotSet &pilots,
                               const std::vector<double> &f_hat);

/// Pilot-aided counterpart of run_receiver. The pilots occupy symbols 0..L-1 of `observations`;
/// streams come out in user order.
pll::ReceiverOutput run_pilot_receiver(const CMatrix &observations, const PilotSet &pilots,
                                       const Constellation &constellation, const pll::PllConfig &config);

} // namespace blindcfo::baseline
