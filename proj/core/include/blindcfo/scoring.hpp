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

#include "blindcfo/constellation.hpp"
#include "blindcfo/sigmodel.hpp"
#include "blindcfo/types.hpp"

/// Ambiguity-aware scoring: stream permutation and per-stream symmetry rotation are resolved
/// against the ground truth before counting errors.
namespace blindcfo::harness
{

inline constexpr int max_exhaustive_users = 4;

struct Alignment
{
    std::vector<int> permutation; // permutation[k] = estimated stream matched to true user k
    std::vector<int> rotation;    // symmetry steps applied to that stream's decisions
    IndexMatrix aligned;          // K x N aligned decisions, row k compares to user k
    long symbol_errors = 0;
};

/// Exhaustive search over K! permutations and symmetry_order^K rotations for the fewest symbol
/// errors; ties go to the lexicographically smallest (permutation, rotation).
/// Throws unsupported_scale for K > 4.
Alignment resolve_ambiguity(const IndexMatrix &decisions, const IndexMatrix &truth, const Constellation &constellation);
Alignment resolve_ambiguity(const IndexMatrix &decisions, const sigmodel::SymbolFrame &truth,
                            const Constellation &constellation);

/// Symbol errors of the identity alignment (no permutation, no rotation).
long identity_symbol_errors(const IndexMatrix &decisions, const IndexMatrix &truth);

/// Difference of two normalized frequencies wrapped into (-1/2, 1/2].
double frequency_error(double estimate, double truth);

/// (1/K) sum_k wrap(f_hat[permutation[k]] - f_true[k])^2
double mse_cfo(const std::vector<double> &f_hat, const std::vector<double> &f_true,
               const std::vector<int> &permutation);

struct BitErrors
{
    long errors = 0;
    long bits = 0;
    double rate() const { return bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
};

BitErrors count_bit_errors(const IndexMatrix &aligned, const IndexMatrix &truth, const Constellation &constellation);
double ber(const IndexMatrix &aligned, const IndexMatrix &truth, const Constellation &constellation);

/// Interference-to-signal ratio of G = pinv(A_hat) A: mean over rows of off-target over on-target
/// power, for the column assignment minimizing it. Linear scale.
double interference_to_signal(const CMatrix &mixing_estimate, const CMatrix &mixing);
double interference_to_signal_db(const CMatrix &mixing_estimate, const CMatrix &mixing);

/// Per-row off/on-target power ratios of G under the best assignment.
std::vector<double> interference_per_row(const CMatrix &mixing_estimate, const CMatrix &mixing);

} // namespace blindcfo::harness
