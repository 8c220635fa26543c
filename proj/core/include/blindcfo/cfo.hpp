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

#include "blindcfo/types.hpp"

/// Coarse CFO estimation from the phase progression down each column of the estimated mixing
/// matrix, and derotation of the decoupled streams.
namespace blindcfo::cfo
{

struct PhaseMatrix
{
    RMatrix phases;       // P x K, principal values in (-pi, pi]
    MaskMatrix valid;     // P x K, false where |A_hat| is below the modulus floor
};

struct CfoEstimates
{
    std::vector<double> f_hat; // cycles/symbol, in [-1/2, 1/2), ordered like the A_hat columns
};

/// Entries below this fraction of their column's largest modulus carry no usable phase.
inline constexpr double modulus_floor = 1e-6;

/// Throws unfittable_column if a column is entirely masked.
PhaseMatrix phase_matrix(const CMatrix &mixing_estimate);

/// Per column: unwrap the valid phases down the column, least-squares line fit against the row
/// index m = 1..P, f = slope * P / (2 pi) wrapped into [-1/2, 1/2).
/// Throws unfittable_column if a column has fewer than two valid entries.
CfoEstimates fit_cfo(const PhaseMatrix &phases, int oversampling);

/// S_hat[k, i] = S_tilde_hat[k, i] * exp(-j 2 pi f_hat_k i)
CMatrix derotate(const CMatrix &streams, const CfoEstimates &estimates);

} // namespace blindcfo::cfo
