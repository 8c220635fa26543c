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
#include "blindcfo/types.hpp"

/// Simulated air interface: user symbols, Hamming pulse, virtual P x K channel and noisy polyphase
/// observations of a frequency-flat multiuser uplink sampled P times per symbol.
namespace blindcfo::sigmodel
{

/// Ground truth for one trial. Delays are in units of the symbol period, CFOs in cycles/symbol.
struct ChannelRealization
{
    int users = 0;        // K
    int oversampling = 0; // P
    std::vector<cx> gains;
    std::vector<double> delays;
    std::vector<double> cfos;

    /// Throws invalid_configuration when P < K, vector sizes disagree, a delay leaves [0, 1/P)
    /// or a CFO leaves [-1/2, 1/2).
    void validate() const;
};

struct SymbolFrame
{
    CMatrix symbols;     // K x N
    IndexMatrix indices; // K x N, indices into the constellation

    int users() const { return static_cast<int>(symbols.rows()); }
    int length() const { return static_cast<int>(symbols.cols()); }
};

struct VirtualChannel
{
    CMatrix mixing; // P x K
};

struct PolyphaseObservations
{
    CMatrix samples; // P x N, column i is y(i)
    double snr_db = noiseless;
    double noise_variance = 0.0; // per complex sample
};

SymbolFrame generate_symbols(int users, int length, const Constellation &constellation, Seed seed);

/// Hamming window on [0, 1] (symbol-period units): 0.54 - 0.46 cos(2 pi t), zero outside.
double pulse(double t);

/// a_{m,k} = a_k exp(j 2 pi f_k m / P) p(m/P - tau_k), m = 1..P.
VirtualChannel build_virtual_channel(const ChannelRealization &channel);

/// K x N matrix of CFO-rotated symbols s_k(i) exp(j 2 pi f_k i), i = 0..N-1.
CMatrix rotated_symbols(const SymbolFrame &frame, const ChannelRealization &channel);

/// Y = A * S_rot + W. The noise variance is set so that the mean power of A * S_rot per polyphase
/// sample over the noise variance equals snr_db. Pass `noiseless` for W = 0.
PolyphaseObservations synthesize_observations(const VirtualChannel &channel, const SymbolFrame &frame,
                                               const ChannelRealization &realization, double snr_db, Seed seed);

/// a_k ~ CN(0, 1), tau_k ~ U[0, 1/P), f_k ~ U[-1/2, 1/2).
ChannelRealization draw_random_channel(int users, int oversampling, Seed seed);

} // namespace blindcfo::sigmodel
