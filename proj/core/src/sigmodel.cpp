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

#include "blindcfo/sigmodel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "blindcfo/error.hpp"
#include "blindcfo/rng.hpp"

namespace blindcfo::sigmodel
{

void ChannelRealization::validate() const
{
    if (users < 1)
        throw Error(ErrorCode::invalid_configuration, "at least one user required");
    if (oversampling < users)
        throw Error(ErrorCode::invalid_configuration,
                    "oversampling factor P=" + std::to_string(oversampling) + " is below user count K=" +
                        std::to_string(users));
    const auto k = static_cast<std::size_t>(users);
    if (gains.size() != k || delays.size() != k || cfos.size() != k)
        throw Error(ErrorCode::invalid_configuration, "gains, delays and cfos must have K entries");
    const double max_delay = 1.0 / oversampling;
    for (double tau : delays)
        if (!(tau >= 0.0 && tau < max_delay))
            throw Error(ErrorCode::invalid_configuration,
                        "delay " + std::to_string(tau) + " outside [0, 1/P): pulse support violated");
    for (double f : cfos)
        if (!(f >= -0.5 && f < 0.5))
            throw Error(ErrorCode::invalid_configuration, "normalized CFO outside [-1/2, 1/2)");
}

SymbolFrame generate_symbols(int users, int length, const Constellation &constellation, Seed seed)
{
    if (constellation.empty())
        throw Error(ErrorCode::invalid_configuration, "empty constellation");
    if (users < 1 || length < 1)
        throw Error(ErrorCode::invalid_configuration, "frame needs K >= 1 and N >= 1");

    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(constellation.size()) - 1);

    SymbolFrame frame;
    frame.symbols.resize(users, length);
    frame.indices.resize(users, length);
    for (int k = 0; k < users; ++k)
        for (int i = 0; i < length; ++i)
        {
            const int idx = pick(rng);
            frame.indices(k, i) = idx;
            frame.symbols(k, i) = constellation.point(static_cast<std::size_t>(idx));
        }
    return frame;
}

double pulse(double t)
{
    if (t < 0.0 || t > 1.0)
        return 0.0;
    return 0.54 - 0.46 * std::cos(two_pi * t);
}

VirtualChannel build_virtual_channel(const ChannelRealization &channel)
{
    channel.validate();
    const int P = channel.oversampling;
    VirtualChannel vc;
    vc.mixing.resize(P, channel.users);
    for (int k = 0; k < channel.users; ++k)
        for (int m = 1; m <= P; ++m)
        {
            const double t = static_cast<double>(m) / P - channel.delays[k];
            vc.mixing(m - 1, k) =
                channel.gains[k] * std::polar(1.0, two_pi * channel.cfos[k] * m / P) * pulse(t);
        }
    return vc;
}

CMatrix rotated_symbols(const SymbolFrame &frame, const ChannelRealization &channel)
{
    if (frame.users() != channel.users)
        throw Error(ErrorCode::invalid_configuration, "frame and channel disagree on K");
    CMatrix out(frame.users(), frame.length());
    for (int k = 0; k < frame.users(); ++k)
        for (int i = 0; i < frame.length(); ++i)
            out(k, i) = frame.symbols(k, i) * std::polar(1.0, two_pi * channel.cfos[k] * i);
    return out;
}

PolyphaseObservations synthesize_observations(const VirtualChannel &channel, const SymbolFrame &frame,
                                              const ChannelRealization &realization, double snr_db, Seed seed)
{
    const CMatrix &A = channel.mixing;
    if (A.cols() != frame.users())
        throw Error(ErrorCode::invalid_configuration, "channel columns must equal frame rows");
    const CMatrix rotated = rotated_symbols(frame, realization);

    const auto P = A.rows();
    const auto K = A.cols();
    const auto N = rotated.cols();

    PolyphaseObservations obs;
    obs.snr_db = snr_db;
    obs.samples.resize(P, N);
    // Explicit summation order so the noiseless output is reproducible term by term.
    double power = 0.0;
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index m = 0; m < P; ++m)
        {
            cx acc{0.0, 0.0};
            for (Eigen::Index k = 0; k < K; ++k)
                acc += A(m, k) * rotated(k, i);
            obs.samples(m, i) = acc;
            power += std::norm(acc);
        }
    power /= static_cast<double>(P * N);

    if (std::isinf(snr_db) && snr_db > 0)
        return obs;
    if (!std::isfinite(snr_db))
        throw Error(ErrorCode::invalid_configuration, "SNR must be finite or the noiseless sentinel");

    obs.noise_variance = power / std::pow(10.0, snr_db / 10.0);
    Rng rng(seed);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index m = 0; m < P; ++m)
            obs.samples(m, i) += complex_gaussian(rng, obs.noise_variance);
    return obs;
}

ChannelRealization draw_random_channel(int users, int oversampling, Seed seed)
{
    if (users < 1)
        throw Error(ErrorCode::invalid_configuration, "at least one user required");
    if (oversampling < users)
        throw Error(ErrorCode::invalid_configuration, "oversampling factor must be >= number of users");

    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ChannelRealization ch;
    ch.users = users;
    ch.oversampling = oversampling;
    // Delays are drawn as a unit-interval fraction scaled by 1/P, so a given seed yields the same
    // gains, CFOs and relative delays for every P.
    for (int k = 0; k < users; ++k)
    {
        ch.gains.push_back(complex_gaussian(rng, 1.0));
        ch.cfos.push_back(unit(rng) - 0.5);
        const double limit = 1.0 / oversampling;
        ch.delays.push_back(std::min(unit(rng) / oversampling, std::nextafter(limit, 0.0)));
    }
    return ch;
}

} // namespace blindcfo::sigmodel
