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

#include "blindcfo/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blindcfo/bss.hpp"
#include "blindcfo/error.hpp"
#include "blindcfo/rng.hpp"
#include "blindcfo/sigmodel.hpp"

namespace blindcfo::baseline
{

double pilot_cross_correlation(const PilotSet &pilots)
{
    double worst = 0.0;
    const double L = static_cast<double>(pilots.length());
    for (Eigen::Index a = 0; a < pilots.pilots.rows(); ++a)
        for (Eigen::Index b = a + 1; b < pilots.pilots.rows(); ++b)
        {
            const cx c = pilots.pilots.row(a).dot(pilots.pilots.row(b)); // conj(a) . b
            worst = std::max(worst, std::abs(c) / L);
        }
    return worst;
}

PilotSet generate_pilots(int users, int length, const Constellation &constellation, Seed seed, int max_attempts)
{
    if (length < 8)
        throw Error(ErrorCode::invalid_configuration, "pilot length must be >= 8");
    for (int attempt = 0; attempt < max_attempts; ++attempt)
    {
        const auto frame = sigmodel::generate_symbols(users, length, constellation,
                                                      mix_seed({seed, static_cast<std::uint64_t>(attempt)}));
        PilotSet set{frame.symbols, frame.indices};
        if (pilot_cross_correlation(set) < max_pilot_correlation)
            return set;
    }
    throw Error(ErrorCode::pilot_generation_failure,
                "no pilot set with pairwise correlation below 0.3 after " + std::to_string(max_attempts) +
                    " attempts");
}

double correlation_objective(const CMatrix &pilot_observations, const CVector &pilot, double f)
{
    double total = 0.0;
    for (Eigen::Index m = 0; m < pilot_observations.rows(); ++m)
    {
        cx acc{0.0, 0.0};
        for (Eigen::Index i = 0; i < pilot.size(); ++i)
            acc += pilot_observations(m, i) * std::conj(pilot(i)) * std::polar(1.0, -two_pi * f * static_cast<double>(i));
        total += std::norm(acc);
    }
    return total;
}

std::vector<double> pilot_cfo_estimate(const CMatrix &pilot_observations, const PilotSet &pilots,
                                       std::optional<double> grid_step)
{
    const int L = pilots.length();
    if (pilot_observations.cols() < L)
        throw Error(ErrorCode::invalid_configuration, "pilot observations shorter than the pilot");
    const double step = grid_step.value_or(1.0 / (8.0 * L));
    if (!(step > 0.0) || L * step > 1.0)
        throw Error(ErrorCode::invalid_configuration, "grid step must satisfy 0 < L * step <= 1");

    const CMatrix Y = pilot_observations.leftCols(L);
    const auto grid = static_cast<int>(std::ceil(1.0 / step - 1e-9));

    std::vector<double> estimates;
    for (int k = 0; k < pilots.users(); ++k)
    {
        const CVector p = pilots.pilots.row(k).transpose();
        double best = -1.0;
        double worst = std::numeric_limits<double>::infinity();
        double best_f = -0.5;
        for (int g = 0; g < grid; ++g)
        {
            const double f = -0.5 + g * step;
            const double j = correlation_objective(Y, p, f);
            if (j > best)
            {
                best = j;
                best_f = f;
            }
            worst = std::min(worst, j);
        }
        if (!(best > 0.0) || best - worst <= 1e-12 * best)
            throw Error(ErrorCode::no_peak, "flat pilot correlation objective for user " + std::to_string(k));

        const double left = correlation_objective(Y, p, best_f - step);
        const double right = correlation_objective(Y, p, best_f + step);
        const double curvature = left - 2.0 * best + right;
        double offset = 0.0;
        if (curvature < 0.0)
            offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
        estimates.push_back(wrap_frequency(best_f + offset * step));
    }
    return estimates;
}

CMatrix pilot_channel_estimate(const CMatrix &pilot_observations, const PilotSet &pilots,
                               const std::vector<double> &f_hat)
{
    const int K = pilots.users();
    const int L = pilots.length();
    if (static_cast<int>(f_hat.size()) != K)
        throw Error(ErrorCode::invalid_configuration, "one CFO estimate per pilot required");
    CMatrix S(K, L);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < L; ++i)
            S(k, i) = pilots.pilots(k, i) * std::polar(1.0, two_pi * f_hat[static_cast<std::size_t>(k)] * i);
    // min || S^H X - Y_p^H ||, X = A_hat^H
    const CMatrix X = S.adjoint().colPivHouseholderQr().solve(pilot_observations.leftCols(L).adjoint());
    return X.adjoint();
}

pll::ReceiverOutput run_pilot_receiver(const CMatrix &observations, const PilotSet &pilots,
                                       const Constellation &constellation, const pll::PllConfig &config)
{
    config.validate();
    pll::ReceiverOutput out;
    const CMatrix prefix = observations.leftCols(pilots.length());
    out.coarse.f_hat = pilot_cfo_estimate(prefix, pilots);
    out.separation.mixing_estimate = pilot_channel_estimate(prefix, pilots, out.coarse.f_hat);
    out.separation.streams = bss::ls_equalize(out.separation.mixing_estimate, observations);
    pll::track_streams(out, constellation, config);
    return out;
}

} // namespace blindcfo::baseline
