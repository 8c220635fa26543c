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

#include "blindcfo/cfo.hpp"

#include <cmath>
#include <string>

#include "blindcfo/error.hpp"

namespace blindcfo::cfo
{

PhaseMatrix phase_matrix(const CMatrix &mixing_estimate)
{
    const Eigen::Index P = mixing_estimate.rows();
    const Eigen::Index K = mixing_estimate.cols();
    PhaseMatrix pm;
    pm.phases.resize(P, K);
    pm.valid.resize(P, K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double peak = mixing_estimate.col(k).cwiseAbs().maxCoeff();
        if (!(peak > 0.0))
            throw Error(ErrorCode::unfittable_column, "column " + std::to_string(k) + " of A_hat is zero");
        for (Eigen::Index m = 0; m < P; ++m)
        {
            const cx a = mixing_estimate(m, k);
            pm.phases(m, k) = std::arg(a);
            pm.valid(m, k) = std::abs(a) >= modulus_floor * peak;
        }
    }
    return pm;
}

CfoEstimates fit_cfo(const PhaseMatrix &phases, int oversampling)
{
    const Eigen::Index P = phases.phases.rows();
    if (oversampling != P)
        throw Error(ErrorCode::invalid_configuration, "phase matrix must have P rows");

    CfoEstimates est;
    for (Eigen::Index k = 0; k < phases.phases.cols(); ++k)
    {
        std::vector<double> rows;
        std::vector<double> unwrapped;
        for (Eigen::Index m = 0; m < P; ++m)
        {
            if (!phases.valid(m, k))
                continue;
            double phi = phases.phases(m, k);
            if (!unwrapped.empty())
                phi = unwrapped.back() + wrap_phase(phi - unwrapped.back());
            rows.push_back(static_cast<double>(m + 1));
            unwrapped.push_back(phi);
        }
        if (rows.size() < 2)
            throw Error(ErrorCode::unfittable_column,
                        "column " + std::to_string(k) + " has fewer than two valid phase entries");

        // Centered OLS slope; identical to the closed form sum-based estimator when all rows are valid.
        const double n = static_cast<double>(rows.size());
        double mean_m = 0.0;
        double mean_phi = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            mean_m += rows[i];
            mean_phi += unwrapped[i];
        }
        mean_m /= n;
        mean_phi /= n;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            sxy += (rows[i] - mean_m) * (unwrapped[i] - mean_phi);
            sxx += (rows[i] - mean_m) * (rows[i] - mean_m);
        }
        const double slope = sxy / sxx;
        est.f_hat.push_back(wrap_frequency(slope * static_cast<double>(P) / two_pi));
    }
    return est;
}

CMatrix derotate(const CMatrix &streams, const CfoEstimates &estimates)
{
    if (static_cast<std::size_t>(streams.rows()) != estimates.f_hat.size())
        throw Error(ErrorCode::invalid_configuration, "one CFO estimate per stream required");
    CMatrix out(streams.rows(), streams.cols());
    for (Eigen::Index k = 0; k < streams.rows(); ++k)
    {
        const double f = estimates.f_hat[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < streams.cols(); ++i)
            out(k, i) = streams(k, i) * std::polar(1.0, -two_pi * f * static_cast<double>(i));
    }
    return out;
}

} // namespace blindcfo::cfo
