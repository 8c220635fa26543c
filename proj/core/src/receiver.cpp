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

#include "blindcfo/receiver.hpp"

namespace blindcfo::pll
{

IndexMatrix ReceiverOutput::decisions() const
{
    IndexMatrix out;
    if (traces.empty())
        return out;
    out.resize(static_cast<Eigen::Index>(traces.size()), static_cast<Eigen::Index>(traces.front().size()));
    for (std::size_t k = 0; k < traces.size(); ++k)
        for (std::size_t i = 0; i < traces[k].size(); ++i)
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = static_cast<int>(traces[k].decisions[i]);
    return out;
}

void track_streams(ReceiverOutput &out, const Constellation &constellation, const PllConfig &config)
{
    const CMatrix &streams = out.separation.streams;
    out.derotated = cfo::derotate(streams, out.coarse);
    out.traces.clear();
    out.total_frequency.clear();
    for (Eigen::Index k = 0; k < out.derotated.rows(); ++k)
    {
        const Eigen::VectorXcd row = out.derotated.row(k).transpose();
        auto trace = pll_track(std::span<const cx>(row.data(), static_cast<std::size_t>(row.size())),
                               constellation, config);
        const double loop = locked_frequency(trace).value_or(trace.freq_history.back());
        out.total_frequency.push_back(wrap_frequency(out.coarse.f_hat[static_cast<std::size_t>(k)] + loop));
        out.traces.push_back(std::move(trace));
    }
}

ReceiverOutput run_receiver(const sigmodel::PolyphaseObservations &observations, int users,
                            const Constellation &constellation, const PllConfig &config,
                            const ReceiverOptions &options)
{
    config.validate();
    ReceiverOutput out;
    out.separation = bss::estimate_mixing(observations, users);
    out.separation.streams = bss::ls_equalize(out.separation.mixing_estimate, observations.samples);

    if (options.coarse_compensation)
    {
        const auto phases = cfo::phase_matrix(out.separation.mixing_estimate);
        out.coarse = cfo::fit_cfo(phases, static_cast<int>(observations.samples.rows()));
    }
    else
    {
        out.coarse.f_hat.assign(static_cast<std::size_t>(users), 0.0);
    }
    track_streams(out, constellation, config);
    return out;
}

} // namespace blindcfo::pll
