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

#include "blindcfo/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "blindcfo/error.hpp"

namespace blindcfo::io
{

namespace
{

nlohmann::json pair(cx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cx unpair(const nlohmann::json &j)
{
    if (!j.is_array() || j.size() != 2)
        throw Error(ErrorCode::invalid_configuration, "complex values must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

void write_row(std::ostream &out, std::size_t user, cx z, const char *stage)
{
    char line[160];
    std::snprintf(line, sizeof line, "%zu,%.9e,%.9e,%s\n", user, z.real(), z.imag(), stage);
    out << line;
}

} // namespace

nlohmann::json channel_to_json(const sigmodel::ChannelRealization &channel)
{
    nlohmann::json gains = nlohmann::json::array();
    for (const auto &g : channel.gains)
        gains.push_back(pair(g));
    return {{"K", channel.users},
            {"P", channel.oversampling},
            {"gains", gains},
            {"delays", channel.delays},
            {"cfos", channel.cfos}};
}

sigmodel::ChannelRealization channel_from_json(const nlohmann::json &j)
{
    sigmodel::ChannelRealization ch;
    try
    {
        ch.users = j.at("K").get<int>();
        ch.oversampling = j.at("P").get<int>();
        for (const auto &g : j.at("gains"))
            ch.gains.push_back(unpair(g));
        ch.delays = j.at("delays").get<std::vector<double>>();
        ch.cfos = j.at("cfos").get<std::vector<double>>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(ErrorCode::invalid_configuration, std::string("malformed channel realization: ") + e.what());
    }
    ch.validate();
    return ch;
}

sigmodel::ChannelRealization load_channel(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io_failure, "cannot open channel file '" + path + "'");
    try
    {
        return channel_from_json(nlohmann::json::parse(in));
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw Error(ErrorCode::invalid_configuration, std::string("channel file is not valid JSON: ") + e.what());
    }
}

nlohmann::json frame_to_json(const sigmodel::SymbolFrame &frame, const Constellation &constellation)
{
    nlohmann::json indices = nlohmann::json::array();
    nlohmann::json symbols = nlohmann::json::array();
    for (int k = 0; k < frame.users(); ++k)
    {
        nlohmann::json irow = nlohmann::json::array();
        nlohmann::json srow = nlohmann::json::array();
        for (int i = 0; i < frame.length(); ++i)
        {
            irow.push_back(frame.indices(k, i));
            srow.push_back(pair(frame.symbols(k, i)));
        }
        indices.push_back(std::move(irow));
        symbols.push_back(std::move(srow));
    }
    return {{"K", frame.users()},
            {"N", frame.length()},
            {"constellation", constellation.name()},
            {"indices", indices},
            {"symbols", symbols}};
}

sigmodel::SymbolFrame frame_from_json(const nlohmann::json &j, const Constellation &constellation)
{
    sigmodel::SymbolFrame frame;
    try
    {
        const int K = j.at("K").get<int>();
        const int N = j.at("N").get<int>();
        frame.indices.resize(K, N);
        frame.symbols.resize(K, N);
        const auto &rows = j.at("indices");
        if (static_cast<int>(rows.size()) != K)
            throw Error(ErrorCode::invalid_configuration, "frame has wrong number of rows");
        for (int k = 0; k < K; ++k)
        {
            if (static_cast<int>(rows[k].size()) != N)
                throw Error(ErrorCode::invalid_configuration, "frame row has wrong length");
            for (int i = 0; i < N; ++i)
            {
                const int idx = rows[k][i].get<int>();
                frame.indices(k, i) = idx;
                frame.symbols(k, i) = constellation.point(static_cast<std::size_t>(idx));
            }
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(ErrorCode::invalid_configuration, std::string("malformed symbol frame: ") + e.what());
    }
    catch (const std::out_of_range &)
    {
        throw Error(ErrorCode::invalid_configuration, "symbol index outside the constellation");
    }
    return frame;
}

void write_constellation_csv(std::ostream &out, const harness::TrialOutcome &outcome)
{
    out << "user,re,im,stage\n";
    const CMatrix &y = outcome.observations.samples;
    for (Eigen::Index m = 0; m < y.rows(); ++m)
        for (Eigen::Index i = 0; i < y.cols(); ++i)
            write_row(out, static_cast<std::size_t>(m), y(m, i), "received");
    const CMatrix &s = outcome.receiver.separation.streams;
    for (Eigen::Index k = 0; k < s.rows(); ++k)
        for (Eigen::Index i = 0; i < s.cols(); ++i)
            write_row(out, static_cast<std::size_t>(k), s(k, i), "decoupled");
    for (std::size_t k = 0; k < outcome.receiver.traces.size(); ++k)
        for (const auto &z : outcome.receiver.traces[k].corrected)
            write_row(out, k, z, "recovered");
}

void write_pll_trace_csv(std::ostream &out, const pll::PllTrace &trace)
{
    out << "sample,phase,freq,error\n";
    char line[160];
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        std::snprintf(line, sizeof line, "%zu,%.9e,%.9e,%.9e\n", i, trace.phase_history[i], trace.freq_history[i],
                      trace.error_history[i]);
        out << line;
    }
}

} // namespace blindcfo::io
