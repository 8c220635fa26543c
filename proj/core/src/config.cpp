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

#include "blindcfo/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "blindcfo/constellation.hpp"
#include "blindcfo/error.hpp"
#include "blindcfo/scoring.hpp"

namespace blindcfo::harness
{

std::string_view to_string(Method method) noexcept { return method == Method::blind ? "blind" : "pilot"; }

Method method_from_string(std::string_view name)
{
    if (name == "blind")
        return Method::blind;
    if (name == "pilot")
        return Method::pilot;
    throw Error(ErrorCode::invalid_configuration, "method must be 'blind' or 'pilot', got '" + std::string(name) + "'");
}

pll::PllConfig ExperimentConfig::pll() const { return {freq_gain, phase_gain, 0.0}; }

void ExperimentConfig::validate() const
{
    if (K < 1)
        throw Error(ErrorCode::invalid_configuration, "K must be >= 1");
    if (K > max_exhaustive_users)
        throw Error(ErrorCode::unsupported_scale, "K > " + std::to_string(max_exhaustive_users) + " cannot be scored");
    if (P.empty())
        throw Error(ErrorCode::invalid_configuration, "at least one oversampling factor required");
    for (int p : P)
        if (p < K)
            throw Error(ErrorCode::invalid_configuration, "every P must satisfy P >= K");
    for (int n : N)
        if (n < K * K || n < 2)
            throw Error(ErrorCode::invalid_configuration, "frame length too short for the separation statistics");
    if (channels < 1 || runs_per_channel < 1)
        throw Error(ErrorCode::invalid_configuration, "channel and run counts must be >= 1");
    if (pilot_length < 8)
        throw Error(ErrorCode::invalid_configuration, "pilot_length must be >= 8");
    if (method == Method::pilot)
        for (int n : N)
            if (n <= pilot_length)
                throw Error(ErrorCode::invalid_configuration, "frame must be longer than the pilot");
    if (threads < 0)
        throw Error(ErrorCode::invalid_configuration, "threads must be >= 0");
    pll().validate();
    (void)Constellation::from_name(constellation);
}

namespace
{

template <typename T> std::vector<T> scalar_or_list(const nlohmann::json &v, const char *key)
{
    try
    {
        if (v.is_array())
            return v.get<std::vector<T>>();
        return {v.get<T>()};
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(ErrorCode::invalid_configuration, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T> T scalar(const nlohmann::json &v, const char *key)
{
    try
    {
        return v.get<T>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(ErrorCode::invalid_configuration, std::string("bad value for '") + key + "': " + e.what());
    }
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw Error(ErrorCode::invalid_configuration, "config must be a flat JSON object");
    static const std::set<std::string> known{"K",           "P",         "N",          "snr_db",
                                             "constellation", "method",  "channels",   "runs_per_channel",
                                             "master_seed", "freq_gain", "phase_gain", "pilot_length",
                                             "threads"};
    for (const auto &[key, _] : j.items())
        if (!known.contains(key))
            throw Error(ErrorCode::invalid_configuration, "unknown config key '" + key + "'");

    ExperimentConfig cfg;
    if (j.contains("K"))
        cfg.K = scalar<int>(j["K"], "K");
    if (j.contains("P"))
        cfg.P = scalar_or_list<int>(j["P"], "P");
    if (j.contains("N"))
        cfg.N = scalar_or_list<int>(j["N"], "N");
    if (j.contains("snr_db"))
        cfg.snr_db = scalar_or_list<double>(j["snr_db"], "snr_db");
    if (j.contains("constellation"))
        cfg.constellation = scalar<std::string>(j["constellation"], "constellation");
    if (j.contains("method"))
        cfg.method = method_from_string(scalar<std::string>(j["method"], "method"));
    if (j.contains("channels"))
        cfg.channels = scalar<int>(j["channels"], "channels");
    if (j.contains("runs_per_channel"))
        cfg.runs_per_channel = scalar<int>(j["runs_per_channel"], "runs_per_channel");
    if (j.contains("master_seed"))
        cfg.master_seed = scalar<std::uint64_t>(j["master_seed"], "master_seed");
    if (j.contains("freq_gain"))
        cfg.freq_gain = scalar<double>(j["freq_gain"], "freq_gain");
    if (j.contains("phase_gain"))
        cfg.phase_gain = scalar<double>(j["phase_gain"], "phase_gain");
    if (j.contains("pilot_length"))
        cfg.pilot_length = scalar<int>(j["pilot_length"], "pilot_length");
    if (j.contains("threads"))
        cfg.threads = scalar<int>(j["threads"], "threads");
    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig &cfg)
{
    return nlohmann::json{{"K", cfg.K},
                          {"P", cfg.P},
                          {"N", cfg.N},
                          {"snr_db", cfg.snr_db},
                          {"constellation", cfg.constellation},
                          {"method", std::string(to_string(cfg.method))},
                          {"channels", cfg.channels},
                          {"runs_per_channel", cfg.runs_per_channel},
                          {"master_seed", cfg.master_seed},
                          {"freq_gain", cfg.freq_gain},
                          {"phase_gain", cfg.phase_gain},
                          {"pilot_length", cfg.pilot_length},
                          {"threads", cfg.threads}};
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io_failure, "cannot open config file '" + path + "'");
    try
    {
        return config_from_json(nlohmann::json::parse(in));
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw Error(ErrorCode::invalid_configuration, std::string("config is not valid JSON: ") + e.what());
    }
}

} // namespace blindcfo::harness
