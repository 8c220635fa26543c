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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "blindcfo/config.hpp"
#include "blindcfo/error.hpp"
#include "blindcfo/experiment.hpp"

using namespace blindcfo;
using namespace blindcfo::harness;

TEST_CASE("config defaults are valid", "[harness]")
{
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.K == 2);
    CHECK(cfg.channels == 300);
    CHECK(cfg.pll().phase_gain == cfg.phase_gain);
}

TEST_CASE("config validation rejects bad values", "[harness]")
{
    ExperimentConfig cfg;
    cfg.K = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.P = {1};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.K = 5;
    cfg.P = {8};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.channels = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.constellation = "nope";
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("config JSON uses the field names and accepts scalars or lists", "[harness]")
{
    const auto j = nlohmann::json::parse(R"({"K": 2, "P": 4, "N": [256, 512], "snr_db": 15, "method": "pilot",
                                             "channels": 3, "runs_per_channel": 2, "master_seed": 99,
                                             "freq_gain": 0.001, "phase_gain": 0.1, "pilot_length": 16,
                                             "constellation": "4QAM", "threads": 1})");
    const auto cfg = config_from_json(j);
    CHECK(cfg.P == std::vector<int>{4});
    CHECK(cfg.N == std::vector<int>{256, 512});
    CHECK(cfg.snr_db == std::vector<double>{15.0});
    CHECK(cfg.method == Method::pilot);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.pilot_length == 16);

    const auto back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));

    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"k": 2})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"method": "oracle"})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"K": "two"})")), Error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1, 2]")), Error);
}

TEST_CASE("seed derivation separates channels and runs", "[harness]")
{
    std::set<Seed> seen;
    for (int c = 0; c < 50; ++c)
    {
        seen.insert(channel_seed(1, c));
        for (int r = 0; r < 20; ++r)
            seen.insert(run_seed(1, c, r));
    }
    CHECK(seen.size() == 50 + 50 * 20);
    CHECK(channel_seed(1, 0) != channel_seed(2, 0));
}

TEST_CASE("one channel and one run aggregate to that trial", "[harness]")
{
    ExperimentConfig cfg;
    cfg.P = {4};
    cfg.N = {512};
    cfg.snr_db = {20.0};
    cfg.channels = 1;
    cfg.runs_per_channel = 1;
    cfg.master_seed = 17;
    cfg.threads = 1;
    const auto records = run_sweep(cfg, SweepAxis::snr);
    REQUIRE(records.size() == 1);
    const auto &r = records.front();
    CHECK(r.trials == 1);
    CHECK(r.failed == 0);
    CHECK(r.P == 4);
    CHECK(r.axis == 20.0);

    TrialSpec spec;
    spec.channel = sigmodel::draw_random_channel(2, 4, channel_seed(17, 0));
    spec.length = 512;
    spec.snr_db = 20.0;
    spec.data_seed = run_seed(17, 0, 0);
    spec.pll = cfg.pll();
    const auto t = run_trial(spec);
    CHECK(r.mse == t.mse());
    CHECK(r.ber == t.ber());
    CHECK(r.mse_stderr == 0.0);
    CHECK(r.ber_stderr == 0.0);
}

TEST_CASE("aggregate computes means and standard errors", "[harness]")
{
    TrialResult a, b, c;
    a.squared_cfo_error = {1e-4, 3e-4};
    a.bit_errors = 1;
    a.bit_count = 100;
    b.squared_cfo_error = {0.0, 0.0};
    b.bit_errors = 0;
    b.bit_count = 100;
    c.squared_cfo_error = {4e-4, 0.0};
    c.bit_errors = 5;
    c.bit_count = 100;
    const auto r = aggregate({a, b, c}, 2);
    CHECK(r.trials == 3);
    CHECK(r.failed == 2);
    CHECK(r.mse == Catch::Approx((2e-4 + 0.0 + 2e-4) / 3.0));
    CHECK(r.ber == Catch::Approx(0.02));
    const double m = 0.02;
    const double sd = std::sqrt(((0.01 - m) * (0.01 - m) + m * m + (0.05 - m) * (0.05 - m)) / 2.0);
    CHECK(r.ber_stderr == Catch::Approx(sd / std::sqrt(3.0)));
}

TEST_CASE("sweeps are reproducible byte for byte", "[harness][invariant]")
{
    ExperimentConfig cfg;
    cfg.P = {2, 4};
    cfg.N = {256, 512};
    cfg.snr_db = {15.0};
    cfg.channels = 4;
    cfg.runs_per_channel = 2;
    cfg.master_seed = 123;
    for (Method m : {Method::blind, Method::pilot})
    {
        cfg.method = m;
        std::ostringstream a, b;
        write_sweep_csv(a, run_sweep(cfg, SweepAxis::length));
        cfg.threads = 3;
        write_sweep_csv(b, run_sweep(cfg, SweepAxis::length));
        cfg.threads = 0;
        CHECK(a.str() == b.str());
        CHECK(a.str().rfind("axis,p,method,mse_cfo,mse_stderr,ber,ber_stderr,trials,failed\n", 0) == 0);
    }
}

TEST_CASE("CFO error decreases with SNR on the N = 1024 grid", "[harness]")
{
    ExperimentConfig cfg;
    cfg.P = {2, 4};
    cfg.N = {1024};
    cfg.snr_db = {0, 10, 20, 30};
    cfg.channels = 20;
    cfg.runs_per_channel = 2;
    cfg.master_seed = 5;
    const auto records = run_sweep(cfg, SweepAxis::snr);
    REQUIRE(records.size() == 8);
    for (std::size_t i = 1; i < records.size(); ++i)
    {
        if (records[i].P != records[i - 1].P)
            continue;
        INFO("P " << records[i].P << " snr " << records[i].axis);
        CHECK(records[i].mse <= records[i - 1].mse + records[i].mse_stderr + records[i - 1].mse_stderr);
    }
}

TEST_CASE("a silent channel is reported as a degenerate trial", "[harness]")
{
    TrialSpec spec;
    spec.channel = sigmodel::draw_random_channel(2, 4, 1);
    spec.channel.gains = {cx(0.0, 0.0), cx(0.0, 0.0)};
    spec.snr_db = noiseless;
    spec.length = 256;
    CHECK_THROWS_MATCHES(run_trial(spec), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e)
                                                           { return e.code() == ErrorCode::degenerate_mixture; }));
}

TEST_CASE("pilot symbols are excluded from scoring", "[harness]")
{
    TrialSpec spec;
    spec.channel = two_user_example_channel(4, 3);
    spec.length = 512;
    spec.snr_db = 25.0;
    spec.method = Method::pilot;
    spec.pilot_length = 32;
    spec.data_seed = 8;
    const auto out = simulate_trial(spec);
    CHECK(out.first_scored == 32);
    CHECK(out.result.bit_count == 2L * (512 - 32) * 2);
    spec.method = Method::blind;
    CHECK(simulate_trial(spec).result.bit_count == 2L * 512 * 2);
}
