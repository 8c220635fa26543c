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

// Command line driver: single trials, sweeps over frame length and SNR, and the two-user demo.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blindcfo/config.hpp"
#include "blindcfo/error.hpp"
#include "blindcfo/experiment.hpp"
#include "blindcfo/io.hpp"

namespace fs = std::filesystem;
using namespace blindcfo;

namespace
{

struct Options
{
    std::string config;
    std::string out = ".";
    std::optional<int> k;
    std::vector<int> p;
    std::vector<int> n;
    std::vector<double> snr;
    std::optional<std::string> method;
    std::optional<std::uint64_t> seed;
    std::optional<int> channels;
    std::optional<int> runs;
    std::optional<int> threads;
    std::string channel; // simulate only: replay a saved channel
};

void add_common(CLI::App *cmd, Options &o, bool grid)
{
    cmd->add_option("--config", o.config, "JSON file with ExperimentConfig fields")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--k", o.k, "Number of users")->check(CLI::Range(1, harness::max_exhaustive_users));
    cmd->add_option("--p", o.p, "Oversampling factor(s)")->check(CLI::PositiveNumber);
    cmd->add_option("--n", o.n, "Frame length(s)")->check(CLI::PositiveNumber);
    cmd->add_option("--snr", o.snr, "SNR value(s) in dB");
    cmd->add_option("--method", o.method, "Receiver")->check(CLI::IsMember({"blind", "pilot"}));
    cmd->add_option("--seed", o.seed, "Master seed");
    if (grid)
    {
        cmd->add_option("--channels", o.channels, "Channels per grid point")->check(CLI::PositiveNumber);
        cmd->add_option("--runs", o.runs, "Runs per channel")->check(CLI::PositiveNumber);
        cmd->add_option("--threads", o.threads, "Worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    }
}

harness::ExperimentConfig resolve(const Options &o, harness::ExperimentConfig cfg)
{
    if (!o.config.empty())
        cfg = harness::load_config(o.config);
    if (o.k)
        cfg.K = *o.k;
    if (!o.p.empty())
        cfg.P = o.p;
    if (!o.n.empty())
        cfg.N = o.n;
    if (!o.snr.empty())
        cfg.snr_db = o.snr;
    if (o.method)
        cfg.method = harness::method_from_string(*o.method);
    if (o.seed)
        cfg.master_seed = *o.seed;
    if (o.channels)
        cfg.channels = *o.channels;
    if (o.runs)
        cfg.runs_per_channel = *o.runs;
    if (o.threads)
        cfg.threads = *o.threads;
    cfg.validate();
    return cfg;
}

fs::path prepare(const std::string &dir)
{
    const fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec)
        throw Error(ErrorCode::io_failure, "cannot create " + dir + ": " + ec.message());
    return path;
}

std::ofstream open_output(const fs::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::io_failure, "cannot write " + path.string());
    return out;
}

harness::TrialSpec single_spec(const harness::ExperimentConfig &cfg, const sigmodel::ChannelRealization &channel)
{
    harness::TrialSpec spec;
    spec.channel = channel;
    spec.length = cfg.N.empty() ? harness::default_length : cfg.N.front();
    spec.snr_db = cfg.snr_db.empty() ? harness::default_snr_db : cfg.snr_db.front();
    spec.method = cfg.method;
    spec.constellation = Constellation::from_name(cfg.constellation);
    spec.pll = cfg.pll();
    spec.pilot_length = cfg.pilot_length;
    spec.data_seed = harness::run_seed(cfg.master_seed, 0, 0);
    return spec;
}

void write_trial(const fs::path &dir, const harness::TrialSpec &spec, const harness::TrialOutcome &outcome)
{
    open_output(dir / "channel.json") << io::channel_to_json(spec.channel).dump(2) << '\n';
    open_output(dir / "frame.json") << io::frame_to_json(outcome.frame, spec.constellation).dump() << '\n';
    {
        auto out = open_output(dir / "constellations.csv");
        io::write_constellation_csv(out, outcome);
    }
    for (std::size_t k = 0; k < outcome.receiver.traces.size(); ++k)
    {
        auto out = open_output(dir / ("pll_trace_" + std::to_string(k) + ".csv"));
        io::write_pll_trace_csv(out, outcome.receiver.traces[k]);
    }

    const auto &r = outcome.result;
    nlohmann::json summary;
    summary["method"] = harness::to_string(spec.method);
    summary["length"] = spec.length;
    summary["snr_db"] = spec.snr_db;
    summary["oversampling"] = spec.channel.oversampling;
    summary["mse_cfo"] = r.mse();
    summary["ber"] = r.ber();
    summary["bit_errors"] = r.bit_errors;
    summary["isr_db"] = r.isr_db;
    summary["lock_time"] = r.lock_time ? nlohmann::json(*r.lock_time) : nlohmann::json(nullptr);
    summary["permutation"] = outcome.alignment.permutation;
    summary["rotation"] = outcome.alignment.rotation;
    summary["cfo_true"] = spec.channel.cfos;
    summary["cfo_coarse"] = outcome.receiver.coarse.f_hat;
    summary["cfo_total"] = outcome.receiver.total_frequency;
    open_output(dir / "summary.json") << summary.dump(2) << '\n';

    std::cout << "method " << summary["method"].get<std::string>() << ", P " << spec.channel.oversampling << ", N "
              << spec.length << ", SNR " << spec.snr_db << " dB\n";
    for (std::size_t k = 0; k < spec.channel.cfos.size(); ++k)
    {
        const auto stream = static_cast<std::size_t>(outcome.alignment.permutation[k]);
        std::cout << "user " << k << ": f " << spec.channel.cfos[k] << ", f_hat " << outcome.receiver.coarse.f_hat[stream]
                  << ", after loop " << outcome.receiver.total_frequency[stream] << '\n';
    }
    std::cout << "ISR " << r.isr_db << " dB, BER " << r.ber() << " (" << r.bit_errors << " of " << r.bit_count
              << " bits), CFO MSE " << r.mse() << '\n';
    std::cout << "outputs written to " << dir.string() << '\n';
}

void run_simulate(const Options &o)
{
    const auto cfg = resolve(o, {});
    const int P = cfg.P.front();
    const auto channel = o.channel.empty()
                             ? sigmodel::draw_random_channel(cfg.K, P, harness::channel_seed(cfg.master_seed, 0))
                             : io::load_channel(o.channel);
    if (!o.channel.empty() && ((o.k && *o.k != channel.users) || (!o.p.empty() && o.p.front() != channel.oversampling)))
        throw Error(ErrorCode::invalid_configuration, "--k/--p disagree with the replayed channel");
    const auto spec = single_spec(cfg, channel);
    write_trial(prepare(o.out), spec, harness::simulate_trial(spec));
}

void run_demo(const Options &o)
{
    harness::ExperimentConfig defaults;
    defaults.P = {2};
    defaults.N = {1024};
    defaults.snr_db = {20.0};
    const auto cfg = resolve(o, defaults);
    if (cfg.K != 2)
        throw Error(ErrorCode::invalid_configuration, "the two-user demo needs K = 2");
    const auto spec = single_spec(cfg, harness::two_user_example_channel(cfg.P.front()));
    write_trial(prepare(o.out), spec, harness::simulate_trial(spec));
}

void run_sweep(const Options &o, harness::SweepAxis axis)
{
    const auto cfg = resolve(o, {});
    const auto records = harness::run_sweep(cfg, axis);
    const fs::path file = prepare(o.out) / (axis == harness::SweepAxis::length ? "sweep_n.csv" : "sweep_snr.csv");
    {
        auto out = open_output(file);
        harness::write_sweep_csv(out, records);
    }
    harness::write_sweep_csv(std::cout, records);
    std::cerr << "wrote " << file.string() << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Blind multiuser CFO estimation: simulation and sweeps"};
    app.require_subcommand(1);

    Options simulate, sweep_n, sweep_snr, demo;
    auto *sim = app.add_subcommand("simulate", "Run one trial and dump channel, frame, constellations and PLL traces");
    add_common(sim, simulate, false);
    sim->add_option("--channel", simulate.channel, "Replay a channel.json instead of drawing one")
        ->check(CLI::ExistingFile);
    auto *sn = app.add_subcommand("sweep-n", "MSE and BER versus frame length");
    add_common(sn, sweep_n, true);
    auto *ss = app.add_subcommand("sweep-snr", "MSE and BER versus SNR");
    add_common(ss, sweep_snr, true);
    auto *dp = app.add_subcommand("demo-paper", "Two-user example: f = (-0.1552, 0.4335), 4QAM, SNR 20 dB, N 1024");
    add_common(dp, demo, false);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sim)
            run_simulate(simulate);
        else if (*sn)
            run_sweep(sweep_n, harness::SweepAxis::length);
        else if (*ss)
            run_sweep(sweep_snr, harness::SweepAxis::snr);
        else if (*dp)
            run_demo(demo);
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
