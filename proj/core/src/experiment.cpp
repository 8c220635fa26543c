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

#include "blindcfo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "blindcfo/error.hpp"
#include "blindcfo/rng.hpp"

namespace blindcfo::harness
{

double TrialResult::mse() const
{
    double acc = 0.0;
    for (double e : squared_cfo_error)
        acc += e;
    return squared_cfo_error.empty() ? 0.0 : acc / static_cast<double>(squared_cfo_error.size());
}

double TrialResult::ber() const
{
    return bit_count > 0 ? static_cast<double>(bit_errors) / static_cast<double>(bit_count) : 0.0;
}

sigmodel::ChannelRealization two_user_example_channel(int oversampling, Seed seed)
{
    auto ch = sigmodel::draw_random_channel(2, oversampling, seed);
    ch.gains = {cx(0.3173, -0.6483), cx(0.1625, 0.5867)};
    ch.cfos = {-0.1552, 0.4335};
    return ch;
}

sigmodel::ChannelRealization two_user_example_channel(int oversampling)
{
    auto ch = two_user_example_channel(oversampling, 0);
    ch.delays = {0.25 / oversampling, 0.75 / oversampling};
    return ch;
}

TrialOutcome simulate_trial(const TrialSpec &spec)
{
    spec.channel.validate();
    const int K = spec.channel.users;
    TrialOutcome out;
    out.frame = sigmodel::generate_symbols(K, spec.length, spec.constellation, mix_seed({spec.data_seed, 1}));

    std::optional<baseline::PilotSet> pilots;
    if (spec.method == Method::pilot)
    {
        if (spec.length <= spec.pilot_length)
            throw Error(ErrorCode::invalid_configuration, "frame must be longer than the pilot");
        pilots = baseline::generate_pilots(K, spec.pilot_length, spec.constellation, mix_seed({spec.data_seed, 3}));
        out.frame.symbols.leftCols(spec.pilot_length) = pilots->pilots;
        out.frame.indices.leftCols(spec.pilot_length) = pilots->indices;
        out.first_scored = spec.pilot_length;
    }

    out.mixing = sigmodel::build_virtual_channel(spec.channel);
    out.observations =
        sigmodel::synthesize_observations(out.mixing, out.frame, spec.channel, spec.snr_db, mix_seed({spec.data_seed, 2}));

    if (spec.method == Method::blind)
        out.receiver = pll::run_receiver(out.observations, K, spec.constellation, spec.pll);
    else
        out.receiver = baseline::run_pilot_receiver(out.observations.samples, *pilots, spec.constellation, spec.pll);

    const Eigen::Index scored = spec.length - out.first_scored;
    const IndexMatrix decisions = out.receiver.decisions().rightCols(scored);
    const IndexMatrix truth = out.frame.indices.rightCols(scored);
    out.alignment = resolve_ambiguity(decisions, truth, spec.constellation);

    TrialResult &r = out.result;
    for (int k = 0; k < K; ++k)
    {
        const double e = frequency_error(
            out.receiver.coarse.f_hat[static_cast<std::size_t>(out.alignment.permutation[static_cast<std::size_t>(k)])],
            spec.channel.cfos[static_cast<std::size_t>(k)]);
        r.squared_cfo_error.push_back(e * e);
    }
    const auto bits = count_bit_errors(out.alignment.aligned, truth, spec.constellation);
    r.bit_errors = bits.errors;
    r.bit_count = bits.bits;
    for (const auto &trace : out.receiver.traces)
    {
        if (!trace.locked_at)
        {
            r.lock_time.reset();
            break;
        }
        r.lock_time = std::max(r.lock_time.value_or(0), *trace.locked_at);
    }
    r.isr_db = interference_to_signal_db(out.receiver.separation.mixing_estimate, out.mixing.mixing);
    return out;
}

TrialResult run_trial(const TrialSpec &spec) { return simulate_trial(spec).result; }

Seed channel_seed(Seed master, int channel) { return mix_seed({master, static_cast<std::uint64_t>(channel)}); }

Seed run_seed(Seed master, int channel, int run)
{
    return mix_seed({master, static_cast<std::uint64_t>(channel), static_cast<std::uint64_t>(run)});
}

SweepRecord aggregate(const std::vector<TrialResult> &results, int failed)
{
    SweepRecord rec;
    rec.trials = static_cast<int>(results.size());
    rec.failed = failed;
    if (results.empty())
    {
        rec.mse = rec.ber = std::nan("");
        return rec;
    }
    const double n = static_cast<double>(results.size());
    double sm = 0.0, sb = 0.0;
    for (const auto &r : results)
    {
        sm += r.mse();
        sb += r.ber();
    }
    rec.mse = sm / n;
    rec.ber = sb / n;
    if (results.size() > 1)
    {
        double vm = 0.0, vb = 0.0;
        for (const auto &r : results)
        {
            vm += (r.mse() - rec.mse) * (r.mse() - rec.mse);
            vb += (r.ber() - rec.ber) * (r.ber() - rec.ber);
        }
        rec.mse_stderr = std::sqrt(vm / (n - 1.0) / n);
        rec.ber_stderr = std::sqrt(vb / (n - 1.0) / n);
    }
    return rec;
}

std::vector<std::optional<TrialResult>> run_grid_point(const ExperimentConfig &cfg, int oversampling, int length,
                                                       double snr_db)
{
    cfg.validate();
    const auto constellation = Constellation::from_name(cfg.constellation);
    const std::size_t total = static_cast<std::size_t>(cfg.channels) * static_cast<std::size_t>(cfg.runs_per_channel);
    std::vector<std::optional<TrialResult>> results(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    auto worker = [&] {
        for (std::size_t t = next++; t < total; t = next++)
        {
            const int c = static_cast<int>(t / static_cast<std::size_t>(cfg.runs_per_channel));
            const int r = static_cast<int>(t % static_cast<std::size_t>(cfg.runs_per_channel));
            TrialSpec spec;
            spec.channel = sigmodel::draw_random_channel(cfg.K, oversampling, channel_seed(cfg.master_seed, c));
            spec.length = length;
            spec.snr_db = snr_db;
            spec.method = cfg.method;
            spec.constellation = constellation;
            spec.pll = cfg.pll();
            spec.pilot_length = cfg.pilot_length;
            spec.data_seed = run_seed(cfg.master_seed, c, r);
            try
            {
                results[t] = run_trial(spec);
            }
            catch (const Error &e)
            {
                if (e.code() == ErrorCode::invalid_configuration || e.code() == ErrorCode::unsupported_scale)
                {
                    std::lock_guard lock(fatal_mutex);
                    if (!fatal)
                        fatal = std::current_exception();
                    next = total;
                }
                // otherwise: a degenerate draw, recorded as a failed trial
            }
            catch (...)
            {
                std::lock_guard lock(fatal_mutex);
                if (!fatal)
                    fatal = std::current_exception();
                next = total;
            }
        }
    };

    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(total, 1)));
    if (workers == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (fatal)
        std::rethrow_exception(fatal);
    return results;
}

std::vector<SweepRecord> run_sweep(const ExperimentConfig &cfg, SweepAxis axis)
{
    cfg.validate();
    std::vector<double> values;
    if (axis == SweepAxis::length)
    {
        const auto &grid = cfg.N.empty() ? default_length_grid : cfg.N;
        values.assign(grid.begin(), grid.end());
    }
    else
    {
        values = cfg.snr_db.empty() ? default_snr_grid : cfg.snr_db;
    }

    std::vector<SweepRecord> records;
    for (int p : cfg.P)
        for (double v : values)
        {
            const int length = axis == SweepAxis::length ? static_cast<int>(v)
                                                          : (cfg.N.empty() ? default_length : cfg.N.front());
            const double snr = axis == SweepAxis::snr ? v : (cfg.snr_db.empty() ? default_snr_db : cfg.snr_db.front());
            const auto trials = run_grid_point(cfg, p, length, snr);

            std::vector<TrialResult> ok;
            for (const auto &t : trials)
                if (t)
                    ok.push_back(*t);
            const int failed = static_cast<int>(trials.size() - ok.size());
            if (static_cast<double>(failed) > 0.01 * static_cast<double>(trials.size()))
                throw Error(ErrorCode::sweep_failed, std::to_string(failed) + " of " + std::to_string(trials.size()) +
                                                         " trials failed at P=" + std::to_string(p));
            SweepRecord rec = aggregate(ok, failed);
            rec.axis = v;
            rec.P = p;
            rec.method = cfg.method;
            records.push_back(rec);
        }
    return records;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRecord> &records)
{
    out << sweep_csv_header << '\n';
    char line[512];
    for (const auto &r : records)
    {
        std::snprintf(line, sizeof line, "%g,%d,%s,%.9e,%.9e,%.9e,%.9e,%d,%d\n", r.axis, r.P,
                      std::string(to_string(r.method)).c_str(), r.mse, r.mse_stderr, r.ber, r.ber_stderr, r.trials,
                      r.failed);
        out << line;
    }
}

} // namespace blindcfo::harness
