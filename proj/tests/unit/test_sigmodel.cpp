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
#include <numbers>
#include <vector>

#include "blindcfo/error.hpp"
#include "blindcfo/experiment.hpp"
#include "blindcfo/sigmodel.hpp"
#include "oracles.hpp"

using namespace blindcfo;
using namespace blindcfo::sigmodel;

namespace
{

ChannelRealization two_user(int P)
{
    ChannelRealization ch;
    ch.users = 2;
    ch.oversampling = P;
    ch.gains = {cx(0.3173, -0.6483), cx(0.1625, 0.5867)};
    ch.delays = {0.1 / P, 0.6 / P};
    ch.cfos = {-0.1552, 0.4335};
    return ch;
}

} // namespace

TEST_CASE("generate_symbols shape, determinism and mean", "[sigmodel]")
{
    const auto c = Constellation::qam4();
    const auto a = generate_symbols(2, 1024, c, 7);
    const auto b = generate_symbols(2, 1024, c, 7);
    REQUIRE(a.symbols.rows() == 2);
    REQUIRE(a.symbols.cols() == 1024);
    CHECK(a.symbols == b.symbols);
    CHECK(a.indices == b.indices);
    for (int k = 0; k < 2; ++k)
    {
        // three standard deviations of the sample mean of a unit-power source
        CHECK(std::abs(a.symbols.row(k).mean()) < 3.0 / std::sqrt(1024.0));
        for (int i = 0; i < 1024; ++i)
            CHECK(a.symbols(k, i) == c.point(static_cast<std::size_t>(a.indices(k, i))));
    }
    const auto other = generate_symbols(2, 1024, c, 8);
    CHECK(other.symbols != a.symbols);
}

TEST_CASE("generate_symbols single BPSK value", "[sigmodel]")
{
    const auto f = generate_symbols(1, 1, Constellation::bpsk(), 12345);
    REQUIRE(f.symbols.size() == 1);
    const cx s = f.symbols(0, 0);
    CHECK((s == cx(1.0, 0.0) || s == cx(-1.0, 0.0)));
}

TEST_CASE("generate_symbols 4QAM kurtosis", "[sigmodel]")
{
    const auto f = generate_symbols(2, 100000, Constellation::qam4(), 3);
    for (int k = 0; k < 2; ++k)
    {
        std::vector<cx> row(f.symbols.row(k).begin(), f.symbols.row(k).end());
        CHECK(std::abs(oracle::fourth_cumulant(row) + 1.0) < 0.05);
    }
}

TEST_CASE("generate_symbols errors", "[sigmodel]")
{
    const Constellation empty("empty", {}, 1, 0);
    CHECK_THROWS_MATCHES(generate_symbols(1, 4, empty, 1), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e)
                                                           { return e.code() == ErrorCode::invalid_configuration; }));
    CHECK_THROWS_AS(generate_symbols(0, 4, Constellation::qam4(), 1), Error);
    CHECK_THROWS_AS(generate_symbols(1, 0, Constellation::qam4(), 1), Error);
}

TEST_CASE("pulse values", "[sigmodel]")
{
    CHECK(pulse(0.5) == Catch::Approx(1.0).margin(1e-15));
    CHECK(pulse(-0.1) == 0.0);
    CHECK(pulse(1.1) == 0.0);
    CHECK(pulse(0.25) == Catch::Approx(0.54).margin(1e-15));
    CHECK(pulse(0.0) == Catch::Approx(0.08).margin(1e-15));
    CHECK(pulse(1.0) == Catch::Approx(0.08).margin(1e-15));
    for (double t = -0.5; t <= 1.5; t += 0.01)
        CHECK(pulse(t) == Catch::Approx(oracle::hamming(t)).margin(1e-15));
}

TEST_CASE("build_virtual_channel single user endpoints", "[sigmodel]")
{
    ChannelRealization ch;
    ch.users = 1;
    ch.oversampling = 2;
    ch.gains = {cx(1.0, 0.0)};
    ch.delays = {0.0};
    ch.cfos = {0.0};
    const auto A = build_virtual_channel(ch).mixing;
    REQUIRE(A.rows() == 2);
    REQUIRE(A.cols() == 1);
    CHECK(std::abs(A(0, 0) - cx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(A(1, 0) - cx(0.08, 0.0)) < 1e-15);
}

TEST_CASE("build_virtual_channel matches direct evaluation", "[sigmodel]")
{
    for (int P : {2, 3, 4, 8})
    {
        const auto ch = harness::two_user_example_channel(P, 11);
        const auto A = build_virtual_channel(ch).mixing;
        REQUIRE(A.rows() == P);
        for (int m = 1; m <= P; ++m)
            for (int k = 0; k < 2; ++k)
            {
                const double t = static_cast<double>(m) / P - ch.delays[static_cast<std::size_t>(k)];
                const cx expected = ch.gains[static_cast<std::size_t>(k)] *
                                    std::polar(1.0, oracle::two_pi * ch.cfos[static_cast<std::size_t>(k)] * m / P) *
                                    oracle::hamming(t);
                CHECK(std::abs(A(m - 1, k) - expected) < 1e-14);
            }
    }
}

TEST_CASE("random channels have full column rank", "[sigmodel]")
{
    for (int P : {2, 4})
        for (Seed s = 0; s < 100; ++s)
        {
            const auto A = build_virtual_channel(draw_random_channel(2, P, s)).mixing;
            const Eigen::VectorXd sv = A.jacobiSvd().singularValues();
            CHECK(sv(sv.size() - 1) > 1e-8 * sv(0));
        }
}

TEST_CASE("build_virtual_channel rejects delays outside the pulse support", "[sigmodel]")
{
    auto ch = two_user(2);
    ch.delays[1] = 0.5;
    CHECK_THROWS_MATCHES(build_virtual_channel(ch), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e)
                                                           { return e.code() == ErrorCode::invalid_configuration; }));
}

TEST_CASE("noiseless observations equal the explicit sum bit for bit", "[sigmodel]")
{
    const auto ch = two_user(4);
    const auto V = build_virtual_channel(ch);
    const auto frame = generate_symbols(2, 256, Constellation::qam4(), 21);
    const auto obs = synthesize_observations(V, frame, ch, noiseless, 99);
    CHECK(obs.noise_variance == 0.0);
    for (int m = 0; m < 4; ++m)
        for (int i = 0; i < 256; ++i)
        {
            cx acc{0.0, 0.0};
            for (int k = 0; k < 2; ++k)
                acc += V.mixing(m, k) *
                       (frame.symbols(k, i) * std::polar(1.0, two_pi * ch.cfos[static_cast<std::size_t>(k)] * i));
            CHECK(obs.samples(m, i) == acc);
        }
    const CMatrix st = rotated_symbols(frame, ch);
    CHECK((obs.samples - V.mixing * st).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("empirical SNR matches the requested value", "[sigmodel]")
{
    const auto ch = two_user(2);
    const auto V = build_virtual_channel(ch);
    const auto frame = generate_symbols(2, 1024, Constellation::qam4(), 4);
    const auto clean = synthesize_observations(V, frame, ch, noiseless, 0);
    const auto noisy = synthesize_observations(V, frame, ch, 20.0, 17);
    const CMatrix w = noisy.samples - clean.samples;
    const double ps = clean.samples.squaredNorm() / static_cast<double>(clean.samples.size());
    const double pw = w.squaredNorm() / static_cast<double>(w.size());
    CHECK(std::abs(10.0 * std::log10(ps / pw) - 20.0) < 0.5);

    const auto f2 = generate_symbols(2, 10000, Constellation::qam4(), 5);
    const auto c0 = synthesize_observations(V, f2, ch, noiseless, 0);
    const auto n0 = synthesize_observations(V, f2, ch, 0.0, 6);
    const CMatrix w0 = n0.samples - c0.samples;
    const CMatrix centered = w0.array() - w0.mean();
    const double var = centered.squaredNorm() / static_cast<double>(w0.size() - 1);
    const double sig = c0.samples.squaredNorm() / static_cast<double>(c0.samples.size());
    CHECK(std::abs(var / sig - 1.0) < 0.05);
}

TEST_CASE("draw_random_channel ranges and errors", "[sigmodel]")
{
    const auto ch = draw_random_channel(2, 4, 1);
    REQUIRE(ch.users == 2);
    REQUIRE(ch.oversampling == 4);
    for (int k = 0; k < 2; ++k)
    {
        CHECK(ch.delays[static_cast<std::size_t>(k)] >= 0.0);
        CHECK(ch.delays[static_cast<std::size_t>(k)] < 0.25);
        CHECK(ch.cfos[static_cast<std::size_t>(k)] >= -0.5);
        CHECK(ch.cfos[static_cast<std::size_t>(k)] < 0.5);
        CHECK(std::abs(ch.gains[static_cast<std::size_t>(k)]) > 0.0);
    }
    CHECK_NOTHROW(ch.validate());
    CHECK_THROWS_AS(draw_random_channel(3, 2, 1), Error);
}

TEST_CASE("draw_random_channel moments and uniformity", "[sigmodel]")
{
    double power = 0.0;
    std::vector<double> cfos, delays;
    const int draws = 10000;
    for (int s = 0; s < draws; ++s)
    {
        const auto ch = draw_random_channel(1, 4, static_cast<Seed>(s));
        power += std::norm(ch.gains[0]);
        cfos.push_back(ch.cfos[0]);
        delays.push_back(ch.delays[0]);
    }
    CHECK(std::abs(power / draws - 1.0) < 0.03);
    CHECK(oracle::ks_uniform(cfos, -0.5, 0.5) < 0.02);
    CHECK(oracle::ks_uniform(delays, 0.0, 0.25) < 0.02);
}

TEST_CASE("same seed gives the same relative delays for every oversampling factor", "[sigmodel]")
{
    const auto a = draw_random_channel(2, 2, 77);
    const auto b = draw_random_channel(2, 8, 77);
    CHECK(a.gains == b.gains);
    CHECK(a.cfos == b.cfos);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(a.delays[k] * 2 == Catch::Approx(b.delays[k] * 8).margin(1e-15));
}

TEST_CASE("phase advances by 2 pi f / P between polyphase rows", "[sigmodel][invariant]")
{
    for (Seed s = 0; s < 50; ++s)
    {
        const auto ch = draw_random_channel(2, 4, s);
        const auto A = build_virtual_channel(ch).mixing;
        for (int k = 0; k < 2; ++k)
            for (int m = 0; m + 1 < 4; ++m)
            {
                const double d = wrap_phase(std::arg(A(m + 1, k)) - std::arg(A(m, k)));
                CHECK(std::abs(d - wrap_phase(two_pi * ch.cfos[static_cast<std::size_t>(k)] / 4)) < 1e-12);
            }
    }
}

TEST_CASE("no polyphase row vanishes inside the pulse support", "[sigmodel]")
{
    for (Seed s = 0; s < 50; ++s)
    {
        const auto ch = draw_random_channel(2, 4, s);
        const auto A = build_virtual_channel(ch).mixing;
        for (int m = 1; m <= 4; ++m)
        {
            bool any_support = false;
            for (int k = 0; k < 2; ++k)
                any_support |= oracle::hamming(static_cast<double>(m) / 4 - ch.delays[static_cast<std::size_t>(k)]) != 0.0;
            CHECK((A.row(m - 1).cwiseAbs().maxCoeff() == 0.0) == !any_support);
        }
    }
}

TEST_CASE("rotated sources keep zero mean, independence and kurtosis", "[sigmodel][invariant]")
{
    const auto ch = two_user(2);
    const auto frame = generate_symbols(2, 50000, Constellation::qam4(), 8);
    const CMatrix st = rotated_symbols(frame, ch);
    const double n = static_cast<double>(st.cols());
    for (int k = 0; k < 2; ++k)
    {
        CHECK(std::abs(st.row(k).mean()) < 4.0 / std::sqrt(n));
        std::vector<cx> row(st.row(k).begin(), st.row(k).end());
        CHECK(std::abs(oracle::fourth_cumulant(row) + 1.0) < 0.05);
    }
    const cx cross = st.row(0).dot(st.row(1)) / n;
    CHECK(std::abs(cross) < 4.0 / std::sqrt(n));
    // lag-one autocorrelation
    const cx lag = st.row(0).head(st.cols() - 1).dot(st.row(0).tail(st.cols() - 1)) / n;
    CHECK(std::abs(lag) < 4.0 / std::sqrt(n));
}

TEST_CASE("synthesis is deterministic given seeds", "[sigmodel]")
{
    const auto ch = draw_random_channel(2, 4, 5);
    const auto frame = generate_symbols(2, 128, Constellation::qam4(), 6);
    const auto V = build_virtual_channel(ch);
    const auto a = synthesize_observations(V, frame, ch, 10.0, 7);
    const auto b = synthesize_observations(V, frame, ch, 10.0, 7);
    CHECK(a.samples == b.samples);
    CHECK(draw_random_channel(2, 4, 5).gains == ch.gains);
}
