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
#include <random>
#include <vector>

#include "blindcfo/error.hpp"
#include "blindcfo/scoring.hpp"
#include "blindcfo/sigmodel.hpp"

using namespace blindcfo;
using namespace blindcfo::harness;

namespace
{

IndexMatrix random_indices(int K, int N, std::mt19937_64 &rng, int alphabet = 4)
{
    std::uniform_int_distribution<int> u(0, alphabet - 1);
    IndexMatrix m(K, N);
    for (Eigen::Index i = 0; i < m.size(); ++i)
        m(i) = u(rng);
    return m;
}

} // namespace

TEST_CASE("identical decisions need no alignment", "[harness]")
{
    const auto c = Constellation::qam4();
    const auto f = sigmodel::generate_symbols(3, 200, c, 1);
    const auto al = resolve_ambiguity(f.indices, f, c);
    CHECK(al.permutation == std::vector<int>{0, 1, 2});
    CHECK(al.rotation == std::vector<int>{0, 0, 0});
    CHECK(al.symbol_errors == 0);
    CHECK(al.aligned == f.indices);
}

TEST_CASE("swapped and rotated streams are recovered", "[harness]")
{
    const auto c = Constellation::qam4();
    const auto f = sigmodel::generate_symbols(2, 300, c, 2);
    IndexMatrix d(2, 300);
    for (int i = 0; i < 300; ++i)
    {
        d(0, i) = static_cast<int>(c.rotate(static_cast<std::size_t>(f.indices(1, i)), 1));
        d(1, i) = f.indices(0, i);
    }
    const auto al = resolve_ambiguity(d, f, c);
    CHECK(al.permutation == std::vector<int>{1, 0});
    // stream 0 carries user 1 rotated by one step, so aligning it takes three more steps
    CHECK(al.rotation == std::vector<int>{0, 3});
    CHECK(al.symbol_errors == 0);
    CHECK(al.aligned == f.indices);
}

TEST_CASE("ties resolve to the lexicographically smallest choice", "[harness]")
{
    const auto c = Constellation::qam4();
    IndexMatrix truth = IndexMatrix::Zero(2, 4);
    IndexMatrix d = IndexMatrix::Zero(2, 4);
    // every row of d equals every rotation of truth in two positions out of four
    truth.row(0) << 0, 0, 0, 0;
    truth.row(1) << 0, 0, 0, 0;
    d.row(0) << 0, 0, 2, 2;
    d.row(1) << 0, 0, 2, 2;
    const auto al = resolve_ambiguity(d, truth, c);
    CHECK(al.permutation == std::vector<int>{0, 1});
    CHECK(al.rotation == std::vector<int>{0, 0});
    CHECK(al.symbol_errors == 4);
}

TEST_CASE("random decisions cannot be aligned", "[harness]")
{
    std::mt19937_64 rng(3);
    const auto c = Constellation::qam4();
    for (int trial = 0; trial < 20; ++trial)
    {
        const IndexMatrix truth = random_indices(2, 1024, rng);
        const IndexMatrix d = random_indices(2, 1024, rng);
        const auto al = resolve_ambiguity(d, truth, c);
        CHECK(static_cast<double>(al.symbol_errors) / 2048.0 > 0.5);
    }
}

TEST_CASE("alignment never scores worse than the identity", "[harness][invariant]")
{
    std::mt19937_64 rng(4);
    const auto c = Constellation::qam4();
    for (int trial = 0; trial < 200; ++trial)
    {
        const int K = 1 + trial % 4;
        const IndexMatrix truth = random_indices(K, 64, rng);
        IndexMatrix d = truth;
        std::uniform_int_distribution<int> pos(0, static_cast<int>(d.size()) - 1);
        for (int e = 0; e < trial % 40; ++e)
            d(pos(rng)) = random_indices(1, 1, rng)(0);
        const auto al = resolve_ambiguity(d, truth, c);
        CHECK(al.symbol_errors <= identity_symbol_errors(d, truth));
        CHECK(al.symbol_errors == identity_symbol_errors(al.aligned, truth));
    }
}

TEST_CASE("alignment refuses more than four users", "[harness]")
{
    const IndexMatrix m = IndexMatrix::Zero(5, 8);
    CHECK_THROWS_MATCHES(resolve_ambiguity(m, m, Constellation::qam4()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error &e)
                                                           { return e.code() == ErrorCode::unsupported_scale; }));
}

TEST_CASE("CFO mean squared error wraps integer cycles", "[harness]")
{
    CHECK(mse_cfo({0.1, -0.2}, {0.1, -0.2}, {0, 1}) == 0.0);
    CHECK(mse_cfo({0.101, -0.201}, {0.1, -0.2}, {0, 1}) == Catch::Approx(1e-6).epsilon(1e-9));
    CHECK(mse_cfo({1.1, -1.2}, {0.1, -0.2}, {0, 1}) == Catch::Approx(0.0).margin(1e-28));
    // estimate order follows the permutation
    CHECK(mse_cfo({-0.2, 0.1}, {0.1, -0.2}, {1, 0}) == 0.0);
    CHECK(frequency_error(0.49, -0.49) == Catch::Approx(-0.02).margin(1e-15));
    CHECK(frequency_error(0.0, 0.5) == Catch::Approx(0.5));
}

TEST_CASE("bit error rate with Gray labels", "[harness]")
{
    const auto c = Constellation::qam4();
    const auto f = sigmodel::generate_symbols(2, 1024, c, 5);
    CHECK(ber(f.indices, f.indices, c) == 0.0);
    IndexMatrix d = f.indices;
    d(1, 17) = static_cast<int>(c.rotate(static_cast<std::size_t>(d(1, 17)), 1));
    CHECK(ber(d, f.indices, c) == Catch::Approx(1.0 / 4096.0));
    d(0, 3) = static_cast<int>(c.rotate(static_cast<std::size_t>(d(0, 3)), 2));
    const auto be = count_bit_errors(d, f.indices, c);
    CHECK(be.errors == 3);
    CHECK(be.bits == 4096);
}

TEST_CASE("random decisions give half the bits wrong", "[harness]")
{
    std::mt19937_64 rng(6);
    const auto c = Constellation::qam4();
    const IndexMatrix truth = random_indices(1, 10000, rng);
    const IndexMatrix d = random_indices(1, 10000, rng);
    CHECK(std::abs(ber(d, truth, c) - 0.5) < 0.02);
}

TEST_CASE("interference measure of scaled and permuted mixing", "[harness]")
{
    const auto ch = sigmodel::draw_random_channel(2, 4, 3);
    const CMatrix A = sigmodel::build_virtual_channel(ch).mixing;
    CMatrix Ah(4, 2);
    Ah.col(0) = A.col(1) * cx(0.0, 2.0);
    Ah.col(1) = A.col(0) * cx(-0.5, 0.0);
    CHECK(interference_to_signal(Ah, A) < 1e-20);
    for (double r : interference_per_row(Ah, A))
        CHECK(r < 1e-20);
    CMatrix mixed = A;
    mixed.col(0) += 0.1 * A.col(1);
    CHECK(interference_to_signal_db(mixed, A) > -40.0);
}
