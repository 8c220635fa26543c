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

#include "blindcfo/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "blindcfo/error.hpp"

namespace blindcfo::harness
{

namespace
{

void check_shapes(const IndexMatrix &a, const IndexMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::invalid_configuration, "decision and truth dimensions differ");
}

} // namespace

Alignment resolve_ambiguity(const IndexMatrix &decisions, const IndexMatrix &truth, const Constellation &constellation)
{
    check_shapes(decisions, truth);
    const int K = static_cast<int>(truth.rows());
    const Eigen::Index N = truth.cols();
    const int R = constellation.symmetry_order();
    if (K > max_exhaustive_users)
        throw Error(ErrorCode::unsupported_scale, "exhaustive ambiguity resolution supports K <= 4");

    // rotated[r][d] = index of point d rotated by r steps
    std::vector<std::vector<int>> rotated(static_cast<std::size_t>(R),
                                          std::vector<int>(constellation.size()));
    for (int r = 0; r < R; ++r)
        for (std::size_t d = 0; d < constellation.size(); ++d)
            rotated[static_cast<std::size_t>(r)][d] = static_cast<int>(constellation.rotate(d, r));

    // The total error count separates over (stream, user, rotation) triples.
    std::vector<long> table(static_cast<std::size_t>(K * K * R), 0);
    auto cell = [&](int stream, int user, int r) -> long & {
        return table[static_cast<std::size_t>((stream * K + user) * R + r)];
    };
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < K; ++k)
            for (int r = 0; r < R; ++r)
            {
                const auto &map = rotated[static_cast<std::size_t>(r)];
                long errs = 0;
                for (Eigen::Index i = 0; i < N; ++i)
                    errs += map[static_cast<std::size_t>(decisions(j, i))] != truth(k, i);
                cell(j, k, r) = errs;
            }

    std::vector<int> perm(static_cast<std::size_t>(K));
    std::iota(perm.begin(), perm.end(), 0);
    Alignment best;
    best.symbol_errors = std::numeric_limits<long>::max();
    do
    {
        long total = 0;
        std::vector<int> rot(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
        {
            const int j = perm[static_cast<std::size_t>(k)];
            int best_r = 0;
            for (int r = 1; r < R; ++r)
                if (cell(j, k, r) < cell(j, k, best_r))
                    best_r = r;
            rot[static_cast<std::size_t>(k)] = best_r;
            total += cell(j, k, best_r);
        }
        if (total < best.symbol_errors)
        {
            best.symbol_errors = total;
            best.permutation = perm;
            best.rotation = rot;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    best.aligned.resize(K, N);
    for (int k = 0; k < K; ++k)
    {
        const int j = best.permutation[static_cast<std::size_t>(k)];
        const auto &map = rotated[static_cast<std::size_t>(best.rotation[static_cast<std::size_t>(k)])];
        for (Eigen::Index i = 0; i < N; ++i)
            best.aligned(k, i) = map[static_cast<std::size_t>(decisions(j, i))];
    }
    return best;
}

Alignment resolve_ambiguity(const IndexMatrix &decisions, const sigmodel::SymbolFrame &truth,
                            const Constellation &constellation)
{
    return resolve_ambiguity(decisions, truth.indices, constellation);
}

long identity_symbol_errors(const IndexMatrix &decisions, const IndexMatrix &truth)
{
    check_shapes(decisions, truth);
    return static_cast<long>((decisions.array() != truth.array()).count());
}

double frequency_error(double estimate, double truth) { return -wrap_frequency(truth - estimate); }

double mse_cfo(const std::vector<double> &f_hat, const std::vector<double> &f_true, const std::vector<int> &permutation)
{
    if (f_hat.size() != f_true.size() || permutation.size() != f_true.size() || f_true.empty())
        throw Error(ErrorCode::invalid_configuration, "CFO vectors and permutation must have K entries");
    double acc = 0.0;
    for (std::size_t k = 0; k < f_true.size(); ++k)
    {
        const double e = frequency_error(f_hat.at(static_cast<std::size_t>(permutation[k])), f_true[k]);
        acc += e * e;
    }
    return acc / static_cast<double>(f_true.size());
}

BitErrors count_bit_errors(const IndexMatrix &aligned, const IndexMatrix &truth, const Constellation &constellation)
{
    check_shapes(aligned, truth);
    BitErrors out;
    for (Eigen::Index k = 0; k < truth.rows(); ++k)
        for (Eigen::Index i = 0; i < truth.cols(); ++i)
            out.errors += constellation.bit_distance(static_cast<std::size_t>(aligned(k, i)),
                                                     static_cast<std::size_t>(truth(k, i)));
    out.bits = static_cast<long>(truth.size()) * constellation.bits_per_symbol();
    return out;
}

double ber(const IndexMatrix &aligned, const IndexMatrix &truth, const Constellation &constellation)
{
    return count_bit_errors(aligned, truth, constellation).rate();
}

std::vector<double> interference_per_row(const CMatrix &mixing_estimate, const CMatrix &mixing)
{
    if (mixing_estimate.rows() != mixing.rows() || mixing_estimate.cols() != mixing.cols())
        throw Error(ErrorCode::invalid_configuration, "mixing matrices must have equal shape");
    const CMatrix G = mixing_estimate.completeOrthogonalDecomposition().pseudoInverse() * mixing;
    const int K = static_cast<int>(G.rows());
    const Eigen::MatrixXd power = G.cwiseAbs2();

    std::vector<int> perm(static_cast<std::size_t>(K));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> best;
    double best_mean = std::numeric_limits<double>::infinity();
    do
    {
        std::vector<double> ratios;
        double mean = 0.0;
        for (int r = 0; r < K; ++r)
        {
            const double on = power(r, perm[static_cast<std::size_t>(r)]);
            const double off = power.row(r).sum() - on;
            const double ratio = on > 0.0 ? off / on : std::numeric_limits<double>::infinity();
            ratios.push_back(ratio);
            mean += ratio;
        }
        mean /= K;
        if (best.empty() || mean < best_mean)
        {
            best_mean = mean;
            best = ratios;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double interference_to_signal(const CMatrix &mixing_estimate, const CMatrix &mixing)
{
    const auto rows = interference_per_row(mixing_estimate, mixing);
    return std::accumulate(rows.begin(), rows.end(), 0.0) / static_cast<double>(rows.size());
}

double interference_to_signal_db(const CMatrix &mixing_estimate, const CMatrix &mixing)
{
    return 10.0 * std::log10(interference_to_signal(mixing_estimate, mixing));
}

} // namespace blindcfo::harness
