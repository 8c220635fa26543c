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

#include "blindcfo/constellation.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>

#include "blindcfo/error.hpp"

namespace blindcfo
{

namespace
{
constexpr double point_tolerance = 1e-9;

unsigned gray(std::size_t i) { return static_cast<unsigned>(i ^ (i >> 1)); }
} // namespace

Constellation::Constellation(std::string name, std::vector<cx> points, int symmetry_order, int bits_per_symbol,
                             std::vector<unsigned> labels)
    : name_(std::move(name)), points_(std::move(points)), labels_(std::move(labels)),
      symmetry_order_(symmetry_order), bits_per_symbol_(bits_per_symbol)
{
    if (symmetry_order_ < 1)
        throw Error(ErrorCode::invalid_configuration, "symmetry order must be >= 1");
    if (bits_per_symbol_ < 0 || bits_per_symbol_ > 16)
        throw Error(ErrorCode::invalid_configuration, "bits per symbol out of range");
    if (points_.empty())
        return;

    if (labels_.empty())
    {
        labels_.resize(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i)
            labels_[i] = gray(i);
    }
    if (labels_.size() != points_.size())
        throw Error(ErrorCode::invalid_configuration, "one label per point required");
    for (auto l : labels_)
        if (bits_per_symbol_ < 16 && l >= (1u << bits_per_symbol_))
            throw Error(ErrorCode::invalid_configuration, "label does not fit bits_per_symbol");

    double power = 0.0;
    for (const auto &p : points_)
        power += std::norm(p);
    power /= static_cast<double>(points_.size());
    if (std::abs(power - 1.0) > 1e-9)
        throw Error(ErrorCode::invalid_configuration, "constellation must have unit average power");

    const cx step = std::polar(1.0, two_pi / symmetry_order_);
    rotate_one_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
    {
        const cx target = points_[i] * step;
        auto it = std::find_if(points_.begin(), points_.end(),
                               [&](const cx &p) { return std::abs(p - target) < point_tolerance; });
        if (it == points_.end())
            throw Error(ErrorCode::invalid_configuration,
                        "constellation '" + name_ + "' is not invariant under its symmetry rotation");
        rotate_one_[i] = static_cast<std::size_t>(it - points_.begin());
    }
}

Constellation Constellation::qam4()
{
    // Exact +-r components so that multiplying by j maps the alphabet onto itself bit for bit.
    const double r = 1.0 / std::numbers::sqrt2;
    return Constellation("4QAM", {cx(r, r), cx(-r, r), cx(-r, -r), cx(r, -r)}, 4, 2);
}

Constellation Constellation::bpsk() { return Constellation("BPSK", {cx(1.0, 0.0), cx(-1.0, 0.0)}, 2, 1); }

Constellation Constellation::psk(int order)
{
    if (order < 2 || !std::has_single_bit(static_cast<unsigned>(order)))
        throw Error(ErrorCode::invalid_configuration, "PSK order must be a power of two >= 2");
    std::vector<cx> pts;
    for (int i = 0; i < order; ++i)
        pts.push_back(std::polar(1.0, two_pi * i / order));
    return Constellation(std::to_string(order) + "PSK", std::move(pts), order, std::countr_zero(static_cast<unsigned>(order)));
}

Constellation Constellation::from_name(std::string_view name)
{
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "4QAM" || upper == "QPSK")
        return qam4();
    if (upper == "BPSK" || upper == "2PSK")
        return bpsk();
    if (upper == "8PSK")
        return psk(8);
    if (upper == "16PSK")
        return psk(16);
    throw Error(ErrorCode::invalid_configuration, "unknown constellation '" + std::string(name) + "'");
}

std::size_t Constellation::nearest(cx sample) const
{
    std::size_t best = 0;
    double best_d = std::norm(sample - points_.at(0));
    for (std::size_t i = 1; i < points_.size(); ++i)
    {
        const double d = std::norm(sample - points_[i]);
        if (d < best_d)
        {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::size_t Constellation::rotate(std::size_t index, int steps) const
{
    int s = steps % symmetry_order_;
    if (s < 0)
        s += symmetry_order_;
    for (int i = 0; i < s; ++i)
        index = rotate_one_.at(index);
    return index;
}

int Constellation::bit_distance(std::size_t a, std::size_t b) const
{
    return std::popcount(labels_.at(a) ^ labels_.at(b));
}

} // namespace blindcfo
