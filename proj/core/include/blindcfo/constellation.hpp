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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "blindcfo/types.hpp"

namespace blindcfo
{

/// Unit-average-power symbol alphabet with a rotational symmetry group of order `symmetry_order`.
///
/// Every point is labeled with a bit pattern used for BER counting. The built-in PSK family
/// (including 4QAM) is ordered counterclockwise and Gray labeled, so that rotating by
/// 2*pi/symmetry_order maps index i to i+1 (mod M) and adjacent points differ in one bit.
class Constellation
{
  public:
    Constellation() = default;

    /// Labels default to the binary-reflected Gray code of the point index.
    /// Throws invalid_configuration if a non-empty alphabet is not unit power, is not closed
    /// under rotation by 2*pi/symmetry_order, or has labels that do not fit bits_per_symbol.
    Constellation(std::string name, std::vector<cx> points, int symmetry_order, int bits_per_symbol,
                  std::vector<unsigned> labels = {});

    /// (1+j)/sqrt2, (-1+j)/sqrt2, (-1-j)/sqrt2, (1-j)/sqrt2 labeled 00, 01, 11, 10.
    static Constellation qam4();
    static Constellation bpsk();
    /// M-PSK with points exp(j*2*pi*i/M); M must be a power of two.
    static Constellation psk(int order);
    /// Accepts "4QAM", "QPSK", "BPSK", "8PSK", "16PSK" (case-insensitive).
    static Constellation from_name(std::string_view name);

    const std::string &name() const noexcept { return name_; }
    const std::vector<cx> &points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    int symmetry_order() const noexcept { return symmetry_order_; }
    int bits_per_symbol() const noexcept { return bits_per_symbol_; }

    const cx &point(std::size_t index) const { return points_.at(index); }
    unsigned label(std::size_t index) const { return labels_.at(index); }

    /// Index of the closest point (ties resolve to the lowest index).
    std::size_t nearest(cx sample) const;

    /// Index of point(index) * exp(j*2*pi*steps/symmetry_order).
    std::size_t rotate(std::size_t index, int steps) const;

    /// Number of differing bits between the labels of two points.
    int bit_distance(std::size_t a, std::size_t b) const;

  private:
    std::string name_;
    std::vector<cx> points_;
    std::vector<unsigned> labels_;
    std::vector<std::size_t> rotate_one_; // index map for a single 2*pi/order step
    int symmetry_order_ = 1;
    int bits_per_symbol_ = 0;
};

} // namespace blindcfo
