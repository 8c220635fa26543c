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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace blindcfo
{

using cx = std::complex<double>;

/// Rows are antennas/polyphase branches or users, columns are symbol instants.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
using MaskMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

using Seed = std::uint64_t;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// SNR sentinel for noiseless synthesis.
inline constexpr double noiseless = std::numeric_limits<double>::infinity();

/// Wraps a normalized frequency (cycles/symbol) into [-1/2, 1/2).
inline double wrap_frequency(double f)
{
    double w = f - std::floor(f + 0.5);
    if (w >= 0.5)
        w -= 1.0;
    return w;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double phi)
{
    double w = std::remainder(phi, two_pi);
    if (w <= -std::numbers::pi)
        w += two_pi;
    return w;
}

} // namespace blindcfo
