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

#include <stdexcept>
#include <string>
#include <string_view>

namespace blindcfo
{

enum class ErrorCode
{
    invalid_configuration,
    degenerate_mixture,
    singular_equalizer,
    unfittable_column,
    pilot_generation_failure,
    no_peak,
    unsupported_scale,
    sweep_failed,
    io_failure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type thrown by every blindcfo operation. The code identifies the failure class so that
/// callers (e.g. the Monte-Carlo driver) can decide whether a trial is excluded or the run aborted.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::invalid_configuration:
        return "invalid-configuration";
    case ErrorCode::degenerate_mixture:
        return "degenerate-mixture";
    case ErrorCode::singular_equalizer:
        return "singular-equalizer";
    case ErrorCode::unfittable_column:
        return "unfittable-column";
    case ErrorCode::pilot_generation_failure:
        return "pilot-generation-failure";
    case ErrorCode::no_peak:
        return "no-peak";
    case ErrorCode::unsupported_scale:
        return "unsupported-scale";
    case ErrorCode::sweep_failed:
        return "sweep-failed";
    case ErrorCode::io_failure:
        return "io-failure";
    }
    return "unknown";
}

} // namespace blindcfo
