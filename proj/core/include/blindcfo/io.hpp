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

#include <ostream>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "blindcfo/experiment.hpp"
#include "blindcfo/pll.hpp"
#include "blindcfo/sigmodel.hpp"

/// Replay and plot-data formats. Complex numbers are written as [re, im] pairs in JSON and as
/// separate re,im columns in CSV.
namespace blindcfo::io
{

/// {"K":2,"P":4,"gains":[[re,im],...],"delays":[...],"cfos":[...]}
nlohmann::json channel_to_json(const sigmodel::ChannelRealization &channel);
sigmodel::ChannelRealization channel_from_json(const nlohmann::json &j);
sigmodel::ChannelRealization load_channel(const std::string &path);

/// {"K":..,"N":..,"constellation":"4QAM","indices":[[...],...],"symbols":[[[re,im],...],...]}
nlohmann::json frame_to_json(const sigmodel::SymbolFrame &frame, const Constellation &constellation);
sigmodel::SymbolFrame frame_from_json(const nlohmann::json &j, const Constellation &constellation);

/// Header `user,re,im,stage`; stage is received (user = polyphase branch), decoupled or recovered.
void write_constellation_csv(std::ostream &out, const harness::TrialOutcome &outcome);

/// Header `sample,phase,freq,error`.
void write_pll_trace_csv(std::ostream &out, const pll::PllTrace &trace);

} // namespace blindcfo::io
