// Copyright 2026 The qpe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string>

#include "qpelab/adaptive.hpp"
#include "qpelab/harness.hpp"

namespace qpelab {

/// Full trace as a JSON document: config, steps, tallies, remainder and final summary.
std::string trace_to_json(const AlgorithmTrace& trace, int indent = 2);

/// Run manifest for a sweep: the complete configuration, the artifact version, cell counts,
/// failed cells with their messages, and trace-check violations.
std::string sweep_manifest_json(const SweepConfig& config, std::span<const SweepCellResult> results,
                                bool interrupted, int indent = 2);

}  // namespace qpelab
