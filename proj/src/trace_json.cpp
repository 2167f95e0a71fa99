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

#include "qpelab/trace_json.hpp"

#include <json.hpp>

namespace qpelab {

namespace {

using nlohmann::ordered_json;

ordered_json noise_json(const NoiseModel& noise) {
    return {{"alpha", noise.alpha()}, {"beta", noise.beta()}};
}

ordered_json circuit_json(const Circuit& c) {
    return {{"depth", c.depth()}, {"phase", c.phase()}};
}

ordered_json interval_json(const CircularInterval& i) {
    return {{"center", i.center()}, {"half_width", i.half_width()}};
}

ordered_json config_json(const AlgorithmConfig& c) {
    return {{"total_resources", c.total_resources},
            {"depth_limit", c.depth_limit},
            {"epsilon_exponent", c.epsilon_exponent},
            {"epsilon_scale", c.epsilon_scale},
            {"noise", noise_json(c.noise)},
            {"loss", std::string(to_string(c.loss_kind))},
            {"estimator", std::string(to_string(c.estimator))},
            {"grid_size", c.grid_size},
            {"seed", c.seed}};
}

ordered_json tally_json(const CircuitTally& t) {
    return {{"circuit", circuit_json(t.circuit)}, {"shots", t.shots}, {"successes", t.successes}};
}

ordered_json optional_json(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string trace_to_json(const AlgorithmTrace& trace, int indent) {
    ordered_json steps = ordered_json::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"step_index", s.step_index},
                         {"circuit", circuit_json(s.circuit)},
                         {"gate_shots", s.gate_shots},
                         {"shots_used", s.shots_used},
                         {"successes", s.successes},
                         {"interval", interval_json(s.interval)},
                         {"confidence_reached", s.confidence_reached},
                         {"epsilon", s.epsilon},
                         {"gate_passed", s.gate_passed},
                         {"cap_hit", s.cap_hit},
                         {"predicted_loss_stay", optional_json(s.predicted_loss_stay)},
                         {"predicted_loss_deepen", optional_json(s.predicted_loss_deepen)},
                         {"decision", std::string(to_string(s.decision))}});
    }
    ordered_json tallies = ordered_json::array();
    for (const auto& t : trace.circuit_tallies) tallies.push_back(tally_json(t));

    ordered_json doc = {{"config", config_json(trace.config)},
                        {"theta_true", trace.theta_true},
                        {"steps", steps},
                        {"remainder", trace.remainder ? tally_json(*trace.remainder) : ordered_json(nullptr)},
                        {"resources_spent", trace.resources_spent},
                        {"max_depth_used", trace.max_depth_used()},
                        {"grid_size_used", trace.grid_size_used},
                        {"final_estimate", trace.final_estimate},
                        {"final_expected_loss", trace.final_expected_loss},
                        {"circuit_tallies", tallies}};
    return doc.dump(indent);
}

std::string sweep_manifest_json(const SweepConfig& config, std::span<const SweepCellResult> results,
                                bool interrupted, int indent) {
    ordered_json strategies = ordered_json::array();
    for (Strategy s : config.strategies) strategies.push_back(std::string(to_string(s)));

    ordered_json failed = ordered_json::array();
    ordered_json trace_issues = ordered_json::array();
    for (const auto& r : results) {
        auto key = [&] {
            return ordered_json{{"strategy", std::string(to_string(r.strategy))},
                                {"n_tot", r.n_tot},
                                {"theta_index", r.theta_index},
                                {"rep", r.rep}};
        };
        if (!r.ok) {
            ordered_json entry = key();
            entry["error"] = r.error;
            failed.push_back(entry);
        }
        if (!r.trace_problems.empty()) {
            ordered_json entry = key();
            entry["problems"] = r.trace_problems;
            trace_issues.push_back(entry);
        }
    }

    const std::size_t expected = config.strategies.size() * config.resource_ladder.size() *
                                 static_cast<std::size_t>(config.theta_count) *
                                 static_cast<std::size_t>(config.repetitions);
    ordered_json doc = {{"artifact", "qpe_lab"},
                        {"version", QPELAB_VERSION},
                        {"config",
                         {{"strategies", strategies},
                          {"resource_ladder", config.resource_ladder},
                          {"theta_count", config.theta_count},
                          {"repetitions", config.repetitions},
                          {"noise", noise_json(config.noise)},
                          {"algorithm", config_json(config.algorithm)},
                          {"master_seed", config.master_seed},
                          {"shots_per_depth", config.shots_per_depth},
                          {"record_runtime", config.record_runtime}}},
                        {"cells_expected", expected},
                        {"cells_completed", results.size()},
                        {"interrupted", interrupted},
                        {"failed_cells", failed},
                        {"trace_violations", trace_issues}};
    return doc.dump(indent);
}

}  // namespace qpelab
