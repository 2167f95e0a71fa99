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

#include "qpelab/adaptive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "qpelab/angle.hpp"
#include "qpelab/errors.hpp"

namespace qpelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interval_half_width(std::int64_t next_depth) {
    return kPi / (2.0 * static_cast<double>(next_depth));
}

// Owns the mutable state of one estimation run.
class Runner {
  public:
    Runner(const AlgorithmConfig& config, double theta_true)
        : config_(config),
          theta_true_(wrap_angle(theta_true)),
          rng_(config.seed),
          posterior_(GridPosterior::uniform(std::max(config.grid_size, kMinGridSize))),
          left_(config.total_resources) {}

    AlgorithmTrace run();

  private:
    std::int64_t shoot(const Circuit& circuit, std::int64_t shots);
    void ensure_resolution(std::int64_t depth);
    double estimate_within(const std::optional<CircularInterval>& interval) const;
    void stay(StepRecord& step, std::int64_t depth, const std::optional<CircularInterval>& interval);

    const AlgorithmConfig& config_;
    double theta_true_;
    Rng rng_;
    GridPosterior posterior_;
    std::int64_t left_;
    double information_ = 0.0;
    std::vector<CircuitTally> tallies_;
    std::map<std::pair<std::int64_t, std::uint64_t>, std::size_t> tally_index_;
};

std::int64_t Runner::shoot(const Circuit& circuit, std::int64_t shots) {
    const std::int64_t x = sample_outcome(circuit, shots, theta_true_, config_.noise, rng_);
    posterior_.update(MeasurementRecord(circuit, shots, static_cast<double>(x)), config_.noise);
    left_ -= circuit.depth() * shots;
    information_ += circuit_information(circuit.depth(), shots, config_.noise);

    const auto key = std::make_pair(circuit.depth(), std::bit_cast<std::uint64_t>(circuit.phase()));
    auto [it, inserted] = tally_index_.emplace(key, tallies_.size());
    if (inserted) tallies_.push_back(CircuitTally{circuit, 0, 0});
    tallies_[it->second].shots += shots;
    tallies_[it->second].successes += x;
    ensure_resolution(0);
    return x;
}

// Rebuilds the posterior on a finer grid by replaying every observation; the likelihood
// product is exact at the new nodes, unlike interpolating the old grid.
void Runner::ensure_resolution(std::int64_t depth) {
    const std::int64_t grid = resolving_grid_size(posterior_.grid_size(), depth, information_);
    if (grid == posterior_.grid_size()) return;
    GridPosterior refined = GridPosterior::uniform(grid);
    for (const auto& t : tallies_) {
        refined.update(MeasurementRecord(t.circuit, t.shots, static_cast<double>(t.successes)), config_.noise);
    }
    posterior_ = std::move(refined);
}

double Runner::estimate_within(const std::optional<CircularInterval>& interval) const {
    return interval ? map_estimate_within(posterior_, *interval) : map_estimate(posterior_);
}

// Spends whatever is affordable at `depth`, retuning the phase to the current estimate after
// every execution.
void Runner::stay(StepRecord& step, std::int64_t depth, const std::optional<CircularInterval>& interval) {
    const double n = static_cast<double>(depth);
    while (left_ >= depth) {
        const Circuit circuit(depth, kPi / 2 - n * estimate_within(interval));
        step.successes += shoot(circuit, 1);
        step.shots_used += 1;
    }
}

AlgorithmTrace Runner::run() {
    AlgorithmTrace trace;
    trace.config = config_;
    trace.theta_true = theta_true_;
    const NoiseModel& noise = config_.noise;

    // Step 1: alternate (1, 0) and (1, pi/4) until the first interval is confident.
    std::int64_t step_index = 1;
    std::int64_t depth = 1;
    std::int64_t upcoming = next_depth(2, config_);
    ensure_resolution(upcoming);
    {
        StepRecord step;
        step.step_index = 1;
        step.circuit = Circuit(1, 0.0);
        step.epsilon = required_confidence(1, config_);
        const std::int64_t budget = max_shots_for_step(1, config_);
        const std::int64_t cap = budget > 0 ? 2 * budget : left_;
        const double half_width = interval_half_width(upcoming);
        const Circuit circuits[2] = {Circuit(1, 0.0), Circuit(1, kPi / 4)};
        double center = 0.0;
        double conf = 0.0;
        while (left_ >= 1) {
            if (step.gate_shots >= cap) {
                step.cap_hit = true;
                break;
            }
            step.successes += shoot(circuits[step.gate_shots % 2], 1);
            step.gate_shots += 1;
            center = choose_center(map_estimate(posterior_), std::nullopt, upcoming, 1);
            conf = confidence(posterior_, CircularInterval(center, half_width));
            if (conf >= 1.0 - step.epsilon) {
                step.gate_passed = true;
                break;
            }
        }
        step.shots_used = step.gate_shots;
        step.interval = CircularInterval(center, half_width);
        step.confidence_reached = conf;
        trace.steps.push_back(step);
    }

    std::optional<CircularInterval> interval;  // unset during step 1: estimates are unrestricted
    while (true) {
        StepRecord& step = trace.steps.back();
        if (left_ < depth) {
            step.decision = StepDecision::kExhaust;
            break;
        }

        const std::int64_t deeper = next_depth(step_index + 1, config_);
        bool deepen = false;
        std::optional<Circuit> deep_circuit;
        if (deeper > depth) {
            ensure_resolution(deeper);
            const double estimate = estimate_within(interval);
            const Circuit stay_circuit(depth, kPi / 2 - static_cast<double>(depth) * estimate);
            const double center_next =
                choose_center(estimate, step_index == 1 ? step.interval : *interval,
                              next_depth(step_index + 2, config_), step_index + 1);
            deep_circuit = Circuit(deeper, kPi / 2 - static_cast<double>(deeper) * center_next);

            const double loss_stay = predict_loss(posterior_, stay_circuit, left_, noise, config_.loss_kind);
            const double loss_deep = left_ >= deeper
                                         ? predict_loss(posterior_, *deep_circuit, left_, noise, config_.loss_kind)
                                         : kInf;
            step.predicted_loss_stay = loss_stay;
            if (std::isfinite(loss_deep)) step.predicted_loss_deepen = loss_deep;
            deepen = loss_deep < loss_stay;
        }
        if (step_index == 1 && !interval) {
            // From here on estimates are confined to the current interval.
            interval = step.interval;
            if (!deepen) interval.reset();
        }

        if (!deepen) {
            step.decision = StepDecision::kStay;
            stay(step, depth, interval);
            break;
        }

        step.decision = StepDecision::kDeepen;
        const CircularInterval previous = step.interval;
        ++step_index;
        depth = deeper;
        upcoming = next_depth(step_index + 1, config_);
        const double half_width = interval_half_width(upcoming);

        StepRecord next;
        next.step_index = step_index;
        next.circuit = *deep_circuit;
        next.epsilon = required_confidence(depth, config_);
        double center = choose_center(map_estimate_within(posterior_, previous), previous, upcoming, step_index);
        double conf = confidence(posterior_, CircularInterval(center, half_width));

        // With the depth already at its cap there is no later decision to gate.
        if (upcoming > depth) {
            const std::int64_t budget = max_shots_for_step(step_index, config_);
            const std::int64_t cap = budget > 0 ? 2 * budget : left_;
            while (left_ >= depth) {
                if (next.gate_shots >= cap) {
                    next.cap_hit = true;
                    break;
                }
                next.successes += shoot(next.circuit, 1);
                next.gate_shots += 1;
                center = choose_center(map_estimate_within(posterior_, previous), previous, upcoming, step_index);
                conf = confidence(posterior_, CircularInterval(center, half_width));
                if (conf >= 1.0 - next.epsilon) break;
            }
        }
        next.gate_passed = conf >= 1.0 - next.epsilon;
        next.shots_used = next.gate_shots;
        next.interval = CircularInterval(center, half_width);
        next.confidence_reached = conf;
        interval = next.interval;
        trace.steps.push_back(next);
    }

    if (left_ > 0) {
        const Circuit circuit(1, kPi / 2 - estimate_within(interval));
        const std::int64_t shots = left_;
        const std::int64_t x = shoot(circuit, shots);
        trace.remainder = CircuitTally{circuit, shots, x};
    }

    trace.resources_spent = config_.total_resources - left_;
    trace.grid_size_used = posterior_.grid_size();
    trace.final_estimate = config_.estimator == EstimatorKind::kMap ? map_estimate(posterior_)
                                                                    : circular_mean_estimate(posterior_);
    trace.final_expected_loss = expected_loss(posterior_, trace.final_estimate, config_.loss_kind);
    trace.circuit_tallies = tallies_;
    return trace;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
    return kind == EstimatorKind::kMap ? "map" : "mean";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
    if (name == "map") return EstimatorKind::kMap;
    if (name == "mean" || name == "circular-mean") return EstimatorKind::kCircularMean;
    throw InvalidArgument("unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(StepDecision decision) {
    switch (decision) {
        case StepDecision::kDeepen:
            return "deepen";
        case StepDecision::kStay:
            return "stay";
        case StepDecision::kExhaust:
            return "exhaust";
    }
    return "unknown";
}

void AlgorithmConfig::validate() const {
    if (total_resources < 2) throw InvalidArgument("total resources must be >= 2");
    if (depth_limit < 1) throw InvalidArgument("depth limit must be >= 1");
    if (!(epsilon_exponent > 0.0)) throw InvalidArgument("epsilon exponent must be positive");
    if (!(epsilon_scale > 0.0)) throw InvalidArgument("epsilon scale must be positive");
    if (grid_size < kMinGridSize) throw InvalidArgument("grid size must be >= 64");
}

std::int64_t AlgorithmTrace::max_depth_used() const {
    std::int64_t m = 0;
    for (const auto& t : circuit_tallies) {
        if (t.shots > 0) m = std::max(m, t.circuit.depth());
    }
    return m;
}

double required_confidence(std::int64_t depth, const AlgorithmConfig& config) {
    const double ratio = static_cast<double>(depth) / static_cast<double>(config.total_resources);
    return std::min(1.0, config.epsilon_scale * std::pow(ratio, config.epsilon_exponent));
}

std::int64_t next_depth(std::int64_t step_index, const AlgorithmConfig& config) {
    if (step_index < 1) throw InvalidArgument("step index must be >= 1");
    const std::int64_t cap = optimal_depth(config.noise, config.depth_limit);
    if (step_index - 1 >= 62) return cap;
    return std::min(std::int64_t{1} << (step_index - 1), cap);
}

double choose_center_with_width(double estimate, const std::optional<CircularInterval>& previous,
                                double new_half_width, std::int64_t step_index) {
    if (step_index == 1 || !previous) return wrap_angle(estimate);
    const double slack = previous->half_width() - new_half_width;
    if (slack < -1e-12) {
        std::ostringstream msg;
        msg << "interval of half-width " << new_half_width << " cannot nest inside half-width "
            << previous->half_width();
        throw InfeasibleInterval(msg.str());
    }
    const double offset = signed_angle_difference(estimate, previous->center());
    if (offset < -slack) return wrap_angle(previous->center() - std::max(slack, 0.0));
    if (offset > slack) return wrap_angle(previous->center() + std::max(slack, 0.0));
    return wrap_angle(estimate);
}

double choose_center(double estimate, const std::optional<CircularInterval>& previous, std::int64_t next_depth,
                     std::int64_t step_index) {
    if (next_depth < 1) throw InvalidArgument("next depth must be >= 1");
    return choose_center_with_width(estimate, previous, interval_half_width(next_depth), step_index);
}

std::int64_t chernoff_shot_budget(double eps, double eps_previous, std::int64_t depth, const NoiseModel& noise) {
    const double bracket = std::log(2.0 / eps) - 0.25 * std::log(2.0 / eps_previous);
    const double contrast = noise.contrast(static_cast<double>(depth));
    const double value = 32.0 / (kPi * kPi * contrast * contrast) * bracket;
    if (!(value > 0.0)) return 0;
    return static_cast<std::int64_t>(std::ceil(value));
}

// Step 1 has no earlier interval; its term ln(2/eps_0)/4 is taken as zero (eps_0 = 2).
std::int64_t max_shots_for_step(std::int64_t step_index, const AlgorithmConfig& config) {
    if (step_index < 1) throw InvalidArgument("step index must be >= 1");
    const std::int64_t depth = next_depth(step_index, config);
    const double eps = required_confidence(depth, config);
    const double eps_previous = step_index == 1 ? 2.0 : required_confidence(next_depth(step_index - 1, config), config);
    return chernoff_shot_budget(eps, eps_previous, depth, config.noise);
}

AlgorithmTrace run(const AlgorithmConfig& config, double theta_true) {
    config.validate();
    return Runner(config, theta_true).run();
}

std::vector<std::string> check_trace(const AlgorithmTrace& trace) {
    std::vector<std::string> problems;
    const AlgorithmConfig& cfg = trace.config;

    std::int64_t spent = 0;
    for (const auto& t : trace.circuit_tallies) spent += t.circuit.depth() * t.shots;
    if (spent != trace.resources_spent) {
        problems.push_back("resources_spent " + std::to_string(trace.resources_spent) + " != tallied " +
                           std::to_string(spent));
    }
    if (trace.resources_spent > cfg.total_resources) {
        problems.push_back("overdraw: spent " + std::to_string(trace.resources_spent) + " of " +
                           std::to_string(cfg.total_resources));
    }
    if (!(trace.final_expected_loss >= 0.0)) problems.push_back("negative final expected loss");

    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const StepRecord& s = trace.steps[k];
        const std::string tag = "step " + std::to_string(s.step_index) + ": ";
        if (s.step_index != static_cast<std::int64_t>(k) + 1) problems.push_back(tag + "non-consecutive index");
        if (s.circuit.depth() != next_depth(s.step_index, cfg)) problems.push_back(tag + "depth off schedule");
        const double expected_width = interval_half_width(next_depth(s.step_index + 1, cfg));
        if (std::abs(s.interval.half_width() - expected_width) > 1e-12) {
            problems.push_back(tag + "interval half-width is not pi / (2 n_next)");
        }
        if (k > 0 && !s.interval.is_within(trace.steps[k - 1].interval, 1e-9)) {
            problems.push_back(tag + "interval not nested in previous interval");
        }
        if (!(s.confidence_reached >= 0.0 && s.confidence_reached <= 1.0)) {
            problems.push_back(tag + "confidence out of [0, 1]");
        }
        if (s.decision == StepDecision::kDeepen && !s.cap_hit && s.confidence_reached < 1.0 - s.epsilon) {
            problems.push_back(tag + "deepened before the confidence gate passed");
        }
        if (s.decision == StepDecision::kDeepen && k + 1 == trace.steps.size()) {
            problems.push_back(tag + "deepen decision without a following step");
        }
    }
    return problems;
}

}  // namespace qpelab
