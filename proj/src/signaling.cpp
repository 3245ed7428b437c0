// Copyright 2026 The qmeasure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeasure/signaling.hpp"

#include <array>
#include <cmath>

namespace qmeasure {

TelepathyScenario::TelepathyScenario(StateVector state, Observable alice_obs,
                                     Observable bob_obs,
                                     ProbabilityRule bob_rule)
    : state_(std::move(state)), alice_obs_(std::move(alice_obs)),
      bob_obs_(std::move(bob_obs)), bob_rule_(bob_rule),
      alice_global_([this] {
          if (state_.dims().size() != 2)
              throw Error(ErrorCode::InvalidInput,
                          "telepathy scenario needs a bipartite state");
          return embed(alice_obs_, state_.dims(), 0);
      }()),
      bob_global_(embed(bob_obs_, state_.dims(), 1)) {}

Ensemble::Ensemble(std::vector<EnsembleMember> members)
    : members_(std::move(members)) {
    if (members_.empty())
        throw Error(ErrorCode::InvalidInput, "empty ensemble");
    double total = 0.0;
    for (const auto &m : members_) {
        if (!(m.weight >= 0.0))
            throw Error(ErrorCode::InvalidInput, "negative ensemble weight");
        total += m.weight;
    }
    if (std::abs(total - 1.0) > NORM_TOL)
        throw Error(ErrorCode::InvalidInput, "ensemble weights do not sum to 1");
}

Ensemble alice_measures(const TelepathyScenario &scenario) {
    const auto &obs = scenario.alice_global();
    const auto weights = branch_weights(scenario.state(), obs);
    std::vector<EnsembleMember> members;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= ZERO_PROB_TOL)
            continue;
        members.push_back({weights[i], project_update(scenario.state(), obs, i)});
    }
    // Dropping negligible branches and roundoff both move the total by far
    // less than NORM_TOL; rescale so the weights are exact.
    double total = 0.0;
    for (const auto &m : members)
        total += m.weight;
    for (auto &m : members)
        m.weight /= total;
    return Ensemble(std::move(members));
}

OutcomeDistribution
bob_distribution_with_alice(const TelepathyScenario &scenario) {
    const auto ensemble = alice_measures(scenario);
    std::vector<double> acc(scenario.bob_obs().branch_count(), 0.0);
    for (const auto &member : ensemble.members()) {
        const auto d = rule_probabilities(scenario.bob_rule(), member.state,
                                          scenario.bob_global());
        for (std::size_t j = 0; j < acc.size(); ++j)
            acc[j] += member.weight * d[j];
    }
    return OutcomeDistribution(std::move(acc));
}

OutcomeDistribution
bob_distribution_without_alice(const TelepathyScenario &scenario) {
    return rule_probabilities(scenario.bob_rule(), scenario.state(),
                              scenario.bob_global());
}

double signaling_gap(const TelepathyScenario &scenario) {
    return tv_distance(bob_distribution_with_alice(scenario),
                       bob_distribution_without_alice(scenario));
}

TelepathyScenario swap_roles(const TelepathyScenario &scenario,
                             const ProbabilityRule &receiver_rule) {
    constexpr std::array<std::size_t, 2> swap{1, 0};
    return TelepathyScenario(permute_subsystems(scenario.state(), swap),
                             scenario.bob_obs(), scenario.alice_obs(),
                             receiver_rule);
}

OutcomeDistribution channel_simulation(const TelepathyScenario &scenario,
                                       bool alice_measures_bit,
                                       std::size_t shots, Sampler &rng) {
    if (shots == 0)
        throw Error(ErrorCode::InvalidInput, "shots must be at least 1");
    std::vector<std::size_t> counts(scenario.bob_obs().branch_count(), 0);
    if (alice_measures_bit) {
        const auto ensemble = alice_measures(scenario);
        std::vector<double> weights;
        std::vector<OutcomeDistribution> bob;
        for (const auto &m : ensemble.members()) {
            weights.push_back(m.weight);
            bob.push_back(rule_probabilities(scenario.bob_rule(), m.state,
                                             scenario.bob_global()));
        }
        const OutcomeDistribution which(std::move(weights));
        for (std::size_t k = 0; k < shots; ++k)
            ++counts[sample(bob[sample(which, rng)], rng)];
    } else {
        const auto dist = bob_distribution_without_alice(scenario);
        for (std::size_t k = 0; k < shots; ++k)
            ++counts[sample(dist, rng)];
    }
    std::vector<double> freq(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        freq[j] = static_cast<double>(counts[j]) / static_cast<double>(shots);
    return OutcomeDistribution(std::move(freq));
}

StateVector bell_pair() {
    Amplitudes a = Amplitudes::Zero(4);
    a(0) = a(3) = 1.0 / std::sqrt(2.0);
    return StateVector({2, 2}, a);
}

StateVector asymmetric_pair(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidInput, "asymmetric_pair: p outside [0, 1]");
    Amplitudes a = Amplitudes::Zero(4);
    a(0) = std::sqrt(p);
    a(3) = std::sqrt(1.0 - p);
    return StateVector::normalize({2, 2}, a);
}

} // namespace qmeasure
