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

#pragma once

/**
 * @file
 * Can Bob tell whether Alice measured her half of an entangled pair?
 *
 * Alice always measures with the Born rule and collapses the shared state by
 * projection. Bob reads his half with an arbitrary ProbabilityRule applied
 * to the global pure state through the lifted projectors 1 (x) R_j. When
 * Alice measured, Bob faces a proper mixture and his distribution is the
 * weight-averaged rule output over its members.
 */

#include <cstddef>
#include <vector>

#include "qmeasure/distribution.hpp"
#include "qmeasure/measurement.hpp"
#include "qmeasure/observable.hpp"
#include "qmeasure/state.hpp"

namespace qmeasure {

class TelepathyScenario {
  public:
    /// `state` must have exactly two subsystems; `alice_obs` acts on the
    /// first and `bob_obs` on the second. Throws InvalidInput otherwise.
    TelepathyScenario(StateVector state, Observable alice_obs,
                      Observable bob_obs, ProbabilityRule bob_rule);

    [[nodiscard]] const StateVector &state() const noexcept { return state_; }
    [[nodiscard]] const Observable &alice_obs() const noexcept {
        return alice_obs_;
    }
    [[nodiscard]] const Observable &bob_obs() const noexcept {
        return bob_obs_;
    }
    [[nodiscard]] const ProbabilityRule &bob_rule() const noexcept {
        return bob_rule_;
    }

    /// Alice's observable lifted to the pair.
    [[nodiscard]] const Observable &alice_global() const noexcept {
        return alice_global_;
    }
    /// Bob's observable lifted to the pair.
    [[nodiscard]] const Observable &bob_global() const noexcept {
        return bob_global_;
    }

  private:
    StateVector state_;
    Observable alice_obs_;
    Observable bob_obs_;
    ProbabilityRule bob_rule_;
    Observable alice_global_;
    Observable bob_global_;
};

struct EnsembleMember {
    double weight;
    StateVector state;
};

/// Classical mixture of pure states; weights are nonnegative and sum to 1.
class Ensemble {
  public:
    explicit Ensemble(std::vector<EnsembleMember> members);

    [[nodiscard]] const std::vector<EnsembleMember> &members() const noexcept {
        return members_;
    }

  private:
    std::vector<EnsembleMember> members_;
};

/// Born weights of Alice's branches with the collapsed pair states; zero
/// weight branches are dropped.
Ensemble alice_measures(const TelepathyScenario &scenario);

OutcomeDistribution bob_distribution_with_alice(const TelepathyScenario &scenario);
OutcomeDistribution bob_distribution_without_alice(const TelepathyScenario &scenario);

/// Total-variation distance between Bob's two arms.
double signaling_gap(const TelepathyScenario &scenario);

/// The converse protocol: the second party (Bob) measures with the Born
/// rule and the first party (Alice) reads with `receiver_rule`. Implemented
/// by swapping the pair's subsystems.
TelepathyScenario swap_roles(const TelepathyScenario &scenario,
                             const ProbabilityRule &receiver_rule);

/// Empirical distribution of Bob's outcomes over `shots` pairs. `alice_measures`
/// selects the arm (the transmitted bit). Throws InvalidInput for zero shots.
OutcomeDistribution channel_simulation(const TelepathyScenario &scenario,
                                       bool alice_measures, std::size_t shots,
                                       Sampler &rng);

/// (|00> + |11>) / sqrt(2).
StateVector bell_pair();
/// sqrt(p)|00> + sqrt(1 - p)|11>; p in [0, 1].
StateVector asymmetric_pair(double p);

} // namespace qmeasure
