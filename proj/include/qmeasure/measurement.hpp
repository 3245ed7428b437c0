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
 * Probability rules, selective and nonselective state updates, and the
 * measure-then-evolve (LL-scheme) channel.
 */

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "qmeasure/distribution.hpp"
#include "qmeasure/observable.hpp"
#include "qmeasure/state.hpp"

namespace qmeasure {

/// Branches with probability at or below this are treated as impossible by
/// the state-update operations.
inline constexpr double ZERO_PROB_TOL = 1e-20;
/// Off-diagonal block size tolerated by classical_selective.
inline constexpr double DECOHERED_TOL = 1e-8;

/// Seeded pseudorandom source owned by the caller.
using Sampler = std::mt19937_64;

/**
 * Maps the Born weights w_i = |P_i psi|^2 of a pure state to outcome
 * probabilities. The exponent family gives p_i proportional to w_i^q; q = 1
 * is the Born rule. Every member is deterministic on branch eigenstates.
 */
class ProbabilityRule {
  public:
    enum class Kind { Born, NonBornExponent };

    static ProbabilityRule born() { return ProbabilityRule(Kind::Born, 1.0); }
    /// Throws InvalidInput unless q is finite and positive.
    static ProbabilityRule non_born_exponent(double q);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double exponent() const noexcept { return exponent_; }

    [[nodiscard]] OutcomeDistribution
    from_weights(std::span<const double> born_weights) const;

  private:
    ProbabilityRule(Kind kind, double q) : kind_(kind), exponent_(q) {}

    Kind kind_;
    double exponent_;
};

struct MeasurementRecord {
    std::size_t branch_index;
    double eigenvalue;
    double probability;
    StateVector post_state;
};

/// |P_i s|^2 for every branch.
std::vector<double> branch_weights(const StateVector &s, const Observable &obs);

OutcomeDistribution rule_probabilities(const ProbabilityRule &rule,
                                       const StateVector &s,
                                       const Observable &obs);

/// P_i s / |P_i s|. Throws ZeroProbabilityBranch when the projection
/// vanishes.
StateVector project_update(const StateVector &s, const Observable &obs,
                           std::size_t branch);

/// Draws one label from `dist`.
std::size_t sample(const OutcomeDistribution &dist, Sampler &rng);

MeasurementRecord measure_selective(const StateVector &s,
                                    const Observable &obs,
                                    const ProbabilityRule &rule, Sampler &rng);
MeasurementRecord measure_selective(const StateVector &s,
                                    const Observable &obs,
                                    const ProbabilityRule &rule,
                                    std::size_t forced_branch);

/// Ideal measurement followed by a result-dependent unitary: record n holds
/// the Born probability of branch n and U_n applied to the projected state.
/// Zero-probability branches are left out.
std::vector<MeasurementRecord>
ll_channel(const StateVector &s, const Observable &obs,
           std::span<const Operator> post_unitaries);

/// U_m = exp(-i phase_m) * identity, one per branch.
std::vector<Operator> phase_shift_unitaries(const Observable &obs,
                                            std::span<const double> phases);

/// One unitary per branch taking the projected state of `s` to `target`.
/// Zero-probability branches get the identity.
std::vector<Operator> preparation_unitaries(const StateVector &s,
                                            const Observable &obs,
                                            const StateVector &target);

/// Unitary whose first column is `v`.
Matrix unitary_with_first_column(const Amplitudes &v);

/// rho -> sum_i P_i rho P_i.
DensityMatrix nonselective_channel(const DensityMatrix &rho,
                                   const Observable &obs);

[[nodiscard]] bool is_block_diagonal(const DensityMatrix &rho,
                                     const Observable &obs,
                                     double tol = DECOHERED_TOL);

struct SelectiveOutcome {
    double probability;
    DensityMatrix state;
};

/// Reads branch `branch` off an already decohered state: probability
/// Tr(P_i rho), state P_i rho P_i / p_i. A block-diagonal rho is a mixture of
/// branch eigenstates, on which every rule is deterministic, so the
/// probability does not depend on `rule`.
SelectiveOutcome classical_selective(const DensityMatrix &rho,
                                     const Observable &obs,
                                     std::size_t branch,
                                     const ProbabilityRule &rule);

/// sum_i p_i S(rho_i) over the branches of a decohered state.
double average_selective_entropy(const DensityMatrix &rho,
                                 const Observable &obs);

} // namespace qmeasure
