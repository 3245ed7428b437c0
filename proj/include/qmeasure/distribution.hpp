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

#include <cstddef>
#include <vector>

namespace qmeasure {

/// Finite probability vector over unique outcome labels. Labels are branch
/// or pointer indices; eigenvalues travel separately as metadata.
class OutcomeDistribution {
  public:
    OutcomeDistribution(std::vector<std::size_t> labels,
                        std::vector<double> probs);

    /// Labels 0..probs.size()-1.
    explicit OutcomeDistribution(std::vector<double> probs);

    [[nodiscard]] const std::vector<std::size_t> &labels() const noexcept {
        return labels_;
    }
    [[nodiscard]] const std::vector<double> &probs() const noexcept {
        return probs_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }

    /// Probability of `label`; throws InvalidInput if absent.
    [[nodiscard]] double probability_of(std::size_t label) const;

  private:
    std::vector<std::size_t> labels_;
    std::vector<double> probs_;
};

/// Total-variation distance; both distributions must carry the same label
/// set (order may differ).
double tv_distance(const OutcomeDistribution &p, const OutcomeDistribution &q);

} // namespace qmeasure
