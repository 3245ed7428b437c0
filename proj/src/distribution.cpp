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

#include "qmeasure/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmeasure/errors.hpp"
#include "qmeasure/state.hpp"

namespace qmeasure {

OutcomeDistribution::OutcomeDistribution(std::vector<std::size_t> labels,
                                         std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (labels_.size() != probs_.size() || probs_.empty())
        throw Error(ErrorCode::InvalidInput,
                    "distribution needs one probability per label");
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error(ErrorCode::InvalidInput, "duplicate outcome label");
    double total = 0.0;
    for (auto &p : probs_) {
        if (!std::isfinite(p) || p < -NORM_TOL)
            throw Error(ErrorCode::InvalidInput, "negative probability");
        p = std::max(p, 0.0);
        total += p;
    }
    if (std::abs(total - 1.0) > NORM_TOL)
        throw Error(ErrorCode::InvalidInput, "probabilities do not sum to 1");
}

namespace {

std::vector<std::size_t> iota_labels(std::size_t n) {
    std::vector<std::size_t> l(n);
    std::iota(l.begin(), l.end(), std::size_t{0});
    return l;
}

} // namespace

// Labels are computed before `probs` is moved into the delegated call.
OutcomeDistribution::OutcomeDistribution(std::vector<double> probs)
    : OutcomeDistribution(iota_labels(probs.size()), probs) {}

double OutcomeDistribution::probability_of(std::size_t label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw Error(ErrorCode::InvalidInput, "unknown outcome label");
    return probs_[static_cast<std::size_t>(it - labels_.begin())];
}

double tv_distance(const OutcomeDistribution &p,
                   const OutcomeDistribution &q) {
    auto lp = p.labels();
    auto lq = q.labels();
    std::sort(lp.begin(), lp.end());
    std::sort(lq.begin(), lq.end());
    if (lp != lq)
        throw Error(ErrorCode::InvalidInput,
                    "tv_distance: outcome label sets differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        acc += std::abs(p[i] - q.probability_of(p.labels()[i]));
    return 0.5 * acc;
}

} // namespace qmeasure
