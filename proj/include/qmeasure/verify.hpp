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

/// Randomized invariant batteries behind the `verify` command.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qmeasure::verify {

struct Options {
    std::size_t trials = 200;
    /// Largest small-system dimension for pointer and LL setups.
    std::size_t dims_limit = 6;
    std::uint64_t seed = 12345;
};

struct PropertyResult {
    std::string name;
    double worst = 0.0;     ///< largest deviation seen (or the check value)
    double threshold = 0.0; ///< pass iff worst < threshold
    std::size_t cases = 0;
    bool passed = true;
    /// Seed that reproduces the worst case.
    std::optional<std::uint64_t> worst_seed;
};

struct Report {
    std::vector<PropertyResult> properties;
    std::size_t degenerate_setups = 0; ///< both observables degenerate
    double seconds = 0.0;

    [[nodiscard]] bool all_passed() const;
};

/// Every case draws from its own generator seeded by case_seed(), so a run
/// is fully determined by `options`.
Report run(const Options &options);

std::string format(const Report &report);

/// Seed of case `index` within battery `battery`.
std::uint64_t case_seed(std::uint64_t base, std::size_t battery,
                        std::size_t index);

} // namespace qmeasure::verify
