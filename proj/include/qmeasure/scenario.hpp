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
 * Scenario files and the reports produced by running them.
 *
 * A scenario file is line oriented:
 *
 *     # comment
 *     kind = two_pointer
 *     state = 0.6, 0.8i
 *     observable_a = sigma_z
 *     observable_b = 0, 1; 1, 0
 *
 * Values are single tokens, comma separated lists (amplitudes, phases,
 * dims) or matrices with rows separated by ';'. Complex numbers are written
 * `re`, `imi` or `re+imi`. Keys not understood by the scenario's kind are
 * rejected.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmeasure/observable.hpp"
#include "qmeasure/state.hpp"

namespace qmeasure::scenario {

inline constexpr std::uint64_t DEFAULT_SEED = 12345;

/// Malformed scenario text: carries the 1-based line (0 when the problem is
/// a missing field) and the offending key.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::string field, const std::string &what);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::size_t line_;
    std::string field_;
};

/// A computed quantity breaks an invariant the scenario is meant to
/// exhibit.
class InvariantViolation : public std::runtime_error {
  public:
    InvariantViolation(std::string invariant, const std::string &what)
        : std::runtime_error(invariant + ": " + what),
          invariant_(std::move(invariant)) {}

    [[nodiscard]] const std::string &invariant() const noexcept {
        return invariant_;
    }

  private:
    std::string invariant_;
};

struct Field {
    std::string key;
    std::string value;
    std::size_t line;
};

class ScenarioFile {
  public:
    static ScenarioFile parse(std::string_view text);

    [[nodiscard]] const std::vector<Field> &fields() const noexcept {
        return fields_;
    }
    /// Single occurrence of `key`, or nullptr.
    [[nodiscard]] const Field *find(std::string_view key) const;
    [[nodiscard]] std::vector<const Field *> all(std::string_view key) const;

  private:
    std::vector<Field> fields_;
};

struct ReportRow {
    std::string quantity;
    std::string index; ///< empty for scalars
    double value;
};

struct Report {
    std::string id;
    std::string kind;
    std::vector<ReportRow> rows;
};

/// Builds and runs the scenario. `seed_override` replaces the file's seed.
Report run_scenario(const ScenarioFile &file, const std::string &default_id,
                    std::optional<std::uint64_t> seed_override = std::nullopt);

/// Aligned human-readable table.
std::string format_table(const Report &report);
/// `id.quantity[index]=value` lines in report order.
std::string format_records(const Report &report);

struct Preset {
    std::string_view name;
    std::string_view description;
    std::string_view text; ///< scenario file contents
};

std::span<const Preset> scenario_presets();
/// nullptr when unknown.
const Preset *find_preset(std::string_view name);
/// Listing of scenario, state and observable presets.
std::string format_presets();

// Value parsers, exposed for tests. They throw std::invalid_argument.
Complex parse_complex(std::string_view token);
std::vector<Complex> parse_complex_list(std::string_view text);
Matrix parse_matrix(std::string_view text);
/// Named states: epr_bohm, bell, up, down, plus, minus, asymmetric(p).
StateVector named_state(std::string_view name);

} // namespace qmeasure::scenario
