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

#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"

#include "qmeasure/errors.hpp"
#include "qmeasure/scenario.hpp"

using namespace qmeasure;
using namespace qmeasure::scenario;

namespace {

Report run_text(std::string_view text) {
    return run_scenario(ScenarioFile::parse(text), "test");
}

double value(const Report &r, std::string_view quantity, std::string_view index = "") {
    for (const auto &row : r.rows)
        if (row.quantity == quantity && row.index == index)
            return row.value;
    throw std::out_of_range(std::string(quantity) + "[" + std::string(index) + "]");
}

std::size_t parse_error_line(std::string_view text) {
    try {
        run_text(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    return static_cast<std::size_t>(-1);
}

} // namespace

TEST_CASE("complex number parsing") {
    CHECK(parse_complex("0.6") == Complex(0.6, 0.0));
    CHECK(parse_complex("0.8i") == Complex(0.0, 0.8));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("2+i") == Complex(2.0, 1.0));
    CHECK(parse_complex("0.5-0.25i") == Complex(0.5, -0.25));
    CHECK(parse_complex(" 1e-3 + 2e+1i ") == Complex(1e-3, 20.0));
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
    CHECK(parse_complex_list("1, 2i, 3").size() == 3);
}

TEST_CASE("matrix parsing") {
    const auto m = parse_matrix("0, -i; i, 0");
    CHECK(m(0, 1) == Complex(0.0, -1.0));
    CHECK(m(1, 0) == Complex(0.0, 1.0));
    CHECK_THROWS_AS(parse_matrix("1, 0; 0"), std::invalid_argument);
}

TEST_CASE("named states") {
    CHECK(named_state("up")[0] == Complex(1.0, 0.0));
    CHECK(named_state("epr_bohm")[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(named_state("bell").dims() == Dims{2, 2});
    CHECK(std::norm(named_state("asymmetric(0.36)")[0]) == doctest::Approx(0.36));
    CHECK_THROWS_AS(named_state("asymmetric(2)"), std::invalid_argument);
    CHECK_THROWS_AS(named_state("sideways"), std::invalid_argument);
}

TEST_CASE("file syntax") {
    const auto f = ScenarioFile::parse("# header\n\nkind = epr  # trailing\nid=x\n");
    REQUIRE(f.fields().size() == 2);
    CHECK(f.find("kind")->value == "epr");
    CHECK(f.find("kind")->line == 3);
    CHECK(f.find("id")->value == "x");

    auto line_of = [](std::string_view text) {
        try {
            ScenarioFile::parse(text);
        } catch (const ParseError &e) {
            return e.line();
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(line_of("kind = epr\nno equals sign\n") == 2);
    CHECK(line_of("kind = epr\ncolour = red\n") == 2);
    CHECK(line_of("kind = epr\nstate =\n") == 2);
    CHECK(line_of("kind = epr\nkind = epr\n") == 2);
}

TEST_CASE("scenario-level errors carry the line") {
    CHECK(parse_error_line("id = a\n") == 0);
    CHECK(parse_error_line("kind = dance\n") == 1);
    CHECK(parse_error_line("kind = epr\nrule = born\n") == 2);
    CHECK(parse_error_line("kind = two_pointer\nstate = up\n"
                           "observable_a = sigma_z\nobservable_b = 1, 0; 0\n") == 4);
    CHECK(parse_error_line("kind = two_pointer\nstate = up\n"
                           "observable_a = sigma_z\nobservable_b = sigma_x\n"
                           "pointer_n = many\n") == 5);
    CHECK(parse_error_line("kind = telepathy\nstate = bell\nrule = nonborn_exponent\n") == 0);
    CHECK(parse_error_line("kind = telepathy\nstate = bell\nrule = born\nq = 2\n") == 4);
    CHECK(parse_error_line("kind = two_pointer\nstate = 1, 0, 0\n"
                           "observable_a = sigma_z\nobservable_b = sigma_x\n") == 3);
}

TEST_CASE("invalid inputs surface as library errors") {
    // Overlapping projectors.
    const char *overlap = "kind = two_pointer\nstate = up\n"
                          "branch_a = 1 : 1, 0; 0, 0\n"
                          "branch_a = -1 : 0.5, 0.5; 0.5, 0.5\n"
                          "observable_b = sigma_x\n";
    try {
        run_text(overlap);
        FAIL("expected an error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::InvalidProjectorFamily);
    }
    CHECK_THROWS_AS(run_text("kind = two_pointer\nstate = up\n"
                             "observable_a = 0, 1; 0, 0\nobservable_b = sigma_x\n"),
                    Error);
    CHECK_THROWS_AS(run_text("kind = entropy_demo\n"
                             "density = 0.5, 0.9; 0.9, 0.5\nobservable_a = sigma_z\n"),
                    Error);
}

TEST_CASE("every preset runs") {
    for (const auto &p : scenario_presets()) {
        CAPTURE(p.name);
        const auto report = run_scenario(ScenarioFile::parse(p.text), std::string(p.name));
        CHECK(report.id == p.name);
        CHECK(!report.rows.empty());
        CHECK(find_preset(p.name) == &p);
    }
    CHECK(find_preset("nonesuch") == nullptr);
    const auto listing = format_presets();
    CHECK(listing.find("telepathy_nonborn") != std::string::npos);
    CHECK(listing.find("asymmetric(p)") != std::string::npos);
}

TEST_CASE("preset values") {
    auto run = [](std::string_view name) {
        return run_scenario(ScenarioFile::parse(find_preset(name)->text), "x");
    };
    const double h = 1.0 / std::sqrt(2.0);
    const auto epr = run("epr_bohm");
    CHECK(value(epr, "final_amp_re", "0,1") == doctest::Approx(h));
    CHECK(value(epr, "final_amp_re", "1,0") == doctest::Approx(-h));

    const auto sx = run("two_pointer_sz_sx");
    CHECK(value(sx, "p_ij", "1,0") == doctest::Approx(0.5));
    CHECK(value(sx, "p_ij", "0,0") == doctest::Approx(0.0));

    const auto nb = run("telepathy_nonborn");
    CHECK(value(nb, "signaling_gap") == doctest::Approx(0.119643917).epsilon(1e-8));
    CHECK(std::abs(value(nb, "empirical_gap") - value(nb, "signaling_gap")) < 0.01);
    CHECK(value(run("telepathy_born"), "signaling_gap") < 1e-12);
    CHECK(value(run("telepathy_bell"), "with_alice", "0") == doctest::Approx(0.5));

    const auto ent = run("entropy_demo");
    CHECK(value(ent, "entropy_after_nonselective") >= value(ent, "entropy_before"));
    CHECK(value(ent, "entropy_average_selective") <=
          value(ent, "entropy_after_nonselective"));

    const auto prep = run("ll_prepare");
    CHECK(value(prep, "target_deviation") < 1e-12);
    CHECK(value(run("stern_gerlach"), "phase_shift", "1") == doctest::Approx(0.5));
}

TEST_CASE("records output is deterministic and seed-driven") {
    const auto file = ScenarioFile::parse(find_preset("telepathy_nonborn")->text);
    const auto a = format_records(run_scenario(file, "x"));
    const auto b = format_records(run_scenario(file, "x"));
    CHECK(a == b);
    CHECK(a.find("telepathy_nonborn.signaling_gap=") != std::string::npos);
    const auto c = format_records(run_scenario(file, "x", 99));
    CHECK(a != c);

    const auto table = format_table(run_scenario(file, "x"));
    CHECK(table.find("scenario: telepathy_nonborn (telepathy)") == 0);
    CHECK(table.find("-0.000000000000") == std::string::npos);
}

TEST_CASE("pointer scenario with explicit branches and oversized pointers") {
    const auto r = run_text("kind = two_pointer\nstate = 0.6, 0.8i\n"
                            "branch_a = 2 : 1, 0; 0, 0\n"
                            "branch_a = 5 : 0, 0; 0, 1\n"
                            "observable_b = sigma_y\n"
                            "pointer_n = 4\npointer_m = 3\n");
    CHECK(value(r, "p_i", "0") == doctest::Approx(0.36));
    CHECK(value(r, "eigenvalue_a", "1") == doctest::Approx(5.0));
    CHECK(value(r, "max_projection_deviation") < 1e-10);
    CHECK(value(r, "brute_force_deviation") < 1e-12);
}
