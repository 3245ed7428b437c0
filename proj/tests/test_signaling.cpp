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

#include "doctest.h"

#include "qmeasure/random.hpp"
#include "qmeasure/signaling.hpp"

using namespace qmeasure;

namespace {

const Observable &sigma_z() {
    static const auto obs = observable_from_matrix(pauli_z());
    return obs;
}
const Observable &sigma_x() {
    static const auto obs = observable_from_matrix(pauli_x());
    return obs;
}

// Branch 1 of sigma_z is |0>, which carries weight p in asymmetric_pair(p).
constexpr double WITNESS = 0.36 * 0.36 / (0.36 * 0.36 + 0.64 * 0.64);

} // namespace

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(TelepathyScenario(StateVector::basis({4}, 0), sigma_z(),
                                      sigma_z(), ProbabilityRule::born()),
                    Error);
    CHECK_THROWS_AS(TelepathyScenario(StateVector::basis({2, 3}, 0), sigma_z(),
                                      sigma_z(), ProbabilityRule::born()),
                    Error);
    CHECK_THROWS_AS(asymmetric_pair(1.5), Error);
}

TEST_CASE("Alice's measurement on a Bell pair") {
    const TelepathyScenario sc(bell_pair(), sigma_z(), sigma_z(),
                               ProbabilityRule::born());
    const auto ens = alice_measures(sc);
    REQUIRE(ens.members().size() == 2);
    for (const auto &m : ens.members())
        CHECK(m.weight == doctest::Approx(0.5));
    // Branch 0 (eigenvalue -1) collapses to |11>.
    CHECK(std::abs(ens.members()[0].state[3]) == doctest::Approx(1.0));
    CHECK(std::abs(ens.members()[1].state[0]) == doctest::Approx(1.0));

    const auto with = bob_distribution_with_alice(sc);
    const auto without = bob_distribution_without_alice(sc);
    CHECK(with[0] == doctest::Approx(0.5));
    CHECK(without[1] == doctest::Approx(0.5));
    CHECK(signaling_gap(sc) < 1e-15);
}

TEST_CASE("product states never signal, whatever the rule") {
    const auto up = StateVector::basis({2}, 0);
    const double h = 1.0 / std::sqrt(2.0);
    Amplitudes plus(2);
    plus << h, h;
    const auto state = tensor({up, StateVector({2}, plus)});
    for (double q : {1.0, 2.0, 5.0}) {
        const TelepathyScenario sc(state, sigma_z(), sigma_x(),
                                   ProbabilityRule::non_born_exponent(q));
        CHECK(signaling_gap(sc) < 1e-12);
    }
    // An eigenstate-product for Bob is deterministic under every rule.
    const auto both_up = tensor({up, up});
    const TelepathyScenario sc(both_up, sigma_x(), sigma_z(),
                               ProbabilityRule::non_born_exponent(3.0));
    CHECK(bob_distribution_without_alice(sc)[1] == doctest::Approx(1.0));
    CHECK(signaling_gap(sc) < 1e-12);
}

TEST_CASE("asymmetric pair with a non-Born receiver") {
    const TelepathyScenario sc(asymmetric_pair(0.36), sigma_z(), sigma_z(),
                               ProbabilityRule::non_born_exponent(2.0));
    const auto with = bob_distribution_with_alice(sc);
    CHECK(with[1] == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(with[0] == doctest::Approx(0.64).epsilon(1e-12));
    const auto without = bob_distribution_without_alice(sc);
    CHECK(without[1] == doctest::Approx(WITNESS).epsilon(1e-12));
    CHECK(without[1] == doctest::Approx(0.240356083).epsilon(1e-8));
    CHECK(signaling_gap(sc) == doctest::Approx(0.36 - WITNESS).epsilon(1e-12));
    CHECK(signaling_gap(sc) > 0.05);

    const TelepathyScenario born(asymmetric_pair(0.36), sigma_z(), sigma_z(),
                                 ProbabilityRule::born());
    CHECK(signaling_gap(born) < 1e-12);
}

TEST_CASE("gap shrinks as the exponent approaches one") {
    double previous = 1.0;
    for (double q : {2.0, 1.5, 1.1, 1.0}) {
        const TelepathyScenario sc(asymmetric_pair(0.36), sigma_z(), sigma_z(),
                                   ProbabilityRule::non_born_exponent(q));
        const double gap = signaling_gap(sc);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-12);
}

TEST_CASE("Born receiver never signals in either direction") {
    Sampler rng(211);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d1 = random::uniform_index(2, 4, rng);
        const auto d2 = random::uniform_index(2, 4, rng);
        const auto psi = random::random_state({d1, d2}, rng);
        const auto a = random::random_observable({d1}, rng, trial % 2 == 0 && d1 >= 3);
        const auto b = random::random_observable({d2}, rng);
        const TelepathyScenario sc(psi, a, b, ProbabilityRule::born());
        CHECK(signaling_gap(sc) < 1e-12);
        CHECK(signaling_gap(swap_roles(sc, ProbabilityRule::born())) < 1e-12);
    }
}

TEST_CASE("swap_roles exchanges the pair") {
    const TelepathyScenario sc(asymmetric_pair(0.36), sigma_z(), sigma_x(),
                               ProbabilityRule::born());
    CHECK(swap_roles(sc, ProbabilityRule::non_born_exponent(2.0)).bob_rule().exponent() ==
          2.0);
    const auto sw = swap_roles(sc, ProbabilityRule::born());
    // The swapped receiver reads sigma_z; Alice now measures sigma_x.
    CHECK(sw.bob_obs().eigenvalue(1) == doctest::Approx(1.0));
    CHECK(bob_distribution_with_alice(sw)[1] == doctest::Approx(0.36));
    CHECK(bob_distribution_without_alice(sw)[1] == doctest::Approx(0.36));
}

TEST_CASE("channel simulation") {
    const TelepathyScenario sc(asymmetric_pair(0.36), sigma_z(), sigma_z(),
                               ProbabilityRule::non_born_exponent(2.0));
    Sampler rng(223);
    const auto with = channel_simulation(sc, true, 100000, rng);
    const auto without = channel_simulation(sc, false, 100000, rng);
    CHECK(std::abs(with[1] - 0.36) < 0.01);
    CHECK(std::abs(without[1] - WITNESS) < 0.01);
    CHECK(std::abs(tv_distance(with, without) - signaling_gap(sc)) < 0.01);

    Sampler a(7), b(7);
    CHECK(channel_simulation(sc, true, 500, a).probs() ==
          channel_simulation(sc, true, 500, b).probs());

    const auto one = channel_simulation(sc, false, 1, rng);
    CHECK((one[0] == 1.0 || one[1] == 1.0));
    CHECK_THROWS_AS(channel_simulation(sc, false, 0, rng), Error);
}
