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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "qmeasure/measurement.hpp"
#include "qmeasure/pointer.hpp"
#include "qmeasure/random.hpp"
#include "qmeasure/scenario.hpp"
#include "qmeasure/signaling.hpp"

using namespace qmeasure;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, double v) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), format, v);
    return buf.data();
}

double max_abs(const Eigen::MatrixXd &m) { return m.cwiseAbs().maxCoeff(); }

bool degenerate(const Observable &obs) {
    for (std::size_t i = 0; i < obs.branch_count(); ++i)
        if (obs.rank(i) >= 2)
            return true;
    return false;
}

// AC1
Verdict epr_reproduction() {
    Amplitudes v(2);
    v << 1.0, -1.0;
    const auto sz = observable_from_matrix(pauli_z());
    const PointerSchemeSetup setup(StateVector::normalize({2}, v), sz, sz,
                                   PointerMode::OnePointer, 2);
    // Check the coupling really is the conditional-NOT on |up>.
    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 1) = cnot(1, 0) = cnot(2, 2) = cnot(3, 3) = 1.0;
    const double gate_dev = (shift_unitary_a(setup).matrix() - cnot).cwiseAbs().maxCoeff();

    const auto result = run_one_pointer(setup);
    const double h = 1.0 / std::sqrt(2.0);
    const std::array<Complex, 4> singlet{0.0, h, -h, 0.0};
    double dev = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
        dev = std::max(dev, std::abs(result.final_state[k] - singlet[k]));
    return {dev < 1e-12 && gate_dev < 1e-15, "max_amplitude_dev=" + fmt("%.3g", dev)};
}

struct PointerStats {
    double projection = 0.0;
    double agreement = 0.0;
    double oracle = 0.0;
    std::size_t setups = 0;
    std::size_t doubly_degenerate = 0;
    std::size_t oracle_cases = 0;
};

// Setups shared by AC2, AC3 and AC4.
PointerStats pointer_battery() {
    PointerStats s;
    Sampler rng(20260101);
    const std::size_t trials = 240;
    for (std::size_t t = 0; t < trials || s.oracle_cases < 50; ++t) {
        const bool force = t % 2 == 0;
        const auto d = random::uniform_index(force ? 3 : 2, 6, rng);
        const auto psi = random::random_state({d}, rng);
        const auto a = random::random_observable({d}, rng, force);
        const auto b = random::random_observable({d}, rng, force);
        const auto n = a.branch_count() + random::uniform_index(0, 1, rng);
        const auto m = b.branch_count() + random::uniform_index(0, 1, rng);
        const PointerSchemeSetup two(psi, a, b, PointerMode::TwoPointer, n, m);
        const PointerSchemeSetup one(psi, a, b, PointerMode::OnePointer, n);
        const auto r2 = run_two_pointer(two);
        const auto r1 = run_one_pointer(one);
        s.projection = std::max({s.projection, projection_equivalence_report(two),
                                 projection_equivalence_report(one)});
        s.agreement = std::max(s.agreement, max_abs(r2.joint.matrix() - r1.joint.matrix()));
        if (d * n * m <= 96) {
            s.oracle = std::max(s.oracle,
                                max_abs(brute_force_joint(two).matrix() - r2.joint.matrix()));
            ++s.oracle_cases;
        }
        if (degenerate(a) && degenerate(b))
            ++s.doubly_degenerate;
        ++s.setups;
    }
    return s;
}

// AC5
Verdict no_signaling() {
    Sampler rng(20260105);
    double worst = 0.0;
    std::size_t cases = 0;
    for (; cases < 150; ++cases) {
        const auto d1 = random::uniform_index(2, 4, rng);
        const auto d2 = random::uniform_index(2, 4, rng);
        const auto psi = random::random_state({d1, d2}, rng);
        const auto a = random::random_observable({d1}, rng, cases % 3 == 0 && d1 >= 3);
        const auto b = random::random_observable({d2}, rng, cases % 3 == 1 && d2 >= 3);
        const TelepathyScenario sc(psi, a, b, ProbabilityRule::born());
        worst = std::max({worst, signaling_gap(sc),
                          signaling_gap(swap_roles(sc, ProbabilityRule::born()))});
    }
    return {worst < 1e-12,
            "max_gap=" + fmt("%.3g", worst) + " scenarios=" + std::to_string(cases)};
}

// AC6
Verdict telepathy_witness() {
    const auto sz = observable_from_matrix(pauli_z());
    const TelepathyScenario sc(asymmetric_pair(0.36), sz, sz,
                               ProbabilityRule::non_born_exponent(2.0));
    // Scalar oracle: branch 1 of sigma_z is |0>, weight p = 0.36.
    const double p = 0.36;
    const double witness = p * p / (p * p + (1 - p) * (1 - p));
    const auto with = bob_distribution_with_alice(sc);
    const auto without = bob_distribution_without_alice(sc);
    const double dist_dev = std::max({std::abs(with[1] - p), std::abs(with[0] - (1 - p)),
                                      std::abs(without[1] - witness),
                                      std::abs(without[0] - (1 - witness))});
    const double gap = signaling_gap(sc);
    Sampler rng(12345);
    const auto emp_with = channel_simulation(sc, true, 100000, rng);
    const auto emp_without = channel_simulation(sc, false, 100000, rng);
    const double mc_gap = tv_distance(emp_with, emp_without);
    const bool pass = dist_dev < 1e-12 && std::abs(gap - 0.119643) < 1e-6 &&
                      std::abs(gap - (p - witness)) < 1e-12 &&
                      std::abs(mc_gap - gap) < 0.01;
    return {pass, "gap=" + fmt("%.9f", gap) + " monte_carlo_gap=" + fmt("%.6f", mc_gap)};
}

// AC7
Verdict born_marginals() {
    namespace sc = qmeasure::scenario;
    const auto report = sc::run_scenario(
        sc::ScenarioFile::parse(sc::find_preset("telepathy_bell")->text), "bell");
    double dev = 0.0;
    std::size_t seen = 0;
    for (const auto &row : report.rows)
        if (row.quantity == "with_alice" || row.quantity == "without_alice") {
            dev = std::max(dev, std::abs(row.value - 0.5));
            ++seen;
        }
    const auto sz = observable_from_matrix(pauli_z());
    const TelepathyScenario bell(bell_pair(), sz, sz, ProbabilityRule::born());
    const auto alice = rule_probabilities(ProbabilityRule::born(), bell.state(),
                                          bell.alice_global());
    const auto bob = rule_probabilities(ProbabilityRule::born(), bell.state(),
                                        bell.bob_global());
    for (std::size_t i = 0; i < 2; ++i)
        dev = std::max({dev, std::abs(alice[i] - 0.5), std::abs(bob[i] - 0.5)});
    return {dev < 1e-12 && seen == 4, "max_dev=" + fmt("%.3g", dev)};
}

// AC8
Verdict entropy_taxonomy() {
    Sampler rng(20260108);
    double nonselective_drop = 0.0;
    double selective_excess = 0.0;
    std::size_t cases = 0;
    for (; cases < 100; ++cases) {
        const auto d = random::uniform_index(2, 8, rng);
        const auto rho = random::random_density({d}, rng);
        const auto obs = random::random_observable({d}, rng, cases % 2 == 0 && d >= 3);
        const double before = von_neumann_entropy(rho);
        const auto after = nonselective_channel(rho, obs);
        nonselective_drop = std::max(nonselective_drop, before - von_neumann_entropy(after));
        // sum_i p_i S(P_i rho P_i / p_i) against S(rho).
        selective_excess = std::max(
            selective_excess, average_selective_entropy(after, obs) - before);
    }
    const bool pass = nonselective_drop <= 1e-10 && selective_excess <= 1e-10;
    return {pass, "worst_nonselective_drop=" + fmt("%.3g", nonselective_drop) +
                      " worst_selective_excess=" + fmt("%.3g", selective_excess) +
                      " matrices=" + std::to_string(cases)};
}

// AC9
Verdict ll_scheme() {
    Sampler rng(20260109);
    double prob_dev = 0.0;
    double target_dev = 0.0;
    for (int t = 0; t < 60; ++t) {
        const auto d = random::uniform_index(2, 6, rng);
        const auto psi = random::random_state({d}, rng);
        const auto obs = random::random_observable({d}, rng, t % 2 == 0 && d >= 3);
        const auto born = rule_probabilities(ProbabilityRule::born(), psi, obs);
        std::vector<Operator> us;
        for (std::size_t i = 0; i < obs.branch_count(); ++i)
            us.emplace_back(Dims{d}, random::haar_unitary(d, rng));
        for (const auto &r : ll_channel(psi, obs, us))
            prob_dev = std::max(prob_dev, std::abs(r.probability - born[r.branch_index]));

        const auto target = random::random_state({d}, rng);
        const auto prep = preparation_unitaries(psi, obs, target);
        for (const auto &r : ll_channel(psi, obs, prep))
            target_dev = std::max(
                target_dev, (r.post_state.amplitudes() - target.amplitudes()).cwiseAbs().maxCoeff());
    }
    return {prob_dev < 1e-12 && target_dev < 1e-12,
            "prob_dev=" + fmt("%.3g", prob_dev) + " target_dev=" + fmt("%.3g", target_dev)};
}

// AC10
Verdict verify_cli() {
    const std::string cmd = std::string(QMEASURE_CLI) + " verify 2>&1";
    std::unique_ptr<FILE, int (*)(FILE *)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe)
        return {false, "could not start " + cmd};
    std::string out;
    std::array<char, 4096> buf{};
    while (auto n = std::fread(buf.data(), 1, buf.size(), pipe.get()))
        out.append(buf.data(), n);
    const int status = pclose(pipe.release());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code == 0 && out.find("FAIL") == std::string::npos,
            "exit=" + std::to_string(code)};
}

int failures = 0;

void report(const char *id, const char *name, const Verdict &v, double seconds,
            double limit = 0.0) {
    const bool in_time = limit <= 0.0 || seconds < limit;
    const bool pass = v.pass && in_time;
    if (!pass)
        ++failures;
    std::printf("%s %s %s %s time=%.3fs%s\n", pass ? "PASS" : "FAIL", id, name,
                v.detail.c_str(), seconds,
                limit > 0.0 ? (in_time ? "" : " (over time limit)") : "");
}

template <typename F> std::pair<Verdict, double> timed(F &&fn) {
    const auto start = std::chrono::steady_clock::now();
    auto verdict = fn();
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    return {verdict, elapsed.count()};
}

} // namespace

int main() {
    try {
        auto [ac1, t1] = timed(epr_reproduction);
        report("AC1", "epr_reproduction", ac1, t1, 1.0);

        PointerStats stats;
        auto [ac2, t2] = timed([&] {
            stats = pointer_battery();
            return Verdict{stats.projection < 1e-10 && stats.setups >= 200 &&
                               stats.doubly_degenerate >= 50,
                           "max_dev=" + fmt("%.3g", stats.projection) +
                               " setups=" + std::to_string(stats.setups) +
                               " doubly_degenerate=" +
                               std::to_string(stats.doubly_degenerate)};
        });
        report("AC2", "projection_equivalence", ac2, t2, 30.0);
        report("AC3", "scheme_agreement",
               {stats.agreement < 1e-12,
                "max_dev=" + fmt("%.3g", stats.agreement) +
                    " setups=" + std::to_string(stats.setups)},
               t2);
        report("AC4", "brute_force_oracle",
               {stats.oracle < 1e-12 && stats.oracle_cases >= 50,
                "max_dev=" + fmt("%.3g", stats.oracle) +
                    " setups=" + std::to_string(stats.oracle_cases)},
               t2);

        auto [ac5, t5] = timed(no_signaling);
        report("AC5", "no_signaling_born", ac5, t5);
        auto [ac6, t6] = timed(telepathy_witness);
        report("AC6", "telepathy_witness", ac6, t6);
        auto [ac7, t7] = timed(born_marginals);
        report("AC7", "born_marginals", ac7, t7);
        auto [ac8, t8] = timed(entropy_taxonomy);
        report("AC8", "entropy_taxonomy", ac8, t8);
        auto [ac9, t9] = timed(ll_scheme);
        report("AC9", "ll_scheme", ac9, t9);
        auto [ac10, t10] = timed(verify_cli);
        report("AC10", "verify_default_run", ac10, t10, 60.0);
    } catch (const std::exception &e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
