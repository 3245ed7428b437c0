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

#include "qmeasure/scenario.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qmeasure/measurement.hpp"
#include "qmeasure/pointer.hpp"
#include "qmeasure/random.hpp"
#include "qmeasure/signaling.hpp"

namespace qmeasure::scenario {

ParseError::ParseError(std::size_t line, std::string field,
                       const std::string &what)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": "
                               : std::string()) +
                         "field '" + field + "': " + what),
      line_(line), field_(std::move(field)) {}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k == s.size() || s[k] == sep) {
            out.push_back(trim(s.substr(start, k - start)));
            start = k + 1;
        }
    }
    return out;
}

double parse_real(std::string_view token) {
    const std::string t(trim(token));
    if (t.empty())
        throw std::invalid_argument("empty number");
    char *end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v))
        throw std::invalid_argument("not a number: '" + t + "'");
    return v;
}

std::size_t parse_count(std::string_view token) {
    const std::string t(trim(token));
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) {
            return std::isdigit(c);
        }))
        throw std::invalid_argument("not a nonnegative integer: '" + t + "'");
    return static_cast<std::size_t>(std::stoull(t));
}

const std::set<std::string, std::less<>> &known_keys() {
    static const std::set<std::string, std::less<>> keys{
        "kind",         "id",           "seed",        "state",
        "dims",         "observable_a", "observable_b", "branch_a",
        "branch_b",     "pointer_n",    "pointer_m",   "rule",
        "q",            "shots",        "post_unitaries", "post_unitary",
        "target",       "phases",       "density"};
    return keys;
}

bool repeatable(std::string_view key) {
    return key == "branch_a" || key == "branch_b" || key == "post_unitary";
}

const std::map<std::string, std::set<std::string>, std::less<>> &
kind_keys() {
    static const std::map<std::string, std::set<std::string>, std::less<>>
        table{
            {"two_pointer",
             {"observable_a", "observable_b", "branch_a", "branch_b",
              "pointer_n", "pointer_m"}},
            {"one_pointer",
             {"observable_a", "observable_b", "branch_a", "branch_b",
              "pointer_n"}},
            {"epr", {"observable_b", "branch_b"}},
            {"stern_gerlach", {"observable_a", "branch_a", "phases"}},
            {"ll_scheme",
             {"observable_a", "branch_a", "post_unitaries", "post_unitary",
              "target", "phases"}},
            {"telepathy",
             {"observable_a", "observable_b", "branch_a", "branch_b", "rule",
              "q", "shots"}},
            {"entropy_demo", {"observable_a", "branch_a", "density"}},
        };
    return table;
}

// Formatting

std::string fmt_fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    std::string s(buf);
    if (s.front() == '-' &&
        s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string basis_label(std::size_t index, const Dims &dims) {
    const auto st = strides(dims);
    std::string out;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k)
            out += ',';
        out += std::to_string((index / st[k]) % dims[k]);
    }
    return out;
}

std::string pair_label(std::size_t i, std::size_t j) {
    return std::to_string(i) + "," + std::to_string(j);
}

// Interpretation of a parsed file.

class Builder {
  public:
    Builder(const ScenarioFile &file, std::string id)
        : file_(file), id_(std::move(id)) {}

    Report run(std::optional<std::uint64_t> seed_override);

  private:
    template <typename F> auto guarded(const Field &f, F &&fn) const {
        try {
            return fn();
        } catch (const std::invalid_argument &e) {
            throw ParseError(f.line, f.key, e.what());
        }
    }

    std::size_t count_field(std::string_view key, std::size_t fallback) const;
    double real_field(std::string_view key, double fallback) const;
    StateVector state(std::optional<std::string_view> fallback) const;
    Matrix matrix_for(const Field &f, std::size_t side) const;
    Observable observable(char which, const Dims &dims,
                          std::optional<std::string_view> fallback) const;

    void pointer_kind(PointerMode mode, const StateVector &psi,
                      const Observable &a, const Observable &b,
                      std::optional<std::size_t> n,
                      std::optional<std::size_t> m);
    void stern_gerlach();
    void ll_scheme();
    void telepathy();
    void entropy_demo();

    void add(std::string quantity, std::string index, double value) {
        if (!std::isfinite(value))
            throw InvariantViolation("finite_values",
                                     quantity + " is not finite");
        report_.rows.push_back({std::move(quantity), std::move(index), value});
    }
    void add(std::string quantity, double value) {
        add(std::move(quantity), std::string(), value);
    }
    void add_amplitudes(const std::string &prefix, const std::string &head,
                        const StateVector &s);

    const ScenarioFile &file_;
    std::string id_;
    std::uint64_t seed_ = DEFAULT_SEED;
    Report report_;
};

std::size_t Builder::count_field(std::string_view key,
                                 std::size_t fallback) const {
    const auto *f = file_.find(key);
    if (!f)
        return fallback;
    return guarded(*f, [&] { return parse_count(f->value); });
}

double Builder::real_field(std::string_view key, double fallback) const {
    const auto *f = file_.find(key);
    if (!f)
        return fallback;
    return guarded(*f, [&] { return parse_real(f->value); });
}

StateVector Builder::state(std::optional<std::string_view> fallback) const {
    const auto *f = file_.find("state");
    const auto *dims_field = file_.find("dims");
    std::optional<Dims> dims;
    if (dims_field) {
        dims = guarded(*dims_field, [&] {
            Dims d;
            for (auto tok : split(dims_field->value, ','))
                d.push_back(parse_count(tok));
            return d;
        });
    }
    std::string_view text;
    std::size_t line = 0;
    if (f) {
        text = f->value;
        line = f->line;
    } else if (fallback) {
        text = *fallback;
    } else {
        throw ParseError(0, "state", "missing");
    }
    try {
        if (!text.empty() && std::isalpha(static_cast<unsigned char>(text[0]))) {
            auto s = named_state(text);
            if (dims && *dims != s.dims())
                throw std::invalid_argument("dims do not match named state");
            return s;
        }
        const auto amps = parse_complex_list(text);
        Amplitudes v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t k = 0; k < amps.size(); ++k)
            v(static_cast<Eigen::Index>(k)) = amps[k];
        return StateVector(dims.value_or(Dims{amps.size()}), v);
    } catch (const std::invalid_argument &e) {
        throw ParseError(line, "state", e.what());
    } catch (const Error &e) {
        throw ParseError(line, "state", e.what());
    }
}

Matrix Builder::matrix_for(const Field &f, std::size_t side) const {
    return guarded(f, [&] {
        Matrix m = parse_matrix(f.value);
        if (static_cast<std::size_t>(m.rows()) != side)
            throw std::invalid_argument("matrix must be " +
                                        std::to_string(side) + "x" +
                                        std::to_string(side));
        return m;
    });
}

Observable Builder::observable(char which, const Dims &dims,
                               std::optional<std::string_view> fallback) const {
    const std::string obs_key = std::string("observable_") + which;
    const std::string branch_key = std::string("branch_") + which;
    const auto *f = file_.find(obs_key);
    const auto branches = file_.all(branch_key);
    const auto side = total_dimension(dims);
    if (f && !branches.empty())
        throw ParseError(f->line, obs_key,
                         "give either " + obs_key + " or " + branch_key);
    if (!branches.empty()) {
        std::vector<Branch> list;
        for (const auto *b : branches) {
            const auto colon = b->value.find(':');
            if (colon == std::string::npos)
                throw ParseError(b->line, b->key,
                                 "expected '<eigenvalue> : <matrix>'");
            const double value = guarded(*b, [&] {
                return parse_real(std::string_view(b->value).substr(0, colon));
            });
            Field rest{b->key, b->value.substr(colon + 1), b->line};
            list.push_back({value, Operator(dims, matrix_for(rest, side))});
        }
        return observable_from_branches(std::move(list));
    }
    std::string_view text;
    const Field *origin = f;
    if (f)
        text = f->value;
    else if (fallback)
        text = *fallback;
    else
        throw ParseError(0, obs_key, "missing");

    const std::size_t line = origin ? origin->line : 0;
    auto pauli = [&](Operator (*make)()) {
        if (side != 2)
            throw ParseError(line, obs_key,
                             "Pauli preset needs a two-dimensional space");
        return observable_from_matrix(Operator(dims, make().matrix()));
    };
    if (text == "sigma_x")
        return pauli(pauli_x);
    if (text == "sigma_y")
        return pauli(pauli_y);
    if (text == "sigma_z")
        return pauli(pauli_z);
    if (text == "identity")
        return observable_from_matrix(Operator::identity(dims));
    Field literal{obs_key, std::string(text), line};
    return observable_from_matrix(Operator(dims, matrix_for(literal, side)));
}

void Builder::add_amplitudes(const std::string &prefix, const std::string &head,
                             const StateVector &s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (std::abs(s[k]) <= 1e-15)
            continue;
        const auto label = head.empty() ? basis_label(k, s.dims())
                                         : head + ";" + basis_label(k, s.dims());
        add(prefix + "_re", label, s[k].real());
        add(prefix + "_im", label, s[k].imag());
    }
}

void Builder::pointer_kind(PointerMode mode, const StateVector &psi,
                           const Observable &a, const Observable &b,
                           std::optional<std::size_t> n,
                           std::optional<std::size_t> m) {
    const PointerSchemeSetup setup(psi, a, b, mode, n, m);
    const auto result = run_scheme(setup);
    const auto &joint = result.joint;

    for (std::size_t i = 0; i < a.branch_count(); ++i)
        add("eigenvalue_a", std::to_string(i), a.eigenvalue(i));
    for (std::size_t j = 0; j < b.branch_count(); ++j)
        add("eigenvalue_b", std::to_string(j), b.eigenvalue(j));
    add_amplitudes("final_amp", "", result.final_state);
    for (std::size_t i = 0; i < joint.rows(); ++i)
        for (std::size_t j = 0; j < joint.cols(); ++j)
            add("p_ij", pair_label(i, j), joint(i, j));
    const auto marg = marginal_a(joint);
    for (std::size_t i = 0; i < marg.size(); ++i)
        add("p_i", std::to_string(i), marg[i]);
    for (std::size_t i = 0; i < marg.size(); ++i) {
        if (marg[i] <= CONDITIONING_TOL)
            continue;
        const auto cond = conditional_b_given_a(joint, i);
        const auto born = rule_probabilities(ProbabilityRule::born(),
                                             project_update(psi, a, i), b);
        for (std::size_t j = 0; j < cond.size(); ++j) {
            add("p_j|i", pair_label(i, j), cond[j]);
            add("born_b_on_collapsed", pair_label(i, j), born[j]);
        }
    }

    const double deviation = projection_equivalence_report(setup);
    add("max_projection_deviation", deviation);
    if (deviation > 1e-10)
        throw InvariantViolation("projection_equivalence",
                                 "deviation " + fmt_exact(deviation));

    // The other scheme on the same small system.
    const auto other_mode = mode == PointerMode::TwoPointer
                                ? PointerMode::OnePointer
                                : PointerMode::TwoPointer;
    const PointerSchemeSetup other(psi, a, b, other_mode,
                                   setup.n_pointer1());
    const Eigen::MatrixXd diff =
        run_scheme(other).joint.matrix() - joint.matrix();
    const double agreement = diff.cwiseAbs().maxCoeff();
    add("scheme_agreement", agreement);
    if (agreement > 1e-12)
        throw InvariantViolation("scheme_agreement",
                                 "deviation " + fmt_exact(agreement));

    if (mode == PointerMode::TwoPointer) {
        const Eigen::MatrixXd bf =
            brute_force_joint(setup).matrix() - joint.matrix();
        const double oracle = bf.cwiseAbs().maxCoeff();
        add("brute_force_deviation", oracle);
        if (oracle > 1e-12)
            throw InvariantViolation("brute_force_oracle",
                                     "deviation " + fmt_exact(oracle));
    }
}

void Builder::stern_gerlach() {
    const auto psi = state("plus");
    const auto obs = observable('a', psi.dims(), "sigma_z");
    std::vector<double> phases;
    if (const auto *f = file_.find("phases")) {
        phases = guarded(*f, [&] {
            std::vector<double> out;
            for (auto tok : split(f->value, ','))
                out.push_back(parse_real(tok));
            return out;
        });
        if (phases.size() != obs.branch_count())
            throw ParseError(f->line, "phases", "need one phase per branch");
    } else if (obs.branch_count() == 2) {
        phases = {0.5, -0.5};
    } else {
        throw ParseError(0, "phases", "missing");
    }
    const auto unitaries = phase_shift_unitaries(obs, phases);
    const auto records = ll_channel(psi, obs, unitaries);
    const auto born = rule_probabilities(ProbabilityRule::born(), psi, obs);
    double worst_p = 0.0;
    double worst_overlap = 0.0;
    for (const auto &r : records) {
        const auto idx = std::to_string(r.branch_index);
        const auto collapsed = project_update(psi, obs, r.branch_index);
        const Complex overlap = inner(collapsed, r.post_state);
        add("eigenvalue", idx, r.eigenvalue);
        add("p", idx, r.probability);
        add("overlap_abs", idx, std::abs(overlap));
        add("phase_shift", idx, std::arg(overlap));
        worst_p = std::max(worst_p, std::abs(r.probability - born[r.branch_index]));
        worst_overlap = std::max(worst_overlap, std::abs(std::abs(overlap) - 1.0));
    }
    add("born_deviation", worst_p);
    if (worst_p > 1e-12)
        throw InvariantViolation("ll_born_probabilities",
                                 "deviation " + fmt_exact(worst_p));
    if (worst_overlap > 1e-12)
        throw InvariantViolation("global_phase_only",
                                 "post state differs beyond a phase");
}

void Builder::ll_scheme() {
    const auto psi = state(std::nullopt);
    const auto obs = observable('a', psi.dims(), std::nullopt);
    const auto explicit_ops = file_.all("post_unitary");
    const auto *mode_field = file_.find("post_unitaries");
    std::string mode = mode_field ? mode_field->value
                                  : (explicit_ops.empty() ? "identity" : "explicit");
    if (mode != "explicit" && !explicit_ops.empty())
        throw ParseError(explicit_ops.front()->line, "post_unitary",
                         "only allowed with post_unitaries = explicit");
    if (mode != "prepare" && file_.find("target"))
        throw ParseError(file_.find("target")->line, "target",
                         "only allowed with post_unitaries = prepare");
    if (mode != "phases" && file_.find("phases"))
        throw ParseError(file_.find("phases")->line, "phases",
                         "only allowed with post_unitaries = phases");

    const auto side = total_dimension(psi.dims());
    std::vector<Operator> ops;
    std::optional<StateVector> target;
    if (mode == "identity") {
        ops.assign(obs.branch_count(), Operator::identity(psi.dims()));
    } else if (mode == "explicit") {
        for (const auto *f : explicit_ops)
            ops.emplace_back(psi.dims(), matrix_for(*f, side));
        if (ops.size() != obs.branch_count())
            throw ParseError(0, "post_unitary", "need one unitary per branch");
    } else if (mode == "prepare") {
        const auto *t = file_.find("target");
        if (!t)
            throw ParseError(0, "target", "missing");
        target = guarded(*t, [&] {
            const auto amps = parse_complex_list(t->value);
            Amplitudes v(static_cast<Eigen::Index>(amps.size()));
            for (std::size_t k = 0; k < amps.size(); ++k)
                v(static_cast<Eigen::Index>(k)) = amps[k];
            if (amps.size() != side)
                throw std::invalid_argument("target has wrong length");
            try {
                return StateVector(psi.dims(), v);
            } catch (const Error &e) {
                throw std::invalid_argument(e.what());
            }
        });
        ops = preparation_unitaries(psi, obs, *target);
    } else if (mode == "phases") {
        const auto *f = file_.find("phases");
        if (!f)
            throw ParseError(0, "phases", "missing");
        const auto phases = guarded(*f, [&] {
            std::vector<double> out;
            for (auto tok : split(f->value, ','))
                out.push_back(parse_real(tok));
            return out;
        });
        if (phases.size() != obs.branch_count())
            throw ParseError(f->line, "phases", "need one phase per branch");
        ops = phase_shift_unitaries(obs, phases);
    } else if (mode == "random") {
        Sampler rng(seed_);
        for (std::size_t n = 0; n < obs.branch_count(); ++n)
            ops.emplace_back(psi.dims(), random::haar_unitary(side, rng));
    } else {
        throw ParseError(mode_field->line, "post_unitaries",
                         "expected identity, explicit, prepare, phases or "
                         "random");
    }

    const auto records = ll_channel(psi, obs, ops);
    const auto born = rule_probabilities(ProbabilityRule::born(), psi, obs);
    double worst_p = 0.0;
    double worst_target = 0.0;
    for (const auto &r : records) {
        const auto idx = std::to_string(r.branch_index);
        add("eigenvalue", idx, r.eigenvalue);
        add("p", idx, r.probability);
        add_amplitudes("post_amp", idx, r.post_state);
        worst_p = std::max(worst_p, std::abs(r.probability - born[r.branch_index]));
        if (target)
            worst_target = std::max(
                worst_target,
                (r.post_state.amplitudes() - target->amplitudes())
                    .cwiseAbs()
                    .maxCoeff());
    }
    add("born_deviation", worst_p);
    if (worst_p > 1e-12)
        throw InvariantViolation("ll_born_probabilities",
                                 "deviation " + fmt_exact(worst_p));
    if (target) {
        add("target_deviation", worst_target);
        if (worst_target > 1e-12)
            throw InvariantViolation("state_preparation",
                                     "deviation " + fmt_exact(worst_target));
    }
}

void Builder::telepathy() {
    const auto psi = state(std::nullopt);
    if (psi.dims().size() != 2)
        throw ParseError(file_.find("state") ? file_.find("state")->line : 0,
                         "state", "telepathy needs a bipartite state");
    const auto alice = observable('a', Dims{psi.dims()[0]}, "sigma_z");
    const auto bob = observable('b', Dims{psi.dims()[1]}, "sigma_z");

    const auto *rule_field = file_.find("rule");
    const std::string rule_name = rule_field ? rule_field->value : "born";
    const auto *q_field = file_.find("q");
    std::optional<ProbabilityRule> rule;
    if (rule_name == "born") {
        if (q_field)
            throw ParseError(q_field->line, "q",
                             "only allowed with rule = nonborn_exponent");
        rule = ProbabilityRule::born();
    } else if (rule_name == "nonborn_exponent") {
        if (!q_field)
            throw ParseError(0, "q", "missing");
        const double q = real_field("q", 1.0);
        if (!(q > 0.0))
            throw ParseError(q_field->line, "q", "must be positive");
        rule = ProbabilityRule::non_born_exponent(q);
    } else {
        throw ParseError(rule_field->line, "rule",
                         "expected born or nonborn_exponent");
    }

    const TelepathyScenario sc(psi, alice, bob, *rule);
    const auto with = bob_distribution_with_alice(sc);
    const auto without = bob_distribution_without_alice(sc);
    for (std::size_t j = 0; j < with.size(); ++j)
        add("with_alice", std::to_string(j), with[j]);
    for (std::size_t j = 0; j < without.size(); ++j)
        add("without_alice", std::to_string(j), without[j]);
    const double gap = tv_distance(with, without);
    add("signaling_gap", gap);
    const double converse = signaling_gap(swap_roles(sc, *rule));
    add("converse_gap", converse);
    if (rule->kind() == ProbabilityRule::Kind::Born &&
        std::max(gap, converse) > 1e-12)
        throw InvariantViolation("no_signaling",
                                 "Born rule gap " + fmt_exact(gap));

    const auto shots = count_field("shots", 0);
    if (shots > 0) {
        Sampler rng(seed_);
        const auto emp_with = channel_simulation(sc, true, shots, rng);
        const auto emp_without = channel_simulation(sc, false, shots, rng);
        for (std::size_t j = 0; j < emp_with.size(); ++j)
            add("empirical_with_alice", std::to_string(j), emp_with[j]);
        for (std::size_t j = 0; j < emp_without.size(); ++j)
            add("empirical_without_alice", std::to_string(j), emp_without[j]);
        add("empirical_gap", tv_distance(emp_with, emp_without));
    }
}

void Builder::entropy_demo() {
    const auto *density_field = file_.find("density");
    const auto *state_field = file_.find("state");
    if (density_field && state_field)
        throw ParseError(density_field->line, "density",
                         "give either state or density");
    std::optional<DensityMatrix> rho;
    if (density_field) {
        Dims dims;
        if (const auto *d = file_.find("dims")) {
            dims = guarded(*d, [&] {
                Dims out;
                for (auto tok : split(d->value, ','))
                    out.push_back(parse_count(tok));
                return out;
            });
        } else {
            dims = {static_cast<std::size_t>(
                guarded(*density_field,
                        [&] { return parse_matrix(density_field->value); })
                    .rows())};
        }
        const Matrix m = matrix_for(*density_field, total_dimension(dims));
        rho.emplace(dims, m);
    } else {
        rho.emplace(density_from_pure(state(std::nullopt)));
    }
    const auto obs = observable('a', rho->dims(), std::nullopt);
    const auto after = nonselective_channel(*rho, obs);
    const double s_before = von_neumann_entropy(*rho);
    const double s_after = von_neumann_entropy(after);
    add("entropy_before", s_before);
    add("entropy_after_nonselective", s_after);
    const auto rule = ProbabilityRule::born();
    for (std::size_t i = 0; i < obs.branch_count(); ++i) {
        const auto &p = obs.projector(i).matrix();
        if ((p * after.matrix() * p).trace().real() <= PSD_TOL)
            continue;
        const auto out = classical_selective(after, obs, i, rule);
        add("p", std::to_string(i), out.probability);
        add("entropy_branch", std::to_string(i),
            von_neumann_entropy(out.state));
    }
    const double avg = average_selective_entropy(after, obs);
    add("entropy_average_selective", avg);
    if (s_after < s_before - 1e-10)
        throw InvariantViolation("nonselective_entropy_increase",
                                 "entropy dropped");
    if (avg > s_after + 1e-10)
        throw InvariantViolation("selective_entropy_decrease",
                                 "average branch entropy grew");
}

Report Builder::run(std::optional<std::uint64_t> seed_override) {
    const auto *kind_field = file_.find("kind");
    if (!kind_field)
        throw ParseError(0, "kind", "missing");
    const auto &kind = kind_field->value;
    const auto it = kind_keys().find(kind);
    if (it == kind_keys().end())
        throw ParseError(kind_field->line, "kind", "unknown kind '" + kind + "'");
    static const std::set<std::string> common{"kind", "id", "seed", "state",
                                              "dims"};
    for (const auto &f : file_.fields())
        if (!common.count(f.key) && !it->second.count(f.key))
            throw ParseError(f.line, f.key,
                             "not used by kind '" + kind + "'");

    if (const auto *f = file_.find("id"))
        id_ = f->value;
    if (const auto *f = file_.find("seed"))
        seed_ = guarded(*f, [&] {
            return static_cast<std::uint64_t>(parse_count(f->value));
        });
    if (seed_override)
        seed_ = *seed_override;
    report_.id = id_;
    report_.kind = kind;

    auto pointer_size = [&](std::string_view key) -> std::optional<std::size_t> {
        if (!file_.find(key))
            return std::nullopt;
        return count_field(key, 0);
    };

    if (kind == "two_pointer" || kind == "one_pointer") {
        const auto psi = state(std::nullopt);
        const auto a = observable('a', psi.dims(), std::nullopt);
        const auto b = observable('b', psi.dims(), std::nullopt);
        if (kind == "two_pointer")
            pointer_kind(PointerMode::TwoPointer, psi, a, b,
                         pointer_size("pointer_n"), pointer_size("pointer_m"));
        else
            pointer_kind(PointerMode::OnePointer, psi, a, b,
                         pointer_size("pointer_n"), std::nullopt);
    } else if (kind == "epr") {
        const auto psi = state("epr_bohm");
        if (psi.dims() != Dims{2})
            throw ParseError(file_.find("state") ? file_.find("state")->line : 0,
                             "state", "EPR scenario needs a qubit");
        const auto a = observable_from_matrix(pauli_z());
        const auto b = observable('b', psi.dims(), "sigma_z");
        pointer_kind(PointerMode::OnePointer, psi, a, b, 2, std::nullopt);
    } else if (kind == "stern_gerlach") {
        stern_gerlach();
    } else if (kind == "ll_scheme") {
        ll_scheme();
    } else if (kind == "telepathy") {
        telepathy();
    } else {
        entropy_demo();
    }
    return std::move(report_);
}

constexpr std::array<Preset, 11> kPresets{{
    {"epr_bohm",
     "one pointer qubit coupled by conditional-NOT; ends in the singlet",
     "kind = epr\nid = epr_bohm\nstate = epr_bohm\nobservable_b = sigma_z\n"},
    {"two_pointer_sz_sx",
     "sigma_z then sigma_x on |up> read out through two pointers",
     "kind = two_pointer\nid = two_pointer_sz_sx\nstate = up\n"
     "observable_a = sigma_z\nobservable_b = sigma_x\n"},
    {"one_pointer_sz_sx",
     "same measurement with the small system acting as second pointer",
     "kind = one_pointer\nid = one_pointer_sz_sx\nstate = up\n"
     "observable_a = sigma_z\nobservable_b = sigma_x\n"},
    {"two_pointer_degenerate",
     "qutrit with a doubly degenerate A and a rank-2 branch of B",
     "kind = two_pointer\nid = two_pointer_degenerate\n"
     "state = 0.6, 0.48, 0.64i\n"
     "observable_a = 1, 0, 0; 0, 1, 0; 0, 0, 2\n"
     "observable_b = 0, 1, 0; 1, 0, 0; 0, 0, 1\n"},
    {"stern_gerlach",
     "spin-1/2 sub-beams pick up different phases only",
     "kind = stern_gerlach\nid = stern_gerlach\nstate = plus\n"
     "observable_a = sigma_z\nphases = 0.5, -0.5\n"},
    {"ll_identity",
     "measure-then-evolve with identity unitaries: projection postulate",
     "kind = ll_scheme\nid = ll_identity\nstate = 0.6, 0.8\n"
     "observable_a = sigma_z\npost_unitaries = identity\n"},
    {"ll_prepare",
     "result-dependent unitaries steer every outcome to one target state",
     "kind = ll_scheme\nid = ll_prepare\nstate = 0.6, 0.8\n"
     "observable_a = sigma_z\npost_unitaries = prepare\n"
     "target = 0.70710678118654752, 0.70710678118654752i\n"},
    {"telepathy_born",
     "Born reader on sqrt(0.36)|00> + sqrt(0.64)|11>: no signal",
     "kind = telepathy\nid = telepathy_born\nstate = asymmetric(0.36)\n"
     "rule = born\nshots = 100000\nseed = 12345\n"},
    {"telepathy_nonborn",
     "exponent-2 reader on the same pair: Alice's choice is visible",
     "kind = telepathy\nid = telepathy_nonborn\nstate = asymmetric(0.36)\n"
     "rule = nonborn_exponent\nq = 2\nshots = 100000\nseed = 12345\n"},
    {"telepathy_bell",
     "maximally entangled pair, Born reader; both marginals are 1/2",
     "kind = telepathy\nid = telepathy_bell\nstate = bell\nrule = born\n"},
    {"entropy_demo",
     "dephasing raises entropy, reading the result lowers it on average",
     "kind = entropy_demo\nid = entropy_demo\n"
     "density = 0.5, 0.25, 0; 0.25, 0.3, 0.1i; 0, -0.1i, 0.2\n"
     "observable_a = 1, 0, 0; 0, 1, 0; 0, 0, -1\n"},
}};

} // namespace

// ScenarioFile

ScenarioFile ScenarioFile::parse(std::string_view text) {
    ScenarioFile out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (nl == std::string_view::npos)
                break;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_no, std::string(line),
                             "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known_keys().count(key))
            throw ParseError(line_no, key, "unknown field");
        if (value.empty())
            throw ParseError(line_no, key, "empty value");
        if (!repeatable(key) && out.find(key))
            throw ParseError(line_no, key, "given more than once");
        out.fields_.push_back({key, value, line_no});
        if (nl == std::string_view::npos)
            break;
    }
    return out;
}

const Field *ScenarioFile::find(std::string_view key) const {
    for (const auto &f : fields_)
        if (f.key == key)
            return &f;
    return nullptr;
}

std::vector<const Field *> ScenarioFile::all(std::string_view key) const {
    std::vector<const Field *> out;
    for (const auto &f : fields_)
        if (f.key == key)
            out.push_back(&f);
    return out;
}

// Values

Complex parse_complex(std::string_view token) {
    std::string t;
    for (char c : token)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t.empty())
        throw std::invalid_argument("empty complex number");
    if (t.back() != 'i')
        return {parse_real(t), 0.0};
    t.pop_back();
    // Split at the last sign that is not an exponent sign.
    std::size_t split_at = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    // A bare `i`, `+i` or `-i` has unit coefficient.
    auto coefficient = [](std::string_view c) {
        if (c.empty() || c == "+")
            return 1.0;
        if (c == "-")
            return -1.0;
        return parse_real(c);
    };
    if (split_at == std::string::npos)
        return {0.0, coefficient(t)};
    return {parse_real(std::string_view(t).substr(0, split_at)),
            coefficient(std::string_view(t).substr(split_at))};
}

std::vector<Complex> parse_complex_list(std::string_view text) {
    std::vector<Complex> out;
    for (auto tok : split(text, ','))
        out.push_back(parse_complex(tok));
    return out;
}

Matrix parse_matrix(std::string_view text) {
    const auto rows = split(text, ';');
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto entries = parse_complex_list(rows[static_cast<std::size_t>(r)]);
        if (static_cast<Eigen::Index>(entries.size()) != n)
            throw std::invalid_argument("matrix is not square");
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = entries[static_cast<std::size_t>(c)];
    }
    return m;
}

StateVector named_state(std::string_view name) {
    const double h = 1.0 / std::numbers::sqrt2;
    auto qubit = [](Complex a, Complex b) {
        Amplitudes v(2);
        v << a, b;
        return StateVector::normalize({2}, v);
    };
    if (name == "up")
        return qubit(1, 0);
    if (name == "down")
        return qubit(0, 1);
    if (name == "plus")
        return qubit(h, h);
    if (name == "minus" || name == "epr_bohm")
        return qubit(h, -h);
    if (name == "bell")
        return bell_pair();
    constexpr std::string_view prefix = "asymmetric(";
    if (name.starts_with(prefix) && name.ends_with(")")) {
        const auto inner_text =
            name.substr(prefix.size(), name.size() - prefix.size() - 1);
        const double p = parse_real(inner_text);
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("asymmetric(p) needs p in [0, 1]");
        return asymmetric_pair(p);
    }
    throw std::invalid_argument("unknown state preset '" + std::string(name) +
                                "'");
}

// Running and formatting

Report run_scenario(const ScenarioFile &file, const std::string &default_id,
                    std::optional<std::uint64_t> seed_override) {
    return Builder(file, default_id).run(seed_override);
}

std::string format_table(const Report &report) {
    std::vector<std::string> keys;
    std::size_t width = 0;
    for (const auto &row : report.rows) {
        keys.push_back(row.index.empty() ? row.quantity
                                         : row.quantity + "[" + row.index + "]");
        width = std::max(width, keys.back().size());
    }
    std::ostringstream out;
    out << "scenario: " << report.id << " (" << report.kind << ")\n";
    for (std::size_t k = 0; k < keys.size(); ++k) {
        out << "  " << keys[k] << ':'
            << std::string(width - keys[k].size() + 1, ' ')
            << fmt_fixed(report.rows[k].value) << '\n';
    }
    return out.str();
}

std::string format_records(const Report &report) {
    std::ostringstream out;
    for (const auto &row : report.rows) {
        out << report.id << '.' << row.quantity;
        if (!row.index.empty())
            out << '[' << row.index << ']';
        out << '=' << fmt_exact(row.value) << '\n';
    }
    return out.str();
}

std::span<const Preset> scenario_presets() { return kPresets; }

const Preset *find_preset(std::string_view name) {
    for (const auto &p : kPresets)
        if (p.name == name)
            return &p;
    return nullptr;
}

std::string format_presets() {
    std::ostringstream out;
    out << "scenarios (qmeasure run <name>):\n";
    std::size_t width = 0;
    for (const auto &p : kPresets)
        width = std::max(width, p.name.size());
    for (const auto &p : kPresets)
        out << "  " << p.name << std::string(width - p.name.size() + 2, ' ')
            << p.description << '\n';
    out << "states (state = <name>):\n"
           "  up, down        qubit basis states\n"
           "  plus, minus     (|0> +- |1>) / sqrt(2)\n"
           "  epr_bohm        (|up> - |down>) / sqrt(2), the EPR small system\n"
           "  bell            (|00> + |11>) / sqrt(2)\n"
           "  asymmetric(p)   sqrt(p)|00> + sqrt(1-p)|11>\n"
           "observables (observable_a|b = <name>):\n"
           "  sigma_x, sigma_y, sigma_z   Pauli matrices\n"
           "  identity                    single fully degenerate branch\n";
    return out.str();
}

} // namespace qmeasure::scenario
