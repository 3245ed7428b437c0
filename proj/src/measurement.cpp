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

#include "qmeasure/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qmeasure {

namespace {

void require_dims(const Dims &a, const Dims &b) {
    if (a != b)
        throw Error(ErrorCode::InvalidInput,
                    "state and observable act on different spaces");
}

void require_branch(const Observable &obs, std::size_t i) {
    if (i >= obs.branch_count())
        throw Error(ErrorCode::InvalidInput, "branch index out of range");
}

} // namespace

ProbabilityRule ProbabilityRule::non_born_exponent(double q) {
    if (!std::isfinite(q) || !(q > 0.0))
        throw Error(ErrorCode::InvalidInput,
                    "rule exponent must be finite and positive");
    return ProbabilityRule(Kind::NonBornExponent, q);
}

OutcomeDistribution
ProbabilityRule::from_weights(std::span<const double> born_weights) const {
    std::vector<double> p(born_weights.begin(), born_weights.end());
    if (kind_ == Kind::Born) {
        double total = 0.0;
        for (auto w : p)
            total += w;
        if (!(total > 0.0))
            throw Error(ErrorCode::InvalidInput, "all branch weights vanish");
        // Rescale away roundoff in sum_i |P_i s|^2.
        for (auto &w : p)
            w /= total;
        return OutcomeDistribution(std::move(p));
    }
    // Roundoff-level weights would be inflated by q < 1 and break
    // determinism on eigenstates.
    double scale = 0.0;
    for (auto w : p)
        scale += w;
    for (auto &w : p)
        if (w <= ZERO_PROB_TOL * scale)
            w = 0.0;
    // Log domain so large exponents do not underflow every term.
    double max_log = -std::numeric_limits<double>::infinity();
    for (auto w : p)
        if (w > 0.0)
            max_log = std::max(max_log, exponent_ * std::log(w));
    if (!std::isfinite(max_log))
        throw Error(ErrorCode::InvalidInput, "all branch weights vanish");
    double total = 0.0;
    for (auto &w : p) {
        w = w > 0.0 ? std::exp(exponent_ * std::log(w) - max_log) : 0.0;
        total += w;
    }
    for (auto &w : p)
        w /= total;
    return OutcomeDistribution(std::move(p));
}

std::vector<double> branch_weights(const StateVector &s,
                                   const Observable &obs) {
    require_dims(s.dims(), obs.dims());
    std::vector<double> w;
    w.reserve(obs.branch_count());
    for (const auto &b : obs.branches())
        w.push_back(apply(b.projector, s).squaredNorm());
    return w;
}

OutcomeDistribution rule_probabilities(const ProbabilityRule &rule,
                                       const StateVector &s,
                                       const Observable &obs) {
    const auto w = branch_weights(s, obs);
    return rule.from_weights(w);
}

StateVector project_update(const StateVector &s, const Observable &obs,
                           std::size_t branch) {
    require_dims(s.dims(), obs.dims());
    require_branch(obs, branch);
    Amplitudes v = apply(obs.projector(branch), s);
    if (v.squaredNorm() <= ZERO_PROB_TOL)
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "branch " + std::to_string(branch) +
                        " has zero projection");
    return StateVector::normalize(s.dims(), std::move(v));
}

std::size_t sample(const OutcomeDistribution &dist, Sampler &rng) {
    std::discrete_distribution<std::size_t> pick(dist.probs().begin(),
                                                 dist.probs().end());
    return dist.labels()[pick(rng)];
}

MeasurementRecord measure_selective(const StateVector &s,
                                    const Observable &obs,
                                    const ProbabilityRule &rule,
                                    std::size_t forced_branch) {
    require_branch(obs, forced_branch);
    const auto dist = rule_probabilities(rule, s, obs);
    const double p = dist[forced_branch];
    if (p <= ZERO_PROB_TOL)
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "forced branch " + std::to_string(forced_branch) +
                        " has zero probability");
    return {forced_branch, obs.eigenvalue(forced_branch), p,
            project_update(s, obs, forced_branch)};
}

MeasurementRecord measure_selective(const StateVector &s,
                                    const Observable &obs,
                                    const ProbabilityRule &rule, Sampler &rng) {
    const auto dist = rule_probabilities(rule, s, obs);
    const auto i = sample(dist, rng);
    return {i, obs.eigenvalue(i), dist[i], project_update(s, obs, i)};
}

std::vector<MeasurementRecord>
ll_channel(const StateVector &s, const Observable &obs,
           std::span<const Operator> post_unitaries) {
    require_dims(s.dims(), obs.dims());
    if (post_unitaries.size() != obs.branch_count())
        throw Error(ErrorCode::InvalidInput,
                    "need exactly one post-measurement unitary per branch");
    for (const auto &u : post_unitaries) {
        if (u.dims() != s.dims())
            throw Error(ErrorCode::InvalidInput,
                        "post-measurement unitary acts on a different space");
        if (!u.is_unitary(NORM_TOL))
            throw Error(ErrorCode::NotUnitary,
                        "post-measurement operator is not unitary");
    }
    const auto weights = branch_weights(s, obs);
    std::vector<MeasurementRecord> out;
    for (std::size_t n = 0; n < obs.branch_count(); ++n) {
        if (weights[n] <= ZERO_PROB_TOL)
            continue;
        const auto collapsed = project_update(s, obs, n);
        out.push_back({n, obs.eigenvalue(n), weights[n],
                       StateVector::normalize(
                           s.dims(), apply(post_unitaries[n], collapsed))});
    }
    return out;
}

std::vector<Operator> phase_shift_unitaries(const Observable &obs,
                                            std::span<const double> phases) {
    if (phases.size() != obs.branch_count())
        throw Error(ErrorCode::InvalidInput, "need one phase per branch");
    const auto n = static_cast<Eigen::Index>(total_dimension(obs.dims()));
    std::vector<Operator> out;
    for (auto phase : phases)
        out.emplace_back(obs.dims(), std::polar(1.0, -phase) *
                                         Matrix::Identity(n, n));
    return out;
}

Matrix unitary_with_first_column(const Amplitudes &v) {
    const Matrix column = v;
    Eigen::HouseholderQR<Matrix> qr(column);
    Matrix q = qr.householderQ();
    // v = q.col(0) * r00 with |r00| = 1.
    const Complex r00 = qr.matrixQR()(0, 0);
    q.col(0) *= r00 / std::abs(r00);
    return q;
}

std::vector<Operator> preparation_unitaries(const StateVector &s,
                                            const Observable &obs,
                                            const StateVector &target) {
    require_dims(s.dims(), obs.dims());
    if (target.dims() != s.dims())
        throw Error(ErrorCode::InvalidInput,
                    "target state acts on a different space");
    const auto weights = branch_weights(s, obs);
    const Matrix to_target = unitary_with_first_column(target.amplitudes());
    std::vector<Operator> out;
    for (std::size_t n = 0; n < obs.branch_count(); ++n) {
        if (weights[n] <= ZERO_PROB_TOL) {
            out.push_back(Operator::identity(s.dims()));
            continue;
        }
        const auto collapsed = project_update(s, obs, n);
        const Matrix from = unitary_with_first_column(collapsed.amplitudes());
        out.emplace_back(s.dims(), to_target * from.adjoint());
    }
    return out;
}

DensityMatrix nonselective_channel(const DensityMatrix &rho,
                                   const Observable &obs) {
    require_dims(rho.dims(), obs.dims());
    const auto n = rho.matrix().rows();
    Matrix out = Matrix::Zero(n, n);
    for (const auto &b : obs.branches()) {
        const auto &p = b.projector.matrix();
        out += p * rho.matrix() * p;
    }
    return DensityMatrix(rho.dims(), std::move(out));
}

bool is_block_diagonal(const DensityMatrix &rho, const Observable &obs,
                       double tol) {
    require_dims(rho.dims(), obs.dims());
    for (std::size_t i = 0; i < obs.branch_count(); ++i)
        for (std::size_t j = 0; j < obs.branch_count(); ++j) {
            if (i == j)
                continue;
            const Matrix block = obs.projector(i).matrix() * rho.matrix() *
                                 obs.projector(j).matrix();
            if (block.cwiseAbs().maxCoeff() > tol)
                return false;
        }
    return true;
}

SelectiveOutcome classical_selective(const DensityMatrix &rho,
                                     const Observable &obs,
                                     std::size_t branch,
                                     const ProbabilityRule & /*rule*/) {
    require_branch(obs, branch);
    if (!is_block_diagonal(rho, obs))
        throw Error(ErrorCode::NotDecohered,
                    "state has coherences between branches");
    const auto &p = obs.projector(branch).matrix();
    const Matrix block = p * rho.matrix() * p;
    const double prob = block.trace().real();
    if (prob <= PSD_TOL)
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "branch " + std::to_string(branch) +
                        " has zero probability");
    return {prob, DensityMatrix(rho.dims(), block / prob)};
}

double average_selective_entropy(const DensityMatrix &rho,
                                 const Observable &obs) {
    const auto rule = ProbabilityRule::born();
    double acc = 0.0;
    for (std::size_t i = 0; i < obs.branch_count(); ++i) {
        const auto &p = obs.projector(i).matrix();
        if ((p * rho.matrix() * p).trace().real() <= PSD_TOL)
            continue;
        const auto out = classical_selective(rho, obs, i, rule);
        acc += out.probability * von_neumann_entropy(out.state);
    }
    return acc;
}

} // namespace qmeasure
