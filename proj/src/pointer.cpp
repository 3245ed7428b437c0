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

#include "qmeasure/pointer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmeasure {

PointerSchemeSetup::PointerSchemeSetup(StateVector small_state,
                                       Observable obs_a, Observable obs_b,
                                       PointerMode mode,
                                       std::optional<std::size_t> n_pointer1,
                                       std::optional<std::size_t> m_pointer2)
    : small_state_(std::move(small_state)), obs_a_(std::move(obs_a)),
      obs_b_(std::move(obs_b)), mode_(mode) {
    if (obs_a_.dims() != small_state_.dims() ||
        obs_b_.dims() != small_state_.dims())
        throw Error(ErrorCode::InvalidInput,
                    "observables must act on the small system");
    n_ = n_pointer1.value_or(obs_a_.branch_count());
    if (n_ < obs_a_.branch_count())
        throw Error(ErrorCode::InvalidInput,
                    "pointer-1 has fewer states (" + std::to_string(n_) +
                        ") than A has eigenvalues (" +
                        std::to_string(obs_a_.branch_count()) + ")");
    if (mode_ == PointerMode::OnePointer) {
        if (m_pointer2)
            throw Error(ErrorCode::InvalidInput,
                        "one-pointer mode takes no pointer-2 size");
        m_ = 0;
        return;
    }
    m_ = m_pointer2.value_or(obs_b_.branch_count());
    if (m_ < obs_b_.branch_count())
        throw Error(ErrorCode::InvalidInput,
                    "pointer-2 has fewer states (" + std::to_string(m_) +
                        ") than B has eigenvalues (" +
                        std::to_string(obs_b_.branch_count()) + ")");
}

Dims PointerSchemeSetup::composite_dims() const {
    Dims dims = small_state_.dims();
    dims.push_back(n_);
    if (mode_ == PointerMode::TwoPointer)
        dims.push_back(m_);
    return dims;
}

StateVector PointerSchemeSetup::initial_state() const {
    if (mode_ == PointerMode::OnePointer)
        return tensor({small_state_, StateVector::basis({n_}, 0)});
    return tensor({small_state_, StateVector::basis({n_}, 0),
                   StateVector::basis({m_}, 0)});
}

JointDistribution::JointDistribution(Eigen::MatrixXd p) : p_(std::move(p)) {
    if (p_.size() == 0)
        throw Error(ErrorCode::InvalidInput, "empty joint distribution");
    if (!p_.allFinite() || p_.minCoeff() < -NORM_TOL)
        throw Error(ErrorCode::InvalidInput,
                    "joint distribution has a negative entry");
    if (std::abs(p_.sum() - 1.0) > NORM_TOL)
        throw Error(ErrorCode::InvalidInput,
                    "joint distribution does not sum to 1");
    p_ = p_.cwiseMax(0.0);
}

Matrix cyclic_shift(std::size_t size, std::size_t k) {
    const auto n = static_cast<Eigen::Index>(size);
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t col = 0; col < size; ++col)
        out(static_cast<Eigen::Index>((col + k) % size),
            static_cast<Eigen::Index>(col)) = 1.0;
    return out;
}

Operator shift_unitary_a(const PointerSchemeSetup &setup) {
    const auto &obs = setup.obs_a();
    const auto n = setup.n_pointer1();
    const Dims dims = setup.composite_dims();
    const auto total = static_cast<Eigen::Index>(total_dimension(dims));
    Matrix u = Matrix::Zero(total, total);
    for (std::size_t i = 0; i < obs.branch_count(); ++i) {
        Operator term = kron(obs.projector(i), Operator({n}, cyclic_shift(n, i)));
        if (setup.mode() == PointerMode::TwoPointer)
            term = kron(term, Operator::identity({setup.m_pointer2()}));
        u += term.matrix();
    }
    return Operator(dims, std::move(u));
}

Operator shift_unitary_b(const PointerSchemeSetup &setup) {
    if (setup.mode() != PointerMode::TwoPointer)
        throw Error(ErrorCode::InvalidInput,
                    "coupling B needs a second pointer");
    const auto &obs = setup.obs_b();
    const auto m = setup.m_pointer2();
    const Dims dims = setup.composite_dims();
    const auto total = static_cast<Eigen::Index>(total_dimension(dims));
    Matrix u = Matrix::Zero(total, total);
    const Operator idle = Operator::identity({setup.n_pointer1()});
    for (std::size_t j = 0; j < obs.branch_count(); ++j)
        u += kron(kron(obs.projector(j), idle),
                  Operator({m}, cyclic_shift(m, j)))
                 .matrix();
    return Operator(dims, std::move(u));
}

SchemeResult run_two_pointer(const PointerSchemeSetup &setup) {
    if (setup.mode() != PointerMode::TwoPointer)
        throw Error(ErrorCode::InvalidInput, "setup is not two-pointer");
    const auto start = setup.initial_state();
    const Amplitudes after_a = shift_unitary_a(setup).matrix() * start.amplitudes();
    auto final_state = StateVector::normalize(
        start.dims(), shift_unitary_b(setup).matrix() * after_a);

    const auto n = setup.n_pointer1();
    const auto m = setup.m_pointer2();
    const auto small = total_dimension(setup.small_state().dims());
    const auto rows = setup.obs_a().branch_count();
    const auto cols = setup.obs_b().branch_count();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (std::size_t s = 0; s < small; ++s)
                acc += std::norm(final_state[(s * n + i) * m + j]);
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    return {std::move(final_state), JointDistribution(std::move(p))};
}

SchemeResult run_one_pointer(const PointerSchemeSetup &setup) {
    if (setup.mode() != PointerMode::OnePointer)
        throw Error(ErrorCode::InvalidInput, "setup is not one-pointer");
    const auto start = setup.initial_state();
    auto final_state = StateVector::normalize(
        start.dims(), shift_unitary_a(setup).matrix() * start.amplitudes());

    const auto n = setup.n_pointer1();
    const auto small = total_dimension(setup.small_state().dims());
    const auto &obs_b = setup.obs_b();
    const auto rows = setup.obs_a().branch_count();
    const auto cols = obs_b.branch_count();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        // Small-system component attached to pointer reading i.
        Amplitudes v(static_cast<Eigen::Index>(small));
        for (std::size_t s = 0; s < small; ++s)
            v(static_cast<Eigen::Index>(s)) = final_state[s * n + i];
        for (std::size_t j = 0; j < cols; ++j)
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (obs_b.projector(j).matrix() * v).squaredNorm();
    }
    return {std::move(final_state), JointDistribution(std::move(p))};
}

SchemeResult run_scheme(const PointerSchemeSetup &setup) {
    return setup.mode() == PointerMode::TwoPointer ? run_two_pointer(setup)
                                                   : run_one_pointer(setup);
}

OutcomeDistribution marginal_a(const JointDistribution &joint) {
    std::vector<double> p(joint.rows());
    for (std::size_t i = 0; i < joint.rows(); ++i)
        p[i] = joint.matrix().row(static_cast<Eigen::Index>(i)).sum();
    return OutcomeDistribution(std::move(p));
}

OutcomeDistribution conditional_b_given_a(const JointDistribution &joint,
                                          std::size_t i) {
    if (i >= joint.rows())
        throw Error(ErrorCode::InvalidInput, "branch index out of range");
    const auto row = joint.matrix().row(static_cast<Eigen::Index>(i));
    const double pi = row.sum();
    if (pi <= CONDITIONING_TOL)
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "cannot condition on branch " + std::to_string(i) +
                        " with probability " + std::to_string(pi));
    std::vector<double> p(joint.cols());
    for (std::size_t j = 0; j < joint.cols(); ++j)
        p[j] = row(static_cast<Eigen::Index>(j)) / pi;
    return OutcomeDistribution(std::move(p));
}

double projection_equivalence_report(const PointerSchemeSetup &setup) {
    const auto result = run_scheme(setup);
    const auto marg = marginal_a(result.joint);
    double worst = 0.0;
    for (std::size_t i = 0; i < marg.size(); ++i) {
        if (marg[i] <= CONDITIONING_TOL)
            continue;
        const auto cond = conditional_b_given_a(result.joint, i);
        // The reference side: collapse psi_0 by hand, then Born on B.
        const Amplitudes projected =
            setup.obs_a().projector(i).matrix() *
            setup.small_state().amplitudes();
        const Amplitudes collapsed = projected / projected.norm();
        for (std::size_t j = 0; j < cond.size(); ++j) {
            const double born =
                (setup.obs_b().projector(j).matrix() * collapsed)
                    .squaredNorm();
            worst = std::max(worst, std::abs(cond[j] - born));
        }
    }
    return worst;
}

JointDistribution brute_force_joint(const PointerSchemeSetup &setup) {
    if (setup.mode() != PointerMode::TwoPointer)
        throw Error(ErrorCode::InvalidInput, "setup is not two-pointer");
    const auto n = setup.n_pointer1();
    const auto m = setup.m_pointer2();
    const auto small = total_dimension(setup.small_state().dims());
    const auto &psi = setup.small_state().amplitudes();
    const auto &obs_a = setup.obs_a();
    const auto &obs_b = setup.obs_b();

    Amplitudes final_amps =
        Amplitudes::Zero(static_cast<Eigen::Index>(small * n * m));
    for (std::size_t i = 0; i < obs_a.branch_count(); ++i) {
        const Amplitudes pi_psi = obs_a.projector(i).matrix() * psi;
        for (std::size_t j = 0; j < obs_b.branch_count(); ++j) {
            const Amplitudes term = obs_b.projector(j).matrix() * pi_psi;
            for (std::size_t s = 0; s < small; ++s)
                final_amps(static_cast<Eigen::Index>((s * n + i) * m + j)) +=
                    term(static_cast<Eigen::Index>(s));
        }
    }

    Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(m));
    for (Eigen::Index idx = 0; idx < final_amps.size(); ++idx) {
        const auto u = static_cast<std::size_t>(idx);
        const auto digit2 = u % m;
        const auto digit1 = (u / m) % n;
        cells(static_cast<Eigen::Index>(digit1),
              static_cast<Eigen::Index>(digit2)) += std::norm(final_amps(idx));
    }
    // Pointer reading d maps back to branch d; readings past the branch
    // count carry no weight.
    return JointDistribution(
        cells.topLeftCorner(static_cast<Eigen::Index>(obs_a.branch_count()),
                            static_cast<Eigen::Index>(obs_b.branch_count())));
}

} // namespace qmeasure
