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
 * Sequential measurement of two observables through apparatus pointers.
 *
 * Composite layout: the small system's own subsystems come first, then
 * pointer-1 (dimension N), then pointer-2 (dimension M, two-pointer mode
 * only). Both pointers start in basis state 0. Coupling A shifts pointer-1
 * by the branch index i of A modulo N; coupling B shifts pointer-2 by the
 * branch index j of B modulo M. Pointer reading i therefore labels branch i.
 */

#include <cstddef>
#include <optional>

#include "qmeasure/distribution.hpp"
#include "qmeasure/observable.hpp"
#include "qmeasure/state.hpp"

namespace qmeasure {

enum class PointerMode { TwoPointer, OnePointer };

/// Threshold on p_i below which conditioning on branch i is refused.
inline constexpr double CONDITIONING_TOL = 1e-12;

class PointerSchemeSetup {
  public:
    /// Pointer sizes default to the branch counts. Throws InvalidInput if a
    /// pointer is smaller than its observable's branch count, if the
    /// observables do not act on the small system, or if a second pointer
    /// size is given in one-pointer mode.
    PointerSchemeSetup(StateVector small_state, Observable obs_a,
                       Observable obs_b, PointerMode mode,
                       std::optional<std::size_t> n_pointer1 = std::nullopt,
                       std::optional<std::size_t> m_pointer2 = std::nullopt);

    [[nodiscard]] const StateVector &small_state() const noexcept {
        return small_state_;
    }
    [[nodiscard]] const Observable &obs_a() const noexcept { return obs_a_; }
    [[nodiscard]] const Observable &obs_b() const noexcept { return obs_b_; }
    [[nodiscard]] PointerMode mode() const noexcept { return mode_; }
    [[nodiscard]] std::size_t n_pointer1() const noexcept { return n_; }
    /// 0 in one-pointer mode.
    [[nodiscard]] std::size_t m_pointer2() const noexcept { return m_; }

    /// Small-system dims followed by the pointer dims.
    [[nodiscard]] Dims composite_dims() const;
    /// psi_0 (x) |alpha_0> [(x) |beta_0>].
    [[nodiscard]] StateVector initial_state() const;

  private:
    StateVector small_state_;
    Observable obs_a_;
    Observable obs_b_;
    PointerMode mode_;
    std::size_t n_;
    std::size_t m_;
};

/// Joint distribution p(i, j) over (branch of A) x (branch of B).
class JointDistribution {
  public:
    /// Throws InvalidInput on negative entries or total mass off by more
    /// than NORM_TOL.
    explicit JointDistribution(Eigen::MatrixXd p);

    [[nodiscard]] const Eigen::MatrixXd &matrix() const noexcept { return p_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
        return p_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    [[nodiscard]] std::size_t rows() const noexcept {
        return static_cast<std::size_t>(p_.rows());
    }
    [[nodiscard]] std::size_t cols() const noexcept {
        return static_cast<std::size_t>(p_.cols());
    }

  private:
    Eigen::MatrixXd p_;
};

struct SchemeResult {
    StateVector final_state;
    JointDistribution joint;
};

/// Cyclic shift |n> -> |n + k mod size>.
Matrix cyclic_shift(std::size_t size, std::size_t k);

/// sum_i P_i (x) Shift_N^i [(x) 1_M].
Operator shift_unitary_a(const PointerSchemeSetup &setup);
/// sum_j R_j (x) 1_N (x) Shift_M^j. Two-pointer mode only.
Operator shift_unitary_b(const PointerSchemeSetup &setup);

SchemeResult run_two_pointer(const PointerSchemeSetup &setup);
SchemeResult run_one_pointer(const PointerSchemeSetup &setup);
/// Dispatches on the setup's mode.
SchemeResult run_scheme(const PointerSchemeSetup &setup);

/// p_i = sum_j p_ij.
OutcomeDistribution marginal_a(const JointDistribution &joint);

/// p_{j|i} = p_ij / p_i. Throws ZeroProbabilityBranch when p_i is below
/// CONDITIONING_TOL.
OutcomeDistribution conditional_b_given_a(const JointDistribution &joint,
                                          std::size_t i);

/// Largest |p_{j|i} - Born_B(P_i psi_0 / |P_i psi_0|)_j| over the branches
/// i the scheme reports with nonzero probability.
double projection_equivalence_report(const PointerSchemeSetup &setup);

/**
 * Independent route to the two-pointer joint distribution: builds the final
 * state from the closed form sum_ij (R_j P_i psi_0) (x) |alpha_i> (x)
 * |beta_j> without the coupling unitaries, then enumerates every composite
 * basis outcome and bins its Born weight by the two pointer digits.
 */
JointDistribution brute_force_joint(const PointerSchemeSetup &setup);

} // namespace qmeasure
