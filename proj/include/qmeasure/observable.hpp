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

#include <cstddef>
#include <vector>

#include "qmeasure/state.hpp"

namespace qmeasure {

/// Default gap below which neighbouring eigenvalues merge into one branch.
inline constexpr double DEGENERACY_TOL = 1e-9;
/// Tolerance for projector idempotence, orthogonality and completeness.
inline constexpr double PROJECTOR_TOL = 1e-10;

/// One eigenspace of an observable.
struct Branch {
    double eigenvalue;
    Operator projector;
};

/**
 * Discrete-spectrum observable held as (eigenvalue, projector) branches.
 *
 * Branches are sorted by strictly increasing eigenvalue, projectors are
 * Hermitian, idempotent, mutually orthogonal and sum to the identity. Only
 * the factory functions below construct one.
 */
class Observable {
  public:
    [[nodiscard]] const Dims &dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t branch_count() const noexcept {
        return branches_.size();
    }
    [[nodiscard]] const std::vector<Branch> &branches() const noexcept {
        return branches_;
    }

    /// Throws InvalidInput when `i` is out of range.
    [[nodiscard]] const Operator &projector(std::size_t i) const;
    [[nodiscard]] double eigenvalue(std::size_t i) const;
    /// Rank of branch `i` (rounded trace of its projector).
    [[nodiscard]] std::size_t rank(std::size_t i) const;

  private:
    Observable(Dims dims, std::vector<Branch> branches)
        : dims_(std::move(dims)), branches_(std::move(branches)) {}

    friend Observable observable_from_branches(std::vector<Branch> branches);

    Dims dims_;
    std::vector<Branch> branches_;
};

/// Eigendecomposes a Hermitian matrix and groups eigenvalues by
/// single-linkage: sorted neighbours closer than `degeneracy_tol` share a
/// branch, whose eigenvalue is the cluster mean.
Observable observable_from_matrix(const Operator &h,
                                  double degeneracy_tol = DEGENERACY_TOL);

/// Validates a projector family and sorts it by eigenvalue. Throws
/// InvalidProjectorFamily on any invariant violation, including repeated
/// eigenvalues and zero projectors.
Observable observable_from_branches(std::vector<Branch> branches);

/// Sum of eigenvalue times projector.
Operator reconstruct(const Observable &obs);

/// Lifts an observable acting on subsystem `subsystem` of `full_dims` to the
/// whole composite space (identity on every other factor). The observable's
/// own dims must equal full_dims[subsystem] as a single factor.
Observable embed(const Observable &obs, const Dims &full_dims,
                 std::size_t subsystem);

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

} // namespace qmeasure
