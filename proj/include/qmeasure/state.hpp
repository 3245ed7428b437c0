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
 * Dense states and operators over composite finite-dimensional systems.
 *
 * The composite basis is row-major: subsystem 0 is the slowest-varying
 * index. Every type here is an immutable value once constructed.
 */

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qmeasure/errors.hpp"

namespace qmeasure {

using Complex = std::complex<double>;
/// A vector with no normalization guarantee.
using Amplitudes = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

inline constexpr double NORM_TOL = 1e-10;
inline constexpr double HERM_TOL = 1e-10;
inline constexpr double PSD_TOL = 1e-10;

/// Product of the subsystem dimensions. Throws InvalidInput on an empty
/// list or a zero dimension.
std::size_t total_dimension(const Dims &dims);

/// Normalized pure state.
class StateVector {
  public:
    StateVector(Dims dims, Amplitudes amps);

    /// Rescales `amps` to unit norm; throws InvalidInput for the zero vector.
    static StateVector normalize(Dims dims, Amplitudes amps);
    static StateVector basis(Dims dims, std::size_t index);

    [[nodiscard]] const Dims &dims() const noexcept { return dims_; }
    [[nodiscard]] const Amplitudes &amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(amps_.size());
    }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_(i); }

  private:
    Dims dims_;
    Amplitudes amps_;
};

class Operator {
  public:
    Operator(Dims dims, Matrix entries);

    static Operator identity(Dims dims);

    [[nodiscard]] const Dims &dims() const noexcept { return dims_; }
    [[nodiscard]] const Matrix &matrix() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }

    [[nodiscard]] bool is_hermitian(double tol = HERM_TOL) const;
    [[nodiscard]] bool is_unitary(double tol = NORM_TOL) const;

  private:
    Dims dims_;
    Matrix entries_;
};

/// Hermitian, unit-trace, positive semi-definite matrix. The constructor
/// enforces all three and throws InvalidDensity otherwise; the stored matrix
/// is the Hermitian part of the input.
class DensityMatrix {
  public:
    DensityMatrix(Dims dims, Matrix entries);

    [[nodiscard]] const Dims &dims() const noexcept { return dims_; }
    [[nodiscard]] const Matrix &matrix() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(entries_.rows());
    }

  private:
    Dims dims_;
    Matrix entries_;
};

StateVector tensor(std::span<const StateVector> factors);
StateVector tensor(std::initializer_list<StateVector> factors);

/// Kronecker product; dims concatenate.
Operator kron(const Operator &a, const Operator &b);

/// <a|b>, conjugate-linear in `a`.
Complex inner(const StateVector &a, const StateVector &b);

Amplitudes apply(const Operator &op, const StateVector &s);

DensityMatrix density_from_pure(const StateVector &s);

/// Reduced density matrix on the subsystems listed in `keep` (any order,
/// result ordered by ascending subsystem index).
DensityMatrix partial_trace(const DensityMatrix &rho,
                            std::span<const std::size_t> keep);

/// Entropy in bits. Eigenvalues in [-PSD_TOL, 0) count as zero.
double von_neumann_entropy(const DensityMatrix &rho);

/// Reorders subsystems: subsystem k of the result is subsystem order[k] of
/// `s`.
StateVector permute_subsystems(const StateVector &s,
                               std::span<const std::size_t> order);

/// Mixed-radix strides of the row-major composite basis.
std::vector<std::size_t> strides(const Dims &dims);

} // namespace qmeasure
