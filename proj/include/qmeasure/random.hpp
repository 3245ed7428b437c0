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

/// Seeded generators of random states, unitaries, observables and density
/// matrices for property checks.

#include <cstddef>

#include "qmeasure/measurement.hpp"
#include "qmeasure/observable.hpp"
#include "qmeasure/state.hpp"

namespace qmeasure::random {

/// Independent standard complex Gaussian entries.
Amplitudes gaussian_vector(std::size_t n, Sampler &rng);

/// Uniform (Haar) pure state.
StateVector random_state(const Dims &dims, Sampler &rng);

/// Haar unitary via QR of a Ginibre matrix with the phase correction.
Matrix haar_unitary(std::size_t n, Sampler &rng);

/// GUE-like Hermitian matrix.
Operator random_hermitian(const Dims &dims, Sampler &rng);

/// Random eigenbasis cut into a random number of branches. With
/// `force_degenerate` (and total dimension >= 2) at least one branch has
/// rank >= 2.
Observable random_observable(const Dims &dims, Sampler &rng,
                             bool force_degenerate = false);

/// W W^dagger / Tr with W of random rank between 1 and the full dimension.
DensityMatrix random_density(const Dims &dims, Sampler &rng);

std::size_t uniform_index(std::size_t lo, std::size_t hi, Sampler &rng);

} // namespace qmeasure::random
