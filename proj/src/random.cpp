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

#include "qmeasure/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qmeasure::random {

std::size_t uniform_index(std::size_t lo, std::size_t hi, Sampler &rng) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Amplitudes gaussian_vector(std::size_t n, Sampler &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Amplitudes v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

StateVector random_state(const Dims &dims, Sampler &rng) {
    return StateVector::normalize(dims,
                                  gaussian_vector(total_dimension(dims), rng));
}

Matrix haar_unitary(std::size_t n, Sampler &rng) {
    const auto m = static_cast<Eigen::Index>(n);
    Matrix z(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
        z.col(c) = gaussian_vector(n, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const auto &r = qr.matrixQR();
    for (Eigen::Index c = 0; c < m; ++c) {
        const Complex d = r(c, c);
        if (std::abs(d) > 0.0)
            q.col(c) *= d / std::abs(d);
    }
    return q;
}

Operator random_hermitian(const Dims &dims, Sampler &rng) {
    const auto n = total_dimension(dims);
    const auto m = static_cast<Eigen::Index>(n);
    Matrix z(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
        z.col(c) = gaussian_vector(n, rng);
    return Operator(dims, (z + z.adjoint()) / 2.0);
}

Observable random_observable(const Dims &dims, Sampler &rng,
                             bool force_degenerate) {
    const auto n = total_dimension(dims);
    const bool degenerate = force_degenerate && n >= 2;
    const auto max_branches = degenerate ? n - 1 : n;
    const auto k = uniform_index(1, max_branches, rng);

    std::vector<std::size_t> sizes(k, 1);
    for (std::size_t extra = 0; extra < n - k; ++extra)
        ++sizes[uniform_index(0, k - 1, rng)];

    const Matrix u = haar_unitary(n, rng);
    std::uniform_real_distribution<double> jitter(0.0, 0.5);
    std::vector<Branch> branches;
    Eigen::Index col = 0;
    for (std::size_t b = 0; b < k; ++b) {
        const auto width = static_cast<Eigen::Index>(sizes[b]);
        const auto block = u.middleCols(col, width);
        const double value = static_cast<double>(b) - static_cast<double>(k) / 2.0 +
                             jitter(rng);
        branches.push_back({value, Operator(dims, block * block.adjoint())});
        col += width;
    }
    return observable_from_branches(std::move(branches));
}

DensityMatrix random_density(const Dims &dims, Sampler &rng) {
    const auto n = total_dimension(dims);
    const auto rank = uniform_index(1, n, rng);
    const auto m = static_cast<Eigen::Index>(n);
    Matrix w(m, static_cast<Eigen::Index>(rank));
    for (Eigen::Index c = 0; c < w.cols(); ++c)
        w.col(c) = gaussian_vector(n, rng);
    Matrix rho = w * w.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(dims, rho);
}

} // namespace qmeasure::random
