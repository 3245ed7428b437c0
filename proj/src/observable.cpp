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

#include "qmeasure/observable.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmeasure {

namespace {

double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

[[noreturn]] void bad_family(const std::string &what) {
    throw Error(ErrorCode::InvalidProjectorFamily, what);
}

} // namespace

const Operator &Observable::projector(std::size_t i) const {
    if (i >= branches_.size())
        throw Error(ErrorCode::InvalidInput, "branch index out of range");
    return branches_[i].projector;
}

double Observable::eigenvalue(std::size_t i) const {
    if (i >= branches_.size())
        throw Error(ErrorCode::InvalidInput, "branch index out of range");
    return branches_[i].eigenvalue;
}

std::size_t Observable::rank(std::size_t i) const {
    return static_cast<std::size_t>(
        std::llround(projector(i).matrix().trace().real()));
}

Observable observable_from_branches(std::vector<Branch> branches) {
    if (branches.empty())
        bad_family("empty branch list");
    const Dims dims = branches.front().projector.dims();
    const auto n = branches.front().projector.matrix().rows();
    for (const auto &b : branches) {
        if (b.projector.dims() != dims)
            bad_family("projectors act on different spaces");
        if (!std::isfinite(b.eigenvalue))
            bad_family("non-finite eigenvalue");
    }
    std::sort(branches.begin(), branches.end(),
              [](const Branch &a, const Branch &b) {
                  return a.eigenvalue < b.eigenvalue;
              });

    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto &p = branches[i].projector.matrix();
        if (i > 0 && !(branches[i].eigenvalue > branches[i - 1].eigenvalue))
            bad_family("repeated eigenvalue " +
                       std::to_string(branches[i].eigenvalue));
        if (max_abs(p - p.adjoint()) > PROJECTOR_TOL)
            bad_family("projector " + std::to_string(i) + " is not Hermitian");
        if (max_abs(p * p - p) > PROJECTOR_TOL)
            bad_family("projector " + std::to_string(i) +
                       " is not idempotent");
        if (p.trace().real() < 0.5)
            bad_family("projector " + std::to_string(i) + " is zero");
        for (std::size_t j = 0; j < i; ++j)
            if (max_abs(branches[j].projector.matrix() * p) > PROJECTOR_TOL)
                bad_family("projectors " + std::to_string(j) + " and " +
                           std::to_string(i) + " are not orthogonal");
        sum += p;
    }
    if (max_abs(sum - Matrix::Identity(n, n)) > PROJECTOR_TOL)
        bad_family("projectors do not sum to the identity");
    return Observable(dims, std::move(branches));
}

Observable observable_from_matrix(const Operator &h, double degeneracy_tol) {
    if (!h.is_hermitian())
        throw Error(ErrorCode::NotHermitian,
                    "observable matrix is not Hermitian");
    if (!(degeneracy_tol >= 0.0))
        throw Error(ErrorCode::InvalidInput, "negative degeneracy tolerance");
    const Matrix herm = (h.matrix() + h.matrix().adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    const auto &vals = es.eigenvalues();
    const auto &vecs = es.eigenvectors();

    std::vector<Branch> branches;
    Eigen::Index start = 0;
    const auto n = vals.size();
    for (Eigen::Index k = 1; k <= n; ++k) {
        if (k < n && vals(k) - vals(k - 1) < degeneracy_tol)
            continue;
        const auto cols = vecs.middleCols(start, k - start);
        const double mean = vals.segment(start, k - start).mean();
        branches.push_back({mean, Operator(h.dims(), cols * cols.adjoint())});
        start = k;
    }
    return observable_from_branches(std::move(branches));
}

Operator reconstruct(const Observable &obs) {
    const auto n = obs.projector(0).matrix().rows();
    Matrix out = Matrix::Zero(n, n);
    for (const auto &b : obs.branches())
        out += b.eigenvalue * b.projector.matrix();
    return Operator(obs.dims(), std::move(out));
}

Observable embed(const Observable &obs, const Dims &full_dims,
                 std::size_t subsystem) {
    if (subsystem >= full_dims.size())
        throw Error(ErrorCode::InvalidInput, "subsystem index out of range");
    if (total_dimension(obs.dims()) != full_dims[subsystem])
        throw Error(ErrorCode::InvalidInput,
                    "observable dimension does not match subsystem");
    const Dims before(full_dims.begin(),
                      full_dims.begin() + static_cast<std::ptrdiff_t>(subsystem));
    const Dims after(full_dims.begin() + static_cast<std::ptrdiff_t>(subsystem) + 1,
                     full_dims.end());
    std::vector<Branch> lifted;
    lifted.reserve(obs.branch_count());
    for (const auto &b : obs.branches()) {
        Operator p(Dims{full_dims[subsystem]}, b.projector.matrix());
        if (!before.empty())
            p = kron(Operator::identity(before), p);
        if (!after.empty())
            p = kron(p, Operator::identity(after));
        lifted.push_back({b.eigenvalue, Operator(full_dims, p.matrix())});
    }
    return observable_from_branches(std::move(lifted));
}

Operator pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return Operator({2}, m);
}

Operator pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return Operator({2}, m);
}

Operator pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return Operator({2}, m);
}

} // namespace qmeasure
