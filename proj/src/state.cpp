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

#include "qmeasure/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qmeasure {

namespace {

bool all_finite(const Eigen::Ref<const Matrix> &m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (!std::isfinite(m(r, c).real()) ||
                !std::isfinite(m(r, c).imag()))
                return false;
    return true;
}

void require_same_dims(const Dims &a, const Dims &b, const char *what) {
    if (a != b)
        throw Error(ErrorCode::InvalidInput,
                    std::string(what) + ": subsystem dimensions differ");
}

} // namespace

std::size_t total_dimension(const Dims &dims) {
    if (dims.empty())
        throw Error(ErrorCode::InvalidInput, "empty dimension list");
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0)
            throw Error(ErrorCode::InvalidInput, "subsystem dimension is 0");
        total *= d;
    }
    return total;
}

std::vector<std::size_t> strides(const Dims &dims) {
    std::vector<std::size_t> out(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;)
        out[k - 1] = out[k] * dims[k];
    return out;
}

// StateVector

StateVector::StateVector(Dims dims, Amplitudes amps)
    : dims_(std::move(dims)), amps_(std::move(amps)) {
    if (static_cast<std::size_t>(amps_.size()) != total_dimension(dims_))
        throw Error(ErrorCode::InvalidInput,
                    "amplitude count does not match dimensions");
    if (!all_finite(amps_))
        throw Error(ErrorCode::InvalidInput, "non-finite amplitude");
    const double n2 = amps_.squaredNorm();
    if (std::abs(n2 - 1.0) > NORM_TOL)
        throw Error(ErrorCode::InvalidInput,
                    "state is not normalized (norm^2 = " + std::to_string(n2) +
                        ")");
}

StateVector StateVector::normalize(Dims dims, Amplitudes amps) {
    const double n = amps.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw Error(ErrorCode::InvalidInput, "cannot normalize zero vector");
    amps /= n;
    return StateVector(std::move(dims), std::move(amps));
}

StateVector StateVector::basis(Dims dims, std::size_t index) {
    const auto n = total_dimension(dims);
    if (index >= n)
        throw Error(ErrorCode::InvalidInput, "basis index out of range");
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(n));
    a(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(dims), std::move(a));
}

// Operator

Operator::Operator(Dims dims, Matrix entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
    const auto n = total_dimension(dims_);
    if (entries_.rows() != entries_.cols() ||
        static_cast<std::size_t>(entries_.rows()) != n)
        throw Error(ErrorCode::InvalidInput,
                    "operator must be square with side equal to the product "
                    "of dimensions");
    if (!all_finite(entries_))
        throw Error(ErrorCode::InvalidInput, "non-finite operator entry");
}

Operator Operator::identity(Dims dims) {
    const auto n = static_cast<Eigen::Index>(total_dimension(dims));
    return Operator(std::move(dims), Matrix::Identity(n, n));
}

bool Operator::is_hermitian(double tol) const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_unitary(double tol) const {
    const auto n = entries_.rows();
    return (entries_.adjoint() * entries_ - Matrix::Identity(n, n))
               .cwiseAbs()
               .maxCoeff() <= tol;
}

// DensityMatrix

DensityMatrix::DensityMatrix(Dims dims, Matrix entries) : dims_(std::move(dims)) {
    const auto n = total_dimension(dims_);
    if (entries.rows() != entries.cols() ||
        static_cast<std::size_t>(entries.rows()) != n)
        throw Error(ErrorCode::InvalidInput,
                    "density matrix side does not match dimensions");
    if (!all_finite(entries))
        throw Error(ErrorCode::InvalidDensity, "non-finite entry");
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > HERM_TOL)
        throw Error(ErrorCode::InvalidDensity, "not Hermitian");
    entries_ = (entries + entries.adjoint()) / 2.0;
    if (std::abs(entries_.trace().real() - 1.0) > NORM_TOL)
        throw Error(ErrorCode::InvalidDensity, "trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_,
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -PSD_TOL)
        throw Error(ErrorCode::InvalidDensity, "negative eigenvalue");
}

// Operations

StateVector tensor(std::span<const StateVector> factors) {
    if (factors.empty())
        throw Error(ErrorCode::InvalidInput, "tensor of empty factor list");
    Dims dims = factors.front().dims();
    Amplitudes acc = factors.front().amplitudes();
    for (const auto &f : factors.subspan(1)) {
        dims.insert(dims.end(), f.dims().begin(), f.dims().end());
        const auto &b = f.amplitudes();
        Amplitudes next(acc.size() * b.size());
        for (Eigen::Index i = 0; i < acc.size(); ++i)
            next.segment(i * b.size(), b.size()) = acc(i) * b;
        acc = std::move(next);
    }
    // Products of unit vectors drift by a few ulps; renormalize.
    return StateVector::normalize(std::move(dims), std::move(acc));
}

StateVector tensor(std::initializer_list<StateVector> factors) {
    return tensor(std::span<const StateVector>(factors.begin(), factors.size()));
}

Operator kron(const Operator &a, const Operator &b) {
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    const auto &A = a.matrix();
    const auto &B = b.matrix();
    const auto nb = B.rows();
    Matrix out(A.rows() * nb, A.cols() * nb);
    for (Eigen::Index r = 0; r < A.rows(); ++r)
        for (Eigen::Index c = 0; c < A.cols(); ++c)
            out.block(r * nb, c * nb, nb, nb) = A(r, c) * B;
    return Operator(std::move(dims), std::move(out));
}

Complex inner(const StateVector &a, const StateVector &b) {
    require_same_dims(a.dims(), b.dims(), "inner");
    return a.amplitudes().dot(b.amplitudes());
}

Amplitudes apply(const Operator &op, const StateVector &s) {
    require_same_dims(op.dims(), s.dims(), "apply");
    return op.matrix() * s.amplitudes();
}

DensityMatrix density_from_pure(const StateVector &s) {
    return DensityMatrix(s.dims(), s.amplitudes() * s.amplitudes().adjoint());
}

DensityMatrix partial_trace(const DensityMatrix &rho,
                            std::span<const std::size_t> keep) {
    const auto &dims = rho.dims();
    if (keep.empty())
        throw Error(ErrorCode::InvalidInput, "partial_trace: keep set is empty");
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size())
            throw Error(ErrorCode::InvalidInput,
                        "partial_trace: subsystem index out of range");
        if (kept[k])
            throw Error(ErrorCode::InvalidInput,
                        "partial_trace: duplicate subsystem index");
        kept[k] = true;
    }

    const auto stride = strides(dims);
    Dims kept_dims;
    std::vector<std::size_t> kept_strides, traced_dims, traced_strides;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (kept[k]) {
            kept_dims.push_back(dims[k]);
            kept_strides.push_back(stride[k]);
        } else {
            traced_dims.push_back(dims[k]);
            traced_strides.push_back(stride[k]);
        }
    }

    // Offsets into the full basis for every multi-index of a subsystem group.
    auto offsets = [](const std::vector<std::size_t> &ds,
                      const std::vector<std::size_t> &ss) {
        std::vector<std::size_t> out{0};
        for (std::size_t k = 0; k < ds.size(); ++k) {
            std::vector<std::size_t> next;
            next.reserve(out.size() * ds[k]);
            for (auto base : out)
                for (std::size_t v = 0; v < ds[k]; ++v)
                    next.push_back(base + v * ss[k]);
            out = std::move(next);
        }
        return out;
    };
    const auto koff = offsets(kept_dims, kept_strides);
    const auto toff = offsets(traced_dims, traced_strides);

    const auto n = static_cast<Eigen::Index>(koff.size());
    Matrix out = Matrix::Zero(n, n);
    const auto &m = rho.matrix();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            Complex acc = 0.0;
            for (auto t : toff)
                acc += m(static_cast<Eigen::Index>(koff[a] + t),
                         static_cast<Eigen::Index>(koff[b] + t));
            out(a, b) = acc;
        }
    return DensityMatrix(std::move(kept_dims), std::move(out));
}

double von_neumann_entropy(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(),
                                             Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lambda = es.eigenvalues()(i);
        if (lambda < -PSD_TOL)
            throw Error(ErrorCode::InvalidDensity, "negative eigenvalue");
        if (lambda > 0.0)
            s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

StateVector permute_subsystems(const StateVector &s,
                               std::span<const std::size_t> order) {
    const auto &dims = s.dims();
    if (order.size() != dims.size())
        throw Error(ErrorCode::InvalidInput,
                    "permutation length does not match subsystem count");
    std::vector<bool> seen(dims.size(), false);
    Dims new_dims;
    for (auto k : order) {
        if (k >= dims.size() || seen[k])
            throw Error(ErrorCode::InvalidInput, "invalid permutation");
        seen[k] = true;
        new_dims.push_back(dims[k]);
    }
    const auto old_stride = strides(dims);
    const auto new_stride = strides(new_dims);
    Amplitudes out(s.amplitudes().size());
    for (std::size_t idx = 0; idx < s.size(); ++idx) {
        std::size_t target = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto digit = (idx / old_stride[order[k]]) % dims[order[k]];
            target += digit * new_stride[k];
        }
        out(static_cast<Eigen::Index>(target)) = s[idx];
    }
    return StateVector(std::move(new_dims), std::move(out));
}

} // namespace qmeasure
