// Copyright 2026 The qpa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense Hermitian operator algebra on small Hilbert spaces.
//
// All matrix functions act on the support: eigenvalues at or below
// kSupportCutoff times the largest eigenvalue magnitude are treated as exact
// zeros and mapped to zero by every function, including negative powers and
// the logarithm. This realizes the generalized inverse convention used
// throughout the divergence formulas.

#ifndef QPA_QMAT_HPP
#define QPA_QMAT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qpa/errors.hpp"

namespace qpa {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kSupportCutoff = 1e-12;
inline constexpr double kNegativeEigenvalueTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-6;
inline constexpr Index kMaxDimension = 4096;

/// Eigen-decomposition with eigenvalues sorted in descending order.
struct SpectralDecomposition {
    RealVector values;
    ComplexMatrix vectors;
};

namespace detail {

inline void require_square_finite(const ComplexMatrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidInput(std::string(what) + ": matrix must be square and nonempty, got " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (m.rows() > kMaxDimension) {
        throw CapacityError(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                            " exceeds cap " + std::to_string(kMaxDimension));
    }
    if (!m.allFinite()) {
        throw InvalidInput(std::string(what) + ": non-finite matrix entry");
    }
}

inline double support_threshold(const RealVector& values) {
    double scale = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
    return kSupportCutoff * scale;
}

/// V diag(f(λ)) V† with f applied only on the support; off-support entries are 0.
inline ComplexMatrix spectral_apply(const SpectralDecomposition& s,
                                    const std::function<double(double)>& f) {
    const double cut = support_threshold(s.values);
    RealVector mapped(s.values.size());
    for (Index i = 0; i < s.values.size(); ++i) {
        mapped[i] = s.values[i] > cut ? f(s.values[i]) : 0.0;
    }
    ComplexMatrix scaled = s.vectors * mapped.cast<std::complex<double>>().asDiagonal();
    ComplexMatrix out = scaled * s.vectors.adjoint();
    return (out + out.adjoint()) * 0.5;
}

}  // namespace detail

class HermitianOperator {
  public:
    HermitianOperator() : m_(ComplexMatrix::Zero(1, 1)) {}

    /// Symmetrizes (A + A†)/2; rejects non-square or non-finite input.
    explicit HermitianOperator(const ComplexMatrix& m) {
        detail::require_square_finite(m, "HermitianOperator");
        m_ = (m + m.adjoint()) * 0.5;
    }

    static HermitianOperator identity(Index dim) {
        return HermitianOperator(ComplexMatrix::Identity(dim, dim));
    }

    static HermitianOperator diagonal(std::span<const double> entries) {
        ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(entries.size()),
                                              static_cast<Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) {
            m(static_cast<Index>(i), static_cast<Index>(i)) = entries[i];
        }
        return HermitianOperator(m);
    }

    static HermitianOperator diagonal(std::initializer_list<double> entries) {
        std::vector<double> v(entries);
        return diagonal(std::span<const double>(v));
    }

    Index dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
        check_same_dim(a, b);
        return HermitianOperator(a.m_ + b.m_);
    }
    friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
        check_same_dim(a, b);
        return HermitianOperator(a.m_ - b.m_);
    }
    friend HermitianOperator operator*(double s, const HermitianOperator& a) {
        return HermitianOperator(a.m_ * s);
    }

  private:
    static void check_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
        if (a.dim() != b.dim()) {
            throw InvalidInput("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                               std::to_string(b.dim()));
        }
    }

    ComplexMatrix m_;
};

inline SpectralDecomposition eig_hermitian(const HermitianOperator& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("eig_hermitian: eigen-decomposition failed");
    }
    const Index d = a.dim();
    SpectralDecomposition out{RealVector(d), ComplexMatrix(d, d)};
    for (Index i = 0; i < d; ++i) {
        out.values[i] = solver.eigenvalues()[d - 1 - i];
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

/// Eigenvalues only, descending. Cheaper than eig_hermitian for norms.
inline RealVector eigenvalues(const ComplexMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("eigenvalues: eigen-decomposition failed");
    }
    return solver.eigenvalues().reverse();
}

inline RealVector eigenvalues(const HermitianOperator& a) { return eigenvalues(a.matrix()); }

/// A^t on the support of a positive semi-definite A.
inline HermitianOperator matrix_power(const SpectralDecomposition& s, double t) {
    if (s.values.size() > 0 && s.values.minCoeff() < -kNegativeEigenvalueTolerance) {
        throw InvalidInput("matrix_power: operator is not positive semi-definite");
    }
    return HermitianOperator(detail::spectral_apply(s, [t](double x) { return std::pow(x, t); }));
}

inline HermitianOperator matrix_power(const HermitianOperator& a, double t) {
    return matrix_power(eig_hermitian(a), t);
}

/// Natural logarithm on the support.
inline HermitianOperator matrix_log(const SpectralDecomposition& s) {
    if (s.values.size() > 0 && s.values.minCoeff() < -kNegativeEigenvalueTolerance) {
        throw InvalidInput("matrix_log: operator is not positive semi-definite");
    }
    return HermitianOperator(detail::spectral_apply(s, [](double x) { return std::log(x); }));
}

/// Orthogonal projector onto the support.
inline HermitianOperator support_projector(const SpectralDecomposition& s) {
    return HermitianOperator(detail::spectral_apply(s, [](double) { return 1.0; }));
}

inline double schatten_norm_of_values(const RealVector& values, double p) {
    if (!(p >= 1.0)) {
        throw InvalidParameter("schatten_norm: p must be >= 1, got " + std::to_string(p));
    }
    if (p == 1.0) return values.cwiseAbs().sum();
    if (std::isinf(p)) return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
    // Factor out the largest magnitude so large p does not overflow.
    const double scale = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (Index i = 0; i < values.size(); ++i) acc += std::pow(std::abs(values[i]) / scale, p);
    return scale * std::pow(acc, 1.0 / p);
}

inline double schatten_norm(const HermitianOperator& a, double p) {
    if (!(p >= 1.0)) {
        throw InvalidParameter("schatten_norm: p must be >= 1, got " + std::to_string(p));
    }
    return schatten_norm_of_values(eigenvalues(a), p);
}

/// Trace norm of a Hermitian matrix given as raw storage; symmetrizes first.
inline double trace_norm(const ComplexMatrix& hermitian) {
    ComplexMatrix h = (hermitian + hermitian.adjoint()) * 0.5;
    return eigenvalues(h).cwiseAbs().sum();
}

class DensityOperator {
  public:
    DensityOperator() : DensityOperator(ComplexMatrix::Ones(1, 1)) {}

    /// Symmetrizes, clamps eigenvalues in [-1e-10, 0) to zero and renormalizes
    /// the trace. Rejects clearly negative spectra and traces far from one.
    explicit DensityOperator(const ComplexMatrix& m) : DensityOperator(HermitianOperator(m)) {}

    explicit DensityOperator(const HermitianOperator& h) {
        auto s = eig_hermitian(h);
        const double tr = s.values.sum();
        if (std::abs(tr - 1.0) > kTraceTolerance) {
            throw InvalidInput("DensityOperator: trace " + std::to_string(tr) + " is not 1");
        }
        if (s.values.minCoeff() < -kNegativeEigenvalueTolerance) {
            throw InvalidInput("DensityOperator: negative eigenvalue " +
                               std::to_string(s.values.minCoeff()));
        }
        const bool clamped = s.values.minCoeff() < 0.0;
        s.values = s.values.cwiseMax(0.0);
        s.values /= s.values.sum();
        if (clamped) {
            ComplexMatrix rebuilt = s.vectors * s.values.cast<std::complex<double>>().asDiagonal() *
                                    s.vectors.adjoint();
            base_ = HermitianOperator(rebuilt);
        } else {
            base_ = HermitianOperator(h.matrix() / tr);
        }
        spectrum_ = std::make_shared<const SpectralDecomposition>(std::move(s));
    }

    static DensityOperator maximally_mixed(Index dim) {
        return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    static DensityOperator diagonal(std::span<const double> probs) {
        return DensityOperator(HermitianOperator::diagonal(probs));
    }

    static DensityOperator diagonal(std::initializer_list<double> probs) {
        std::vector<double> v(probs);
        return diagonal(std::span<const double>(v));
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) nonzero vector.
    static DensityOperator pure(const ComplexVector& psi) {
        const double nrm = psi.norm();
        if (!(nrm > 0.0) || !psi.allFinite()) {
            throw InvalidInput("DensityOperator::pure: vector must be finite and nonzero");
        }
        ComplexVector u = psi / nrm;
        return DensityOperator(ComplexMatrix(u * u.adjoint()));
    }

    Index dim() const { return base_.dim(); }
    const HermitianOperator& op() const { return base_; }
    const ComplexMatrix& matrix() const { return base_.matrix(); }
    const SpectralDecomposition& spectrum() const { return *spectrum_; }

    /// (1 - w)·this + w·other.
    DensityOperator mix(const DensityOperator& other, double w) const {
        return DensityOperator(ComplexMatrix((1.0 - w) * matrix() + w * other.matrix()));
    }

  private:
    HermitianOperator base_;
    std::shared_ptr<const SpectralDecomposition> spectrum_;
};

inline HermitianOperator matrix_power(const DensityOperator& rho, double t) {
    return matrix_power(rho.spectrum(), t);
}

inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw InvalidInput("trace_distance: dimension mismatch " + std::to_string(rho.dim()) +
                           " vs " + std::to_string(sigma.dim()));
    }
    return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

/// Kronecker product of two raw matrices.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Kronecker product in list order.
inline HermitianOperator tensor(std::span<const HermitianOperator> factors) {
    if (factors.empty()) throw InvalidInput("tensor: empty factor list");
    Index total = 1;
    for (const auto& f : factors) {
        total *= f.dim();
        if (total > kMaxDimension) {
            throw CapacityError("tensor: product dimension exceeds cap " +
                                std::to_string(kMaxDimension));
        }
    }
    ComplexMatrix acc = factors.front().matrix();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i].matrix());
    return HermitianOperator(acc);
}

inline HermitianOperator tensor(std::initializer_list<HermitianOperator> factors) {
    std::vector<HermitianOperator> v(factors);
    return tensor(std::span<const HermitianOperator>(v));
}

inline DensityOperator tensor(std::span<const DensityOperator> factors) {
    std::vector<HermitianOperator> ops;
    ops.reserve(factors.size());
    for (const auto& f : factors) ops.push_back(f.op());
    return DensityOperator(tensor(std::span<const HermitianOperator>(ops)));
}

}  // namespace qpa

#endif
