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

// Entropies, Rényi divergences and Augustin-type information measures for
// classical-quantum sources. Every quantity is in nats. Divergences return
// +infinity when the support condition for the requested order fails.

#ifndef QPA_DIVERGENCE_HPP
#define QPA_DIVERGENCE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qpa/errors.hpp"
#include "qpa/model.hpp"
#include "qpa/qmat.hpp"

namespace qpa {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

inline double kl_divergence(std::span<const double> q, std::span<const double> p) {
    if (q.size() != p.size()) throw InvalidInput("kl_divergence: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] <= 0.0) continue;
        if (p[i] <= 0.0) return kInfinity;
        d += q[i] * std::log(q[i] / p[i]);
    }
    return std::max(d, 0.0);
}

inline double von_neumann_entropy(const DensityOperator& rho) {
    const RealVector& lam = rho.spectrum().values;
    double h = 0.0;
    for (Index i = 0; i < lam.size(); ++i) {
        if (lam[i] > 0.0) h -= lam[i] * std::log(lam[i]);
    }
    return h;
}

namespace detail {

inline void check_order(double alpha, double lo, double hi, const char* what) {
    if (!std::isfinite(alpha) || !(alpha > lo) || alpha > hi || alpha == 1.0) {
        throw InvalidParameter(std::string(what) + ": order alpha=" + std::to_string(alpha) +
                               " outside (" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "] \\ {1}");
    }
}

inline void check_pair(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw InvalidInput("divergence: dimension mismatch " + std::to_string(rho.dim()) + " vs " +
                           std::to_string(sigma.dim()));
    }
}

/// Weight of rho outside supp(sigma).
inline double support_leak(const DensityOperator& rho, const DensityOperator& sigma) {
    const ComplexMatrix proj = support_projector(sigma.spectrum()).matrix();
    return 1.0 - (proj * rho.matrix()).trace().real();
}

inline bool support_contained(const DensityOperator& rho, const DensityOperator& sigma) {
    return support_leak(rho, sigma) <= 1e-10;
}

}  // namespace detail

/// (1/(α-1)) log Tr[ρ^α σ^{1-α}].
inline double petz_renyi(const DensityOperator& rho, const DensityOperator& sigma, double alpha) {
    detail::check_pair(rho, sigma);
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha == 1.0) {
        throw InvalidParameter("petz_renyi: alpha must lie in (0, inf) \\ {1}");
    }
    if (alpha > 1.0 && !detail::support_contained(rho, sigma)) return kInfinity;
    const ComplexMatrix a = matrix_power(rho, alpha).matrix();
    const ComplexMatrix b = matrix_power(sigma, 1.0 - alpha).matrix();
    const double q = (a * b).trace().real();
    if (!(q > 0.0)) return kInfinity;
    return std::log(q) / (alpha - 1.0);
}

/// (α/(α-1)) log ‖σ^{(1-α)/(2α)} ρ σ^{(1-α)/(2α)}‖_α = (1/(α-1)) log Tr[(σ^g ρ σ^g)^α].
inline double sandwiched_renyi(const DensityOperator& rho, const DensityOperator& sigma,
                               double alpha) {
    detail::check_pair(rho, sigma);
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha == 1.0) {
        throw InvalidParameter("sandwiched_renyi: alpha must lie in (0, inf) \\ {1}");
    }
    if (alpha > 1.0 && !detail::support_contained(rho, sigma)) return kInfinity;
    const double gamma = (1.0 - alpha) / (2.0 * alpha);
    const ComplexMatrix s = matrix_power(sigma, gamma).matrix();
    const ComplexMatrix sandwich = s * rho.matrix() * s;
    // Tr[X^α] directly: for α < 1 the α-"norm" is only a quasi-norm.
    const RealVector lam = eigenvalues(sandwich).cwiseMax(0.0);
    const double cut = detail::support_threshold(lam);
    double q = 0.0;
    for (Index i = 0; i < lam.size(); ++i) {
        if (lam[i] > cut) q += std::pow(lam[i], alpha);
    }
    if (!(q > 0.0)) return kInfinity;
    return std::log(q) / (alpha - 1.0);
}

/// Tr[ρ(log ρ - log σ)].
inline double umegaki(const DensityOperator& rho, const DensityOperator& sigma) {
    detail::check_pair(rho, sigma);
    if (!detail::support_contained(rho, sigma)) return kInfinity;
    const double cross = (rho.matrix() * matrix_log(sigma.spectrum()).matrix()).trace().real();
    return std::max(-von_neumann_entropy(rho) - cross, 0.0);
}

/// I(X:B) = S(ρ_B) - Σ_x p(x) S(ρ_x).
inline double holevo_mutual_info(const CQSource& src) {
    double v = von_neumann_entropy(marginal_state(src));
    for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
        if (src.prior()[x] > 0.0) v -= src.prior()[x] * von_neumann_entropy(src.states()[x]);
    }
    return std::max(v, 0.0);
}

struct AugustinOptions {
    double tol = 1e-9;
    int max_iter = 10000;
    double damping = 0.3;
    /// Starting point; defaults to the marginal state.
    std::optional<DensityOperator> initial;
};

/// Outcome of a minimization over reference states σ.
struct AugustinResult {
    double value = 0.0;
    DensityOperator optimizer;
    int iterations = 0;
    double final_step = 0.0;
};

struct ConvergenceFailure : ConvergenceError {
    ConvergenceFailure(const std::string& what, AugustinResult best_iterate)
        : ConvergenceError(what), best(std::move(best_iterate)) {}
    AugustinResult best;
};

namespace detail {

enum class ReferenceObjective {
    /// Σ_x p(x) D*_α(ρ_x ‖ σ)
    kAugustin,
    /// D*_α(ρ_XB ‖ 1_X ⊗ σ) = (1/(α-1)) log Σ_x p(x)^α exp((α-1) D*_α(ρ_x ‖ σ))
    kConditional,
};

/// Damped fixed-point iteration σ ← (1-γ)σ + γ T(σ), where T(σ) is the
/// normalized weighted sum of (σ^g ρ_x σ^g)^α, g = (1-α)/(2α). Stationary
/// points of T are exactly the minimizers for both objectives.
inline AugustinResult minimize_reference_state(const CQSource& src, double alpha,
                                               const AugustinOptions& opts,
                                               ReferenceObjective kind, const char* what) {
    if (!(opts.tol > 0.0)) throw InvalidParameter(std::string(what) + ": tol must be > 0");
    if (opts.max_iter < 1) throw InvalidParameter(std::string(what) + ": max_iter must be >= 1");
    if (!(opts.damping > 0.0) || opts.damping > 1.0) {
        throw InvalidParameter(std::string(what) + ": damping must lie in (0, 1]");
    }
    const Index d = src.state_dim();
    const double gamma = (1.0 - alpha) / (2.0 * alpha);

    std::vector<std::size_t> active;
    for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
        if (src.prior()[x] > 0.0) active.push_back(x);
    }

    DensityOperator sigma = opts.initial ? *opts.initial : marginal_state(src);
    if (sigma.dim() != d) throw InvalidInput(std::string(what) + ": initial state has wrong dimension");
    if (alpha > 1.0) {
        for (std::size_t x : active) {
            if (!support_contained(src.states()[x], sigma)) {
                sigma = sigma.mix(DensityOperator::maximally_mixed(d), 1e-9);
                break;
            }
        }
    }

    // Evaluates the objective at sigma and the normalized map T(sigma).
    auto evaluate = [&](const DensityOperator& s, ComplexMatrix& image) -> double {
        const ComplexMatrix root = matrix_power(s, gamma).matrix();
        image = ComplexMatrix::Zero(d, d);
        std::vector<double> log_q(active.size());
        std::vector<ComplexMatrix> powered(active.size());
        for (std::size_t i = 0; i < active.size(); ++i) {
            const ComplexMatrix sandwich = root * src.states()[active[i]].matrix() * root;
            const auto spec = eig_hermitian(HermitianOperator(sandwich));
            const double cut = support_threshold(spec.values);
            double q = 0.0;
            RealVector lam_alpha(spec.values.size());
            for (Index k = 0; k < spec.values.size(); ++k) {
                lam_alpha[k] = spec.values[k] > cut ? std::pow(spec.values[k], alpha) : 0.0;
                q += lam_alpha[k];
            }
            if (!(q > 0.0)) {
                log_q[i] = alpha > 1.0 ? kInfinity : -kInfinity;
                powered[i] = ComplexMatrix::Zero(d, d);
                continue;
            }
            log_q[i] = std::log(q);
            powered[i] = spec.vectors * lam_alpha.cast<std::complex<double>>().asDiagonal() *
                         spec.vectors.adjoint() / q;
        }
        double objective = 0.0;
        if (kind == ReferenceObjective::kAugustin) {
            for (std::size_t i = 0; i < active.size(); ++i) {
                const double p = src.prior()[active[i]];
                objective += p * log_q[i];
                image += p * powered[i];
            }
            objective /= (alpha - 1.0);
        } else {
            // log Σ p^α Q_x computed with a max shift.
            std::vector<double> log_w(active.size());
            double shift = -kInfinity;
            for (std::size_t i = 0; i < active.size(); ++i) {
                log_w[i] = alpha * std::log(src.prior()[active[i]]) + log_q[i];
                shift = std::max(shift, log_w[i]);
            }
            double total = 0.0;
            for (double lw : log_w) total += std::exp(lw - shift);
            for (std::size_t i = 0; i < active.size(); ++i) {
                image += (std::exp(log_w[i] - shift) / total) * powered[i];
            }
            objective = (shift + std::log(total)) / (alpha - 1.0);
        }
        const double tr = image.trace().real();
        if (tr > 0.0) image /= tr;
        return objective;
    };

    AugustinResult best{kInfinity, sigma, 0, kInfinity};
    ComplexMatrix image;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const double objective = evaluate(sigma, image);
        if (!std::isfinite(objective)) {
            throw InvalidInput(std::string(what) + ": objective is not finite");
        }
        const ComplexMatrix next =
            (1.0 - opts.damping) * sigma.matrix() + opts.damping * image;
        const double step = eigenvalues(ComplexMatrix(next - sigma.matrix())).cwiseAbs().maxCoeff();
        if (objective <= best.value) best = AugustinResult{objective, sigma, it, step};
        if (step <= opts.tol) {
            return AugustinResult{objective, sigma, it, step};
        }
        sigma = DensityOperator(next);
    }
    throw ConvergenceFailure(std::string(what) + ": no convergence after " +
                                 std::to_string(opts.max_iter) + " iterations",
                             best);
}

}  // namespace detail

/// Ĭ*_α(X:B) = min_σ Σ_x p(x) D*_α(ρ_x ‖ σ), α ∈ (0, 2] \ {1}.
inline AugustinResult augustin_sandwiched(const CQSource& src, double alpha,
                                          const AugustinOptions& opts = {}) {
    detail::check_order(alpha, 0.0, 2.0, "augustin_sandwiched");
    return detail::minimize_reference_state(src, alpha, opts, detail::ReferenceObjective::kAugustin,
                                            "augustin_sandwiched");
}

/// Ĭ↑_α(X:B) = Σ_x p(x) D_α(ρ_x ‖ ρ_B) with ρ_B the marginal; no optimization.
inline double augustin_petz_up(const CQSource& src, double alpha) {
    detail::check_order(alpha, 0.0, 2.0, "augustin_petz_up");
    const DensityOperator marginal = marginal_state(src);
    double v = 0.0;
    for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
        if (src.prior()[x] > 0.0) v += src.prior()[x] * petz_renyi(src.states()[x], marginal, alpha);
    }
    return v;
}

/// min_σ D*_α(ρ_XB ‖ 1_X ⊗ σ); the sandwiched conditional entropy is its negative.
inline AugustinResult conditional_renyi_sandwiched_solve(const CQSource& src, double alpha,
                                                         const AugustinOptions& opts = {}) {
    detail::check_order(alpha, 1.0, 2.0, "conditional_renyi_sandwiched");
    return detail::minimize_reference_state(src, alpha, opts,
                                            detail::ReferenceObjective::kConditional,
                                            "conditional_renyi_sandwiched");
}

/// H*_α(X|B) = -min_σ D*_α(ρ_XB ‖ 1_X ⊗ σ), α ∈ (1, 2].
inline double conditional_renyi_sandwiched(const CQSource& src, double alpha,
                                           const AugustinOptions& opts = {}) {
    return -conditional_renyi_sandwiched_solve(src, alpha, opts).value;
}

/// H↓_α(X|B) = -D_α(ρ_XB ‖ 1_X ⊗ ρ_B).
inline double conditional_renyi_petz_down(const CQSource& src, double alpha) {
    detail::check_order(alpha, 0.0, 2.0, "conditional_renyi_petz_down");
    const DensityOperator marginal = marginal_state(src);
    const ComplexMatrix b = matrix_power(marginal, 1.0 - alpha).matrix();
    double total = 0.0;
    for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
        const double p = src.prior()[x];
        if (!(p > 0.0)) continue;
        const ComplexMatrix a = matrix_power(src.states()[x], alpha).matrix();
        total += std::pow(p, alpha) * (a * b).trace().real();
    }
    return -std::log(total) / (alpha - 1.0);
}

}  // namespace qpa

#endif
