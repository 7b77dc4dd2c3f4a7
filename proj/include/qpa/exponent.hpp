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

// Error, strong-converse and secrecy exponents as suprema over the Rényi order.
//
// Every exponent E is reported in nats per symbol with the convention that the
// associated bound reads exp(-n E + prefactor_log). Suprema over an open
// interval (a, b) are taken over [a + edge, b - edge]: a uniform grid followed
// by golden-section refinement inside the best grid bracket. Negative
// exponents are returned as computed; the corresponding bound is then vacuous.

#ifndef QPA_EXPONENT_HPP
#define QPA_EXPONENT_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpa/divergence.hpp"
#include "qpa/errors.hpp"
#include "qpa/model.hpp"

namespace qpa {

struct AlphaSearch {
    int grid_points = 400;
    double edge = 1e-4;
    /// Bracket width at which golden-section refinement stops.
    double refine_tol = 1e-10;
};

struct ExponentReport {
    std::string kind;
    double exponent = 0.0;
    double alpha_star = 0.0;
    std::vector<std::pair<double, double>> curve;
    double prefactor_log = 0.0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    /// Human-readable statement of the bound this exponent enters.
    std::string bound_form;
    /// Set by iid_exponent_via_types: the minimizing n-type.
    std::optional<TypeDistribution> minimizing_type;

    /// exp(-n E + prefactor_log).
    double bound(int n) const { return std::exp(-n * exponent + prefactor_log); }
};

/// sup over the open interval (lo, hi) of f, by grid plus golden section.
inline ExponentReport maximize_over_alpha(double lo, double hi,
                                          const std::function<double(double)>& f,
                                          const AlphaSearch& search = {}) {
    if (search.grid_points < 3) throw InvalidParameter("alpha grid needs at least 3 points");
    const double a = lo + search.edge;
    const double b = hi - search.edge;
    ExponentReport out;
    out.interval_lo = lo;
    out.interval_hi = hi;
    out.curve.reserve(static_cast<std::size_t>(search.grid_points));
    std::size_t best = 0;
    for (int i = 0; i < search.grid_points; ++i) {
        const double alpha = a + (b - a) * i / (search.grid_points - 1);
        out.curve.emplace_back(alpha, f(alpha));
        if (out.curve.back().second > out.curve[best].second) best = out.curve.size() - 1;
    }
    out.alpha_star = out.curve[best].first;
    out.exponent = out.curve[best].second;

    double left = out.curve[best == 0 ? 0 : best - 1].first;
    double right = out.curve[std::min(best + 1, out.curve.size() - 1)].first;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = right - inv_phi * (right - left);
    double x2 = left + inv_phi * (right - left);
    double f1 = f(x1);
    double f2 = f(x2);
    while (right - left > search.refine_tol) {
        if (f1 < f2) {
            left = x1;
            x1 = x2;
            f1 = f2;
            x2 = left + inv_phi * (right - left);
            f2 = f(x2);
        } else {
            right = x2;
            x2 = x1;
            f2 = f1;
            x1 = right - inv_phi * (right - left);
            f1 = f(x1);
        }
    }
    for (auto [x, v] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
        if (v > out.exponent) {
            out.exponent = v;
            out.alpha_star = x;
        }
    }
    return out;
}

/// A source together with memoized α-dependent information quantities.
/// Thread-safe: lookups and inserts are serialized by a mutex.
class InformationProfile {
  public:
    explicit InformationProfile(CQSource src, AugustinOptions opts = {})
        : src_(std::move(src)), opts_(std::move(opts)) {
        entropy_ = shannon_entropy(src_.prior());
        mutual_info_ = holevo_mutual_info(src_);
    }

    InformationProfile(const InformationProfile& other)
        : src_(other.src_), opts_(other.opts_), entropy_(other.entropy_),
          mutual_info_(other.mutual_info_) {}

    const CQSource& source() const { return src_; }
    double entropy() const { return entropy_; }
    double mutual_info() const { return mutual_info_; }

    /// Ĭ*_α(X:B).
    double sandwiched_augustin(double alpha) const {
        return cached(sandwiched_, alpha,
                      [&] { return augustin_sandwiched(src_, alpha, opts_).value; });
    }

    /// Ĭ↑_α(X:B).
    double petz_augustin(double alpha) const {
        return cached(petz_, alpha, [&] { return augustin_petz_up(src_, alpha); });
    }

    /// H*_α(X|B).
    double conditional_sandwiched(double alpha) const {
        return cached(conditional_, alpha,
                      [&] { return conditional_renyi_sandwiched(src_, alpha, opts_); });
    }

  private:
    template <typename Compute>
    double cached(std::map<double, double>& table, double alpha, Compute compute) const {
        {
            std::lock_guard lock(mutex_);
            auto it = table.find(alpha);
            if (it != table.end()) return it->second;
        }
        const double v = compute();
        std::lock_guard lock(mutex_);
        table.emplace(alpha, v);
        return v;
    }

    CQSource src_;
    AugustinOptions opts_;
    double entropy_ = 0.0;
    double mutual_info_ = 0.0;
    mutable std::mutex mutex_;
    mutable std::map<double, double> sandwiched_;
    mutable std::map<double, double> petz_;
    mutable std::map<double, double> conditional_;
};

/// Finite-n formulas use the exact (1/n) log|T^n_p|; asymptotic ones use H(p)
/// and carry the polynomial prefactor instead.
enum class RateMode { kFiniteN, kAsymptotic };

namespace detail {

inline double alphabet_log_poly(const CQSource& src, int n) {
    return static_cast<double>(src.alphabet_size()) * std::log(static_cast<double>(n) + 1.0);
}

inline double normalized_log_type_class(const CQSource& src, int n) {
    const TypeDistribution t = TypeDistribution::from_prior(src.prior(), n);
    return type_class_log_size(t) / n;
}

inline void check_rate(double rate) {
    if (!std::isfinite(rate)) throw InvalidParameter("rate must be finite");
}

inline void check_n(int n) {
    if (n < 1) throw InvalidParameter("blocklength n must be >= 1");
}

}  // namespace detail

/// Soft covering without repetition, achievability:
/// d_SC ≤ exp(-n sup_{α∈(1,2)} ((1-α)/α)(Ĭ*_α − R)).
/// The bracket is evaluated literally, which equals ((α-1)/α)(R − Ĭ*_α).
inline ExponentReport sc_achievability_exponent(const InformationProfile& prof, double rate,
                                                const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    if (rate < 0.0) throw InvalidParameter("sc_achievability_exponent: R must be >= 0");
    auto rep = maximize_over_alpha(
        1.0, 2.0,
        [&](double a) { return (1.0 - a) / a * (prof.sandwiched_augustin(a) - rate); }, search);
    rep.kind = "sc-direct";
    rep.bound_form = "d_SC <= exp(-n*E), E = sup_{a in (1,2)} ((1-a)/a)(I*_a - R)";
    return rep;
}

/// Soft covering without repetition, strong converse:
/// d_SC ≥ 1 − 4(n+1)^{|X|} exp(-n sup_{α∈(1/2,1)} ((1-α)/α)(Ĭ↑_{2-1/α} − R)).
inline ExponentReport sc_converse_exponent(const InformationProfile& prof, double rate,
                                           std::optional<int> n = std::nullopt,
                                           const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    auto rep = maximize_over_alpha(
        0.5, 1.0,
        [&](double a) { return (1.0 - a) / a * (prof.petz_augustin(2.0 - 1.0 / a) - rate); },
        search);
    rep.kind = "sc-converse";
    rep.bound_form = "d_SC >= 1 - exp(-n*E + prefactor_log)";
    if (n) {
        detail::check_n(*n);
        rep.prefactor_log = std::log(4.0) + detail::alphabet_log_poly(prof.source(), *n);
    }
    return rep;
}

/// Privacy amplification on a constant-type source, achievability:
/// sup_{α∈(1,2)} ((α-1)/α)(L − Ĭ*_α − R) with L = (1/n) log|T^n_p| (finite n)
/// or L = H(p) and prefactor (n+1)^{|X|/2} (asymptotic).
inline ExponentReport pa_achievability_exponent(const InformationProfile& prof, double rate,
                                                int n, RateMode mode,
                                                const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    detail::check_n(n);
    const double level = mode == RateMode::kFiniteN
                             ? detail::normalized_log_type_class(prof.source(), n)
                             : prof.entropy();
    auto rep = maximize_over_alpha(
        1.0, 2.0,
        [&](double a) { return (a - 1.0) / a * (level - prof.sandwiched_augustin(a) - rate); },
        search);
    rep.kind = "pa-direct";
    rep.bound_form = "d_PA <= exp(-n*E + prefactor_log)";
    if (mode == RateMode::kAsymptotic) {
        rep.prefactor_log = 0.5 * detail::alphabet_log_poly(prof.source(), n);
    }
    return rep;
}

/// Privacy amplification on a constant-type source, strong converse:
/// d_PA ≥ 1 − 4(n+1)^{|X|} exp(-n sup_{α∈(1/2,1)} ((1-α)/α)(Ĭ↑_{2-1/α} − L + R)).
inline ExponentReport pa_strong_converse_exponent(const InformationProfile& prof, double rate,
                                                  int n, RateMode mode,
                                                  const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    detail::check_n(n);
    const double level = mode == RateMode::kFiniteN
                             ? detail::normalized_log_type_class(prof.source(), n)
                             : prof.entropy();
    auto rep = maximize_over_alpha(
        0.5, 1.0,
        [&](double a) {
            return (1.0 - a) / a * (prof.petz_augustin(2.0 - 1.0 / a) - level + rate);
        },
        search);
    rep.kind = "pa-converse";
    rep.bound_form = "d_PA >= 1 - exp(-n*E + prefactor_log)";
    rep.prefactor_log = std::log(4.0) + detail::alphabet_log_poly(prof.source(), n);
    return rep;
}

/// sup_{α∈(1,2)} ((α-1)/α)(H*_α(X|B) − R): the i.i.d. exponent expressed with
/// the sandwiched conditional Rényi entropy.
inline ExponentReport dupuis_exponent(const InformationProfile& prof, double rate,
                                      const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    auto rep = maximize_over_alpha(
        1.0, 2.0,
        [&](double a) { return (a - 1.0) / a * (prof.conditional_sandwiched(a) - rate); }, search);
    rep.kind = "dupuis";
    rep.bound_form = "d_PA(iid) <= exp(-n*E)";
    return rep;
}

/// H(X|B) = H(p) − I(X:B).
inline double conditional_entropy_limit(const CQSource& src) {
    return shannon_entropy(src.prior()) - holevo_mutual_info(src);
}

/// (H(p) − Ĭ*_α) − H*_α(X|B); nonnegative for every α > 1.
inline double augustin_conditional_gap(const InformationProfile& prof, double alpha) {
    return (prof.entropy() - prof.sandwiched_augustin(alpha)) - prof.conditional_sandwiched(alpha);
}

inline double augustin_conditional_gap(const CQSource& src, double alpha,
                               const AugustinOptions& opts = {}) {
    return augustin_conditional_gap(InformationProfile(src, opts), alpha);
}

/// min over n-types q of D(q‖p) + sup_{α∈(1,2)} ((α-1)/α)(H(q) − Ĭ*_α(ρ^q) − R),
/// where ρ^q keeps the states of src and replaces its prior by q.
inline ExponentReport iid_exponent_via_types(const CQSource& src, double rate, int n,
                                             const AugustinOptions& opts = {},
                                             const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    detail::check_n(n);
    const auto types = enumerate_n_types(static_cast<int>(src.alphabet_size()), n);
    std::optional<ExponentReport> best;
    for (const auto& t : types) {
        const auto q = t.distribution();
        const double kl = kl_divergence(q, src.prior());
        if (!std::isfinite(kl)) continue;
        InformationProfile prof(src.with_prior(q), opts);
        const double hq = prof.entropy();
        auto rep = maximize_over_alpha(
            1.0, 2.0,
            [&](double a) {
                return kl + (a - 1.0) / a * (hq - prof.sandwiched_augustin(a) - rate);
            },
            search);
        if (!best || rep.exponent < best->exponent) {
            rep.minimizing_type = t;
            best = std::move(rep);
        }
    }
    best->kind = "iid";
    best->bound_form = "min_h d_PA(iid) <= exp(-n*E + prefactor_log)";
    best->prefactor_log = 1.5 * detail::alphabet_log_poly(src, n);
    return *best;
}

}  // namespace qpa

#endif
