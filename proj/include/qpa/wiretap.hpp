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

// Classical-quantum wiretap channels x ↦ σ^x_{BE} coded with constant
// composition codes and a random one-to-one map f: T^n_p → [M]×[L]×[K].
// The message is m, l is local randomness and k is a public key index.
// Seen from Eve, f restricted to (m, k) is an L-to-1 regular binning, so
// leakage is bounded by two privacy-amplification terms.

#ifndef QPA_WIRETAP_HPP
#define QPA_WIRETAP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpa/divergence.hpp"
#include "qpa/errors.hpp"
#include "qpa/exponent.hpp"
#include "qpa/model.hpp"
#include "qpa/qmat.hpp"
#include "qpa/rng.hpp"
#include "qpa/simulate.hpp"

namespace qpa {

enum class Subsystem { kB, kE };

/// Tr_E or Tr_B of an operator on B ⊗ E (B is the left tensor factor).
inline HermitianOperator partial_trace(const HermitianOperator& a, Subsystem keep, Index dim_b,
                                       Index dim_e) {
    if (dim_b < 1 || dim_e < 1 || dim_b * dim_e != a.dim()) {
        throw InvalidInput("partial_trace: dims " + std::to_string(dim_b) + "x" +
                           std::to_string(dim_e) + " do not match operator dimension " +
                           std::to_string(a.dim()));
    }
    const ComplexMatrix& m = a.matrix();
    if (keep == Subsystem::kB) {
        ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
        for (Index b1 = 0; b1 < dim_b; ++b1) {
            for (Index b2 = 0; b2 < dim_b; ++b2) {
                for (Index e = 0; e < dim_e; ++e) out(b1, b2) += m(b1 * dim_e + e, b2 * dim_e + e);
            }
        }
        return HermitianOperator(out);
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_e, dim_e);
    for (Index e1 = 0; e1 < dim_e; ++e1) {
        for (Index e2 = 0; e2 < dim_e; ++e2) {
            for (Index b = 0; b < dim_b; ++b) out(e1, e2) += m(b * dim_e + e1, b * dim_e + e2);
        }
    }
    return HermitianOperator(out);
}

class WiretapChannel {
  public:
    WiretapChannel(std::vector<double> prior, std::vector<DensityOperator> joint_states,
                   Index dim_b, Index dim_e)
        : prior_(std::move(prior)), joint_(std::move(joint_states)), dim_b_(dim_b), dim_e_(dim_e) {
        if (joint_.empty() || joint_.size() != prior_.size()) {
            throw InvalidInput("WiretapChannel: need one joint state per input symbol");
        }
        std::vector<DensityOperator> bob;
        std::vector<DensityOperator> eve;
        for (const auto& s : joint_) {
            bob.emplace_back(partial_trace(s.op(), Subsystem::kB, dim_b_, dim_e_));
            eve.emplace_back(partial_trace(s.op(), Subsystem::kE, dim_b_, dim_e_));
        }
        bob_ = CQSource(prior_, std::move(bob));
        eve_ = CQSource(prior_, std::move(eve));
    }

    std::size_t alphabet_size() const { return prior_.size(); }
    const std::vector<double>& prior() const { return prior_; }
    const std::vector<DensityOperator>& joint_states() const { return joint_; }
    Index dim_b() const { return dim_b_; }
    Index dim_e() const { return dim_e_; }
    const CQSource& bob_source() const { return *bob_; }
    const CQSource& eve_source() const { return *eve_; }

  private:
    std::vector<double> prior_;
    std::vector<DensityOperator> joint_;
    Index dim_b_;
    Index dim_e_;
    std::optional<CQSource> bob_;
    std::optional<CQSource> eve_;
};

/// sup_{α∈(1,2)} ((α-1)/α)(I(X:B) − Ĭ*_α(X:E) − R).
inline ExponentReport secrecy_exponent(const InformationProfile& bob, const InformationProfile& eve,
                                       double rate, const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    const double ib = bob.mutual_info();
    auto rep = maximize_over_alpha(
        1.0, 2.0,
        [&](double a) { return (a - 1.0) / a * (ib - eve.sandwiched_augustin(a) - rate); },
        search);
    rep.kind = "secrecy";
    rep.bound_form = "E_{f,k} d_WT <= exp(-n*E + o(n))";
    return rep;
}

inline ExponentReport secrecy_exponent(const WiretapChannel& ch, double rate,
                                       const AugustinOptions& opts = {},
                                       const AlphaSearch& search = {}) {
    return secrecy_exponent(InformationProfile(ch.bob_source(), opts),
                            InformationProfile(ch.eve_source(), opts), rate, search);
}

/// I(X:B) − I(X:E): the secrecy exponent is positive exactly for rates below this.
inline double positivity_threshold(const WiretapChannel& ch) {
    return holevo_mutual_info(ch.bob_source()) - holevo_mutual_info(ch.eve_source());
}

/// Message, local-randomness and key rates (nats/symbol).
struct RateAllocation {
    double rate = 0.0;
    double local_rate = 0.0;
    double key_rate = 0.0;
};

struct AllocationReport {
    RateAllocation rates;
    /// Bob's decoding error exponent for the (m, l) code; prefactor 6(n+1)^{|X|}.
    ExponentReport bob_decoding;
};

/// R₂ = (1/n) log|T^n_p| − I(X:B) + δ and R₁ = I(X:B) − R − δ, so that
/// R + R₁ + R₂ = (1/n) log|T^n_p| and R + R₁ sits just below I(X:B).
inline AllocationReport allocate_rates(const WiretapChannel& ch, double rate, double delta, int n,
                                       const AugustinOptions& opts = {},
                                       const AlphaSearch& search = {}) {
    detail::check_rate(rate);
    detail::check_n(n);
    if (!(delta > 0.0)) throw InvalidParameter("allocate_rates: delta must be > 0");
    if (rate < 0.0) throw InvalidParameter("allocate_rates: rate must be >= 0");
    const double ib = holevo_mutual_info(ch.bob_source());
    const double level = detail::normalized_log_type_class(ch.bob_source(), n);
    AllocationReport out;
    out.rates.rate = rate;
    out.rates.local_rate = ib - rate - delta;
    out.rates.key_rate = level - ib + delta;
    if (out.rates.local_rate < 0.0) {
        throw InvalidParameter("allocate_rates: rate " + std::to_string(rate) +
                               " is not below I(X:B) - delta = " + std::to_string(ib - delta));
    }
    if (out.rates.key_rate < 0.0) {
        throw InvalidParameter("allocate_rates: (1/n) log|T| is below I(X:B) - delta at n = " +
                               std::to_string(n));
    }
    InformationProfile bob(ch.bob_source(), opts);
    const double coded = rate + out.rates.local_rate;
    out.bob_decoding = maximize_over_alpha(
        0.5, 1.0,
        [&](double a) { return (1.0 - a) / a * (bob.petz_augustin(2.0 - 1.0 / a) - coded); },
        search);
    out.bob_decoding.kind = "bob-decoding";
    out.bob_decoding.bound_form = "E[error] <= exp(-n*E + prefactor_log)";
    out.bob_decoding.prefactor_log = std::log(6.0) + detail::alphabet_log_poly(ch.bob_source(), n);
    return out;
}

struct LeakageEstimate {
    std::uint64_t messages = 1;
    std::uint64_t local = 1;
    std::uint64_t keys = 1;
    RateAllocation realized;
    /// Eve's distinguishability E_{f,k} d_WT, simulated directly.
    SimEstimate direct;
    /// d_PA with |M||K| bins (bins indexed by (m, k)).
    SimEstimate pa_message_key;
    /// d_PA with |K| bins.
    SimEstimate pa_key;
    /// Per-f sum of the two privacy-amplification terms.
    SimEstimate bound;
    /// max over draws of d_WT(f) − bound(f); the triangle step makes this ≤ 0.
    double max_excess = 0.0;
    bool exact = false;
};

namespace detail {

/// Divisor of `total` nearest to exp(log_target) on a log scale.
inline std::uint64_t nearest_divisor(std::uint64_t total, double log_target) {
    std::uint64_t best = 1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::uint64_t d : divisors(total)) {
        const double gap = std::abs(std::log(static_cast<double>(d)) - log_target);
        if (gap < best_gap - 1e-12) {
            best_gap = gap;
            best = d;
        }
    }
    return best;
}

struct WiretapDraw {
    double direct = 0.0;
    double pa_message_key = 0.0;
    double pa_key = 0.0;
};

/// Evaluates one map f, given as a permutation: sequence perm[j] is sent to
/// (m, l, k) with k = j mod K, l = (j / K) mod L, m = j / (K L).
inline WiretapDraw evaluate_wiretap_map(const TypeClassEnsemble& eve,
                                        const std::vector<std::size_t>& perm, std::uint64_t msgs,
                                        std::uint64_t local, std::uint64_t keys) {
    std::vector<std::vector<std::size_t>> by_mk(msgs * keys);
    std::vector<std::vector<std::size_t>> by_k(keys);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        const std::uint64_t k = j % keys;
        const std::uint64_t m = j / (keys * local);
        by_mk[m * keys + k].push_back(perm[j]);
        by_k[k].push_back(perm[j]);
    }
    const Index d = eve.dim();
    WiretapDraw out;
    double direct = 0.0;
    for (std::uint64_t k = 0; k < keys; ++k) {
        ComplexMatrix key_avg = ComplexMatrix::Zero(d, d);
        for (std::size_t i : by_k[k]) key_avg += eve.state(i);
        key_avg /= static_cast<double>(msgs * local);
        for (std::uint64_t m = 0; m < msgs; ++m) {
            ComplexMatrix msg_avg = ComplexMatrix::Zero(d, d);
            for (std::size_t i : by_mk[m * keys + k]) msg_avg += eve.state(i);
            msg_avg /= static_cast<double>(local);
            direct += 0.5 * trace_norm(msg_avg - key_avg) / static_cast<double>(msgs);
        }
    }
    out.direct = direct / static_cast<double>(keys);
    out.pa_message_key = eve.binning_distance(by_mk);
    out.pa_key = eve.binning_distance(by_k);
    return out;
}

}  // namespace detail

/// Leakage of the wiretap protocol on Eve's constant-type source of type t.
/// Bin counts e^{n(R+R₂)} and e^{nR₂} are rounded to divisors of |T^n_t|.
/// With exact = true every one-to-one map f is enumerated (|T| ≤ 8).
inline LeakageEstimate simulate_leakage(const WiretapChannel& ch, const TypeDistribution& t,
                                        const RateAllocation& alloc, std::uint64_t trials,
                                        std::uint64_t seed, bool exact = false,
                                        unsigned threads = 1) {
    if (t.alphabet_size() != ch.alphabet_size()) {
        throw InvalidInput("simulate_leakage: type and channel alphabets differ");
    }
    const TypeClassEnsemble eve(ConstantTypeSource(ch.eve_source().states(), t));
    const std::uint64_t size = eve.size();
    const int n = t.n();

    LeakageEstimate out;
    out.keys = detail::nearest_divisor(size, n * alloc.key_rate);
    out.messages = detail::nearest_divisor(size / out.keys, n * alloc.rate);
    out.local = size / (out.keys * out.messages);
    out.realized.rate = std::log(static_cast<double>(out.messages)) / n;
    out.realized.local_rate = std::log(static_cast<double>(out.local)) / n;
    out.realized.key_rate = std::log(static_cast<double>(out.keys)) / n;
    out.exact = exact;

    std::vector<detail::WiretapDraw> draws;
    if (exact) {
        if (size > 8) {
            throw CapacityError("simulate_leakage: exact enumeration of f needs |T| <= 8, got " +
                                std::to_string(size));
        }
        auto perm = detail::iota_indices(size);
        do {
            draws.push_back(detail::evaluate_wiretap_map(eve, perm, out.messages, out.local, out.keys));
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        if (trials < 1) throw InvalidParameter("simulate_leakage: trials must be >= 1");
        draws.resize(trials);
        auto ignored = detail::run_trials(trials, threads, [&](std::uint64_t trial) {
            CounterRng rng(seed, trial);
            auto perm = detail::iota_indices(size);
            partial_shuffle(std::span<std::size_t>(perm), perm.size(), rng);
            draws[trial] = detail::evaluate_wiretap_map(eve, perm, out.messages, out.local, out.keys);
            return 0.0;
        });
        (void)ignored;
    }

    std::vector<double> direct, pa1, pa2, sum;
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& d : draws) {
        direct.push_back(d.direct);
        pa1.push_back(d.pa_message_key);
        pa2.push_back(d.pa_key);
        sum.push_back(d.pa_message_key + d.pa_key);
        out.max_excess = std::max(out.max_excess, d.direct - sum.back());
    }
    const std::uint64_t reported_seed = exact ? 0 : seed;
    out.direct = detail::summarize(direct, reported_seed);
    out.pa_message_key = detail::summarize(pa1, reported_seed);
    out.pa_key = detail::summarize(pa2, reported_seed);
    out.bound = detail::summarize(sum, reported_seed);
    return out;
}

}  // namespace qpa

#endif
