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

// Classical-quantum sources and the method of types.
//
// Sequences are integer vectors indexing the alphabet. All logarithms are
// natural; combinatorial sizes are handled in the log-gamma domain unless an
// exact integer is required (enumeration, divisibility).

#ifndef QPA_MODEL_HPP
#define QPA_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qpa/errors.hpp"
#include "qpa/qmat.hpp"

namespace qpa {

using Sequence = std::vector<int>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr double kPriorTolerance = 1e-12;

/// ρ_XB = Σ_x p(x)|x⟩⟨x| ⊗ ρ_x.
class CQSource {
  public:
    CQSource(std::vector<double> prior, std::vector<DensityOperator> states,
             std::vector<std::string> labels = {})
        : prior_(std::move(prior)), states_(std::move(states)), labels_(std::move(labels)) {
        if (prior_.empty()) throw InvalidInput("CQSource: empty alphabet");
        if (prior_.size() != states_.size()) {
            throw InvalidInput("CQSource: prior has " + std::to_string(prior_.size()) +
                               " entries but " + std::to_string(states_.size()) +
                               " states were given");
        }
        if (!labels_.empty() && labels_.size() != prior_.size()) {
            throw InvalidInput("CQSource: alphabet label count does not match prior");
        }
        double total = 0.0;
        for (double p : prior_) {
            if (!std::isfinite(p) || p < 0.0) {
                throw InvalidInput("CQSource: prior entries must be finite and nonnegative");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > kPriorTolerance) {
            throw InvalidInput("CQSource: prior sums to " + std::to_string(total));
        }
        for (const auto& s : states_) {
            if (s.dim() != states_.front().dim()) {
                throw InvalidInput("CQSource: states have different dimensions");
            }
        }
        if (labels_.empty()) {
            for (std::size_t i = 0; i < prior_.size(); ++i) labels_.push_back(std::to_string(i));
        }
    }

    std::size_t alphabet_size() const { return prior_.size(); }
    Index state_dim() const { return states_.front().dim(); }
    const std::vector<double>& prior() const { return prior_; }
    const std::vector<DensityOperator>& states() const { return states_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Same states, different prior.
    CQSource with_prior(std::vector<double> prior) const {
        return CQSource(std::move(prior), states_, labels_);
    }

  private:
    std::vector<double> prior_;
    std::vector<DensityOperator> states_;
    std::vector<std::string> labels_;
};

/// An n-type: nonnegative counts summing to the blocklength n ≥ 1.
class TypeDistribution {
  public:
    explicit TypeDistribution(std::vector<int> counts) : counts_(std::move(counts)) {
        if (counts_.empty()) throw InvalidInput("TypeDistribution: empty count vector");
        long total = 0;
        for (int c : counts_) {
            if (c < 0) throw InvalidInput("TypeDistribution: negative count");
            total += c;
        }
        if (total < 1) throw InvalidInput("TypeDistribution: blocklength must be >= 1");
        if (total > std::numeric_limits<int>::max()) {
            throw InvalidInput("TypeDistribution: blocklength overflow");
        }
        n_ = static_cast<int>(total);
    }

    /// The n-type equal to `prior`, which must have denominator n.
    static TypeDistribution from_prior(std::span<const double> prior, int n) {
        if (n < 1) throw InvalidParameter("TypeDistribution: n must be >= 1");
        std::vector<int> counts;
        for (double p : prior) {
            const double scaled = p * n;
            const double rounded = std::round(scaled);
            if (std::abs(scaled - rounded) > 1e-9) {
                throw InvalidParameter("prior is not an n-type for n = " + std::to_string(n));
            }
            counts.push_back(static_cast<int>(rounded));
        }
        TypeDistribution t(std::move(counts));
        if (t.n() != n) throw InvalidParameter("prior is not an n-type for n = " + std::to_string(n));
        return t;
    }

    int n() const { return n_; }
    std::size_t alphabet_size() const { return counts_.size(); }
    const std::vector<int>& counts() const { return counts_; }

    std::vector<double> distribution() const {
        std::vector<double> q;
        q.reserve(counts_.size());
        for (int c : counts_) q.push_back(static_cast<double>(c) / n_);
        return q;
    }

    friend bool operator==(const TypeDistribution&, const TypeDistribution&) = default;

  private:
    std::vector<int> counts_;
    int n_ = 0;
};

/// The uniform mixture over T^n_q of ⊗_i ρ_{x_i}, together with its classical register.
class ConstantTypeSource {
  public:
    ConstantTypeSource(std::vector<DensityOperator> states, TypeDistribution type)
        : base_(type.distribution(), std::move(states)), type_(std::move(type)) {
        if (base_.alphabet_size() != type_.alphabet_size()) {
            throw InvalidInput("ConstantTypeSource: type and alphabet sizes differ");
        }
    }

    /// Checks that src's prior equals counts/n.
    ConstantTypeSource(CQSource src, TypeDistribution type)
        : base_(std::move(src)), type_(std::move(type)) {
        if (base_.alphabet_size() != type_.alphabet_size()) {
            throw InvalidInput("ConstantTypeSource: type and alphabet sizes differ");
        }
        for (std::size_t x = 0; x < type_.alphabet_size(); ++x) {
            if (std::abs(base_.prior()[x] * type_.n() - type_.counts()[x]) > 1e-9) {
                throw InvalidInput("ConstantTypeSource: prior does not equal the type");
            }
        }
    }

    const CQSource& base() const { return base_; }
    const TypeDistribution& type() const { return type_; }
    int n() const { return type_.n(); }

  private:
    CQSource base_;
    TypeDistribution type_;
};

/// ρ_B = Σ_x p(x) ρ_x.
inline DensityOperator marginal_state(const CQSource& src) {
    ComplexMatrix acc = ComplexMatrix::Zero(src.state_dim(), src.state_dim());
    for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
        if (src.prior()[x] > 0.0) acc += src.prior()[x] * src.states()[x].matrix();
    }
    return DensityOperator(acc);
}

inline void check_sequence(const CQSource& src, const Sequence& seq) {
    if (seq.empty()) throw InvalidInput("sequence_state: empty sequence");
    double log_dim = 0.0;
    for (int x : seq) {
        if (x < 0 || static_cast<std::size_t>(x) >= src.alphabet_size()) {
            throw InvalidInput("sequence_state: symbol " + std::to_string(x) + " out of range");
        }
        log_dim += std::log(static_cast<double>(src.state_dim()));
    }
    if (log_dim > std::log(static_cast<double>(kMaxDimension)) + 1e-9) {
        throw CapacityError("sequence_state: dimension " + std::to_string(src.state_dim()) + "^" +
                            std::to_string(seq.size()) + " exceeds cap " +
                            std::to_string(kMaxDimension));
    }
}

/// Raw ⊗_i ρ_{x_i}; used by the simulators which avoid re-decomposing.
inline ComplexMatrix sequence_matrix(const CQSource& src, const Sequence& seq) {
    check_sequence(src, seq);
    ComplexMatrix acc = src.states()[static_cast<std::size_t>(seq.front())].matrix();
    for (std::size_t i = 1; i < seq.size(); ++i) {
        acc = kron(acc, src.states()[static_cast<std::size_t>(seq[i])].matrix());
    }
    return acc;
}

inline DensityOperator sequence_state(const CQSource& src, const Sequence& seq) {
    return DensityOperator(sequence_matrix(src, seq));
}

/// log(n! / Π_x counts(x)!).
inline double type_class_log_size(const TypeDistribution& t) {
    double v = std::lgamma(static_cast<double>(t.n()) + 1.0);
    for (int c : t.counts()) v -= std::lgamma(static_cast<double>(c) + 1.0);
    return std::max(v, 0.0);
}

/// Exact multinomial; throws CapacityError above `cap`.
inline std::uint64_t type_class_size(const TypeDistribution& t,
                                     std::uint64_t cap = std::numeric_limits<std::uint64_t>::max()) {
    // Product of binomials C(c_1 + ... + c_j, c_j), each exact.
    unsigned __int128 total = 1;
    long placed = 0;
    for (int c : t.counts()) {
        unsigned __int128 binom = 1;
        for (int i = 1; i <= c; ++i) {
            binom = binom * static_cast<unsigned __int128>(placed + i) / static_cast<unsigned>(i);
            if (binom > cap) throw CapacityError("type class size exceeds cap");
        }
        placed += c;
        total *= binom;
        if (total > cap) throw CapacityError("type class size exceeds cap");
    }
    return static_cast<std::uint64_t>(total);
}

/// All distinct permutations of the multiset given by counts, lexicographic.
inline std::vector<Sequence> enumerate_type_class(const TypeDistribution& t,
                                                  std::uint64_t cap = kDefaultEnumerationCap) {
    const std::uint64_t size = type_class_size(t, cap);
    Sequence seq;
    seq.reserve(static_cast<std::size_t>(t.n()));
    for (std::size_t x = 0; x < t.alphabet_size(); ++x) {
        seq.insert(seq.end(), static_cast<std::size_t>(t.counts()[x]), static_cast<int>(x));
    }
    std::vector<Sequence> out;
    out.reserve(static_cast<std::size_t>(size));
    do {
        out.push_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

/// All weak compositions of n into alphabet_size parts, first coordinate descending.
inline std::vector<TypeDistribution> enumerate_n_types(int alphabet_size, int n,
                                                       std::uint64_t cap = kDefaultEnumerationCap) {
    if (alphabet_size < 1) throw InvalidParameter("enumerate_n_types: alphabet size must be >= 1");
    if (n < 1) throw InvalidParameter("enumerate_n_types: n must be >= 1");
    // C(n + |X| - 1, |X| - 1) in floating point for the cap check.
    const double log_count = std::lgamma(n + alphabet_size) - std::lgamma(n + 1.0) -
                             std::lgamma(static_cast<double>(alphabet_size));
    if (log_count > std::log(static_cast<double>(cap)) + 1e-9) {
        throw CapacityError("enumerate_n_types: number of types exceeds cap");
    }
    std::vector<TypeDistribution> out;
    std::vector<int> counts(static_cast<std::size_t>(alphabet_size), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == alphabet_size - 1) {
            counts[static_cast<std::size_t>(pos)] = remaining;
            out.emplace_back(counts);
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            counts[static_cast<std::size_t>(pos)] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    rec(rec, 0, n);
    const double bound = alphabet_size * std::log(n + 1.0);
    if (std::log(static_cast<double>(out.size())) > bound + 1e-9) {
        throw std::logic_error("enumerate_n_types: type count exceeds (n+1)^|X|");
    }
    return out;
}

/// log p^{⊗n}(T^n_q); -inf when the type charges a symbol of zero probability.
inline double type_log_probability(std::span<const double> p, const TypeDistribution& t) {
    if (p.size() != t.alphabet_size()) {
        throw InvalidInput("type_log_probability: alphabet sizes differ");
    }
    double v = type_class_log_size(t);
    for (std::size_t x = 0; x < p.size(); ++x) {
        const int c = t.counts()[x];
        if (c == 0) continue;
        if (!(p[x] > 0.0)) return -std::numeric_limits<double>::infinity();
        v += c * std::log(p[x]);
    }
    return v;
}

}  // namespace qpa

#endif
