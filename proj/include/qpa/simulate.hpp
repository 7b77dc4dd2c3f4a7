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

// Regular random binning and codebooks without repetition over a type class.
//
// d_PA(num_bins) is the expected trace distance between the binned c-q state
// and the ideal uniform-key state; d_SC(M) is the expected trace distance
// between a random M-codeword average and the type-class average. Both are
// available exactly (full enumeration, small type classes) and by Monte Carlo
// with per-trial counter-based substreams.

#ifndef QPA_SIMULATE_HPP
#define QPA_SIMULATE_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qpa/errors.hpp"
#include "qpa/model.hpp"
#include "qpa/qmat.hpp"
#include "qpa/rng.hpp"

namespace qpa {

/// A k-to-1 assignment of type-class sequences to bins.
struct Binning {
    std::vector<Sequence> domain;
    int num_bins = 1;
    /// assignment[i] is the bin of domain[i].
    std::vector<int> assignment;

    std::size_t bin_size() const { return domain.size() / static_cast<std::size_t>(num_bins); }

    std::vector<std::vector<std::size_t>> preimages() const {
        std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_bins));
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            out[static_cast<std::size_t>(assignment[i])].push_back(i);
        }
        return out;
    }

    bool is_regular() const {
        if (num_bins < 1 || domain.size() % static_cast<std::size_t>(num_bins) != 0) return false;
        std::vector<std::size_t> sizes(static_cast<std::size_t>(num_bins), 0);
        for (int b : assignment) {
            if (b < 0 || b >= num_bins) return false;
            ++sizes[static_cast<std::size_t>(b)];
        }
        return std::all_of(sizes.begin(), sizes.end(),
                           [&](std::size_t s) { return s == bin_size(); });
    }
};

/// M distinct sequences from one type class.
struct Codebook {
    std::vector<Sequence> codewords;
    /// Positions of the codewords in the lexicographic type-class listing.
    std::vector<std::size_t> indices;
};

struct SimEstimate {
    double mean = 0.0;
    std::uint64_t trials = 0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
};

struct EquivalenceCheck {
    double d_pa = 0.0;
    double d_sc = 0.0;
    double gap = 0.0;
};

struct ExactLimits {
    /// Number of M-subsets enumerated by d_sc_exact.
    std::uint64_t max_subsets = 1'000'000;
    /// Largest type class for which d_pa_exact enumerates all binnings.
    std::uint64_t max_pa_type_class = 12;
};

/// Exact C(n, k); throws CapacityError above cap.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k,
                              std::uint64_t cap = std::numeric_limits<std::uint64_t>::max()) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > cap) throw CapacityError("binomial coefficient exceeds cap");
    }
    return static_cast<std::uint64_t>(acc);
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

/// Uniform regular binning of [0, size) into num_bins blocks: shuffle, then chunk.
inline std::vector<std::vector<std::size_t>> sample_bins(std::size_t size, std::size_t num_bins,
                                                         CounterRng& rng) {
    auto perm = iota_indices(size);
    partial_shuffle(std::span<std::size_t>(perm), size, rng);
    const std::size_t k = size / num_bins;
    std::vector<std::vector<std::size_t>> bins(num_bins);
    for (std::size_t i = 0; i < size; ++i) bins[i / k].push_back(perm[i]);
    return bins;
}

/// Uniform M-subset of [0, size), in draw order.
inline std::vector<std::size_t> sample_subset(std::size_t size, std::size_t m, CounterRng& rng) {
    auto perm = iota_indices(size);
    partial_shuffle(std::span<std::size_t>(perm), m, rng);
    perm.resize(m);
    return perm;
}

inline void check_divides(std::uint64_t size, std::uint64_t num_bins) {
    if (num_bins < 1 || size % num_bins != 0) {
        throw InvalidParameter("number of bins " + std::to_string(num_bins) +
                               " does not divide the type class size " + std::to_string(size));
    }
}

/// Runs body(trial) for trial in [0, trials) on up to `threads` workers.
template <typename Body>
std::vector<double> run_trials(std::uint64_t trials, unsigned threads, Body body) {
    std::vector<double> values(static_cast<std::size_t>(trials));
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(trials, 1))));
    if (threads == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) values[t] = body(t);
        return values;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            (void)w;
            for (std::uint64_t t = next++; t < trials; t = next++) {
                try {
                    values[t] = body(t);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return values;
}

/// Mean and standard error, summed in trial order.
inline SimEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
    SimEstimate est;
    est.trials = values.size();
    est.seed = seed;
    if (values.empty()) return est;
    double sum = 0.0;
    for (double v : values) sum += v;
    est.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - est.mean) * (v - est.mean);
        const double stdev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        est.std_error = stdev / std::sqrt(static_cast<double>(values.size()));
    }
    return est;
}

}  // namespace detail

/// The enumerated type class of a constant-type source with every sequence
/// state ⊗_i ρ_{x_i} materialized, plus their uniform average.
class TypeClassEnsemble {
  public:
    static constexpr std::uint64_t kMaxStoredEntries = std::uint64_t{1} << 24;

    explicit TypeClassEnsemble(const ConstantTypeSource& src,
                               std::uint64_t cap = kDefaultEnumerationCap)
        : n_(src.n()) {
        sequences_ = enumerate_type_class(src.type(), cap);
        const double log_dim = n_ * std::log(static_cast<double>(src.base().state_dim()));
        if (log_dim > std::log(static_cast<double>(kMaxDimension)) + 1e-9) {
            throw CapacityError("sequence states exceed dimension cap " +
                                std::to_string(kMaxDimension));
        }
        dim_ = static_cast<Index>(std::llround(std::exp(log_dim)));
        if (static_cast<double>(sequences_.size()) * static_cast<double>(dim_) *
                static_cast<double>(dim_) >
            static_cast<double>(kMaxStoredEntries)) {
            throw CapacityError("type class too large to materialize sequence states");
        }
        states_.reserve(sequences_.size());
        average_ = ComplexMatrix::Zero(dim_, dim_);
        for (const auto& seq : sequences_) {
            states_.push_back(sequence_matrix(src.base(), seq));
            average_ += states_.back();
        }
        average_ /= static_cast<double>(sequences_.size());
    }

    std::size_t size() const { return sequences_.size(); }
    Index dim() const { return dim_; }
    int n() const { return n_; }
    const std::vector<Sequence>& sequences() const { return sequences_; }
    const ComplexMatrix& state(std::size_t i) const { return states_[i]; }
    const ComplexMatrix& average() const { return average_; }

    /// (1/2)‖(1/M) Σ_{i ∈ codebook} ρ_i − ρ̄‖₁.
    double codebook_distance(std::span<const std::size_t> codebook) const {
        ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
        for (std::size_t i : sorted(codebook)) acc += states_[i];
        acc /= static_cast<double>(codebook.size());
        acc -= average_;
        return 0.5 * trace_norm(acc);
    }

    /// ‖(1/|T|) Σ_{i ∈ bin} ρ_i − (1/|Z|) ρ̄‖₁ for one bin of a |Z|-bin binning.
    double bin_block_norm(std::span<const std::size_t> bin, std::size_t num_bins) const {
        ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
        for (std::size_t i : sorted(bin)) acc += states_[i];
        acc /= static_cast<double>(sequences_.size());
        acc -= average_ / static_cast<double>(num_bins);
        return trace_norm(acc);
    }

    /// (1/2)‖R^h(ρ̆_XB) − 1/|Z| ⊗ ρ̆_B‖₁ via the per-bin block split.
    double binning_distance(const std::vector<std::vector<std::size_t>>& bins) const {
        double total = 0.0;
        for (const auto& bin : bins) total += bin_block_norm(bin, bins.size());
        return 0.5 * total;
    }

    /// The same quantity from the full |Z|·d-dimensional block-diagonal matrix.
    double binning_distance_composite(const std::vector<std::vector<std::size_t>>& bins) const {
        const Index z = static_cast<Index>(bins.size());
        if (z * dim_ > kMaxDimension) {
            throw CapacityError("composite binning matrix exceeds dimension cap");
        }
        ComplexMatrix full = ComplexMatrix::Zero(z * dim_, z * dim_);
        const double total = static_cast<double>(sequences_.size());
        for (Index b = 0; b < z; ++b) {
            auto block = full.block(b * dim_, b * dim_, dim_, dim_);
            for (std::size_t i : bins[static_cast<std::size_t>(b)]) block += states_[i] / total;
            block -= average_ / static_cast<double>(z);
        }
        return 0.5 * trace_norm(full);
    }

  private:
    // Index order matches the order used for average_, so a set covering
    // the whole class cancels exactly.
    static std::vector<std::size_t> sorted(std::span<const std::size_t> idx) {
        std::vector<std::size_t> out(idx.begin(), idx.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    int n_ = 0;
    Index dim_ = 0;
    std::vector<Sequence> sequences_;
    std::vector<ComplexMatrix> states_;
    ComplexMatrix average_;
};

inline Binning sample_regular_binning(const TypeDistribution& t, int num_bins,
                                      std::uint64_t seed, std::uint64_t stream = 0) {
    if (num_bins < 1) throw InvalidParameter("sample_regular_binning: num_bins must be >= 1");
    const std::uint64_t size = type_class_size(t, kDefaultEnumerationCap);
    detail::check_divides(size, static_cast<std::uint64_t>(num_bins));
    Binning out;
    out.domain = enumerate_type_class(t);
    out.num_bins = num_bins;
    out.assignment.assign(out.domain.size(), 0);
    CounterRng rng(seed, stream);
    const auto bins = detail::sample_bins(out.domain.size(), static_cast<std::size_t>(num_bins), rng);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        for (std::size_t i : bins[b]) out.assignment[i] = static_cast<int>(b);
    }
    return out;
}

inline Codebook sample_codebook_without_repetition(const TypeDistribution& t, std::uint64_t m,
                                                   std::uint64_t seed, std::uint64_t stream = 0) {
    const std::uint64_t size = type_class_size(t, kDefaultEnumerationCap);
    if (m < 1 || m > size) {
        throw InvalidParameter("codebook size " + std::to_string(m) + " must lie in [1, " +
                               std::to_string(size) + "]");
    }
    const auto domain = enumerate_type_class(t);
    CounterRng rng(seed, stream);
    Codebook out;
    out.indices = detail::sample_subset(domain.size(), static_cast<std::size_t>(m), rng);
    for (std::size_t i : out.indices) out.codewords.push_back(domain[i]);
    return out;
}

/// Exact d_SC: the average over all M-subsets of the type class.
inline double d_sc_exact(const TypeClassEnsemble& ens, std::uint64_t m,
                         const ExactLimits& limits = {}) {
    const std::size_t size = ens.size();
    if (m < 1 || m > size) {
        throw InvalidParameter("codebook size " + std::to_string(m) + " must lie in [1, " +
                               std::to_string(size) + "]");
    }
    const std::uint64_t count = binomial(size, m, limits.max_subsets);
    std::vector<std::size_t> idx(static_cast<std::size_t>(m));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    double total = 0.0;
    for (;;) {
        total += ens.codebook_distance(idx);
        // Next combination in lexicographic order.
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == size - idx.size() + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
    }
    return total / static_cast<double>(count);
}

inline double d_sc_exact(const ConstantTypeSource& src, std::uint64_t m,
                         const ExactLimits& limits = {}) {
    return d_sc_exact(TypeClassEnsemble(src), m, limits);
}

/// Exact d_PA: the average over all regular binnings. Bin labels do not affect
/// the value, so each unordered partition into equal blocks is visited once;
/// block norms are memoized by membership bitmask.
inline double d_pa_exact(const TypeClassEnsemble& ens, std::uint64_t num_bins,
                         const ExactLimits& limits = {}) {
    const std::size_t size = ens.size();
    detail::check_divides(size, num_bins);
    if (size > limits.max_pa_type_class || size > 63) {
        throw CapacityError("d_pa_exact: type class of size " + std::to_string(size) +
                            " exceeds the exact-enumeration cap " +
                            std::to_string(limits.max_pa_type_class));
    }
    const std::size_t k = size / num_bins;
    std::unordered_map<std::uint64_t, double> block_cache;
    auto block_norm = [&](std::uint64_t mask) {
        auto it = block_cache.find(mask);
        if (it != block_cache.end()) return it->second;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < size; ++i) {
            if (mask >> i & 1U) members.push_back(i);
        }
        const double v = ens.bin_block_norm(members, num_bins);
        block_cache.emplace(mask, v);
        return v;
    };

    double total = 0.0;
    std::uint64_t partitions = 0;
    std::vector<std::uint64_t> blocks;
    const std::uint64_t full = size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;

    // Each new block takes the lowest unassigned element plus k-1 later ones.
    auto rec = [&](auto&& self, std::uint64_t used) -> void {
        if (used == full) {
            double sum = 0.0;
            for (std::uint64_t b : blocks) sum += block_norm(b);
            total += sum;
            ++partitions;
            return;
        }
        std::size_t first = 0;
        while (used >> first & 1U) ++first;
        std::vector<std::size_t> free;
        for (std::size_t i = first + 1; i < size; ++i) {
            if (!(used >> i & 1U)) free.push_back(i);
        }
        std::vector<std::size_t> pick(k - 1);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        for (;;) {
            std::uint64_t mask = std::uint64_t{1} << first;
            for (std::size_t p : pick) mask |= std::uint64_t{1} << free[p];
            blocks.push_back(mask);
            self(self, used | mask);
            blocks.pop_back();
            std::size_t i = pick.size();
            while (i > 0 && pick[i - 1] == free.size() - pick.size() + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
        }
    };
    rec(rec, 0);
    return 0.5 * total / static_cast<double>(partitions);
}

inline double d_pa_exact(const ConstantTypeSource& src, std::uint64_t num_bins,
                         const ExactLimits& limits = {}) {
    return d_pa_exact(TypeClassEnsemble(src), num_bins, limits);
}

inline SimEstimate d_sc_monte_carlo(const TypeClassEnsemble& ens, std::uint64_t m,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 1) {
    if (m < 1 || m > ens.size()) {
        throw InvalidParameter("codebook size " + std::to_string(m) + " must lie in [1, " +
                               std::to_string(ens.size()) + "]");
    }
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
    auto values = detail::run_trials(trials, threads, [&](std::uint64_t t) {
        CounterRng rng(seed, t);
        const auto subset = detail::sample_subset(ens.size(), static_cast<std::size_t>(m), rng);
        return ens.codebook_distance(subset);
    });
    return detail::summarize(values, seed);
}

inline SimEstimate d_sc_monte_carlo(const ConstantTypeSource& src, std::uint64_t m,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 1) {
    return d_sc_monte_carlo(TypeClassEnsemble(src), m, trials, seed, threads);
}

inline SimEstimate d_pa_monte_carlo(const TypeClassEnsemble& ens, std::uint64_t num_bins,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 1) {
    detail::check_divides(ens.size(), num_bins);
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
    auto values = detail::run_trials(trials, threads, [&](std::uint64_t t) {
        CounterRng rng(seed, t);
        return ens.binning_distance(
            detail::sample_bins(ens.size(), static_cast<std::size_t>(num_bins), rng));
    });
    return detail::summarize(values, seed);
}

inline SimEstimate d_pa_monte_carlo(const ConstantTypeSource& src, std::uint64_t num_bins,
                                    std::uint64_t trials, std::uint64_t seed,
                                    unsigned threads = 1) {
    return d_pa_monte_carlo(TypeClassEnsemble(src), num_bins, trials, seed, threads);
}

/// d_PA at num_bins bins next to d_SC at M = |T| / num_bins.
inline EquivalenceCheck verify_equivalence(const TypeClassEnsemble& ens, std::uint64_t num_bins,
                                           const ExactLimits& limits = {}) {
    detail::check_divides(ens.size(), num_bins);
    EquivalenceCheck out;
    out.d_pa = d_pa_exact(ens, num_bins, limits);
    out.d_sc = d_sc_exact(ens, ens.size() / num_bins, limits);
    out.gap = std::abs(out.d_pa - out.d_sc);
    return out;
}

inline EquivalenceCheck verify_equivalence(const ConstantTypeSource& src, std::uint64_t num_bins,
                                           const ExactLimits& limits = {}) {
    return verify_equivalence(TypeClassEnsemble(src), num_bins, limits);
}

/// E[f̂_i f̂_j], i ≠ j, for two of M indices drawn without replacement, where
/// f̂ = f − mean(f). Computed by summing over all ordered distinct pairs.
inline double without_replacement_covariance(std::span<const double> values, std::size_t m) {
    const std::size_t n = values.size();
    if (m < 2) throw InvalidParameter("without_replacement_covariance: M must be >= 2");
    if (m > n) throw InvalidParameter("without_replacement_covariance: M exceeds N");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b) acc += (values[a] - mean) * (values[b] - mean);
        }
    }
    return acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace qpa

#endif
