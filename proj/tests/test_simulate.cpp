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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "support.hpp"

namespace qpa {
namespace {

using testing::Rng;
using testing::random_density;

DensityOperator ket0() { return DensityOperator::diagonal({1.0, 0.0}); }
DensityOperator ket1() { return DensityOperator::diagonal({0.0, 1.0}); }

ConstantTypeSource orthogonal_pair() {
    return ConstantTypeSource(std::vector<DensityOperator>{ket0(), ket1()}, TypeDistribution({1, 1}));
}

ConstantTypeSource random_cts(Rng& rng, std::vector<int> counts, Index dim = 2) {
    std::vector<DensityOperator> states;
    for (std::size_t i = 0; i < counts.size(); ++i) states.push_back(random_density(dim, rng));
    return ConstantTypeSource(states, TypeDistribution(std::move(counts)));
}

// Labelled-assignment oracle: every map [|T|] → [bins] with equal fibres,
// each evaluated on the full block-diagonal matrix.
double d_pa_labelled_oracle(const TypeClassEnsemble& ens, std::size_t bins) {
    const std::size_t size = ens.size();
    const std::size_t k = size / bins;
    std::vector<std::size_t> assign(size, 0);
    double total = 0.0;
    std::uint64_t count = 0;
    for (;;) {
        std::vector<std::size_t> fibre(bins, 0);
        for (std::size_t a : assign) ++fibre[a];
        if (std::all_of(fibre.begin(), fibre.end(), [&](std::size_t f) { return f == k; })) {
            std::vector<std::vector<std::size_t>> groups(bins);
            for (std::size_t i = 0; i < size; ++i) groups[assign[i]].push_back(i);
            total += ens.binning_distance_composite(groups);
            ++count;
        }
        std::size_t pos = 0;
        while (pos < size && ++assign[pos] == bins) assign[pos++] = 0;
        if (pos == size) break;
    }
    return total / static_cast<double>(count);
}

// Ordered injective tuples, the law of a codebook drawn symbol by symbol.
double d_sc_ordered_oracle(const TypeClassEnsemble& ens, std::size_t m) {
    std::vector<std::size_t> perm(ens.size());
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    std::uint64_t count = 0;
    std::set<std::vector<std::size_t>> seen;
    do {
        std::vector<std::size_t> prefix(perm.begin(), perm.begin() + static_cast<long>(m));
        if (!seen.insert(prefix).second) continue;
        total += ens.codebook_distance(prefix);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / static_cast<double>(count);
}

TEST(Binomial, Values) {
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(12, 6), 924u);
    EXPECT_EQ(binomial(3, 5), 0u);
    EXPECT_EQ(divisors(12), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
}

TEST(SampleBinning, TwoElementCensus) {
    std::map<std::vector<int>, int> seen;
    const int seeds = 4000;
    for (int s = 0; s < seeds; ++s) {
        const auto b = sample_regular_binning(TypeDistribution({1, 1}), 2, static_cast<std::uint64_t>(s));
        ASSERT_TRUE(b.is_regular());
        ++seen[b.assignment];
    }
    ASSERT_EQ(seen.size(), 2u);
    for (const auto& [a, c] : seen) EXPECT_NEAR(c / double(seeds), 0.5, 4 * std::sqrt(0.25 / seeds));
}

TEST(SampleBinning, FourElementCensus) {
    // |T| = 4 from type (2, 2)... that class has 6 members; use (3, 1) for 4.
    std::map<std::vector<int>, int> seen;
    const int seeds = 6000;
    for (int s = 0; s < seeds; ++s) {
        const auto b = sample_regular_binning(TypeDistribution({3, 1}), 2, static_cast<std::uint64_t>(s));
        ASSERT_EQ(b.domain.size(), 4u);
        ASSERT_TRUE(b.is_regular());
        ++seen[b.assignment];
    }
    ASSERT_EQ(seen.size(), 6u);
    double chi2 = 0.0;
    for (const auto& [a, c] : seen) chi2 += std::pow(c - seeds / 6.0, 2) / (seeds / 6.0);
    EXPECT_LT(chi2, 20.5);  // 5 dof, p ≈ 0.001
}

TEST(SampleBinning, SingleBinAndErrors) {
    const auto b = sample_regular_binning(TypeDistribution({2, 2}), 1, 9);
    EXPECT_TRUE(std::all_of(b.assignment.begin(), b.assignment.end(), [](int a) { return a == 0; }));
    EXPECT_THROW(sample_regular_binning(TypeDistribution({2, 2}), 4, 1), InvalidParameter);
    EXPECT_THROW(sample_regular_binning(TypeDistribution({2, 2}), 0, 1), InvalidParameter);
}

TEST(SampleBinning, Deterministic) {
    const auto a = sample_regular_binning(TypeDistribution({3, 3}), 4, 77);
    const auto b = sample_regular_binning(TypeDistribution({3, 3}), 4, 77);
    EXPECT_EQ(a.assignment, b.assignment);
}

TEST(SampleCodebook, Examples) {
    const TypeDistribution t({2, 2});
    const auto all = sample_codebook_without_repetition(t, 6, 3);
    std::set<Sequence> distinct(all.codewords.begin(), all.codewords.end());
    EXPECT_EQ(distinct.size(), 6u);
    for (const auto& c : all.codewords) EXPECT_EQ(std::count(c.begin(), c.end(), 1), 2);
    EXPECT_EQ(sample_codebook_without_repetition(t, 1, 3).codewords.size(), 1u);
    EXPECT_THROW(sample_codebook_without_repetition(t, 7, 3), InvalidParameter);
    EXPECT_THROW(sample_codebook_without_repetition(t, 0, 3), InvalidParameter);
}

TEST(SampleCodebook, PairCensus) {
    std::map<std::set<std::size_t>, int> seen;
    const int seeds = 6000;
    for (int s = 0; s < seeds; ++s) {
        const auto c = sample_codebook_without_repetition(TypeDistribution({2, 1}), 2, static_cast<std::uint64_t>(s));
        ASSERT_NE(c.indices[0], c.indices[1]);
        ++seen[{c.indices.begin(), c.indices.end()}];
    }
    ASSERT_EQ(seen.size(), 3u);
    for (const auto& [p, c] : seen) EXPECT_NEAR(c / double(seeds), 1.0 / 3.0, 4 * std::sqrt(2.0 / 9.0 / seeds));
}

TEST(DSc, Examples) {
    Rng rng(1);
    const auto src = random_cts(rng, {2, 2});
    const TypeClassEnsemble ens(src);
    EXPECT_NEAR(d_sc_exact(ens, ens.size()), 0.0, 1e-14);
    EXPECT_NEAR(d_sc_exact(orthogonal_pair(), 1), 0.5, 1e-14);
    const auto rho = random_density(2, rng);
    const ConstantTypeSource flat(std::vector<DensityOperator>{rho, rho}, TypeDistribution({2, 1}));
    for (std::uint64_t m = 1; m <= 3; ++m) EXPECT_NEAR(d_sc_exact(flat, m), 0.0, 1e-14);
    EXPECT_THROW(d_sc_exact(ens, 7), InvalidParameter);
    ExactLimits tight;
    tight.max_subsets = 5;
    EXPECT_THROW(d_sc_exact(ens, 3, tight), CapacityError);
}

TEST(DSc, UnorderedMatchesOrderedTuples) {
    Rng rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        const TypeClassEnsemble ens(random_cts(rng, {2, 2}));
        for (std::size_t m = 1; m <= 6; ++m) EXPECT_NEAR(d_sc_exact(ens, m), d_sc_ordered_oracle(ens, m), 1e-13);
    }
}

TEST(DPa, Examples) {
    Rng rng(3);
    const auto src = random_cts(rng, {2, 2});
    EXPECT_NEAR(d_pa_exact(src, 1), 0.0, 1e-14);
    EXPECT_NEAR(d_pa_exact(orthogonal_pair(), 2), 0.5, 1e-14);
    const auto rho = random_density(2, rng);
    const ConstantTypeSource flat(std::vector<DensityOperator>{rho, rho}, TypeDistribution({2, 2}));
    for (std::uint64_t b : {1, 2, 3, 6}) EXPECT_NEAR(d_pa_exact(flat, b), 0.0, 1e-14);
    EXPECT_THROW(d_pa_exact(src, 4), InvalidParameter);
    EXPECT_THROW(d_pa_exact(random_cts(rng, {3, 3, 1}), 2), CapacityError);
}

TEST(DPa, PartitionEnumerationMatchesLabelledOracle) {
    Rng rng(4);
    for (const auto& counts : {std::vector<int>{2, 2}, std::vector<int>{3, 1}, std::vector<int>{1, 1, 1}}) {
        const TypeClassEnsemble ens(random_cts(rng, counts));
        for (std::uint64_t b : divisors(ens.size())) {
            EXPECT_NEAR(d_pa_exact(ens, b), d_pa_labelled_oracle(ens, b), 1e-13);
        }
    }
}

TEST(DPa, BlockSplitMatchesComposite) {
    Rng rng(5);
    const TypeClassEnsemble ens(random_cts(rng, {2, 1, 1}));
    for (std::uint64_t b : divisors(ens.size())) {
        for (std::uint64_t s = 0; s < 5; ++s) {
            CounterRng r(s, b);
            const auto bins = detail::sample_bins(ens.size(), b, r);
            EXPECT_NEAR(ens.binning_distance(bins), ens.binning_distance_composite(bins), 1e-12);
        }
    }
}

TEST(Equivalence, Examples) {
    const auto eq = verify_equivalence(orthogonal_pair(), 2);
    EXPECT_NEAR(eq.d_pa, 0.5, 1e-14);
    EXPECT_NEAR(eq.d_sc, 0.5, 1e-14);
    EXPECT_LE(eq.gap, 1e-12);
    Rng rng(6);
    const auto src = random_cts(rng, {2, 2});
    const auto one = verify_equivalence(src, 1);
    EXPECT_NEAR(one.d_pa, 0.0, 1e-14);
    EXPECT_NEAR(one.d_sc, 0.0, 1e-14);
    for (int trial = 0; trial < 5; ++trial) {
        const auto q = random_cts(rng, {2, 2});
        for (std::uint64_t b : {2, 3}) EXPECT_LE(verify_equivalence(q, b).gap, 1e-10);
    }
}

TEST(Equivalence, HoldsAcrossTypesAndBins) {
    Rng rng(7);
    const std::vector<std::vector<int>> types = {{1, 1}, {2, 1}, {2, 2}, {3, 1}, {1, 1, 1}, {2, 1, 1}, {4, 1}, {3, 2}};
    for (const auto& counts : types) {
        for (Index dim : {2, 3}) {
            if (dim == 3 && counts[0] + counts[1] + (counts.size() > 2 ? counts[2] : 0) > 4) continue;
            const TypeClassEnsemble ens(random_cts(rng, counts, dim));
            for (std::uint64_t b : divisors(ens.size())) EXPECT_LE(verify_equivalence(ens, b).gap, 1e-10);
        }
    }
}

TEST(MonteCarlo, Deterministic) {
    Rng rng(8);
    const TypeClassEnsemble ens(random_cts(rng, {2, 2}));
    const auto a = d_pa_monte_carlo(ens, 2, 50, 123);
    const auto b = d_pa_monte_carlo(ens, 2, 50, 123);
    const auto c = d_pa_monte_carlo(ens, 2, 50, 123, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.mean, c.mean);
    EXPECT_EQ(a.seed, 123u);
    const auto s1 = d_sc_monte_carlo(ens, 2, 50, 9);
    const auto s2 = d_sc_monte_carlo(ens, 2, 50, 9, 4);
    EXPECT_EQ(s1.mean, s2.mean);
}

TEST(MonteCarlo, SingleTrialIsOneDraw) {
    Rng rng(9);
    const TypeClassEnsemble ens(random_cts(rng, {2, 2}));
    const auto est = d_sc_monte_carlo(ens, 3, 1, 42);
    EXPECT_EQ(est.trials, 1u);
    EXPECT_EQ(est.std_error, 0.0);
    CounterRng r(42, 0);
    EXPECT_EQ(est.mean, ens.codebook_distance(detail::sample_subset(ens.size(), 3, r)));
    const auto pa = d_pa_monte_carlo(ens, 1, 20, 5);
    EXPECT_EQ(pa.mean, 0.0);
    EXPECT_EQ(pa.std_error, 0.0);
}

TEST(MonteCarlo, StdErrorDefinition) {
    Rng rng(10);
    const TypeClassEnsemble ens(random_cts(rng, {3, 2}));
    const std::uint64_t trials = 40;
    const auto est = d_pa_monte_carlo(ens, 2, trials, 17);
    std::vector<double> draws;
    for (std::uint64_t t = 0; t < trials; ++t) {
        CounterRng r(17, t);
        draws.push_back(ens.binning_distance(detail::sample_bins(ens.size(), 2, r)));
    }
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / trials;
    double ss = 0.0;
    for (double d : draws) ss += (d - mean) * (d - mean);
    EXPECT_NEAR(est.mean, mean, 1e-15);
    EXPECT_NEAR(est.std_error, std::sqrt(ss / (trials - 1)) / std::sqrt(double(trials)), 1e-15);
}

TEST(MonteCarlo, UnbiasedAgainstExact) {
    Rng rng(11);
    const std::vector<std::vector<int>> types = {{2, 2}, {3, 1}, {2, 1, 1}, {1, 1, 1}, {3, 2}};
    double pooled_diff = 0.0, pooled_var = 0.0;
    int instances = 0;
    while (instances < 100) {
        const auto& counts = types[instances % types.size()];
        const bool small = type_class_size(TypeDistribution(counts)) <= 6;
        const TypeClassEnsemble ens(random_cts(rng, counts, small ? 2 + instances % 2 : 2));
        const auto divs = divisors(ens.size());
        const std::uint64_t b = divs[static_cast<std::size_t>(instances) % divs.size()];
        const double exact_pa = d_pa_exact(ens, b);
        const auto mc = d_pa_monte_carlo(ens, b, 200, 1000 + instances);
        if (mc.std_error == 0.0) {
            EXPECT_NEAR(mc.mean, exact_pa, 1e-12);
        } else {
            EXPECT_LE(std::abs(mc.mean - exact_pa), 5 * mc.std_error + 1e-12);
        }
        pooled_diff += mc.mean - exact_pa;
        pooled_var += mc.std_error * mc.std_error;
        const std::uint64_t m = ens.size() / b;
        const auto sc = d_sc_monte_carlo(ens, m, 200, 5000 + instances);
        const double exact_sc = d_sc_exact(ens, m);
        if (sc.std_error == 0.0) {
            EXPECT_NEAR(sc.mean, exact_sc, 1e-12);
        } else {
            EXPECT_LE(std::abs(sc.mean - exact_sc), 5 * sc.std_error + 1e-12);
        }
        ++instances;
    }
    EXPECT_LE(std::abs(pooled_diff), 4 * std::sqrt(pooled_var));
}

TEST(Covariance, Examples) {
    EXPECT_NEAR(without_replacement_covariance(std::vector<double>(5, 2.5), 3), 0.0, 1e-15);
    EXPECT_NEAR(without_replacement_covariance(std::vector<double>{0, 1, 2}, 2), -1.0 / 3.0, 1e-15);
    EXPECT_THROW(without_replacement_covariance(std::vector<double>{0, 1, 2}, 1), InvalidParameter);
    EXPECT_THROW(without_replacement_covariance(std::vector<double>{0, 1, 2}, 4), InvalidParameter);
}

TEST(Covariance, SubsetEnumerationOracle) {
    Rng rng(12);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 6;
        std::vector<double> f(n);
        for (auto& v : f) v = g(rng);
        const double mean = std::accumulate(f.begin(), f.end(), 0.0) / n;
        for (std::size_t m = 2; m <= n; ++m) {
            // Average over M-subsets of the within-subset pair average.
            std::vector<bool> pick(n, false);
            std::fill(pick.begin(), pick.begin() + static_cast<long>(m), true);
            double total = 0.0;
            int subsets = 0;
            do {
                double s = 0.0;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        if (a != b && pick[a] && pick[b]) s += (f[a] - mean) * (f[b] - mean);
                total += s / (m * (m - 1.0));
                ++subsets;
            } while (std::prev_permutation(pick.begin(), pick.end()));
            EXPECT_NEAR(without_replacement_covariance(f, m), total / subsets, 1e-12);
            EXPECT_LE(without_replacement_covariance(f, m), 1e-14);
        }
    }
}

}  // namespace
}  // namespace qpa
