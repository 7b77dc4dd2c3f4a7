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

#include <cmath>
#include <vector>

#include "oracle/classical.hpp"
#include "oracle/qubit.hpp"
#include "support.hpp"

namespace qpa {
namespace {

using testing::Rng;
using testing::random_density;

const std::vector<double> kOrders = {0.3, 0.5, 0.8, 0.95, 1.05, 1.3, 1.5, 1.9, 2.0};

DensityOperator ket0() { return DensityOperator::diagonal({1.0, 0.0}); }
DensityOperator ket1() { return DensityOperator::diagonal({0.0, 1.0}); }
DensityOperator ket_plus() { return DensityOperator::pure(testing::ket({1.0, 1.0})); }

oracle::qubit::M2 to_m2(const DensityOperator& r) {
    const auto& m = r.matrix();
    return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

TEST(Shannon, Examples) {
    EXPECT_EQ(shannon_entropy(std::vector<double>{1.0, 0.0}), 0.0);
    EXPECT_NEAR(shannon_entropy(std::vector<double>(5, 0.2)), std::log(5.0), 1e-15);
    EXPECT_NEAR(shannon_entropy(std::vector<double>{0.75, 0.25}), 0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0),
                1e-15);
}

TEST(KL, Examples) {
    const std::vector<double> p{0.75, 0.25};
    EXPECT_EQ(kl_divergence(p, p), 0.0);
    EXPECT_NEAR(kl_divergence(std::vector<double>{1.0, 0.0, 0.0}, std::vector<double>(3, 1.0 / 3.0)), std::log(3.0),
                1e-15);
    EXPECT_NEAR(kl_divergence(std::vector<double>{0.5, 0.5}, p), 0.5 * std::log(2.0 / 3.0) + 0.5 * std::log(2.0),
                1e-15);
    EXPECT_EQ(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}), kInfinity);
}

TEST(Renyi, SelfDivergenceIsZero) {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = random_density(3, rng);
        for (double a : kOrders) {
            EXPECT_NEAR(petz_renyi(rho, rho, a), 0.0, 1e-10);
            EXPECT_NEAR(sandwiched_renyi(rho, rho, a), 0.0, 1e-10);
        }
        EXPECT_NEAR(umegaki(rho, rho), 0.0, 1e-12);
    }
}

TEST(Renyi, CommutingMatchesClassical) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = testing::random_distribution(3, rng, 0.01);
        const auto q = testing::random_distribution(3, rng, 0.01);
        const auto rp = DensityOperator::diagonal(p), rq = DensityOperator::diagonal(q);
        for (double a : kOrders) {
            const double want = oracle::renyi(p, q, a);
            EXPECT_NEAR(petz_renyi(rp, rq, a), want, 1e-12);
            EXPECT_NEAR(sandwiched_renyi(rp, rq, a), want, 1e-12);
        }
        EXPECT_NEAR(umegaki(rp, rq), oracle::kl(p, q), 1e-12);
    }
}

TEST(Renyi, OrderOneLimitIsUmegaki) {
    // D_α − D is first order in α − 1 with slope V/2 (V the relative entropy
    // variance), so a fixed 1e-4 band at 1 ± 1e-3 only holds for small V.
    // The symmetric mean cancels the first-order term.
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = random_density(3, rng), sigma = random_density(3, rng);
        const double d = umegaki(rho, sigma);
        const double h = 1e-3;
        EXPECT_NEAR(0.5 * (petz_renyi(rho, sigma, 1 - h) + petz_renyi(rho, sigma, 1 + h)), d, 1e-4);
        EXPECT_NEAR(0.5 * (sandwiched_renyi(rho, sigma, 1 - h) + sandwiched_renyi(rho, sigma, 1 + h)), d, 1e-4);
        for (double a : {1.0 - 1e-5, 1.0 + 1e-5}) {
            EXPECT_NEAR(petz_renyi(rho, sigma, a), d, 1e-4);
            EXPECT_NEAR(sandwiched_renyi(rho, sigma, a), d, 1e-4);
        }
    }
    // Near-identical pairs meet the fixed band directly.
    for (int trial = 0; trial < 10; ++trial) {
        const auto sigma = random_density(3, rng);
        const auto rho = sigma.mix(random_density(3, rng), 0.05);
        const double d = umegaki(rho, sigma);
        for (double a : {1.0 - 1e-3, 1.0 + 1e-3}) {
            EXPECT_NEAR(petz_renyi(rho, sigma, a), d, 1e-4);
            EXPECT_NEAR(sandwiched_renyi(rho, sigma, a), d, 1e-4);
        }
    }
}

TEST(Renyi, SandwichedBelowPetz) {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const auto rho = random_density(3, rng), sigma = random_density(3, rng);
        for (double a : {1.1, 1.5, 2.0, 3.0}) {
            EXPECT_LE(sandwiched_renyi(rho, sigma, a), petz_renyi(rho, sigma, a) + 1e-12);
        }
    }
}

TEST(Renyi, SupportViolations) {
    EXPECT_EQ(petz_renyi(ket1(), ket0(), 1.5), kInfinity);
    EXPECT_EQ(sandwiched_renyi(ket1(), ket0(), 1.5), kInfinity);
    EXPECT_EQ(umegaki(ket1(), ket0()), kInfinity);
    // Orthogonal supports for α < 1.
    EXPECT_EQ(petz_renyi(ket1(), ket0(), 0.5), kInfinity);
    EXPECT_EQ(sandwiched_renyi(ket1(), ket0(), 0.5), kInfinity);
    // Partial overlap with α < 1 stays finite.
    EXPECT_TRUE(std::isfinite(petz_renyi(ket_plus(), ket0(), 0.5)));
}

TEST(Renyi, RejectsBadOrderAndDims) {
    const auto r = DensityOperator::maximally_mixed(2);
    EXPECT_THROW(petz_renyi(r, r, 1.0), InvalidParameter);
    EXPECT_THROW(sandwiched_renyi(r, r, -0.5), InvalidParameter);
    EXPECT_THROW(petz_renyi(r, DensityOperator::maximally_mixed(3), 0.5), InvalidInput);
}

TEST(Umegaki, PureInsideMaximallyMixed) {
    EXPECT_NEAR(umegaki(ket_plus(), DensityOperator::maximally_mixed(2)), std::log(2.0), 1e-14);
}

TEST(Divergences, NonnegativeAndFaithful) {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const Index d = 2 + trial % 2;
        const auto rho = random_density(d, rng), sigma = random_density(d, rng);
        for (double a : kOrders) {
            EXPECT_GT(petz_renyi(rho, sigma, a), 1e-9);
            EXPECT_GT(sandwiched_renyi(rho, sigma, a), 1e-9);
        }
        EXPECT_GT(umegaki(rho, sigma), 1e-9);
    }
}

TEST(Divergences, NondecreasingInOrder) {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = random_density(3, rng), sigma = random_density(3, rng);
        double prev_p = -kInfinity, prev_s = -kInfinity;
        for (double a = 0.1; a <= 2.0 + 1e-12; a += 0.05) {
            if (std::abs(a - 1.0) < 1e-9) continue;
            const double p = petz_renyi(rho, sigma, a), s = sandwiched_renyi(rho, sigma, a);
            EXPECT_GE(p, prev_p - 1e-12);
            EXPECT_GE(s, prev_s - 1e-12);
            prev_p = p;
            prev_s = s;
        }
    }
}

TEST(Holevo, Examples) {
    Rng rng(7);
    const auto rho = random_density(2, rng);
    EXPECT_NEAR(holevo_mutual_info(CQSource({0.3, 0.7}, {rho, rho})), 0.0, 1e-14);
    const std::vector<double> p{0.2, 0.3, 0.5};
    const CQSource ortho(p, {DensityOperator::diagonal({1.0, 0.0, 0.0}), DensityOperator::diagonal({0.0, 1.0, 0.0}),
                             DensityOperator::diagonal({0.0, 0.0, 1.0})});
    EXPECT_NEAR(holevo_mutual_info(ortho), shannon_entropy(p), 1e-14);
    const double l = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;
    EXPECT_NEAR(holevo_mutual_info(CQSource({0.5, 0.5}, {ket0(), ket_plus()})),
                -l * std::log(l) - (1 - l) * std::log(1 - l), 1e-14);
}

TEST(Holevo, EqualsRelativeEntropyToProduct) {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto src = testing::random_source(3, 2, rng);
        const auto m = marginal_state(src);
        double v = 0.0;
        for (std::size_t x = 0; x < 3; ++x) v += src.prior()[x] * umegaki(src.states()[x], m);
        EXPECT_NEAR(holevo_mutual_info(src), v, 1e-12);
    }
}

TEST(Augustin, EqualStates) {
    Rng rng(9);
    const auto rho = random_density(3, rng);
    const CQSource src({0.4, 0.6}, {rho, rho});
    for (double a : {0.5, 1.5}) {
        const auto r = augustin_sandwiched(src, a);
        EXPECT_NEAR(r.value, 0.0, 1e-12);
        EXPECT_LE((r.optimizer.matrix() - rho.matrix()).norm(), 1e-10);
        EXPECT_LE(r.final_step, 1e-9);
    }
}

TEST(Augustin, OrthogonalPureStates) {
    const std::vector<double> p{0.2, 0.3, 0.5};
    const CQSource src(p, {DensityOperator::diagonal({1.0, 0.0, 0.0}), DensityOperator::diagonal({0.0, 1.0, 0.0}),
                           DensityOperator::diagonal({0.0, 0.0, 1.0})});
    for (double a : {0.5, 0.9, 1.1, 1.5, 2.0}) {
        const auto r = augustin_sandwiched(src, a);
        EXPECT_NEAR(r.value, shannon_entropy(p), 1e-9) << a;
        EXPECT_LE((r.optimizer.matrix() - DensityOperator::diagonal(p).matrix()).norm(), 1e-8);
    }
}

TEST(Augustin, CommutingMatchesSimplexGrid) {
    Rng rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = testing::random_classical(3, 2, rng);
        for (double a : {0.5, 1.5}) {
            // Exhaustive grid over the 1-simplex with step 1e-3.
            double grid = kInfinity;
            for (int i = 1; i < 1000; ++i) {
                const oracle::Dist q{i / 1000.0, 1.0 - i / 1000.0};
                double v = 0.0;
                for (std::size_t x = 0; x < 3; ++x) v += inst.prior[x] * oracle::renyi(inst.channel[x], q, a);
                grid = std::min(grid, v);
            }
            EXPECT_NEAR(augustin_sandwiched(inst.source, a).value, grid, 1e-3);
        }
    }
}

TEST(Augustin, CommutingMatchesScalarOracle) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = testing::random_classical(2 + trial % 2, 2 + (trial / 2) % 2, rng);
        for (double a : {0.3, 0.7, 1.2, 1.6, 2.0}) {
            EXPECT_NEAR(augustin_sandwiched(inst.source, a).value, oracle::augustin(inst.prior, inst.channel, a), 1e-8);
        }
    }
}

TEST(Augustin, QubitMatchesBlochSearch) {
    Rng rng(12);
    for (int trial = 0; trial < 8; ++trial) {
        const auto src = testing::random_source(2 + trial % 2, 2, rng);
        std::vector<oracle::qubit::M2> states;
        for (const auto& s : src.states()) states.push_back(to_m2(s));
        for (double a : {0.6, 1.4, 1.9}) {
            const auto r = augustin_sandwiched(src, a);
            EXPECT_NEAR(r.value, oracle::qubit::augustin(src.prior(), states, a), 1e-8) << trial << " " << a;
        }
    }
}

TEST(Augustin, ValueIsObjectiveAtOptimizer) {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto src = testing::random_source(3, 3, rng);
        for (double a : {0.7, 1.5}) {
            const auto r = augustin_sandwiched(src, a);
            double v = 0.0;
            for (std::size_t x = 0; x < 3; ++x) v += src.prior()[x] * sandwiched_renyi(src.states()[x], r.optimizer, a);
            EXPECT_NEAR(r.value, v, 1e-11);
            EXPECT_LE(r.final_step, 1e-9);
            // Small perturbations never go lower.
            for (int k = 0; k < 5; ++k) {
                const auto moved = r.optimizer.mix(random_density(3, rng), 1e-3);
                double w = 0.0;
                for (std::size_t x = 0; x < 3; ++x) w += src.prior()[x] * sandwiched_renyi(src.states()[x], moved, a);
                EXPECT_GE(w, r.value - 1e-9);
            }
        }
    }
}

TEST(Augustin, ConvergenceFailureCarriesBestIterate) {
    Rng rng(14);
    const auto src = testing::random_source(3, 3, rng);
    AugustinOptions opts;
    opts.max_iter = 2;
    opts.tol = 1e-15;
    try {
        augustin_sandwiched(src, 1.5, opts);
        FAIL() << "expected a convergence error";
    } catch (const ConvergenceFailure& e) {
        EXPECT_TRUE(std::isfinite(e.best.value));
        EXPECT_EQ(e.best.optimizer.dim(), 3);
    }
    EXPECT_THROW(augustin_sandwiched(src, 1.5, opts), ConvergenceError);
}

TEST(Augustin, RejectsBadParameters) {
    const auto r = DensityOperator::maximally_mixed(2);
    const CQSource src({0.5, 0.5}, {r, r});
    EXPECT_THROW(augustin_sandwiched(src, 2.5), InvalidParameter);
    EXPECT_THROW(augustin_sandwiched(src, 1.0), InvalidParameter);
    EXPECT_THROW(augustin_sandwiched(src, 0.0), InvalidParameter);
    AugustinOptions bad;
    bad.tol = 0.0;
    EXPECT_THROW(augustin_sandwiched(src, 1.5, bad), InvalidParameter);
}

TEST(Augustin, SupportDeficientMarginal) {
    // Pure states in a 3-dim space: the marginal has rank 2.
    const CQSource src({0.5, 0.5}, {DensityOperator::diagonal({1.0, 0.0, 0.0}), DensityOperator::pure(testing::ket({1.0, 1.0, 0.0}))});
    for (double a : {0.5, 1.5}) {
        const auto r = augustin_sandwiched(src, a);
        EXPECT_TRUE(std::isfinite(r.value));
        EXPECT_GE(r.value, 0.0);
    }
}

TEST(PetzUp, Examples) {
    Rng rng(15);
    const auto rho = random_density(2, rng);
    EXPECT_NEAR(augustin_petz_up(CQSource({0.5, 0.5}, {rho, rho}), 0.5), 0.0, 1e-12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto src = testing::random_source(3, 2, rng);
        const double i = holevo_mutual_info(src);
        EXPECT_NEAR(augustin_petz_up(src, 1.0 - 1e-3), i, 1e-3);
        EXPECT_NEAR(augustin_petz_up(src, 1.0 + 1e-3), i, 1e-3);
        EXPECT_NEAR(augustin_petz_up(src, 1.0 + 1e-5), i, 1e-4);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = testing::random_classical(3, 3, rng);
        for (double a : kOrders) {
            EXPECT_NEAR(augustin_petz_up(inst.source, a), oracle::petz_augustin_up(inst.prior, inst.channel, a), 1e-12);
        }
    }
}

TEST(ConditionalSandwiched, Examples) {
    Rng rng(16);
    const auto rho = random_density(2, rng);
    const std::vector<double> p{0.3, 0.7};
    for (double a : {1.2, 1.8}) {
        // Product state: the Rényi entropy H_α(p), which is below H(p) for α > 1.
        const double renyi_entropy = std::log(std::pow(0.3, a) + std::pow(0.7, a)) / (1.0 - a);
        EXPECT_NEAR(conditional_renyi_sandwiched(CQSource(p, {rho, rho}), a), renyi_entropy, 1e-9);
        // Orthogonal pure states leave no uncertainty.
        EXPECT_NEAR(conditional_renyi_sandwiched(CQSource(p, {ket0(), ket1()}), a), 0.0, 1e-9);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = testing::random_classical(2 + trial % 2, 2 + (trial / 2) % 2, rng);
        for (double a : {1.05, 1.5, 2.0}) {
            EXPECT_NEAR(conditional_renyi_sandwiched(inst.source, a),
                        oracle::conditional_renyi_up(inst.prior, inst.channel, a), 1e-8);
        }
    }
    EXPECT_THROW(conditional_renyi_sandwiched(CQSource(p, {rho, rho}), 0.5), InvalidParameter);
}

TEST(ConditionalSandwiched, AtMostShannonEntropy) {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto src = testing::random_source(3, 2, rng);
        EXPECT_LE(conditional_renyi_sandwiched(src, 1.5), shannon_entropy(src.prior()) + 1e-9);
    }
}

TEST(PetzDown, Examples) {
    Rng rng(18);
    const auto rho = random_density(2, rng);
    const std::vector<double> p{0.3, 0.7};
    for (double a : kOrders) {
        const double renyi_entropy = std::log(std::pow(0.3, a) + std::pow(0.7, a)) / (1.0 - a);
        EXPECT_NEAR(conditional_renyi_petz_down(CQSource(p, {rho, rho}), a), renyi_entropy, 1e-12);
    }
    EXPECT_NEAR(conditional_renyi_petz_down(CQSource({1.0, 0.0}, {rho, ket0()}), 1.5), 0.0, 1e-12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = testing::random_classical(3, 2, rng);
        for (double a : kOrders) {
            EXPECT_NEAR(conditional_renyi_petz_down(inst.source, a),
                        oracle::conditional_renyi_down(inst.prior, inst.channel, a), 1e-12);
        }
    }
}

TEST(Properties, EntropyGapNonnegative) {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const auto src = testing::random_source(2 + trial % 2, 2, rng);
        const double h = shannon_entropy(src.prior());
        for (double a : {1.1, 1.3, 1.5, 1.9}) {
            EXPECT_GE(h - augustin_sandwiched(src, a).value - conditional_renyi_sandwiched(src, a), -1e-6);
        }
    }
}

TEST(Properties, OrderOneContinuity) {
    Rng rng(20);
    for (int trial = 0; trial < 20; ++trial) {
        const auto src = testing::random_source(3, 2 + trial % 2, rng);
        const double i = holevo_mutual_info(src);
        for (double a : {1.0 - 1e-3, 1.0 + 1e-3}) {
            EXPECT_NEAR(augustin_sandwiched(src, a).value, i, 1e-3);
            EXPECT_NEAR(augustin_petz_up(src, a), i, 1e-3);
        }
    }
}

TEST(VonNeumann, Examples) {
    EXPECT_NEAR(von_neumann_entropy(DensityOperator::maximally_mixed(4)), std::log(4.0), 1e-14);
    EXPECT_NEAR(von_neumann_entropy(ket_plus()), 0.0, 1e-14);
}

}  // namespace
}  // namespace qpa
