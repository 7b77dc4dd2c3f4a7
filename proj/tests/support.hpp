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

// Random instances shared by the tests.

#ifndef QPA_TESTS_SUPPORT_HPP
#define QPA_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oracle/classical.hpp"
#include "qpa/qpa.hpp"

namespace qpa::testing {

using Rng = std::mt19937_64;

/// Ginibre-style random density operator of the given rank.
inline DensityOperator random_density(Index dim, Rng& rng, Index rank = -1) {
    if (rank < 0) rank = dim;
    std::normal_distribution<double> g;
    ComplexMatrix a(dim, rank);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < rank; ++j) a(i, j) = {g(rng), g(rng)};
    }
    ComplexMatrix m = a * a.adjoint();
    m /= m.trace().real();
    return DensityOperator(m);
}

inline std::vector<double> random_distribution(std::size_t k, Rng& rng, double floor = 0.0) {
    std::exponential_distribution<double> e;
    std::vector<double> p(k);
    double s = 0.0;
    for (auto& v : p) {
        v = floor + e(rng);
        s += v;
    }
    for (auto& v : p) v /= s;
    // Exact normalization so the prior check sees a sum of 1.
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < k; ++i) rest -= p[i];
    p.back() = rest;
    return p;
}

inline CQSource random_source(std::size_t alphabet, Index dim, Rng& rng) {
    std::vector<DensityOperator> states;
    for (std::size_t x = 0; x < alphabet; ++x) states.push_back(random_density(dim, rng));
    return CQSource(random_distribution(alphabet, rng, 0.05), states);
}

/// A commuting source together with its classical description.
struct ClassicalInstance {
    oracle::Dist prior;
    oracle::Channel channel;
    CQSource source;
};

inline ClassicalInstance random_classical(std::size_t alphabet, std::size_t dim, Rng& rng) {
    ClassicalInstance out{random_distribution(alphabet, rng, 0.05), {}, CQSource({1.0}, {DensityOperator()})};
    std::vector<DensityOperator> states;
    for (std::size_t x = 0; x < alphabet; ++x) {
        out.channel.push_back(random_distribution(dim, rng, 0.05));
        states.push_back(DensityOperator::diagonal(out.channel.back()));
    }
    out.source = CQSource(out.prior, states);
    return out;
}

inline ComplexVector ket(std::initializer_list<std::complex<double>> amps) {
    ComplexVector v(static_cast<Index>(amps.size()));
    Index i = 0;
    for (auto a : amps) v(i++) = a;
    return v;
}

}  // namespace qpa::testing

#endif
