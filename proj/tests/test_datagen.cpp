/*
 * Copyright 2026 The mixcmi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "mixcmi/mixcmi.hpp"

using namespace mixcmi;

namespace {

double mean(std::vector<double> const & v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double correlation(std::vector<double> const & a, std::vector<double> const & b) {
    double const ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST(Sampler, MomentsWithinThreeStandardErrors) {
    Sampler rng(42);
    std::size_t const n = 100000;
    std::vector<double> u(n), z(n), e(n), p(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = rng.uniform();
        z[i] = rng.normal();
        e[i] = rng.exponential(2.0);
        p[i] = static_cast<double>(rng.poisson(37.5));
        b[i] = static_cast<double>(rng.binomial(3, 0.2));
    }
    double const se = 1.0 / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(mean(u), 0.5, 3 * std::sqrt(1.0 / 12) * se);
    EXPECT_NEAR(mean(z), 0.0, 3 * se);
    EXPECT_NEAR(mean(e), 0.5, 3 * 0.5 * se);
    EXPECT_NEAR(mean(p), 37.5, 3 * std::sqrt(37.5) * se);
    EXPECT_NEAR(mean(b), 0.6, 3 * std::sqrt(0.48) * se);
    for (double v : u) ASSERT_TRUE(v >= 0.0 && v < 1.0);
}

TEST(SplitSeed, DistinctStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(split_seed(7, s));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(split_seed(7, 3), split_seed(7, 3));
}

TEST(Generate, ReproducibleAndSeedSensitive) {
    for (auto const & id : scenario_ids()) {
        auto a = generate({id, 200, 5, 2});
        auto b = generate({id, 200, 5, 2});
        auto c = generate({id, 200, 6, 2});
        EXPECT_EQ(a.data, b.data) << id;
        EXPECT_NE(a.data, c.data) << id;
        EXPECT_EQ(a.data.rows(), 200u);
        std::ostringstream sa, sb;
        write_csv(sa, a.data, a.header);
        write_csv(sb, b.data, b.header);
        EXPECT_EQ(sa.str(), sb.str());
    }
}

TEST(Generate, Errors) {
    EXPECT_THROW(generate({"exp9", 10, 0, 1}), input_error);
    EXPECT_THROW(generate({"exp1", 0, 0, 1}), input_error);
    EXPECT_THROW(generate({"exp6", 10, 0, 0}), input_error);
    EXPECT_THROW(ground_truth({"nope", 10, 0, 1}), input_error);
}

TEST(Generate, HeaderNamesAlgorithm) {
    auto g = generate({"exp6", 10, 3, 2});
    EXPECT_NE(g.header.find(Sampler::algorithm), std::string::npos);
    EXPECT_NE(g.header.find("seed=3"), std::string::npos);
    EXPECT_NE(g.header.find("k=2"), std::string::npos);
}

TEST(Generate, Exp1Correlation) {
    auto g = generate({"exp1", 100000, 1, 1});
    EXPECT_NEAR(correlation(g.data.columns[0], g.data.columns[1]), 0.6, 0.01);
}

TEST(Generate, Exp2UniformXAndWindow) {
    auto g = generate({"exp2", 100000, 2, 1});
    std::vector<double> freq(5, 0.0);
    for (std::size_t i = 0; i < g.data.rows(); ++i) {
        double const x = g.data.columns[0][i], y = g.data.columns[1][i];
        ASSERT_TRUE(x >= 0 && x <= 4 && x == std::floor(x));
        freq[static_cast<std::size_t>(x)] += 1.0 / 100000;
        ASSERT_GE(y - x, 0.0);
        ASSERT_LE(y - x, 2.0);
    }
    for (double f : freq) EXPECT_NEAR(f, 0.2, 0.01);
}

TEST(Generate, Exp3ZeroInflation) {
    auto g = generate({"exp3", 100000, 3, 1});
    double zeros = 0;
    for (double y : g.data.columns[1]) zeros += y == 0.0;
    EXPECT_GE(zeros / 100000, 0.15);
    // P(Y=0) = 0.15 + 0.85 * E[e^{-X}] = 0.15 + 0.85/2 for X ~ Exp(1).
    EXPECT_NEAR(zeros / 100000, 0.575, 0.005);
}

TEST(Generate, Exp4ChainMoments) {
    auto g = generate({"exp4", 100000, 4, 1});
    EXPECT_NEAR(mean(g.data.columns[0]), 2.0, 0.03);   // Exp(rate 1/2)
    EXPECT_NEAR(mean(g.data.columns[2]), 2.0, 0.03);   // Poisson(X)
    EXPECT_NEAR(mean(g.data.columns[1]), 1.0, 0.02);   // Binomial(Z, 1/2)
    for (std::size_t i = 0; i < g.data.rows(); ++i) ASSERT_LE(g.data.columns[1][i], g.data.columns[2][i]);
}

TEST(Generate, Exp5HalfDiscrete) {
    auto g = generate({"exp5", 100000, 5, 1});
    double disc = 0, pp = 0;
    for (std::size_t i = 0; i < g.data.rows(); ++i) {
        double const x = g.data.columns[0][i], y = g.data.columns[1][i];
        if (std::abs(x) == 1.0 && std::abs(y) == 1.0) {
            disc += 1;
            pp += (x == 1.0 && y == 1.0);
        }
    }
    EXPECT_NEAR(disc / 100000, 0.5, 0.01);
    EXPECT_NEAR(pp / 100000, 0.2, 0.01);
    EXPECT_NEAR(mean(g.data.columns[2]), 0.6, 0.01);
}

TEST(Generate, Exp6ZDimensions) {
    auto g = generate({"exp6", 2000, 6, 3});
    EXPECT_EQ(g.data.cols(), 5u);
    EXPECT_EQ(g.z, (std::vector<std::size_t>{2, 3, 4}));
    for (std::size_t c = 2; c < 5; ++c)
        for (double v : g.data.columns[c]) ASSERT_TRUE(v == 0 || v == 1 || v == 2 || v == 3);
}

TEST(Generate, NetworkShape) {
    auto g = generate({"network", 5000, 7, 1});
    EXPECT_EQ(g.data.names, (std::vector<std::string>{"A", "B", "C", "D", "E", "F", "G"}));
    for (std::size_t i = 0; i < g.data.rows(); ++i) {
        ASSERT_LE(g.data.columns[2][i], g.data.columns[1][i]);  // C ~ Binomial(B, 1/2)
        ASSERT_GT(g.data.columns[0][i], 0.0);
    }
    EXPECT_NEAR(mean(g.data.columns[1]), 2.0, 0.06);
}

TEST(Generate, RolesAreDeclared) {
    for (auto const & id : scenario_ids()) {
        if (id == "network") continue;
        auto g = generate({id, 50, 1, 1});
        EXPECT_FALSE(g.x.empty()) << id;
        EXPECT_FALSE(g.y.empty()) << id;
    }
    auto nc4 = generate({"noncollider4", 50, 1, 1});
    EXPECT_EQ(nc4.x, std::vector<std::size_t>{1});
    EXPECT_EQ(nc4.z, std::vector<std::size_t>{0});
}

TEST(GroundTruth, Values) {
    EXPECT_NEAR(*ground_truth({"exp1", 1, 0, 1}), 0.22314, 1e-5);
    EXPECT_NEAR(*ground_truth({"exp2", 1, 0, 1}), 1.05492, 1e-5);
    EXPECT_NEAR(*ground_truth({"exp3", 1, 0, 1}), 0.25606, 1e-5);
    EXPECT_EQ(*ground_truth({"exp4", 1, 0, 1}), 0.0);
    EXPECT_NEAR(*ground_truth({"exp5", 1, 0, 1}), 0.352, 5e-4);
    EXPECT_NEAR(*ground_truth({"exp6", 1, 0, 3}), 1.05492, 1e-5);
    EXPECT_EQ(*ground_truth({"noncollider1", 1, 0, 1}), 0.0);
    EXPECT_FALSE(ground_truth({"network", 1, 0, 1}).has_value());
    EXPECT_FALSE(ground_truth({"collider3", 1, 0, 1}).has_value());
}
