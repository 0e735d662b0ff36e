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
#include <vector>

#include "mixcmi/mixcmi.hpp"

using namespace mixcmi;

namespace {

std::vector<MixedColumn> columns(std::vector<std::vector<double>> const & cols, int t = 5) {
    std::vector<MixedColumn> out;
    for (std::size_t d = 0; d < cols.size(); ++d)
        out.push_back(detect_discrete_points(cols[d], t, "c" + std::to_string(d)));
    return out;
}

std::vector<double> normals(Sampler & rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto & x : v) x = rng.normal();
    return v;
}

}  // namespace

TEST(FitConfig, Validation) {
    FitConfig c;
    EXPECT_NO_THROW(c.validate());
    c.i_max = 0;
    EXPECT_THROW(c.validate(), input_error);
    c = {};
    c.k_max_factor = 30.0;
    EXPECT_THROW(c.validate(), input_error);
    c = {};
    c.t = 1;
    EXPECT_THROW(c.validate(), input_error);
    EXPECT_EQ(FitConfig{}.k_init(1000), 139u);
    EXPECT_EQ(FitConfig{}.k_max(1000), 35u);
}

TEST(InitDiscretization, ContinuousDimsStartAsOneCell) {
    Sampler rng(1);
    auto s = init_discretization(columns({normals(rng, 100), normals(rng, 100)}), {});
    EXPECT_EQ(s.bins[0].num_bins(), 1u);
    EXPECT_EQ(s.bins[1].num_bins(), 1u);
    EXPECT_EQ(build_grid(s.labeling.labels, s.bins).cell_count(), 1u);
}

TEST(InitDiscretization, AtomsPlusRemainder) {
    Sampler rng(2);
    std::vector<double> v;
    for (double a : {-1.0, 0.0, 4.0})
        for (int i = 0; i < 6; ++i) v.push_back(a);
    for (int i = 0; i < 30; ++i) v.push_back(rng.normal(10.0, 1.0));
    auto s = init_discretization(columns({v}), {});
    EXPECT_EQ(s.bins[0].num_singletons(), 3u);
    EXPECT_EQ(s.bins[0].num_bins(), 4u);
}

TEST(InitDiscretization, PurelyDiscreteHasNoInterval) {
    std::vector<double> v;
    for (int i = 0; i < 50; ++i) v.push_back(i % 7);
    auto s = init_discretization(columns({v}), {});
    EXPECT_EQ(s.bins[0].num_bins(), 7u);
    EXPECT_EQ(s.bins[0].num_intervals(), 0u);
    EXPECT_FALSE(s.candidates[0].has_value());
}

TEST(InitDiscretization, DegenerateAndNarrowColumns) {
    std::vector<double> deg(20, 1.0);
    deg[0] = 3.5;  // single continuous value
    std::vector<double> narrow(20);
    for (int i = 0; i < 20; ++i) narrow[i] = i % 2 ? 1.0 : std::nextafter(1.0, 2.0);
    auto s = init_discretization(columns({deg, narrow}, 11), {});
    EXPECT_TRUE(s.bins[0].is_degenerate());
    EXPECT_EQ(s.bins[0].num_bins(), 2u);
    EXPECT_EQ(s.bins[1].num_intervals(), 1u);
    EXPECT_FALSE(s.candidates[1].has_value());
    auto r = refine_dimension(0, s, {});
    EXPECT_FALSE(r.changed);
    EXPECT_EQ(r.score.total, s.score.total);
}

TEST(InitDiscretization, Errors) {
    EXPECT_THROW(init_discretization({}, {}), input_error);
    std::vector<MixedColumn> uneven{MixedColumn("a", {1.0, 2.0}, {false, false}), MixedColumn("b", {1.0}, {false})};
    EXPECT_THROW(init_discretization(uneven, {}), input_error);
}

TEST(RefineDimension, SingleDimensionEqualsOneDimensional) {
    Sampler rng(3);
    auto cols = columns({normals(rng, 700)});
    FitConfig cfg;
    auto s = init_discretization(cols, cfg);
    auto r = refine_dimension(0, s, cfg);
    auto b = optimal_histogram_1d(cols[0], candidate_cuts(cols[0], cfg.k_init(700)), cfg.k_max(700));
    EXPECT_EQ(r.bins, b);
    EXPECT_THROW(refine_dimension(1, s, cfg), input_error);
}

TEST(RefineDimension, ScoreMatchesRebuiltGrid) {
    Sampler rng(4);
    std::vector<double> x = normals(rng, 500), y(500);
    for (std::size_t i = 0; i < 500; ++i) y[i] = x[i] + 0.5 * rng.normal();
    FitConfig cfg;
    auto s = init_discretization(columns({x, y}), cfg);
    for (std::size_t j = 0; j < 2; ++j) {
        auto r = refine_dimension(j, s, cfg);
        auto labels = s.labeling.labels;
        auto bins = s.bins;
        labels[j] = r.labels;
        bins[j] = r.bins;
        auto g = build_grid(labels, bins);
        auto full = total_score(g);
        EXPECT_NEAR(r.score.total, full.total, 1e-7);
        EXPECT_NEAR(r.score.neg_log_likelihood, full.neg_log_likelihood, 1e-7);
        EXPECT_EQ(r.score.regret, full.regret);
        EXPECT_EQ(r.score.model_cost, full.model_cost);
    }
}

TEST(RefineDimension, IndependentConditioning) {
    // With one cell in the other dimension, conditioning is a no-op. Once the
    // other dimension is cut, every extra bin multiplies the grid size K, so
    // the regret term makes the conditional cut set no finer.
    Sampler rng(5);
    std::size_t const n = 2000;
    auto cols = columns({normals(rng, n), normals(rng, n)});
    FitConfig cfg;
    auto s = init_discretization(cols, cfg);
    auto unconditional = refine_dimension(0, s, cfg);
    auto alone = optimal_histogram_1d(cols[0], *s.candidates[0], cfg.k_max(n));
    EXPECT_EQ(unconditional.bins, alone);

    auto r1 = refine_dimension(1, s, cfg);
    ASSERT_GT(r1.bins.num_bins(), 1u);
    s.bins[1] = r1.bins;
    s.labeling.labels[1] = r1.labels;
    s.labeling.bins_per_dim[1] = r1.bins.num_bins();
    auto conditional = refine_dimension(0, s, cfg);
    EXPECT_LE(conditional.bins.num_intervals(), unconditional.bins.num_intervals());
    EXPECT_GE(conditional.bins.num_intervals(), 1u);
}

TEST(RefineDimension, LikelihoodTermsScaleWithOtherCells) {
    // n stays 480 so the candidate grid is fixed; dimension 1 has m atoms,
    // each holding 8/m copies of the same 60 continuous values.
    Sampler rng(6);
    std::vector<double> base(60);
    for (auto & x : base) x = rng.uniform(0.0, 3.0);
    auto run = [&](int m) {
        std::vector<double> x, y;
        for (int a = 0; a < m; ++a)
            for (int rep = 0; rep < 8 / m; ++rep)
                for (double v : base) {
                    x.push_back(v);
                    y.push_back(a);
                }
        FitConfig cfg;
        cfg.t = 60;
        auto s = init_discretization(columns({x, y}, cfg.t), cfg);
        EXPECT_EQ(s.bins[1].num_bins(), static_cast<std::size_t>(m));
        return refine_dimension(0, s, cfg).likelihood_terms;
    };
    auto const t1 = run(1);
    EXPECT_GT(t1, 0u);
    for (int m : {2, 4, 8}) EXPECT_EQ(run(m), t1 * static_cast<std::uint64_t>(m)) << "m=" << m;
}

TEST(GreedyFit, AllDiscreteConvergesImmediately) {
    std::vector<double> a, b;
    for (int i = 0; i < 100; ++i) {
        a.push_back(i % 3);
        b.push_back(i % 4);
    }
    auto fit = greedy_fit(columns({a, b}), {});
    EXPECT_EQ(fit.trace.iterations, 1);
    EXPECT_TRUE(fit.trace.steps.empty());
    EXPECT_EQ(fit.score.total, fit.trace.initial_score);
}

TEST(GreedyFit, IMaxOneRefinesAtMostOneDimension) {
    Sampler rng(7);
    std::vector<double> x = normals(rng, 800), y(800);
    for (std::size_t i = 0; i < 800; ++i) y[i] = x[i] * x[i] + 0.3 * rng.normal();
    FitConfig cfg;
    cfg.i_max = 1;
    auto fit = greedy_fit(columns({x, y}), cfg);
    EXPECT_EQ(fit.trace.iterations, 1);
    EXPECT_EQ(fit.trace.steps.size(), 1u);
}

TEST(GreedyFit, IndependentUniformNeverIncreasesScore) {
    Sampler rng(8);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> x(400), y(400);
        for (auto & v : x) v = rng.uniform();
        for (auto & v : y) v = rng.uniform();
        auto fit = greedy_fit(columns({x, y}), {});
        EXPECT_LE(fit.score.total, fit.trace.initial_score + 1e-6);
    }
}

TEST(GreedyFit, TraceStrictlyDecreasingAndStateConsistent) {
    Sampler rng(9);
    std::size_t const n = 1500;
    std::vector<double> x = normals(rng, n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = static_cast<double>(rng.poisson(2.0));
        y[i] = x[i] + z[i] + rng.normal();
    }
    FitConfig cfg;
    auto fit = greedy_fit(columns({x, y, z}), cfg);
    EXPECT_LE(fit.trace.iterations, cfg.i_max);
    double prev = fit.trace.initial_score;
    for (auto const & st : fit.trace.steps) {
        EXPECT_EQ(st.score_before, prev);
        EXPECT_LT(st.score_after, st.score_before);
        prev = st.score_after;
    }
    EXPECT_EQ(prev, fit.score.total);

    auto cols = columns({x, y, z});
    auto rebuilt = build_grid(make_labeling(cols, fit.bins).labels, fit.bins);
    EXPECT_EQ(rebuilt.counts(), fit.grid.counts());
    EXPECT_NEAR(total_score(rebuilt).total, fit.score.total, 1e-7);
}

TEST(GreedyFit, Deterministic) {
    Sampler rng(10);
    std::vector<double> x = normals(rng, 600), y = normals(rng, 600);
    auto a = greedy_fit(columns({x, y}), {});
    auto b = greedy_fit(columns({x, y}), {});
    EXPECT_EQ(a.bins, b.bins);
    EXPECT_EQ(a.score.total, b.score.total);
}
