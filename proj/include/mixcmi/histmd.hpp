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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mixcmi/bins.hpp"
#include "mixcmi/column.hpp"
#include "mixcmi/complexity.hpp"
#include "mixcmi/grid.hpp"
#include "mixcmi/hist1d.hpp"

namespace mixcmi {

struct FitConfig {
    int i_max = 5;
    int t = default_discrete_threshold;
    double k_init_factor = 20.0;
    double k_max_factor = 5.0;
    LogBase log_base_for_k = LogBase::natural;

    void validate() const {
        if (i_max < 1) throw input_error("i_max must be >= 1");
        if (t < 2) throw input_error("discreteness threshold t must be >= 2");
        if (!(k_init_factor > 0.0) || !(k_max_factor > 0.0)) throw input_error("bin budget factors must be positive");
        if (k_max_factor > k_init_factor) throw input_error("K_max factor must not exceed K_init factor");
    }

    std::size_t k_init(std::size_t n) const { return bin_budget(n, k_init_factor, log_base_for_k); }
    std::size_t k_max(std::size_t n) const { return bin_budget(n, k_max_factor, log_base_for_k); }
};

/// Mutable search state of the greedy fit: one BinSet and label vector per
/// dimension plus the fixed candidate grid of each refinable dimension.
struct FitState {
    std::vector<MixedColumn> columns;
    std::vector<BinSet> bins;
    std::vector<std::optional<CandidateCuts>> candidates;
    Labeling labeling;
    ScoreBreakdown score;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t dims() const noexcept { return columns.size(); }
};

struct TraceStep {
    std::size_t dimension = 0;
    double score_before = 0.0;
    double score_after = 0.0;
    std::vector<std::size_t> bins_per_dim;
};

struct FitTrace {
    double initial_score = 0.0;
    std::vector<TraceStep> steps;
    std::size_t iterations = 0;
};

struct FitResult {
    Grid grid;
    std::vector<BinSet> bins;
    Labeling labeling;
    FitTrace trace;
    ScoreBreakdown score;
};

struct Refinement {
    BinSet bins;
    LabelVector labels;
    ScoreBreakdown score;
    bool changed = false;
    std::uint64_t likelihood_terms = 0;
};

namespace detail {

/// Score of a labeled dataset without materializing the sparse grid:
/// NLL = n log2 n - sum_cells c log2 c + sum_rows log2 v(row).
inline ScoreBreakdown score_labels(std::span<LabelVector const> labels, std::span<BinSet const> bins, std::size_t n) {
    std::vector<std::size_t> sizes;
    for (auto const & b : bins) sizes.push_back(b.num_bins());
    std::uint64_t const k = checked_product(sizes);

    std::vector<std::uint64_t> keys(n, 0);
    double log_volume = 0.0;
    for (std::size_t d = 0; d < labels.size(); ++d) {
        std::vector<double> lv(bins[d].num_bins());
        for (std::size_t b = 0; b < lv.size(); ++b) {
            double const v = bins[d].volume(b);
            if (!(v > 0.0)) throw model_error("bin with non-positive volume");
            lv[b] = std::log2(v);
        }
        std::uint64_t const radix = sizes[d];
        for (std::size_t i = 0; i < n; ++i) {
            keys[i] = keys[i] * radix + labels[d][i];
            log_volume += lv[labels[d][i]];
        }
    }
    std::sort(keys.begin(), keys.end());
    double sum_clogc = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && keys[j] == keys[i]) ++j;
        sum_clogc += xlog2x(static_cast<double>(j - i));
        i = j;
    }

    ScoreBreakdown s;
    s.neg_log_likelihood = xlog2x(static_cast<double>(n)) - sum_clogc + log_volume;
    s.regret = log_regret(n, k);
    for (auto const & b : bins) s.model_cost += model_cost(b);
    s.total = s.neg_log_likelihood + s.regret + s.model_cost;
    return s;
}

inline std::pair<double, double> continuous_range(MixedColumn const & col) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (col.is_discrete(i)) continue;
        lo = std::min(lo, col.value(i));
        hi = std::max(hi, col.value(i));
    }
    return {lo, hi};
}

/// True when K_init equi-width cells over the continuous range are all nonempty in floating point.
inline bool grid_fits(MixedColumn const & col, std::size_t k_init) {
    auto [lo, hi] = continuous_range(col);
    double const width = (hi - lo) / static_cast<double>(k_init);
    double prev = lo;
    for (std::size_t i = 1; i < k_init; ++i) {
        double const b = lo + static_cast<double>(i) * width;
        if (!(b > prev)) return false;
        prev = b;
    }
    return hi > prev;
}

inline bool refinable(FitState const & state, std::size_t j) {
    return state.candidates[j].has_value() && state.candidates[j]->k_init() >= 1;
}

}  // namespace detail

/// Each dimension gets its atoms as singleton bins plus one interval over the
/// continuous remainder (none if the column is purely discrete).
inline FitState init_discretization(std::vector<MixedColumn> columns, FitConfig const & config) {
    config.validate();
    if (columns.empty()) throw input_error("no columns to fit");
    std::size_t const n = columns.front().size();
    if (n == 0) throw input_error("empty dataset");
    for (auto const & c : columns)
        if (c.size() != n) throw input_error("columns differ in length");

    FitState s;
    std::size_t const k_init = config.k_init(n);
    for (auto const & col : columns) {
        auto atoms = col.atoms();
        std::size_t const distinct = col.distinct_continuous();
        if (distinct == 0) {
            s.bins.push_back(BinSet::discrete_only(std::move(atoms)));
            s.candidates.emplace_back(std::nullopt);
        } else if (distinct == 1) {
            double point = 0.0;
            for (std::size_t i = 0; i < col.size(); ++i)
                if (!col.is_discrete(i)) { point = col.value(i); break; }
            s.bins.push_back(BinSet::degenerate(std::move(atoms), point));
            s.candidates.emplace_back(std::nullopt);
        } else if (!detail::grid_fits(col, k_init)) {
            // Range too narrow to split into K_init representable cells: keep one fixed interval.
            auto [lo, hi] = detail::continuous_range(col);
            s.bins.push_back(BinSet::from_cuts(std::move(atoms), {lo, hi}, {0, 1}));
            s.candidates.emplace_back(std::nullopt);
        } else {
            auto cand = candidate_cuts(col, k_init);
            s.bins.push_back(BinSet::from_cuts(std::move(atoms), cand.boundaries, {0, cand.k_init()}));
            s.candidates.emplace_back(std::move(cand));
        }
    }
    s.columns = std::move(columns);
    s.labeling = make_labeling(s.columns, s.bins);
    s.score = detail::score_labels(s.labeling.labels, s.bins, n);
    return s;
}

/// Re-cuts dimension j from scratch while every other dimension keeps its bins.
inline Refinement refine_dimension(std::size_t j, FitState const & state, FitConfig const & config) {
    if (j >= state.dims()) throw input_error("dimension index out of range");
    Refinement r;
    if (!detail::refinable(state, j)) {
        r.bins = state.bins[j];
        r.labels = state.labeling.labels[j];
        r.score = state.score;
        return r;
    }

    std::size_t const n = state.rows();
    MixedColumn const & col = state.columns[j];
    CandidateCuts const & cand = *state.candidates[j];

    // Dense ids for the occupied cells of the other dimensions.
    std::vector<std::uint64_t> other_key(n, 0);
    std::uint64_t other_cells = 1;
    for (std::size_t d = 0; d < state.dims(); ++d) {
        if (d == j) continue;
        std::uint64_t const radix = state.bins[d].num_bins();
        other_cells *= radix;
        for (std::size_t i = 0; i < n; ++i) other_key[i] = other_key[i] * radix + state.labeling.labels[d][i];
    }
    std::unordered_map<std::uint64_t, std::uint32_t> dense;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cell_other;  // (elementary cell, other id)
    cell_other.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (col.is_discrete(i)) continue;
        auto [it, inserted] = dense.try_emplace(other_key[i], static_cast<std::uint32_t>(dense.size()));
        cell_other.emplace_back(static_cast<std::uint32_t>(cand.cell_of(col.value(i))), it->second);
    }
    std::sort(cell_other.begin(), cell_other.end());

    detail::SegmentProblem p;
    p.boundaries = cand.boundaries;
    p.entries.resize(cand.k_init());
    p.other_occupied = std::max<std::size_t>(dense.size(), 1);
    p.n = n;
    p.singletons = state.bins[j].num_singletons();
    p.other_cells = other_cells;
    p.k_max = config.k_max(n);
    for (std::size_t i = 0; i < cell_other.size();) {
        std::size_t k = i;
        while (k < cell_other.size() && cell_other[k] == cell_other[i]) ++k;
        p.entries[cell_other[i].first].emplace_back(cell_other[i].second, static_cast<std::uint32_t>(k - i));
        i = k;
    }

    auto sol = detail::solve_segments(p);
    r.likelihood_terms = sol.likelihood_terms;
    r.bins = BinSet::from_cuts(state.bins[j].singletons(), cand.boundaries, std::move(sol.chosen));
    r.labels = assign_labels(col, r.bins);
    r.changed = !(r.bins == state.bins[j]);

    std::vector<LabelVector> labels = state.labeling.labels;
    labels[j] = r.labels;
    std::vector<BinSet> bins = state.bins;
    bins[j] = r.bins;
    r.score = detail::score_labels(labels, bins, n);
    return r;
}

inline constexpr double score_improvement_epsilon = 1e-9;

inline FitResult finish_fit(FitState state, FitTrace trace) {
    FitResult out;
    out.grid = build_grid(state.labeling.labels, state.bins);
    out.bins = std::move(state.bins);
    out.labeling = std::move(state.labeling);
    out.trace = std::move(trace);
    out.score = state.score;
    return out;
}

/// Greedy coordinate-wise refinement: each iteration refines every dimension
/// against the current state and accepts the single best strict improvement.
inline FitResult greedy_fit(std::vector<MixedColumn> columns, FitConfig const & config) {
    FitState state = init_discretization(std::move(columns), config);
    FitTrace trace;
    trace.initial_score = state.score.total;

    for (int it = 0; it < config.i_max; ++it) {
        ++trace.iterations;
        std::optional<std::size_t> best_dim;
        Refinement best;
        for (std::size_t j = 0; j < state.dims(); ++j) {
            if (!detail::refinable(state, j)) continue;
            Refinement r = refine_dimension(j, state, config);
            double const gain = state.score.total - r.score.total;
            if (gain > score_improvement_epsilon &&
                (!best_dim || r.score.total < best.score.total)) {
                best_dim = j;
                best = std::move(r);
            }
        }
        if (!best_dim) break;

        TraceStep step;
        step.dimension = *best_dim;
        step.score_before = state.score.total;
        state.bins[*best_dim] = std::move(best.bins);
        state.labeling.labels[*best_dim] = std::move(best.labels);
        state.labeling.bins_per_dim[*best_dim] = state.bins[*best_dim].num_bins();
        state.score = best.score;
        step.score_after = state.score.total;
        step.bins_per_dim = state.labeling.bins_per_dim;
        trace.steps.push_back(std::move(step));
    }
    return finish_fit(std::move(state), std::move(trace));
}

}  // namespace mixcmi
