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
#include <span>
#include <utility>
#include <vector>

#include "mixcmi/bins.hpp"
#include "mixcmi/column.hpp"
#include "mixcmi/complexity.hpp"
#include "mixcmi/error.hpp"

namespace mixcmi {

enum class LogBase { natural, two, ten };

/// ceil(factor * log_base(n)), at least 1.
inline std::size_t bin_budget(std::size_t n, double factor, LogBase base = LogBase::natural) {
    double const dn = static_cast<double>(std::max<std::size_t>(n, 1));
    double l = std::log(dn);
    if (base == LogBase::two) l = std::log2(dn);
    if (base == LogBase::ten) l = std::log10(dn);
    double const k = std::ceil(factor * l);
    return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

/// Equi-width candidate boundaries over the unmasked range of a column.
struct CandidateCuts {
    std::vector<double> boundaries;

    std::size_t k_init() const noexcept { return boundaries.empty() ? 0 : boundaries.size() - 1; }

    /// Elementary cell of a value inside [front, back]; same convention as BinSet.
    std::size_t cell_of(double value) const {
        auto it = std::upper_bound(boundaries.begin(), boundaries.end(), value);
        std::size_t k = static_cast<std::size_t>(it - boundaries.begin());
        k = (k == 0) ? 0 : k - 1;
        return std::min(k, k_init() - 1);
    }
};

inline CandidateCuts candidate_cuts(MixedColumn const & column, std::size_t k_init) {
    if (k_init == 0) throw input_error("K_init must be positive");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (column.is_discrete(i)) continue;
        lo = std::min(lo, column.value(i));
        hi = std::max(hi, column.value(i));
    }
    if (!(hi > lo))
        throw input_error("column '" + column.name() + "' has fewer than two distinct continuous values");

    CandidateCuts out;
    out.boundaries.resize(k_init + 1);
    double const width = (hi - lo) / static_cast<double>(k_init);
    for (std::size_t i = 0; i < k_init; ++i) out.boundaries[i] = lo + static_cast<double>(i) * width;
    out.boundaries[k_init] = hi;
    // Rounding can produce duplicates when the range is tiny relative to lo.
    for (std::size_t i = 1; i <= k_init; ++i)
        if (!(out.boundaries[i] > out.boundaries[i - 1]))
            throw input_error("column '" + column.name() + "': range too narrow for " +
                              std::to_string(k_init) + " equi-width cells");
    return out;
}

namespace detail {

/// Variable-width segmentation of one dimension's elementary cells, with the
/// likelihood of each segment summed over the fixed cells of the other
/// dimensions. `entries[e]` lists (other-cell id, count) for elementary cell e.
struct SegmentProblem {
    std::span<double const> boundaries;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> entries;
    std::size_t other_occupied = 1;
    std::size_t n = 0;
    std::size_t singletons = 0;
    std::uint64_t other_cells = 1;
    std::size_t k_max = 1;
};

struct SegmentSolution {
    std::vector<std::size_t> chosen;  // boundary indices, including 0 and M
    double objective = 0.0;           // score up to a segmentation-independent constant
    std::uint64_t likelihood_terms = 0;
};

inline double xlog2x(double x) noexcept { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline SegmentSolution solve_segments(SegmentProblem const & p) {
    std::size_t const m_cells = p.boundaries.size() - 1;
    std::size_t const m_max = std::max<std::size_t>(1, std::min(p.k_max, m_cells));
    std::size_t const stride = m_cells + 1;

    std::vector<double> xlogx(p.n + 1);
    for (std::size_t c = 0; c <= p.n; ++c) xlogx[c] = xlog2x(static_cast<double>(c));

    SegmentSolution sol;

    // seg[a * stride + b]: -sum_o c_o log2 c_o + C log2(width) for cells [a, b).
    std::vector<double> seg(stride * stride, 0.0);
    std::vector<std::uint32_t> running(p.other_occupied, 0);
    std::vector<std::uint32_t> touched;
    touched.reserve(p.other_occupied);
    for (std::size_t a = 0; a < m_cells; ++a) {
        for (auto o : touched) running[o] = 0;
        touched.clear();
        double sum_clogc = 0.0;
        std::size_t total = 0;
        for (std::size_t b = a + 1; b <= m_cells; ++b) {
            for (auto [o, c] : p.entries[b - 1]) {
                std::uint32_t & r = running[o];
                if (r == 0) touched.push_back(o);
                sum_clogc += xlogx[r + c] - xlogx[r];
                r += c;
                total += c;
            }
            sol.likelihood_terms += touched.size();
            double const width = p.boundaries[b] - p.boundaries[a];
            seg[a * stride + b] = total == 0 ? 0.0 : -sum_clogc + static_cast<double>(total) * std::log2(width);
        }
    }

    double const inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(stride * (m_max + 1), inf);
    std::vector<std::size_t> back(stride * (m_max + 1), 0);
    auto at = [stride](std::size_t m, std::size_t b) { return m * stride + b; };
    best[at(0, 0)] = 0.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        for (std::size_t b = m; b <= m_cells; ++b) {
            double v = inf;
            std::size_t arg = 0;
            for (std::size_t a = m - 1; a < b; ++a) {
                double const prev = best[at(m - 1, a)];
                if (prev == inf) continue;
                double const cand = prev + seg[a * stride + b];
                if (cand < v) {
                    v = cand;
                    arg = a;
                }
            }
            best[at(m, b)] = v;
            back[at(m, b)] = arg;
        }
    }

    double best_total = inf;
    std::size_t best_m = 1;
    for (std::size_t m = 1; m <= m_max; ++m) {
        double const dp = best[at(m, m_cells)];
        if (dp == inf) continue;
        std::uint64_t const bins_j = p.singletons + m;
        if (p.other_cells > std::numeric_limits<std::uint64_t>::max() / bins_j) break;
        double const total = dp + log_regret(p.n, bins_j * p.other_cells) +
                             model_cost(m_cells - 1, m - 1);
        if (total < best_total) {
            best_total = total;
            best_m = m;
        }
    }

    sol.objective = best_total;
    sol.chosen.assign(best_m + 1, 0);
    std::size_t b = m_cells;
    for (std::size_t m = best_m; m > 0; --m) {
        sol.chosen[m] = b;
        b = back[at(m, b)];
    }
    sol.chosen[0] = 0;
    return sol;
}

}  // namespace detail

/// Score-optimal variable-width histogram of one column with at most `k_max`
/// interval bins chosen from `cand`. Atoms become fixed singleton bins.
inline BinSet optimal_histogram_1d(MixedColumn const & column, CandidateCuts const & cand, std::size_t k_max) {
    if (k_max == 0) throw input_error("K_max must be positive");
    if (cand.k_init() == 0) throw input_error("empty candidate set");

    auto atoms = column.atoms();
    detail::SegmentProblem p;
    p.boundaries = cand.boundaries;
    p.entries.resize(cand.k_init());
    p.n = column.size();
    p.singletons = atoms.size();
    p.k_max = k_max;

    std::vector<std::uint32_t> per_cell(cand.k_init(), 0);
    for (std::size_t i = 0; i < column.size(); ++i)
        if (!column.is_discrete(i)) ++per_cell[cand.cell_of(column.value(i))];
    for (std::size_t e = 0; e < per_cell.size(); ++e)
        if (per_cell[e] > 0) p.entries[e].emplace_back(0u, per_cell[e]);

    auto sol = detail::solve_segments(p);
    return BinSet::from_cuts(std::move(atoms), cand.boundaries, std::move(sol.chosen));
}

}  // namespace mixcmi
