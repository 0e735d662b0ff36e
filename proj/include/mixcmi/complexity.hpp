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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "mixcmi/bins.hpp"
#include "mixcmi/error.hpp"
#include "mixcmi/grid.hpp"

namespace mixcmi {

// All code lengths are in bits.

inline constexpr double ln2 = std::numbers::ln2;

inline double to_bits(double nats) noexcept { return nats / ln2; }
inline double to_nats(double bits) noexcept { return bits * ln2; }

namespace detail {

inline double log_add_exp(double a, double b) noexcept {
    if (a < b) std::swap(a, b);
    if (b == -INFINITY) return a;
    return a + std::log1p(std::exp(b - a));
}

/// ln R(n, 2) by the exact binomial summation.
inline double ln_regret_two(std::uint64_t n) {
    double const dn = static_cast<double>(n);
    double const lg_n = std::lgamma(dn + 1.0);
    double acc = -INFINITY;
    for (std::uint64_t h = 0; h <= n; ++h) {
        double const a = static_cast<double>(h);
        double const b = dn - a;
        double t = lg_n - std::lgamma(a + 1.0) - std::lgamma(b + 1.0);
        if (h > 0) t += a * std::log(a / dn);
        if (h < n) t += b * std::log(b / dn);
        acc = log_add_exp(acc, t);
    }
    return acc;
}

/// ln R(n, K) as the finite sum over k = 0..n of
/// n!/((n-k)! n^k) * (K-1)(K)...(K+k-2) / k!, accumulated term by term.
inline double ln_regret_sum(std::uint64_t n, std::uint64_t k_cells) {
    if (k_cells == 1) return 0.0;
    double const dn = static_cast<double>(n);
    double const dk = static_cast<double>(k_cells);
    double term = 0.0;
    double acc = 0.0;
    for (std::uint64_t k = 1; k <= n; ++k) {
        double const j = static_cast<double>(k);
        term += std::log((dn - j + 1.0) / dn) + std::log((dk - 2.0 + j) / j);
        acc = log_add_exp(acc, term);
    }
    return acc;
}

/// Per-n memo of ln R(n, K) for K up to a cap, filled by the linear
/// recurrence R(n,K+2) = R(n,K+1) + (n/K) R(n,K).
class RegretTable {
public:
    static constexpr std::uint64_t recurrence_cap = std::uint64_t{1} << 18;

    static RegretTable & instance() {
        static RegretTable table;
        return table;
    }

    double ln_regret(std::uint64_t n, std::uint64_t k_cells) {
        if (k_cells > recurrence_cap) return ln_regret_large(n, k_cells);
        {
            std::shared_lock lock(mutex_);
            auto it = by_n_.find(n);
            if (it != by_n_.end() && it->second.size() > k_cells) return it->second[k_cells];
        }
        std::unique_lock lock(mutex_);
        auto & row = by_n_[n];
        extend(row, n, k_cells);
        return row[k_cells];
    }

private:
    static void extend(std::vector<double> & row, std::uint64_t n, std::uint64_t k_cells) {
        if (row.size() > k_cells) return;
        if (row.empty()) {
            row.push_back(-INFINITY);  // K = 0 unused
            row.push_back(0.0);
            row.push_back(ln_regret_two(n));
        }
        std::uint64_t target = std::max<std::uint64_t>(k_cells + 1, row.size() * 2);
        target = std::min<std::uint64_t>(target, recurrence_cap + 1);
        row.reserve(target);
        double const dn = static_cast<double>(n);
        while (row.size() < target) {
            std::size_t const next = row.size();  // computing K = next
            double const k = static_cast<double>(next - 2);
            double const a = row[next - 1];
            double const b = row[next - 2] + std::log(dn / k);
            row.push_back(log_add_exp(a, b));
        }
    }

    double ln_regret_large(std::uint64_t n, std::uint64_t k_cells) {
        std::pair<std::uint64_t, std::uint64_t> const key{n, k_cells};
        {
            std::shared_lock lock(mutex_);
            auto it = large_.find(key);
            if (it != large_.end()) return it->second;
        }
        double const v = ln_regret_sum(n, k_cells);
        std::unique_lock lock(mutex_);
        large_.emplace(key, v);
        return v;
    }

    std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, std::vector<double>> by_n_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> large_;
};

}  // namespace detail

/// log2 of the multinomial NML parametric complexity R(n, K).
inline double log_regret(std::uint64_t n, std::uint64_t k_cells) {
    if (n == 0 || k_cells == 0) throw input_error("log_regret requires n >= 1 and K >= 1");
    if (k_cells == 1) return 0.0;
    return to_bits(detail::RegretTable::instance().ln_regret(n, k_cells));
}

/// log2 C(num_candidates, num_chosen).
inline double model_cost(std::uint64_t num_candidates, std::uint64_t num_chosen) {
    if (num_chosen > num_candidates) throw input_error("model_cost: more chosen cuts than candidates");
    if (num_chosen == 0 || num_chosen == num_candidates) return 0.0;
    double const a = static_cast<double>(num_candidates);
    double const b = static_cast<double>(num_chosen);
    double const v = std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
    return v > 0.0 ? to_bits(v) : 0.0;
}

/// Model cost of one dimension's cut selection.
inline double model_cost(BinSet const & bins) {
    return model_cost(bins.num_interior_candidates(), bins.num_interior_chosen());
}

/// -log2 of the maximized histogram likelihood: -sum_j c_j log2(c_j / (n v_j)).
inline double neg_log_likelihood(Grid const & grid) {
    double const n = static_cast<double>(grid.rows());
    double acc = 0.0;
    for (auto const & [cell, c] : grid.counts()) {
        if (c == 0) continue;
        double const v = grid.cell_volume(cell);
        if (!(v > 0.0)) throw model_error("cell with non-positive volume");
        double const dc = static_cast<double>(c);
        acc -= dc * (std::log2(dc / n) - std::log2(v));
    }
    return acc;
}

struct ScoreBreakdown {
    double neg_log_likelihood = 0.0;
    double regret = 0.0;
    double model_cost = 0.0;
    double total = 0.0;
};

inline ScoreBreakdown total_score(Grid const & grid, std::span<BinSet const> binsets) {
    ScoreBreakdown s;
    s.neg_log_likelihood = neg_log_likelihood(grid);
    s.regret = log_regret(grid.rows(), grid.cell_count());
    for (auto const & b : binsets) s.model_cost += model_cost(b);
    s.total = s.neg_log_likelihood + s.regret + s.model_cost;
    return s;
}

inline ScoreBreakdown total_score(Grid const & grid) {
    return total_score(grid, grid.dims());
}

}  // namespace mixcmi
