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
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mixcmi/citest.hpp"
#include "mixcmi/dataset.hpp"

namespace mixcmi {

using Edge = std::pair<std::size_t, std::size_t>;  // always first < second

inline Edge make_edge(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Returns true when a is judged independent of b given the set z.
using IndependenceOracle = std::function<bool(std::size_t a, std::size_t b, std::span<std::size_t const> z)>;

struct Skeleton {
    std::size_t num_nodes = 0;
    std::set<Edge> edges;
    std::map<Edge, std::vector<std::size_t>> separating_sets;
    std::size_t tests_run = 0;

    bool adjacent(std::size_t a, std::size_t b) const { return edges.count(make_edge(a, b)) > 0; }
};

namespace detail {

/// Calls f on every size-k subset of `items` in lexicographic order until f returns true.
template <typename F>
bool for_each_subset(std::vector<std::size_t> const & items, std::size_t k, F && f) {
    if (k > items.size()) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<std::size_t> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
        if (f(std::span<std::size_t const>(subset))) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == items.size() - k + i - 1) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/// PC-stable adjacency search. Adjacency sets are frozen at the start of every
/// level; each ordered pair (a, b) tests the size-l subsets of adj(a) \ {b}.
inline Skeleton pc_stable_skeleton(std::size_t num_nodes, IndependenceOracle const & independent,
                                   std::optional<std::size_t> max_level = std::nullopt) {
    if (num_nodes < 2) throw input_error("PC-stable needs at least two variables");
    Skeleton sk;
    sk.num_nodes = num_nodes;
    for (std::size_t a = 0; a < num_nodes; ++a)
        for (std::size_t b = a + 1; b < num_nodes; ++b) sk.edges.insert({a, b});

    for (std::size_t level = 0;; ++level) {
        if (max_level && level > *max_level) break;

        std::vector<std::vector<std::size_t>> frozen(num_nodes);
        for (auto [a, b] : sk.edges) {
            frozen[a].push_back(b);
            frozen[b].push_back(a);
        }
        for (auto & adj : frozen) std::sort(adj.begin(), adj.end());

        bool any_testable = false;
        for (std::size_t a = 0; a < num_nodes; ++a) {
            for (std::size_t b : frozen[a]) {
                if (!sk.adjacent(a, b)) continue;
                std::vector<std::size_t> rest;
                for (auto c : frozen[a])
                    if (c != b) rest.push_back(c);
                if (rest.size() < level) continue;
                any_testable = true;
                std::vector<std::size_t> sepset;
                bool const removed = detail::for_each_subset(rest, level, [&](std::span<std::size_t const> s) {
                    ++sk.tests_run;
                    bool ind = false;
                    try {
                        ind = independent(a, b, s);
                    } catch (std::exception const & e) {
                        throw std::runtime_error("CI test failed for (" + std::to_string(a) + ", " +
                                                 std::to_string(b) + ") at level " + std::to_string(level) +
                                                 ": " + e.what());
                    }
                    if (ind) sepset.assign(s.begin(), s.end());
                    return ind;
                });
                if (removed) {
                    sk.edges.erase(make_edge(a, b));
                    sk.separating_sets[make_edge(a, b)] = std::move(sepset);
                }
            }
        }
        if (!any_testable) break;
    }
    return sk;
}

/// Data-driven oracle over dataset columns; answers are memoized on the
/// unordered pair and sorted conditioning set, so (a, b, S) and (b, a, S) agree.
class DataIndependenceOracle {
public:
    DataIndependenceOracle(Dataset const & data, CITestMethod method, double alpha, FitConfig config)
        : data_(&data), method_(method), alpha_(alpha), config_(config) {}

    bool operator()(std::size_t a, std::size_t b, std::span<std::size_t const> z) {
        auto key = make_key(a, b, z);
        {
            std::lock_guard lock(mutex_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second.independent;
        }
        auto const & [x, y, zs] = key;
        auto r = citest(*data_, {x}, {y}, zs, method_, alpha_, config_);
        std::lock_guard lock(mutex_);
        memo_.emplace(key, r);
        return r.independent;
    }

    std::size_t queries() const { return memo_.size(); }

private:
    using Key = std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>;

    static Key make_key(std::size_t a, std::size_t b, std::span<std::size_t const> z) {
        std::vector<std::size_t> zs(z.begin(), z.end());
        std::sort(zs.begin(), zs.end());
        return {std::min(a, b), std::max(a, b), std::move(zs)};
    }

    Dataset const * data_;
    CITestMethod method_;
    double alpha_;
    FitConfig config_;
    std::mutex mutex_;
    std::map<Key, CITestResult> memo_;
};

struct SkeletonAccuracy {
    double precision = 1.0;
    double recall = 1.0;
    std::size_t true_positives = 0;
};

/// Precision and recall of undirected edges. Precision is 1 when no edge was predicted.
inline SkeletonAccuracy compare_skeleton(std::set<Edge> const & found, std::set<Edge> const & truth) {
    SkeletonAccuracy acc;
    for (auto const & e : found)
        if (truth.count(e)) ++acc.true_positives;
    if (!found.empty()) acc.precision = static_cast<double>(acc.true_positives) / static_cast<double>(found.size());
    if (!truth.empty()) acc.recall = static_cast<double>(acc.true_positives) / static_cast<double>(truth.size());
    return acc;
}

}  // namespace mixcmi
