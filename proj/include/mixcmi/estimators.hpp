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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mixcmi/column.hpp"
#include "mixcmi/dataset.hpp"
#include "mixcmi/grid.hpp"
#include "mixcmi/histmd.hpp"

namespace mixcmi {

/// Plug-in entropy in nats of a count vector summing to n.
inline double plugin_entropy_counts(std::span<std::size_t const> counts) {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    if (n == 0) throw input_error("plug-in entropy of an empty sample");
    double const dn = static_cast<double>(n);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        double const p = static_cast<double>(c) / dn;
        h -= p * std::log(p);
    }
    return h;
}

/// Plug-in entropy in nats of the label tuples formed by `dims`.
/// An empty projection is a single constant tuple (entropy 0).
inline double plugin_entropy(Labeling const & labeling, std::span<std::size_t const> dims) {
    std::size_t const n = labeling.rows();
    if (n == 0) throw input_error("plug-in entropy of an empty sample");
    if (dims.empty()) return 0.0;
    std::vector<std::size_t> sizes;
    for (auto d : dims) sizes.push_back(labeling.bins_per_dim[d]);
    checked_product(sizes);  // keys below must not wrap
    std::vector<std::uint64_t> keys(n, 0);
    for (auto d : dims) {
        std::uint64_t const radix = labeling.bins_per_dim[d];
        for (std::size_t i = 0; i < n; ++i) keys[i] = keys[i] * radix + labeling.labels[d][i];
    }
    std::sort(keys.begin(), keys.end());
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && keys[j] == keys[i]) ++j;
        counts.push_back(j - i);
        i = j;
    }
    return plugin_entropy_counts(counts);
}

struct VariableGroup {
    std::string name;
    std::vector<std::size_t> dims;
};

/// Dimension index sets of the four entropy terms, in fitted-grid order.
struct GroupProjections {
    std::vector<std::size_t> xz, yz, xyz, z;

    static GroupProjections of(VariableGroup const & x, VariableGroup const & y, VariableGroup const & z) {
        GroupProjections p;
        auto cat = [](std::vector<std::size_t> a, std::vector<std::size_t> const & b) {
            a.insert(a.end(), b.begin(), b.end());
            std::sort(a.begin(), a.end());
            return a;
        };
        p.xz = cat(x.dims, z.dims);
        p.yz = cat(y.dims, z.dims);
        p.xyz = cat(cat(x.dims, y.dims), z.dims);
        p.z = cat({}, z.dims);
        return p;
    }
};

struct EntropyTerms {
    double h_xz = 0.0, h_yz = 0.0, h_xyz = 0.0, h_z = 0.0;
    double value() const noexcept { return h_xz + h_yz - h_xyz - h_z; }
};

/// Histogram-density entropies (nats) of the marginal models, including the
/// volume terms: H^h(S) = -sum_cells (c/n) ln(c / (n v_S)).
inline EntropyTerms continuous_entropy_terms(Grid const & grid, GroupProjections const & proj) {
    double const n = static_cast<double>(grid.rows());
    auto term = [&](std::vector<std::size_t> const & dims) {
        if (dims.empty()) return 0.0;
        std::map<Grid::Cell, std::size_t> marginal;
        Grid::Cell key(dims.size());
        for (auto const & [cell, c] : grid.counts()) {
            for (std::size_t k = 0; k < dims.size(); ++k) key[k] = cell[dims[k]];
            marginal[key] += c;
        }
        double h = 0.0;
        for (auto const & [key_cell, c] : marginal) {
            if (c == 0) continue;
            double v = 1.0;
            for (std::size_t k = 0; k < dims.size(); ++k) v *= grid.dims()[dims[k]].volume(key_cell[k]);
            if (!(v > 0.0)) throw model_error("zero-volume cell in entropy term");
            double const dc = static_cast<double>(c);
            h -= dc / n * std::log(dc / (n * v));
        }
        return h;
    };
    return {term(proj.xz), term(proj.yz), term(proj.xyz), term(proj.z)};
}

struct EstimateResult {
    double value = 0.0;  // nats
    EntropyTerms terms;
    double continuous_value = 0.0;  // same estimate computed with volume terms
    std::uint64_t size_x = 1, size_y = 1, size_z = 1;
    std::size_t n = 0;
    std::vector<std::size_t> bins_per_dim;
    ScoreBreakdown score;
    FitTrace trace;
};

inline constexpr double cancellation_tolerance = 1e-9;

inline std::uint64_t domain_size(Labeling const & labeling, std::vector<std::size_t> const & dims) {
    std::vector<std::size_t> sizes;
    for (auto d : dims) sizes.push_back(labeling.bins_per_dim[d]);
    return checked_product(sizes);
}

/// CMI from an already fitted joint model.
inline EstimateResult estimate_from_fit(FitResult const & fit, VariableGroup const & x, VariableGroup const & y,
                                        VariableGroup const & z) {
    auto proj = GroupProjections::of(x, y, z);
    EstimateResult r;
    r.n = fit.labeling.rows();
    r.terms.h_xz = plugin_entropy(fit.labeling, proj.xz);
    r.terms.h_yz = plugin_entropy(fit.labeling, proj.yz);
    r.terms.h_xyz = plugin_entropy(fit.labeling, proj.xyz);
    r.terms.h_z = plugin_entropy(fit.labeling, proj.z);
    r.value = r.terms.value();
    r.continuous_value = continuous_entropy_terms(fit.grid, proj).value();
    if (!(std::abs(r.value - r.continuous_value) < cancellation_tolerance))
        throw model_error("volume terms failed to cancel: plug-in " + std::to_string(r.value) + " vs density " +
                          std::to_string(r.continuous_value));
    r.size_x = domain_size(fit.labeling, x.dims);
    r.size_y = domain_size(fit.labeling, y.dims);
    r.size_z = domain_size(fit.labeling, z.dims);
    r.bins_per_dim = fit.labeling.bins_per_dim;
    r.score = fit.score;
    r.trace = fit.trace;
    return r;
}

/// Fits one joint histogram over the X, Y, Z columns (in that order) and
/// returns I(X;Y|Z) in nats. `z` may be empty, giving I(X;Y).
inline EstimateResult cmi_estimate(Dataset const & data, std::vector<std::size_t> const & x,
                                   std::vector<std::size_t> const & y, std::vector<std::size_t> const & z,
                                   FitConfig const & config = {}) {
    if (x.empty() || y.empty()) throw input_error("X and Y must each select at least one column");
    std::vector<MixedColumn> cols;
    VariableGroup gx{"X", {}}, gy{"Y", {}}, gz{"Z", {}};
    auto add = [&](std::vector<std::size_t> const & sel, VariableGroup & g) {
        for (auto c : sel) {
            if (c >= data.cols()) throw input_error("column index out of range");
            g.dims.push_back(cols.size());
            cols.push_back(detect_discrete_points(data.columns[c], config.t, data.names[c]));
        }
    };
    add(x, gx);
    add(y, gy);
    add(z, gz);
    auto fit = greedy_fit(std::move(cols), config);
    return estimate_from_fit(fit, gx, gy, gz);
}

}  // namespace mixcmi
