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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mixcmi/bins.hpp"
#include "mixcmi/error.hpp"

namespace mixcmi {

using Label = std::uint32_t;
using LabelVector = std::vector<Label>;

/// Discretized dataset: one label vector per dimension, all of length n.
struct Labeling {
    std::vector<LabelVector> labels;
    std::vector<std::size_t> bins_per_dim;

    std::size_t rows() const noexcept { return labels.empty() ? 0 : labels.front().size(); }
    std::size_t dims() const noexcept { return labels.size(); }
    Label at(std::size_t row, std::size_t dim) const { return labels[dim][row]; }

    friend bool operator==(Labeling const &, Labeling const &) = default;
};

/// Product of bin counts; throws when it does not fit in 64 bits.
inline std::uint64_t checked_product(std::span<std::size_t const> sizes) {
    std::uint64_t k = 1;
    for (auto s : sizes) {
        if (s == 0) throw model_error("dimension with zero bins");
        if (k > std::numeric_limits<std::uint64_t>::max() / s)
            throw model_error("grid cell count overflows 64 bits");
        k *= s;
    }
    return k;
}

/// Cartesian product of per-dimension BinSets with sparse cell counts.
class Grid {
public:
    using Cell = std::vector<Label>;

    Grid() = default;
    Grid(std::vector<BinSet> dims, std::map<Cell, std::size_t> counts, std::size_t n)
        : dims_(std::move(dims)), counts_(std::move(counts)), n_(n) {
        std::vector<std::size_t> sizes;
        for (auto const & d : dims_) sizes.push_back(d.num_bins());
        k_ = checked_product(sizes);
    }

    std::vector<BinSet> const & dims() const noexcept { return dims_; }
    std::map<Cell, std::size_t> const & counts() const noexcept { return counts_; }
    std::size_t rows() const noexcept { return n_; }
    std::uint64_t cell_count() const noexcept { return k_; }

    std::size_t count(Cell const & cell) const {
        auto it = counts_.find(cell);
        return it == counts_.end() ? 0 : it->second;
    }

    double cell_volume(Cell const & cell) const {
        double v = 1.0;
        for (std::size_t d = 0; d < dims_.size(); ++d) v *= dims_[d].volume(cell[d]);
        return v;
    }

private:
    std::vector<BinSet> dims_;
    std::map<Cell, std::size_t> counts_;
    std::size_t n_ = 0;
    std::uint64_t k_ = 1;
};

inline Grid build_grid(std::span<LabelVector const> labelings, std::vector<BinSet> bins) {
    if (labelings.size() != bins.size())
        throw input_error("build_grid: one label vector per BinSet required");
    if (labelings.empty()) throw input_error("build_grid: no dimensions");
    std::size_t const n = labelings.front().size();
    for (std::size_t d = 0; d < labelings.size(); ++d) {
        if (labelings[d].size() != n) throw input_error("build_grid: label vectors differ in length");
        for (auto l : labelings[d])
            if (l >= bins[d].num_bins()) throw labeling_error("build_grid: label out of range");
    }

    std::map<Grid::Cell, std::size_t> counts;
    Grid::Cell cell(labelings.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < labelings.size(); ++d) cell[d] = labelings[d][i];
        ++counts[cell];
    }
    return Grid(std::move(bins), std::move(counts), n);
}

inline Labeling make_labeling(std::span<MixedColumn const> columns, std::span<BinSet const> bins) {
    Labeling out;
    for (std::size_t d = 0; d < columns.size(); ++d) {
        out.labels.push_back(assign_labels(columns[d], bins[d]));
        out.bins_per_dim.push_back(bins[d].num_bins());
    }
    return out;
}

}  // namespace mixcmi
