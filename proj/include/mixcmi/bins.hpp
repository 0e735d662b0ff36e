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
#include <string>
#include <vector>

#include "mixcmi/column.hpp"
#include "mixcmi/error.hpp"

namespace mixcmi {

/// A single bin: either one atom (volume 1) or an interval [lo, hi) / [lo, hi]
/// whose volume is its Lebesgue width.
struct Bin {
    enum class Kind { singleton, interval };

    Kind kind = Kind::singleton;
    double lo = 0.0;
    double hi = 0.0;
    bool closed_right = false;

    static Bin singleton(double point) { return {Kind::singleton, point, point, true}; }
    static Bin interval(double lo, double hi, bool closed_right) { return {Kind::interval, lo, hi, closed_right}; }

    double volume() const noexcept { return kind == Kind::singleton ? 1.0 : hi - lo; }
    bool is_singleton() const noexcept { return kind == Kind::singleton; }
};

/// Partition of one dimension: singleton bins for the detected atoms, followed
/// by contiguous intervals covering the continuous range. Bin index order is
/// singletons (ascending) then intervals (ascending).
class BinSet {
public:
    BinSet() = default;

    /// Atoms only; used for purely discrete columns.
    static BinSet discrete_only(std::vector<double> atoms) {
        BinSet b;
        b.singletons_ = std::move(atoms);
        return b;
    }

    /// Atoms plus intervals picked from `candidates`. `chosen` holds sorted
    /// indices into `candidates` and must include the first and last index.
    static BinSet from_cuts(std::vector<double> atoms, std::vector<double> candidates,
                            std::vector<std::size_t> chosen) {
        if (candidates.size() < 2)
            throw model_error("interval bins need at least two candidate boundaries");
        if (chosen.size() < 2 || chosen.front() != 0 || chosen.back() != candidates.size() - 1)
            throw model_error("chosen cuts must include both range endpoints");
        for (std::size_t i = 1; i < chosen.size(); ++i)
            if (chosen[i] <= chosen[i - 1])
                throw model_error("chosen cuts must be strictly increasing");
        BinSet b;
        b.singletons_ = std::move(atoms);
        b.boundaries_.reserve(chosen.size());
        for (auto c : chosen) b.boundaries_.push_back(candidates[c]);
        b.candidates_ = std::move(candidates);
        b.chosen_ = std::move(chosen);
        return b;
    }

    /// Atoms plus a single interval of the smallest representable positive
    /// width starting at `point`. Used when the continuous part has fewer than
    /// two distinct values.
    static BinSet degenerate(std::vector<double> atoms, double point) {
        BinSet b;
        b.singletons_ = std::move(atoms);
        b.boundaries_ = {point, std::nextafter(point, std::numeric_limits<double>::infinity())};
        b.degenerate_ = true;
        return b;
    }

    std::size_t num_singletons() const noexcept { return singletons_.size(); }
    std::size_t num_intervals() const noexcept { return boundaries_.empty() ? 0 : boundaries_.size() - 1; }
    std::size_t num_bins() const noexcept { return num_singletons() + num_intervals(); }

    std::vector<double> const & singletons() const noexcept { return singletons_; }
    std::vector<double> const & boundaries() const noexcept { return boundaries_; }
    std::vector<double> const & candidate_cuts() const noexcept { return candidates_; }
    std::vector<std::size_t> const & chosen_cuts() const noexcept { return chosen_; }
    bool is_degenerate() const noexcept { return degenerate_; }

    /// Interior candidates (endpoints are always present and not encoded).
    std::size_t num_interior_candidates() const noexcept {
        return candidates_.size() < 2 ? 0 : candidates_.size() - 2;
    }
    std::size_t num_interior_chosen() const noexcept {
        return chosen_.size() < 2 ? 0 : chosen_.size() - 2;
    }

    Bin bin(std::size_t index) const {
        if (index < singletons_.size()) return Bin::singleton(singletons_[index]);
        std::size_t const k = index - singletons_.size();
        if (k >= num_intervals()) throw std::out_of_range("bin index out of range");
        return Bin::interval(boundaries_[k], boundaries_[k + 1], k + 1 == num_intervals());
    }

    double volume(std::size_t index) const { return bin(index).volume(); }

    /// Label of one observation. Masked values go to their singleton; unmasked
    /// values to the interval containing them (left-closed, last right-closed).
    std::uint32_t label_of(double value, bool masked) const {
        if (masked) {
            auto it = std::lower_bound(singletons_.begin(), singletons_.end(), value);
            if (it == singletons_.end() || *it != value)
                throw labeling_error("discrete value " + std::to_string(value) + " has no singleton bin");
            return static_cast<std::uint32_t>(it - singletons_.begin());
        }
        if (boundaries_.empty() || value < boundaries_.front() || value > boundaries_.back())
            throw labeling_error("value " + std::to_string(value) + " lies outside all interval bins");
        auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), value);
        std::size_t k = static_cast<std::size_t>(it - boundaries_.begin());
        k = (k == 0) ? 0 : k - 1;
        if (k >= num_intervals()) k = num_intervals() - 1;
        return static_cast<std::uint32_t>(singletons_.size() + k);
    }

    friend bool operator==(BinSet const &, BinSet const &) = default;

private:
    std::vector<double> singletons_;
    std::vector<double> boundaries_;
    std::vector<double> candidates_;
    std::vector<std::size_t> chosen_;
    bool degenerate_ = false;
};

/// Per-row bin labels of one column.
inline std::vector<std::uint32_t> assign_labels(MixedColumn const & column, BinSet const & bins) {
    std::vector<std::uint32_t> labels(column.size());
    for (std::size_t i = 0; i < column.size(); ++i)
        labels[i] = bins.label_of(column.value(i), column.is_discrete(i));
    return labels;
}

}  // namespace mixcmi
