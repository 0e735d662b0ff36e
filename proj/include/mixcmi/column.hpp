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
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mixcmi/error.hpp"

namespace mixcmi {

/// One variable's sample. Values that repeat at least `threshold` times are
/// flagged as discrete points (atoms); all other values are continuous.
class MixedColumn {
public:
    MixedColumn() = default;
    MixedColumn(std::string name, std::vector<double> values, std::vector<bool> discrete_mask)
        : name_(std::move(name)), values_(std::move(values)), mask_(std::move(discrete_mask)) {}

    std::string const & name() const noexcept { return name_; }
    std::vector<double> const & values() const noexcept { return values_; }
    std::vector<bool> const & discrete_mask() const noexcept { return mask_; }

    std::size_t size() const noexcept { return values_.size(); }
    double value(std::size_t i) const { return values_[i]; }
    bool is_discrete(std::size_t i) const { return mask_[i]; }

    /// Sorted distinct masked values.
    std::vector<double> atoms() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (mask_[i]) out.push_back(values_[i]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::size_t continuous_count() const noexcept {
        return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), false));
    }

    /// Number of distinct unmasked values.
    std::size_t distinct_continuous() const {
        std::vector<double> c;
        c.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!mask_[i]) c.push_back(values_[i]);
        std::sort(c.begin(), c.end());
        return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
    }

private:
    std::string name_;
    std::vector<double> values_;
    std::vector<bool> mask_;
};

inline constexpr int default_discrete_threshold = 5;

/// Flags every value whose exact multiplicity in the column reaches `threshold`.
/// Equality is bitwise floating-point equality (with -0.0 == 0.0).
inline MixedColumn detect_discrete_points(std::span<double const> values, int threshold,
                                          std::string name = {}) {
    if (threshold < 2)
        throw input_error("discreteness threshold must be >= 2, got " + std::to_string(threshold));
    if (values.empty())
        throw input_error("column '" + name + "' is empty");

    std::unordered_map<double, std::size_t> multiplicity;
    multiplicity.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw input_error("column '" + name + "' has a non-finite value at row " + std::to_string(i));
        ++multiplicity[values[i] == 0.0 ? 0.0 : values[i]];
    }

    std::vector<double> vals(values.begin(), values.end());
    std::vector<bool> mask(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == 0.0) vals[i] = 0.0;  // fold -0.0
        mask[i] = multiplicity[vals[i]] >= static_cast<std::size_t>(threshold);
    }
    return MixedColumn(std::move(name), std::move(vals), std::move(mask));
}

}  // namespace mixcmi
