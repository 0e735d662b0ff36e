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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mixcmi/chi2.hpp"
#include "mixcmi/complexity.hpp"
#include "mixcmi/dataset.hpp"
#include "mixcmi/estimators.hpp"

namespace mixcmi {

enum class CITestMethod { chi2, sc };

inline char const * to_string(CITestMethod m) { return m == CITestMethod::chi2 ? "chi2" : "sc"; }

inline CITestMethod parse_method(std::string const & s) {
    if (s == "chi2") return CITestMethod::chi2;
    if (s == "sc") return CITestMethod::sc;
    throw input_error("unknown test method '" + s + "' (expected chi2 or sc)");
}

/// I_C = max{0, I_n + C_n}. All information quantities in nats.
struct CITestResult {
    CITestMethod method = CITestMethod::chi2;
    double raw = 0.0;
    double correction = 0.0;
    double corrected = 0.0;
    bool independent = true;

    // chi2 detail
    double alpha = 0.0;
    double df = 0.0;
    double critical_value = 0.0;

    // sc detail: log R terms in bits for XZ, YZ, XYZ, Z
    double regret_xz = 0.0, regret_yz = 0.0, regret_xyz = 0.0, regret_z = 0.0;
    bool sc_correction_positive = false;  // set when the SC correction came out > 0 and was clamped

    EstimateResult estimate;
};

namespace detail {

inline CITestResult finish(CITestResult r) {
    r.corrected = std::max(0.0, r.raw + r.correction);
    r.independent = r.corrected == 0.0;
    return r;
}

}  // namespace detail

/// Chi-squared correction C_n = -chi2_{alpha,l} / (2n) with
/// l = (|X|-1)(|Y|-1)|Z|, domain sizes taken from the joint grid.
inline CITestResult chi2_from_estimate(EstimateResult const & est, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
    CITestResult r;
    r.method = CITestMethod::chi2;
    r.alpha = alpha;
    r.raw = est.value;
    r.estimate = est;
    r.df = static_cast<double>(est.size_x - 1) * static_cast<double>(est.size_y - 1) *
           static_cast<double>(est.size_z);
    if (r.df == 0.0) {
        r.corrected = 0.0;
        r.independent = true;
        return r;
    }
    r.critical_value = chi2_critical(alpha, r.df);
    r.correction = -r.critical_value / (2.0 * static_cast<double>(est.n));
    return detail::finish(r);
}

/// Stochastic-complexity correction:
/// [log R(n,K_XZ) + log R(n,K_YZ) - log R(n,K_XYZ) - log R(n,K_Z)] / n.
inline CITestResult sc_from_estimate(EstimateResult const & est) {
    CITestResult r;
    r.method = CITestMethod::sc;
    r.raw = est.value;
    r.estimate = est;
    std::uint64_t const n = est.n;
    std::uint64_t const kx = est.size_x, ky = est.size_y, kz = est.size_z;
    if (kx == 1 || ky == 1) return detail::finish(r);  // degenerate domain: correction exactly 0
    std::uint64_t const k_xz = checked_product(std::vector<std::size_t>{kx, kz});
    std::uint64_t const k_yz = checked_product(std::vector<std::size_t>{ky, kz});
    std::uint64_t const k_xyz = checked_product(std::vector<std::size_t>{kx, ky, kz});
    r.regret_xz = log_regret(n, k_xz);
    r.regret_yz = log_regret(n, k_yz);
    r.regret_xyz = log_regret(n, k_xyz);
    r.regret_z = log_regret(n, kz);
    double const c = to_nats(r.regret_xz + r.regret_yz - r.regret_xyz - r.regret_z) / static_cast<double>(n);
    if (c > 0.0) {
        r.sc_correction_positive = true;
        r.correction = 0.0;
    } else {
        r.correction = c;
    }
    return detail::finish(r);
}

inline CITestResult citest_chi2(Dataset const & data, std::vector<std::size_t> const & x,
                                std::vector<std::size_t> const & y, std::vector<std::size_t> const & z,
                                double alpha, FitConfig const & config = {}) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
    return chi2_from_estimate(cmi_estimate(data, x, y, z, config), alpha);
}

inline CITestResult citest_sc(Dataset const & data, std::vector<std::size_t> const & x,
                              std::vector<std::size_t> const & y, std::vector<std::size_t> const & z,
                              FitConfig const & config = {}) {
    return sc_from_estimate(cmi_estimate(data, x, y, z, config));
}

inline CITestResult citest(Dataset const & data, std::vector<std::size_t> const & x,
                           std::vector<std::size_t> const & y, std::vector<std::size_t> const & z,
                           CITestMethod method, double alpha, FitConfig const & config = {}) {
    return method == CITestMethod::chi2 ? citest_chi2(data, x, y, z, alpha, config)
                                        : citest_sc(data, x, y, z, config);
}

}  // namespace mixcmi
