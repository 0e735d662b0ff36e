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
#include <limits>

#include "mixcmi/error.hpp"

namespace mixcmi {

/// Regularized lower incomplete gamma P(a, x): series below a + 1, modified
/// Lentz continued fraction for Q(a, x) above.
inline double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw input_error("incomplete gamma requires a > 0");
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;

    double const log_prefix = a * std::log(x) - x - std::lgamma(a);
    constexpr double eps = 1e-16;
    constexpr int max_iter = 1000000;

    if (x < a + 1.0) {
        double ap = a;
        double del = 1.0 / a;
        double sum = del;
        for (int i = 0; i < max_iter; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * eps) break;
        }
        return std::min(1.0, sum * std::exp(log_prefix));
    }

    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        double const an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double const delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return std::max(0.0, 1.0 - std::exp(log_prefix) * h);
}

/// Chi-squared CDF with `df` degrees of freedom.
inline double chi2_cdf(double x, double df) { return regularized_gamma_p(0.5 * df, 0.5 * x); }

/// Upper-alpha critical value: the (1 - alpha) quantile of chi-squared(df),
/// located by bisection to an absolute tolerance of 1e-10.
inline double chi2_critical(double alpha, double df) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
    if (!(df > 0.0)) throw input_error("degrees of freedom must be positive");
    double const target = 1.0 - alpha;

    double lo = 0.0;
    double hi = std::max(1.0, df);
    while (chi2_cdf(hi, df) < target) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-10) {
        double const mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (chi2_cdf(mid, df) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mixcmi
