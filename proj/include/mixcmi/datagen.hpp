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
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mixcmi/causal.hpp"
#include "mixcmi/dataset.hpp"
#include "mixcmi/error.hpp"

namespace mixcmi {

/// Seeded sampler built on std::mt19937_64, whose output sequence is fixed by
/// the C++ standard. The distributions are implemented here (not taken from
/// <random>) so that datasets are bit-identical across standard libraries.
class Sampler {
public:
    static constexpr char const * algorithm = "mt19937_64/mixcmi-sampler-v1";

    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        auto const span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Box-Muller; one variate per call.
    double normal(double mean = 0.0, double sd = 1.0) {
        double const u1 = 1.0 - uniform();
        double const u2 = uniform();
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

    /// Knuth's multiplication method, split into chunks of mean <= 30.
    std::int64_t poisson(double lambda) {
        if (lambda < 0.0) throw input_error("Poisson mean must be nonnegative");
        std::int64_t total = 0;
        while (lambda > 30.0) {
            total += poisson_small(30.0);
            lambda -= 30.0;
        }
        return total + poisson_small(lambda);
    }

    std::int64_t binomial(std::int64_t trials, double p) {
        std::int64_t k = 0;
        for (std::int64_t i = 0; i < trials; ++i) k += bernoulli(p) ? 1 : 0;
        return k;
    }

private:
    std::int64_t poisson_small(double lambda) {
        if (lambda <= 0.0) return 0;
        double const limit = std::exp(-lambda);
        double prod = uniform();
        std::int64_t k = 0;
        while (prod > limit) {
            prod *= uniform();
            ++k;
        }
        return k;
    }

    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; seed of replicate r is split_seed(base, r).
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct ScenarioSpec {
    std::string id;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    int k = 1;  // number of Z dimensions (exp6)
};

/// A generated sample and the variable roles of the scenario's CI query.
struct GeneratedData {
    Dataset data;
    std::vector<std::size_t> x, y, z;
    std::string header;  // provenance line for emitted files
};

inline std::vector<std::string> const & scenario_ids() {
    static std::vector<std::string> const ids = {
        "exp1", "exp2", "exp3", "exp4", "exp5", "exp6", "network",
        "collider1", "collider2", "collider3", "collider4", "collider5", "collider6",
        "noncollider1", "noncollider2", "noncollider3", "noncollider4"};
    return ids;
}

inline bool known_scenario(std::string const & id) {
    for (auto const & s : scenario_ids())
        if (s == id) return true;
    return false;
}

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286061;

/// Noise standard deviation for the N(0, 0.1) terms of the collider mechanisms (variance 0.1).
inline double const collider_noise_sd = std::sqrt(0.1);

/// One of x, x^2, x^3, tan(x), picked by `which` in [0, 4).
inline double mechanism(int which, double x) {
    switch (which) {
        case 0: return x;
        case 1: return x * x;
        case 2: return x * x * x;
        default: return std::tan(x);
    }
}

inline double floored_mod(double x, double m) {
    if (m == 0.0) return x;
    return x - m * std::floor(x / m);
}

struct Columns {
    std::vector<std::vector<double>> cols;
    explicit Columns(std::size_t k, std::size_t n) : cols(k) {
        for (auto & c : cols) c.reserve(n);
    }
};

}  // namespace detail

inline GeneratedData generate(ScenarioSpec const & spec) {
    if (spec.n == 0) throw input_error("sample size must be >= 1");
    if (!known_scenario(spec.id)) throw input_error("unknown scenario '" + spec.id + "'");
    if (spec.id == "exp6" && spec.k < 1) throw input_error("exp6 needs k >= 1");

    Sampler rng(spec.seed);
    std::size_t const n = spec.n;
    GeneratedData g;
    g.header = std::string("generator=") + Sampler::algorithm + " scenario=" + spec.id + " n=" + std::to_string(n) +
               " seed=" + std::to_string(spec.seed) + (spec.id == "exp6" ? " k=" + std::to_string(spec.k) : "");
    auto & ds = g.data;
    auto const & id = spec.id;

    auto xyz_roles = [&g](bool with_z) {
        g.x = {0};
        g.y = {1};
        if (with_z) g.z = {2};
    };

    if (id == "exp1") {
        double const rho = 0.6;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rho * x[i] + std::sqrt(1.0 - rho * rho) * rng.normal();
        }
        ds.add("X", std::move(x));
        ds.add("Y", std::move(y));
        xyz_roles(false);
    } else if (id == "exp2" || id == "exp6") {
        std::size_t const kz = id == "exp6" ? static_cast<std::size_t>(spec.k) : 0;
        std::vector<double> x(n), y(n);
        std::vector<std::vector<double>> z(kz, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.uniform_int(0, 4));
            y[i] = rng.uniform(x[i], x[i] + 2.0);
            for (std::size_t k = 0; k < kz; ++k) z[k][i] = static_cast<double>(rng.binomial(3, 0.5));
        }
        ds.add("X", std::move(x));
        ds.add("Y", std::move(y));
        xyz_roles(false);
        for (std::size_t k = 0; k < kz; ++k) {
            ds.add("Z" + std::to_string(k + 1), std::move(z[k]));
            g.z.push_back(2 + k);
        }
    } else if (id == "exp3") {
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.exponential(1.0);
            bool const zero = rng.bernoulli(0.15);
            y[i] = zero ? 0.0 : static_cast<double>(rng.poisson(x[i]));
        }
        ds.add("X", std::move(x));
        ds.add("Y", std::move(y));
        xyz_roles(false);
    } else if (id == "exp4" || id == "noncollider3") {
        std::vector<double> x(n), y(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.exponential(0.5);
            auto const zi = rng.poisson(x[i]);
            z[i] = static_cast<double>(zi);
            y[i] = static_cast<double>(rng.binomial(zi, 0.5));
        }
        ds.add("X", std::move(x));
        ds.add("Y", std::move(y));
        ds.add("Z", std::move(z));
        xyz_roles(true);
    } else if (id == "exp5") {
        double const rho = 0.8;
        std::vector<double> x(n), y(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.bernoulli(0.5)) {
                x[i] = rng.normal();
                y[i] = rho * x[i] + std::sqrt(1.0 - rho * rho) * rng.normal();
            } else {
                double const u = rng.uniform();
                // P(1,1) = P(-1,-1) = 0.4, P(1,-1) = P(-1,1) = 0.1
                if (u < 0.4) { x[i] = 1.0; y[i] = 1.0; }
                else if (u < 0.8) { x[i] = -1.0; y[i] = -1.0; }
                else if (u < 0.9) { x[i] = 1.0; y[i] = -1.0; }
                else { x[i] = -1.0; y[i] = 1.0; }
            }
            z[i] = static_cast<double>(rng.binomial(3, 0.2));
        }
        ds.add("X", std::move(x));
        ds.add("Y", std::move(y));
        ds.add("Z", std::move(z));
        xyz_roles(true);
    } else if (id == "network") {
        detail::Columns c(7, n);
        for (std::size_t i = 0; i < n; ++i) {
            double const a = rng.exponential(1.0);
            auto const b = rng.uniform_int(0, 4);
            auto const cc = rng.binomial(b, 0.5);
            double const d = rng.normal(static_cast<double>(b) - 2.0, 1.0);
            double const e = rng.exponential(1.0 / (static_cast<double>(cc) + 1.0));
            double const base = std::pow(std::abs(d), static_cast<double>(cc) / 2.0);
            double const f = (d < 0.0 ? -base : base) + rng.normal();
            bool const e_high = e > 1.0;
            double const gv = e_high ? static_cast<double>(rng.poisson(a)) : rng.normal(a, 1.0);
            double const row[7] = {a, static_cast<double>(b), static_cast<double>(cc), d, e, f, gv};
            for (int k = 0; k < 7; ++k) c.cols[k].push_back(row[k]);
        }
        char const * names[7] = {"A", "B", "C", "D", "E", "F", "G"};
        for (int k = 0; k < 7; ++k) ds.add(names[k], std::move(c.cols[k]));
    } else if (id.rfind("collider", 0) == 0) {
        int const mech = id.back() - '0';
        std::vector<double> x(n), y(n), z(n);
        double const sd = detail::collider_noise_sd;
        if (mech == 1) {
            bool const gaussian = rng.bernoulli(0.5);
            int const fx = static_cast<int>(rng.uniform_int(0, 3));
            int const fy = static_cast<int>(rng.uniform_int(0, 3));
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = gaussian ? rng.normal() : rng.uniform(-2.0, 2.0);
                y[i] = gaussian ? rng.normal() : rng.uniform(-2.0, 2.0);
                z[i] = detail::mechanism(fx, x[i]) + detail::mechanism(fy, y[i]) + rng.normal(0.0, sd);
            }
        } else if (mech == 2) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = rng.normal();
                y[i] = rng.normal();
                double const s = x[i] * y[i] >= 0.0 ? 1.0 : -1.0;
                z[i] = s * rng.exponential(1.0 / std::sqrt(2.0));
            }
        } else if (mech == 3) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = rng.normal();
                y[i] = rng.normal();
                z[i] = x[i] * y[i] >= 0.0 ? 1.0 : -1.0;
                if (rng.bernoulli(0.1)) z[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
            }
        } else if (mech == 4) {
            double const lambda = static_cast<double>(rng.uniform_int(1, 3));
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = rng.normal();
                y[i] = static_cast<double>(rng.poisson(lambda));
                z[i] = detail::floored_mod(x[i], y[i]);
            }
            std::vector<double> const clean = z;
            for (std::size_t i = 0; i < n; ++i)
                if (rng.bernoulli(0.1)) z[i] = clean[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))];
        } else if (mech == 5 || mech == 6) {
            for (std::size_t i = 0; i < n; ++i) {
                auto const xi = rng.bernoulli(0.5) ? 1 : 0;
                auto const yi = rng.bernoulli(0.5) ? 1 : 0;
                x[i] = xi;
                y[i] = yi;
                bool const flip = (xi ^ yi) == 1;
                if (mech == 5)
                    z[i] = flip ? static_cast<double>(rng.poisson(5.0)) * rng.normal(0.0, sd) : rng.normal(0.0, sd);
                else
                    z[i] = flip ? static_cast<double>(rng.poisson(5.0)) + rng.normal(0.0, sd) : rng.normal(0.0, sd);
            }
        } else {
            throw input_error("unknown scenario '" + id + "'");
        }
        ds.add("X", std::move(x));
        ds.add("Y", std::move(y));
        ds.add("Z", std::move(z));
        xyz_roles(true);
    } else if (id.rfind("noncollider", 0) == 0) {
        int const mech = id.back() - '0';
        std::vector<double> x(n), y(n), z(n);
        if (mech == 1 || mech == 2) {
            int const f1 = static_cast<int>(rng.uniform_int(0, 3));
            int const f2 = static_cast<int>(rng.uniform_int(0, 3));
            for (std::size_t i = 0; i < n; ++i) {
                if (mech == 1) {
                    x[i] = rng.normal();
                    z[i] = detail::mechanism(f1, x[i]) + rng.normal();
                    y[i] = detail::mechanism(f2, z[i]) + rng.normal();
                } else {
                    z[i] = rng.normal();
                    x[i] = detail::mechanism(f1, z[i]) + rng.normal();
                    y[i] = detail::mechanism(f2, z[i]) + rng.normal();
                }
            }
            ds.add("X", std::move(x));
            ds.add("Y", std::move(y));
            ds.add("Z", std::move(z));
            xyz_roles(true);
        } else if (mech == 4) {
            // Fork Y <- X -> Z with X, Y from exp2; the independence is Y _||_ Z | X.
            double const mu = rng.uniform(-4.0, 4.0);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = static_cast<double>(rng.uniform_int(0, 4));
                y[i] = rng.uniform(x[i], x[i] + 2.0);
                z[i] = rng.normal(mu, std::sqrt(x[i]));
            }
            ds.add("X", std::move(x));
            ds.add("Y", std::move(y));
            ds.add("Z", std::move(z));
            g.x = {1};
            g.y = {2};
            g.z = {0};
        } else {
            throw input_error("unknown scenario '" + id + "'");
        }
    }
    return g;
}

/// Closed-form I(X;Y|Z) in nats for the estimation scenarios; nullopt for
/// structure-only scenarios.
inline std::optional<double> ground_truth(ScenarioSpec const & spec) {
    auto const & id = spec.id;
    if (!known_scenario(id)) throw input_error("unknown scenario '" + id + "'");
    if (id == "exp1") return -0.5 * std::log(1.0 - 0.36);
    if (id == "exp2" || id == "exp6") return std::log(5.0) - 4.0 * std::log(2.0) / 5.0;
    if (id == "exp3") {
        double s = 0.0;
        for (int k = 2; k < 200; ++k) s += std::log(static_cast<double>(k)) * std::ldexp(1.0, -k);
        return 0.85 * (2.0 * std::log(2.0) - detail::euler_gamma - s);
    }
    if (id == "exp4" || id == "noncollider3") return 0.0;
    if (id == "exp5") return 0.4 * std::log(0.4 / 0.25) + 0.1 * std::log(0.1 / 0.25) - 0.25 * std::log(1.0 - 0.64);
    if (id.rfind("noncollider", 0) == 0) return 0.0;
    return std::nullopt;
}

/// Undirected skeleton of the 7-node network (A..G = 0..6).
inline std::set<Edge> true_network_edges() {
    enum { A, B, C, D, E, F, G };
    return {make_edge(A, G), make_edge(B, C), make_edge(B, D), make_edge(C, E),
            make_edge(C, F), make_edge(D, F), make_edge(E, G)};
}

}  // namespace mixcmi
