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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixcmi/mixcmi.hpp"

namespace mixcmi::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;
inline constexpr int exit_internal = 3;

inline constexpr int schema_version = 1;

using json = nlohmann::ordered_json;

struct Options {
    FitConfig fit;
    double alpha = 0.01;
    std::string test = "chi2";
    std::uint64_t seed = 0;
    std::string log_base_k = "e";
    std::string format = "json";
    std::string out;
};

inline LogBase parse_log_base(std::string const & s) {
    if (s == "e" || s == "natural") return LogBase::natural;
    if (s == "2") return LogBase::two;
    if (s == "10") return LogBase::ten;
    throw input_error("--log-base-k must be one of e, 2, 10");
}

inline json config_json(Options const & o) {
    return json{{"t", o.fit.t},
                {"imax", o.fit.i_max},
                {"kinit_factor", o.fit.k_init_factor},
                {"kmax_factor", o.fit.k_max_factor},
                {"log_base_k", o.log_base_k},
                {"alpha", o.alpha},
                {"test", o.test},
                {"seed", o.seed}};
}

/// Comma-separated column names to indices.
inline std::vector<std::size_t> select_columns(Dataset const & ds, std::string const & spec) {
    std::vector<std::size_t> out;
    if (spec.empty()) return out;
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) out.push_back(ds.index_of(name));
    return out;
}

inline std::vector<std::string> names_of(Dataset const & ds, std::vector<std::size_t> const & idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(ds.names[i]);
    return out;
}

/// "100..1000" (step = start), "100..1000:50", or "100,200,500".
inline std::vector<std::size_t> parse_sizes(std::string const & s) {
    std::vector<std::size_t> out;
    auto to_size = [](std::string const & t) {
        try {
            std::size_t pos = 0;
            auto v = std::stoull(t, &pos);
            if (pos != t.size() || v == 0) throw input_error("bad sample size '" + t + "'");
            return static_cast<std::size_t>(v);
        } catch (std::logic_error const &) {
            throw input_error("bad sample size '" + t + "'");
        }
    };
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        std::string const lo_s = s.substr(0, dots);
        std::string rest = s.substr(dots + 2);
        std::string step_s;
        if (auto colon = rest.find(':'); colon != std::string::npos) {
            step_s = rest.substr(colon + 1);
            rest = rest.substr(0, colon);
        }
        std::size_t const lo = to_size(lo_s), hi = to_size(rest);
        std::size_t const step = step_s.empty() ? lo : to_size(step_s);
        if (hi < lo) throw input_error("empty sample-size range '" + s + "'");
        for (std::size_t v = lo; v <= hi; v += step) out.push_back(v);
        return out;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(to_size(tok));
    if (out.empty()) throw input_error("no sample sizes given");
    return out;
}

inline json estimate_json(EstimateResult const & r, Dataset const & ds, std::vector<std::size_t> const & cols) {
    json bins = json::object();
    for (std::size_t d = 0; d < cols.size(); ++d) bins[ds.names[cols[d]]] = r.bins_per_dim[d];
    return json{{"value_nats", r.value},
                {"entropies_nats", {{"H_XZ", r.terms.h_xz}, {"H_YZ", r.terms.h_yz}, {"H_XYZ", r.terms.h_xyz}, {"H_Z", r.terms.h_z}}},
                {"density_form_nats", r.continuous_value},
                {"domain_sizes", {{"X", r.size_x}, {"Y", r.size_y}, {"Z", r.size_z}}},
                {"bins_per_column", bins},
                {"n", r.n},
                {"score_bits", {{"neg_log_likelihood", r.score.neg_log_likelihood}, {"regret", r.score.regret},
                                {"model_cost", r.score.model_cost}, {"total", r.score.total}}},
                {"accepted_refinements", r.trace.steps.size()}};
}

inline json citest_json(CITestResult const & r) {
    json j{{"method", to_string(r.method)},
           {"raw_nats", r.raw},
           {"correction_nats", r.correction},
           {"corrected_nats", r.corrected},
           {"independent", r.independent}};
    if (r.method == CITestMethod::chi2) {
        j["alpha"] = r.alpha;
        j["df"] = r.df;
        j["critical_value"] = r.critical_value;
    } else {
        j["log_regret_bits"] = {{"XZ", r.regret_xz}, {"YZ", r.regret_yz}, {"XYZ", r.regret_xyz}, {"Z", r.regret_z}};
        j["sc_correction_positive"] = r.sc_correction_positive;
    }
    return j;
}

inline json report(std::string const & command, Options const & o, json results, double seconds) {
    return json{{"schema_version", schema_version},
                {"command", command},
                {"config", config_json(o)},
                {"seed", o.seed},
                {"results", std::move(results)},
                {"wall_clock_seconds", seconds}};
}

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void emit(Options const & o, std::string const & text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw input_error("cannot write '" + o.out + "'");
    f << text;
}

inline std::string fmt(double v) {
    if (!std::isfinite(v)) return "";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

inline void prepare(Options & o) {
    o.fit.log_base_for_k = parse_log_base(o.log_base_k);
    o.fit.validate();
    if (o.format != "json" && o.format != "csv") throw input_error("--format must be json or csv");
    parse_method(o.test);
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw input_error("--alpha must lie in (0, 1)");
}

// estimate -------------------------------------------------------------------

struct EstimateArgs {
    std::string csv, x, y, z;
};

inline int cmd_estimate(EstimateArgs const & a, Options o) {
    prepare(o);
    Stopwatch sw;
    auto ds = read_csv_file(a.csv);
    auto x = select_columns(ds, a.x), y = select_columns(ds, a.y), z = select_columns(ds, a.z);
    if (x.empty() || y.empty()) throw input_error("--x and --y are required");
    auto r = cmi_estimate(ds, x, y, z, o.fit);
    std::vector<std::size_t> cols = x;
    cols.insert(cols.end(), y.begin(), y.end());
    cols.insert(cols.end(), z.begin(), z.end());

    if (o.format == "csv") {
        std::ostringstream s;
        s << "x,y,z,n,value_nats,H_XZ,H_YZ,H_XYZ,H_Z\n"
          << a.x << ',' << a.y << ',' << a.z << ',' << r.n << ',' << fmt(r.value) << ',' << fmt(r.terms.h_xz) << ','
          << fmt(r.terms.h_yz) << ',' << fmt(r.terms.h_xyz) << ',' << fmt(r.terms.h_z) << '\n';
        emit(o, s.str());
    } else {
        json res = estimate_json(r, ds, cols);
        res["x"] = names_of(ds, x);
        res["y"] = names_of(ds, y);
        res["z"] = names_of(ds, z);
        json rep = report("estimate", o, std::move(res), sw.seconds());
        rep["input"] = a.csv;
        emit(o, rep.dump(2) + "\n");
    }
    return exit_ok;
}

// citest ---------------------------------------------------------------------

inline int cmd_citest(EstimateArgs const & a, Options o) {
    prepare(o);
    Stopwatch sw;
    auto ds = read_csv_file(a.csv);
    auto x = select_columns(ds, a.x), y = select_columns(ds, a.y), z = select_columns(ds, a.z);
    if (x.empty() || y.empty()) throw input_error("--x and --y are required");
    auto r = citest(ds, x, y, z, parse_method(o.test), o.alpha, o.fit);

    if (o.format == "csv") {
        std::ostringstream s;
        s << "x,y,z,method,raw_nats,correction_nats,corrected_nats,independent\n"
          << a.x << ',' << a.y << ',' << a.z << ',' << to_string(r.method) << ',' << fmt(r.raw) << ','
          << fmt(r.correction) << ',' << fmt(r.corrected) << ',' << (r.independent ? "true" : "false") << '\n';
        emit(o, s.str());
    } else {
        json res = citest_json(r);
        res["x"] = names_of(ds, x);
        res["y"] = names_of(ds, y);
        res["z"] = names_of(ds, z);
        std::vector<std::size_t> cols = x;
        cols.insert(cols.end(), y.begin(), y.end());
        cols.insert(cols.end(), z.begin(), z.end());
        res["estimate"] = estimate_json(r.estimate, ds, cols);
        json rep = report("citest", o, std::move(res), sw.seconds());
        rep["input"] = a.csv;
        emit(o, rep.dump(2) + "\n");
    }
    return exit_ok;
}

// discover -------------------------------------------------------------------

struct DiscoverArgs {
    std::string source;  // scenario id or CSV path
    std::size_t n = 10000;
    std::optional<std::size_t> max_level;
};

inline int cmd_discover(DiscoverArgs const & a, Options o) {
    prepare(o);
    Stopwatch sw;
    Dataset ds;
    std::optional<std::set<Edge>> truth;
    std::string header;
    if (known_scenario(a.source)) {
        auto g = generate({a.source, a.n, o.seed, 1});
        ds = std::move(g.data);
        header = g.header;
        if (a.source == "network") truth = true_network_edges();
    } else {
        ds = read_csv_file(a.source);
    }

    DataIndependenceOracle oracle(ds, parse_method(o.test), o.alpha, o.fit);
    auto sk = pc_stable_skeleton(ds.cols(), std::ref(oracle), a.max_level);
    std::optional<SkeletonAccuracy> acc;
    if (truth) acc = compare_skeleton(sk.edges, *truth);

    if (o.format == "csv") {
        std::ostringstream s;
        s << "from,to\n";
        for (auto [p, q] : sk.edges) s << ds.names[p] << ',' << ds.names[q] << '\n';
        if (acc) s << "# precision=" << fmt(acc->precision) << " recall=" << fmt(acc->recall) << '\n';
        emit(o, s.str());
        return exit_ok;
    }
    json edges = json::array();
    for (auto [p, q] : sk.edges) edges.push_back({ds.names[p], ds.names[q]});
    json sepsets = json::array();
    for (auto const & [e, s] : sk.separating_sets)
        sepsets.push_back({{"pair", {ds.names[e.first], ds.names[e.second]}}, {"set", names_of(ds, s)}});
    json res{{"nodes", ds.names}, {"edges", edges}, {"separating_sets", sepsets}, {"ci_tests", oracle.queries()}};
    if (acc) {
        res["precision"] = acc->precision;
        res["recall"] = acc->recall;
    }
    json rep = report("discover", o, std::move(res), sw.seconds());
    rep["input"] = a.source;
    if (!header.empty()) rep["data_generator"] = header;
    emit(o, rep.dump(2) + "\n");
    return exit_ok;
}

// datagen --------------------------------------------------------------------

struct DatagenArgs {
    std::string scenario;
    std::size_t n = 1000;
    int k = 1;
};

inline int cmd_datagen(DatagenArgs const & a, Options o) {
    auto g = generate({a.scenario, a.n, o.seed, a.k});
    std::ostringstream s;
    write_csv(s, g.data, g.header);
    emit(o, s.str());
    return exit_ok;
}

// benchmark ------------------------------------------------------------------

struct BenchmarkArgs {
    std::string scenario;
    std::string sizes = "1000";
    std::size_t reps = 100;
    int k = 1;
};

struct BenchmarkRow {
    std::size_t n = 0;
    std::size_t reps = 0;
    double mean = 0.0;
    double mse = NAN;
    std::optional<double> truth;
    double independent_rate = 0.0;
    std::vector<double> estimates;
};

/// Replicate r of size n uses seed split_seed(split_seed(base, n), r).
inline BenchmarkRow run_benchmark_row(std::string const & scenario, std::size_t n, std::size_t reps, int k,
                                      Options const & o) {
    BenchmarkRow row;
    row.n = n;
    row.reps = reps;
    row.truth = ground_truth({scenario, n, o.seed, k});
    row.estimates.assign(reps, 0.0);
    std::vector<char> indep(reps, 0);
    auto const method = parse_method(o.test);
    parallel_for(reps, [&](std::size_t r) {
        auto g = generate({scenario, n, split_seed(split_seed(o.seed, n), r), k});
        auto est = cmi_estimate(g.data, g.x, g.y, g.z, o.fit);
        row.estimates[r] = est.value;
        auto t = method == CITestMethod::chi2 ? chi2_from_estimate(est, o.alpha) : sc_from_estimate(est);
        indep[r] = t.independent ? 1 : 0;
    });
    double sum = 0.0, sq = 0.0;
    std::size_t ind = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        sum += row.estimates[r];
        if (row.truth) sq += (row.estimates[r] - *row.truth) * (row.estimates[r] - *row.truth);
        ind += static_cast<std::size_t>(indep[r]);
    }
    row.mean = sum / static_cast<double>(reps);
    if (row.truth) row.mse = sq / static_cast<double>(reps);
    row.independent_rate = static_cast<double>(ind) / static_cast<double>(reps);
    return row;
}

inline int cmd_benchmark(BenchmarkArgs const & a, Options o) {
    prepare(o);
    if (!known_scenario(a.scenario) || a.scenario == "network")
        throw input_error("benchmark needs an estimation scenario (exp1..exp6, collider*, noncollider*)");
    if (a.reps == 0) throw input_error("--reps must be positive");
    Stopwatch sw;
    auto sizes = parse_sizes(a.sizes);
    std::vector<BenchmarkRow> rows;
    for (auto n : sizes) rows.push_back(run_benchmark_row(a.scenario, n, a.reps, a.k, o));

    if (o.format == "csv") {
        std::ostringstream s;
        s << "scenario,n,replicate_count,mean_estimate,mse,truth\n";
        for (auto const & r : rows)
            s << a.scenario << ',' << r.n << ',' << r.reps << ',' << fmt(r.mean) << ',' << fmt(r.mse) << ','
              << (r.truth ? fmt(*r.truth) : "") << '\n';
        emit(o, s.str());
        return exit_ok;
    }
    json table = json::array();
    for (auto const & r : rows) {
        json j{{"scenario", a.scenario}, {"n", r.n}, {"replicate_count", r.reps}, {"mean_estimate", r.mean}};
        j["mse"] = r.truth ? json(r.mse) : json(nullptr);
        j["truth"] = r.truth ? json(*r.truth) : json(nullptr);
        j["independent_rate"] = r.independent_rate;
        table.push_back(std::move(j));
    }
    json rep = report("benchmark", o, json{{"scenario", a.scenario}, {"k", a.k}, {"rows", table}}, sw.seconds());
    emit(o, rep.dump(2) + "\n");
    return exit_ok;
}

}  // namespace mixcmi::cli
