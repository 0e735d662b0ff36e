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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_common(CLI::App * app, mixcmi::cli::Options & o, bool fit_flags = true) {
    if (fit_flags) {
        app->add_option("--t", o.fit.t, "Multiplicity at which a repeated value becomes a discrete point")->capture_default_str();
        app->add_option("--imax", o.fit.i_max, "Maximum greedy refinement iterations")->capture_default_str();
        app->add_option("--kinit-factor", o.fit.k_init_factor, "K_init = ceil(factor * log n)")->capture_default_str();
        app->add_option("--kmax-factor", o.fit.k_max_factor, "K_max = ceil(factor * log n)")->capture_default_str();
        app->add_option("--log-base-k", o.log_base_k, "Logarithm base for the bin budgets: e, 2 or 10")->capture_default_str();
        app->add_option("--alpha", o.alpha, "Significance level of the chi-squared correction")->capture_default_str();
        app->add_option("--test", o.test, "Independence test: chi2 or sc")->capture_default_str();
        app->add_option("--format", o.format, "Output format: json or csv")->capture_default_str();
    }
    app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    app->add_option("--out", o.out, "Output path (default stdout)");
}

}  // namespace

int main(int argc, char ** argv) {
    using namespace mixcmi::cli;
    CLI::App app{"mixcmi: MDL adaptive-histogram (conditional) mutual information for mixed data"};
    app.require_subcommand(1);

    Options opts;
    EstimateArgs est_args;
    auto * est = app.add_subcommand("estimate", "Estimate I(X;Y|Z) in nats from a CSV file");
    est->add_option("csv", est_args.csv, "Input CSV")->required();
    est->add_option("--x", est_args.x, "Comma-separated X columns")->required();
    est->add_option("--y", est_args.y, "Comma-separated Y columns")->required();
    est->add_option("--z", est_args.z, "Comma-separated Z columns");
    add_common(est, opts);

    EstimateArgs ci_args;
    auto * ci = app.add_subcommand("citest", "Test X _||_ Y | Z on a CSV file");
    ci->add_option("csv", ci_args.csv, "Input CSV")->required();
    ci->add_option("--x", ci_args.x, "Comma-separated X columns")->required();
    ci->add_option("--y", ci_args.y, "Comma-separated Y columns")->required();
    ci->add_option("--z", ci_args.z, "Comma-separated Z columns");
    add_common(ci, opts);

    DiscoverArgs disc_args;
    auto * disc = app.add_subcommand("discover", "PC-stable skeleton from a CSV file or a generated scenario");
    disc->add_option("source", disc_args.source, "CSV path or scenario id (e.g. network)")->required();
    disc->add_option("--n", disc_args.n, "Sample size when generating a scenario")->capture_default_str();
    disc->add_option("--max-level", disc_args.max_level, "Largest conditioning-set size");
    add_common(disc, opts);

    DatagenArgs gen_args;
    auto * gen = app.add_subcommand("datagen", "Write a generated scenario as CSV");
    gen->add_option("scenario", gen_args.scenario, "Scenario id")->required();
    gen->add_option("--n", gen_args.n, "Sample size")->capture_default_str();
    gen->add_option("--k", gen_args.k, "Number of Z dimensions (exp6)")->capture_default_str();
    add_common(gen, opts, false);

    BenchmarkArgs bench_args;
    auto * bench = app.add_subcommand("benchmark", "Mean and MSE of the estimator over replicates");
    bench->add_option("scenario", bench_args.scenario, "Scenario id")->required();
    bench->add_option("--n", bench_args.sizes, "Sample sizes: 100..1000, 100..1000:50 or 200,500")->capture_default_str();
    bench->add_option("--reps", bench_args.reps, "Replicates per sample size")->capture_default_str();
    bench->add_option("--k", bench_args.k, "Number of Z dimensions (exp6)")->capture_default_str();
    add_common(bench, opts);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        int const code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*bench && bench->count("--format") == 0) opts.format = "csv";

    try {
        if (*est) return cmd_estimate(est_args, opts);
        if (*ci) return cmd_citest(ci_args, opts);
        if (*disc) return cmd_discover(disc_args, opts);
        if (*gen) return cmd_datagen(gen_args, opts);
        if (*bench) return cmd_benchmark(bench_args, opts);
    } catch (mixcmi::input_error const & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (mixcmi::labeling_error const & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (std::exception const & e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_usage;
}
