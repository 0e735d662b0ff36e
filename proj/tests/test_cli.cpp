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

// Drives the built command-line tool as a subprocess.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mixcmi/mixcmi.hpp"

#ifndef MIXCMI_CLI_PATH
#error "MIXCMI_CLI_PATH must point at the built CLI"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mixcmi;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mixcmi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(std::string const & name) const { return (dir_ / name).string(); }

    int run(std::string const & args) const {
        std::string const cmd = std::string(MIXCMI_CLI_PATH) + " " + args + " 2>" + path("stderr.txt");
        int const status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    static std::string slurp(std::string const & p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    json run_json(std::string const & args) const {
        EXPECT_EQ(run(args + " --out " + path("out.json")), 0) << slurp(path("stderr.txt"));
        return json::parse(slurp(path("out.json")));
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, DatagenIsReproducible) {
    ASSERT_EQ(run("datagen exp1 --n 1000 --seed 7 --out " + path("a.csv")), 0);
    ASSERT_EQ(run("datagen exp1 --n 1000 --seed 7 --out " + path("b.csv")), 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("a.csv")).rfind("# generator=mt19937_64", 0), 0u);
}

TEST_F(Cli, EstimateRoundTripMatchesInProcess) {
    for (auto const & id : {"exp4", "exp5"}) {
        ASSERT_EQ(run(std::string("datagen ") + id + " --n 600 --seed 3 --out " + path("d.csv")), 0);
        auto rep = run_json("estimate " + path("d.csv") + " --x X --y Y --z Z");
        auto g = generate({id, 600, 3, 1});
        auto est = cmi_estimate(g.data, g.x, g.y, g.z);
        EXPECT_EQ(rep["results"]["value_nats"].get<double>(), est.value) << id;
        EXPECT_EQ(rep["schema_version"], 1);
        EXPECT_EQ(rep["config"]["t"], 5);
        EXPECT_EQ(rep["config"]["log_base_k"], "e");
    }
}

TEST_F(Cli, SelfInformation) {
    ASSERT_EQ(run("datagen exp3 --n 500 --seed 1 --out " + path("d.csv")), 0);
    auto rep = run_json("estimate " + path("d.csv") + " --x Y --y Y");
    auto const & r = rep["results"];
    EXPECT_NEAR(r["value_nats"].get<double>(), r["entropies_nats"]["H_XZ"].get<double>(), 1e-12);
}

TEST_F(Cli, ConfigFlagsAreEchoedAndApplied) {
    ASSERT_EQ(run("datagen exp1 --n 400 --seed 2 --out " + path("d.csv")), 0);
    auto rep = run_json("estimate " + path("d.csv") + " --x X --y Y --imax 1 --kinit-factor 10 --kmax-factor 2 --log-base-k 2 --t 7");
    EXPECT_EQ(rep["config"]["imax"], 1);
    EXPECT_EQ(rep["config"]["kinit_factor"], 10.0);
    EXPECT_LE(rep["results"]["accepted_refinements"].get<int>(), 1);
}

TEST_F(Cli, CsvFormat) {
    ASSERT_EQ(run("datagen exp4 --n 300 --seed 2 --out " + path("d.csv")), 0);
    ASSERT_EQ(run("citest " + path("d.csv") + " --x X --y Y --z Z --test sc --format csv --out " + path("o.csv")), 0);
    auto text = slurp(path("o.csv"));
    EXPECT_EQ(text.rfind("x,y,z,method,raw_nats", 0), 0u);
    EXPECT_NE(text.find(",sc,"), std::string::npos);
}

TEST_F(Cli, CitestJson) {
    ASSERT_EQ(run("datagen collider5 --n 400 --seed 1 --out " + path("d.csv")), 0);
    auto rep = run_json("citest " + path("d.csv") + " --x X --y Y --z Z --alpha 0.01");
    EXPECT_EQ(rep["command"], "citest");
    EXPECT_EQ(rep["results"]["method"], "chi2");
    EXPECT_GT(rep["results"]["df"].get<double>(), 0.0);
}

TEST_F(Cli, DiscoverFromCsvAndScenario) {
    ASSERT_EQ(run("datagen exp4 --n 1500 --seed 4 --out " + path("d.csv")), 0);
    auto rep = run_json("discover " + path("d.csv"));
    EXPECT_EQ(rep["results"]["nodes"].size(), 3u);
    EXPECT_FALSE(rep["results"].contains("precision"));

    auto net = run_json("discover network --n 3000 --seed 1 --test chi2 --alpha 0.01");
    EXPECT_TRUE(net["results"].contains("precision"));
    EXPECT_TRUE(net["results"].contains("recall"));
    EXPECT_GE(net["results"]["precision"].get<double>(), 0.0);
}

TEST_F(Cli, BenchmarkCsvColumnsAndValues) {
    ASSERT_EQ(run("benchmark exp1 --n 100..200 --reps 3 --seed 9 --out " + path("b.csv")), 0);
    std::istringstream in(slurp(path("b.csv")));
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    EXPECT_EQ(header, "scenario,n,replicate_count,mean_estimate,mse,truth");
    EXPECT_EQ(row1.rfind("exp1,100,3,", 0), 0u);
    EXPECT_EQ(row2.rfind("exp1,200,3,", 0), 0u);

    double sum = 0.0;
    for (std::uint64_t r = 0; r < 3; ++r) {
        auto g = generate({"exp1", 100, split_seed(split_seed(9, 100), r), 1});
        sum += cmi_estimate(g.data, g.x, g.y, g.z).value;
    }
    std::istringstream fields(row1);
    std::string f;
    for (int i = 0; i < 4; ++i) std::getline(fields, f, ',');
    EXPECT_NEAR(std::stod(f), sum / 3.0, 1e-12);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("estimate"), 1);
    EXPECT_EQ(run("estimate x.csv --x A --y B --bogus"), 1);
    EXPECT_EQ(run("--help > /dev/null"), 0);
    EXPECT_EQ(run("estimate " + path("missing.csv") + " --x A --y B"), 2);
    ASSERT_EQ(run("datagen exp1 --n 50 --seed 1 --out " + path("d.csv")), 0);
    EXPECT_EQ(run("estimate " + path("d.csv") + " --x X --y Nope"), 2);
    EXPECT_EQ(run("estimate " + path("d.csv") + " --x X --y Y --alpha 2"), 2);
    EXPECT_EQ(run("estimate " + path("d.csv") + " --x X --y Y --format xml"), 2);
    EXPECT_EQ(run("datagen exp42 --n 5"), 2);
    EXPECT_EQ(run("benchmark exp1 --n 10..5"), 2);
    std::ofstream(path("bad.csv")) << "X,Y\n1,abc\n";
    EXPECT_EQ(run("estimate " + path("bad.csv") + " --x X --y Y"), 2);
}
