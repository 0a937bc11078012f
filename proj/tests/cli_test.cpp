// Copyright 2026 The ghzsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "ghzsim/commands.hpp"
#include "json.hpp"

using namespace ghz;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ghzsim");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string &name, const std::string &text) {
    auto path = std::filesystem::temp_directory_path() / ("ghzsim_cli_test_" + name);
    std::ofstream(path, std::ios::binary) << text;
    return path.string();
}

const std::string kDevice =
    R"("device": {"c_junction_af": 600, "c_gate_af": 0.6, "c_coupler_af": 30, "epsilon_j_ghz": 5.6})";

json structured(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("structured");
    auto r = cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

}  // namespace

TEST(cli, derive_flags_neglect_justified) {
    auto r = cli({"derive"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("K13 neglect justified"), std::string::npos);
    auto doc = structured({"derive"});
    EXPECT_TRUE(doc["crosstalk"]["neglect_justified"].get<bool>());
    EXPECT_NEAR(doc["energies"]["k12_ghz"].get<double>(), 2.8020385818437465, 1e-12);
}

TEST(cli, derive_degeneracy_gives_zero_charging_energy) {
    auto doc = structured({"derive"});
    for (double e_c : doc["energies"]["e_c_ghz"].get<std::vector<double>>()) {
        EXPECT_EQ(e_c, 0);
    }
}

TEST(cli, example_config_loads) {
    auto c = load_config(GHZSIM_SOURCE_DIR "/configs/reference_device.json");
    EXPECT_EQ(c.network.c_junction[1], 600);
    EXPECT_EQ(c.network.c_coupler[0], 30);
    EXPECT_EQ(c.settings.epsilon_j[2], 5.6);
    EXPECT_EQ(c.protocol.shots, 10000u);
    ASSERT_TRUE(c.scan.has_value());
    EXPECT_EQ(c.scan->values.size(), 3u);
}

TEST(cli, missing_field_names_it) {
    auto path = write_temp("missing.json", R"({"device": {"c_gate_af": 0.6, "c_coupler_af": 30, "epsilon_j_ghz": 5.6}})");
    auto r = cli({"derive", "--config", path});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("device.c_junction_af"), std::string::npos) << r.err;
}

TEST(cli, syntax_error_reports_line) {
    auto path = write_temp("syntax.json", "{\n  \"device\": {\n    \"c_junction_af\": 600,,\n  }\n}\n");
    auto r = cli({"derive", "--config", path});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(cli, config_field_errors) {
    struct Case {
        std::string body;
        std::string field;
    };
    const std::vector<Case> cases = {
        {"{" + kDevice + R"(, "protocol": {"shots": 10}})", "protocol.seed"},
        {"{" + kDevice + R"(, "protocol": {"mode": "exact"}})", "protocol.mode"},
        {"{" + kDevice + R"(, "protocol": {"shots": -1, "seed": 1}})", "protocol.shots"},
        {"{" + kDevice + R"(, "colour": 1})", "colour"},
        {R"({"device": {"c_junction_af": [600, 600], "c_gate_af": 0.6, "c_coupler_af": 30, "epsilon_j_ghz": 5.6}})",
         "device.c_junction_af"},
        {R"({"device": {"c_junction_af": "big", "c_gate_af": 0.6, "c_coupler_af": 30, "epsilon_j_ghz": 5.6}})",
         "device.c_junction_af"},
        {R"({"device": {"c_junction_af": -600, "c_gate_af": 0.6, "c_coupler_af": 30, "epsilon_j_ghz": 5.6}})",
         "device"},
        {"{" + kDevice + R"(, "scan": {"parameter": "temperature", "values": [1]}})", "scan.parameter"},
        {"{" + kDevice + R"(, "scan": {"parameter": "zeta", "values": [0.7]}})", "scan.values"},
        {"{" + kDevice + R"(, "output": {"format": "xml"}})", "output.format"},
    };
    for (std::size_t i = 0; i < cases.size(); i++) {
        auto path = write_temp("field" + std::to_string(i) + ".json", cases[i].body);
        auto r = cli({"derive", "--config", path});
        EXPECT_EQ(r.code, kExitConfig) << cases[i].body;
        EXPECT_NE(r.err.find(cases[i].field), std::string::npos) << r.err;
    }
}

TEST(cli, bad_flags_are_config_errors) {
    EXPECT_EQ(cli({"verify", "--mode", "exact"}).code, kExitConfig);
    EXPECT_EQ(cli({"verify", "--sign", "zero"}).code, kExitConfig);
    EXPECT_EQ(cli({}).code, kExitConfig);
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
    EXPECT_EQ(cli({"verify", "--config", "/nonexistent/ghzsim.json"}).code, kExitConfig);
}

TEST(cli, exit_codes) {
    EXPECT_EQ(exit_code(ErrorKind::Config), 2);
    EXPECT_EQ(exit_code(ErrorKind::Infeasible), 3);
    EXPECT_EQ(exit_code(ErrorKind::Contract), 4);
}

TEST(cli, infeasible_pulse_exits_three) {
    auto path = write_temp(
        "weak.json", R"({"device": {"c_junction_af": 600, "c_gate_af": 0.6, "c_coupler_af": 30, "epsilon_j_ghz": 0.01}})");
    auto r = cli({"prepare", "--config", path});
    EXPECT_EQ(r.code, kExitInfeasible);
    EXPECT_NE(r.err.find("infeasible"), std::string::npos) << r.err;
}

TEST(cli, prepare_default) {
    auto r = cli({"prepare"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("[schedule]"), std::string::npos);
    auto doc = structured({"prepare"});
    EXPECT_GE(doc["fidelity"].get<double>(), 0.999);
    EXPECT_EQ(doc["steps"].size(), 3u);
    EXPECT_NEAR(doc["relative_phase_over_pi"].get<double>(), 0.5, 1e-9);
}

TEST(cli, prepare_include_k13_reports_deficit) {
    auto doc = structured({"prepare", "--include-k13"});
    EXPECT_GT(doc["fidelity_deficit"].get<double>(), 1e-3);
    EXPECT_TRUE(doc["include_k13"].get<bool>());
}

TEST(cli, prepare_sign_minus) {
    auto doc = structured({"prepare", "--sign", "minus"});
    EXPECT_EQ(doc["target"], "(|000> - i|111>)/sqrt2");
    EXPECT_NEAR(doc["relative_phase_over_pi"].get<double>(), -0.5, 1e-9);
    EXPECT_GE(doc["fidelity"].get<double>(), 0.999);
}

TEST(cli, timing_reports_flip_windings) {
    auto doc = structured({"timing"});
    EXPECT_GT(doc["first_flip"]["t_ns"].get<double>(), 0);
    EXPECT_LT(doc["first_flip"]["sin_residual"].get<double>(), 1e-9);
    EXPECT_FALSE(doc["readout"]["k12"]["acceptable"].get<bool>());
}

TEST(cli, verify_ideal) {
    auto doc = structured({"verify", "--mode", "ideal", "--shots", "10000", "--seed", "7"});
    EXPECT_NEAR(doc["probabilities"]["00"].get<double>(), 0, 1e-10);
    EXPECT_NEAR(doc["probabilities"]["01"].get<double>(), 0.5, 1e-10);
    EXPECT_EQ(doc["counts"]["00"].get<int>() + doc["counts"]["11"].get<int>(), 0);
    EXPECT_EQ(doc["accepted"].get<int>() + doc["discarded"].get<int>(), 10000);
}

TEST(cli, verify_mixture_state) {
    auto path = write_temp("mix.json", "{" + kDevice + R"(, "protocol": {"state": "mixture", "shots": 100, "seed": 1}})");
    auto doc = structured({"verify", "--config", path});
    EXPECT_NEAR(doc["probabilities"]["00"].get<double>() + doc["probabilities"]["11"].get<double>(), 0.5, 1e-10);
}

TEST(cli, byte_identical_reruns) {
    for (const std::string format : {"table", "csv", "structured"}) {
        for (const std::string cmd : {"derive", "prepare", "verify", "mermin", "yyy", "timing"}) {
            std::vector<std::string> args = {cmd, "--mode", "ideal", "--shots", "10000", "--seed", "7", "--format", format};
            auto a = cli(args);
            auto b = cli(args);
            ASSERT_EQ(a.code, 0) << cmd << " " << a.err;
            EXPECT_EQ(a.out, b.out) << cmd << " " << format;
        }
    }
}

TEST(cli, seed_changes_samples) {
    auto a = cli({"verify", "--shots", "1000", "--seed", "1", "--format", "csv"});
    auto b = cli({"verify", "--shots", "1000", "--seed", "2", "--format", "csv"});
    EXPECT_NE(a.out, b.out);
}

TEST(cli, mermin_contradiction_banner) {
    auto r = cli({"mermin"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("CONTRADICTION"), std::string::npos);
    auto doc = structured({"mermin", "--shots", "2000", "--seed", "5"});
    EXPECT_NEAR(doc["observables"]["A_yyy"]["quantum"].get<double>(), -1, 1e-9);
    EXPECT_EQ(doc["observables"]["A_yyy"]["sampled"].get<double>(), -1);
    EXPECT_EQ(doc["lhv"]["exceptions"].get<int>(), 0);
    auto minus = cli({"mermin", "--sign", "minus"});
    EXPECT_EQ(minus.out.find("CONTRADICTION"), std::string::npos);
}

TEST(cli, yyy_histogram_has_no_even_outcomes) {
    auto doc = structured({"yyy", "--shots", "4096"});
    EXPECT_EQ(doc["even_minus_count"].get<int>(), 0);
    EXPECT_EQ(doc["histogram"].size(), 8u);
    EXPECT_EQ(cli({"yyy", "--shots", "0"}).code, kExitConfig);
}

TEST(cli, scan_zeta_csv) {
    auto path = write_temp("zeta.json", "{" + kDevice + R"(, "scan": {"parameter": "zeta", "values": [0.05, 0.1, 0.2]}})");
    auto r = cli({"scan", "--config", path, "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "index,zeta,tau_ns,lab_error,dressed_error");
    int rows = 0;
    bool slope = false;
    while (std::getline(in, line)) {
        if (line.rfind("# lab_slope=", 0) == 0) {
            slope = true;
        } else if (line[0] != '#') {
            rows++;
        }
    }
    EXPECT_EQ(rows, 3);
    EXPECT_TRUE(slope);
}

TEST(cli, scan_empty_grid_rejected) {
    auto path = write_temp("empty.json", "{" + kDevice + R"(, "scan": {"parameter": "zeta", "values": []}})");
    auto r = cli({"scan", "--config", path});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("scan.values"), std::string::npos);
    EXPECT_EQ(cli({"scan"}).code, kExitConfig);
}

TEST(cli, scan_coupler_deficit_is_monotone) {
    auto path = write_temp("coupler.json",
                           "{" + kDevice + R"(, "scan": {"parameter": "coupler_af", "values": [2, 5, 10, 20, 30, 45, 60]}})");
    auto doc = structured({"scan", "--config", path});
    ASSERT_EQ(doc["rows"].size(), 7u);
    double previous = -1;
    for (std::size_t i = 0; i < doc["rows"].size(); i++) {
        const auto &row = doc["rows"][i];
        EXPECT_EQ(row["index"].get<std::size_t>(), i);
        double deficit = row["fidelity_deficit"].get<double>();
        EXPECT_GT(deficit, previous);
        previous = deficit;
    }
}

TEST(cli, scan_points_use_derived_seeds) {
    auto path = write_temp("eps.json", "{" + kDevice +
                                           R"(, "protocol": {"mode": "full", "shots": 500, "seed": 11},
                                                "scan": {"parameter": "epsilon_j_ghz", "values": [5.6, 10, 20]}})");
    auto a = cli({"scan", "--config", path, "--format", "csv"});
    auto b = cli({"scan", "--config", path, "--format", "csv"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);

    // Point 1 equals a standalone verify at eps_J = 10 with seed derive_seed(11, 1).
    auto doc = structured({"scan", "--config", path});
    auto single = write_temp("eps10.json", R"({"device": {"c_junction_af": 600, "c_gate_af": 0.6, "c_coupler_af": 30,
                                               "epsilon_j_ghz": 10}})");
    auto v = structured({"verify", "--config", single, "--mode", "full", "--shots", "500", "--seed",
                         std::to_string(derive_seed(11, 1))});
    EXPECT_EQ(doc["rows"][1]["accepted"].get<int>(), v["accepted"].get<int>());
    EXPECT_EQ(doc["rows"][1]["sampled_leak"].get<int>(), v["counts"]["00"].get<int>() + v["counts"]["11"].get<int>());
}

TEST(cli, output_file) {
    auto path = (std::filesystem::temp_directory_path() / "ghzsim_cli_test_out.csv").string();
    std::filesystem::remove(path);
    auto r = cli({"derive", "--format", "csv", "--output", path});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "# table=qubits");
}
