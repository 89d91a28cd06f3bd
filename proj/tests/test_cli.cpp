// Copyright 2026 The dimerfb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end exercises of the dimerfb binary (path taken from the
// DIMERFB_BIN environment variable, set by CTest). Each case invokes the real
// executable through the shell and inspects exit status, output files, and
// diagnostics.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dimerfb/entanglement.hpp"
#include "dimerfb/master.hpp"

namespace {

std::string binary_path() {
    const char* bin = std::getenv("DIMERFB_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "DIMERFB_BIN must point at the dimerfb executable");
    return bin;
}

// Runs the binary with `args`, capturing stderr; returns the exit status.
int run_cli(const std::string& args, std::string* err_text = nullptr) {
    const std::string err_path = "cli_stderr.txt";
    const std::string cmd = "\"" + binary_path() + "\" " + args + " 2> " + err_path;
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    if (err_text != nullptr) {
        std::ifstream in(err_path);
        std::stringstream buf;
        buf << in.rdbuf();
        *err_text = buf.str();
    }
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing output file: " << path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::istringstream text(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(text, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

}  // namespace

TEST_CASE("version_flag_exits_cleanly") {
    CHECK(run_cli("--version > cli_version.txt") == 0);
    CHECK(read_file("cli_version.txt").rfind("dimerfb ", 0) == 0);
}

TEST_CASE("steady_state_dark_singlet_example") {
    // The singlet is a dark state: R = 0 and the stationary state keeps C = 1
    // at any drive amplitude.
    CHECK(run_cli("steady-state --mode none --initial singlet --omega 1.3 "
                  "--output cli_singlet.csv") == 0);
    const auto rows = read_csv("cli_singlet.csv");
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][0]) == 1.3);     // omega
    CHECK(std::stod(rows[1][2]) == 0.0);     // R
    CHECK(std::stod(rows[1][3]) == doctest::Approx(1.0).epsilon(1e-12));  // C

    // The manifest echoes command, version, and resolved config.
    const nlohmann::json manifest = nlohmann::json::parse(read_file("cli_singlet.manifest.json"));
    CHECK(manifest["command"] == "steady-state");
    CHECK(manifest["tool"] == "dimerfb");
    CHECK(manifest["config"]["initial"] == "singlet");
    CHECK(manifest["config"]["omega"][0] == 1.3);
    CHECK(manifest.contains("wall_clock_seconds"));
}

TEST_CASE("trajectory_reruns_are_byte_identical") {
    // Determinism contract: same flags, same seed => byte-identical CSV.
    const std::string flags =
        "trajectory --mode bayesian --initial 10 --omega 0 --lambda 0.5 "
        "--n-traj 40 --t-final 0.5 --seed 7 --threads 2 --output ";
    CHECK(run_cli(flags + "cli_det_a.csv") == 0);
    CHECK(run_cli(flags + "cli_det_b.csv") == 0);
    const std::string a = read_file("cli_det_a.csv");
    CHECK(a == read_file("cli_det_b.csv"));
    CHECK(a.rfind("t,C_mean_state,C_mean_of_C,stderr,I_mean", 0) == 0);
}

TEST_CASE("sweep_outputs_grid_and_optima_consistent_with_closed_form") {
    CHECK(run_cli("sweep --mode markovian --initial 00 --omega 0.4 "
                  "--lambda -1:0:0.5 --output cli_sweep.csv") == 0);
    const auto grid = read_csv("cli_sweep.csv");
    REQUIRE(grid.size() == 4);  // header + 3 lambda cells
    CHECK(grid[0] == std::vector<std::string>{"omega", "lambda", "C", "stderr"});

    // Each grid row must reproduce the closed-form stationary concurrence.
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double omega = std::stod(grid[k][0]);
        const double lambda = std::stod(grid[k][1]);
        const double expected =
            dimerfb::concurrence_of_stationary(omega, lambda, dimerfb::FeedbackMode::Markovian,
                                               2.0);
        CHECK(std::stod(grid[k][2]) == doctest::Approx(expected).epsilon(1e-14));
    }

    const auto optima = read_csv("cli_sweep_optima.csv");
    REQUIRE(optima.size() == 2);
    CHECK(optima[0] == std::vector<std::string>{"omega", "c_hat", "lambda_hat"});
    double best = -1.0;
    for (std::size_t k = 1; k < grid.size(); ++k) best = std::max(best, std::stod(grid[k][2]));
    CHECK(std::stod(optima[1][1]) == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("config_file_sections_apply_and_flags_win") {
    {
        std::ofstream cfg("cli_run.cfg");
        cfg << "# sample run configuration\n"
            << "[steady-state]\n"
            << "mode = markovian\n"
            << "initial = 00\n"
            << "omega = 0.4\n"
            << "lambda = -0.8\n"
            << "output = cli_cfg.csv\n";
    }
    // File value lambda = -0.8 loses to the explicit flag -0.2.
    CHECK(run_cli("steady-state --config cli_run.cfg --lambda -0.2") == 0);
    const auto rows = read_csv("cli_cfg.csv");
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][0]) == 0.4);
    CHECK(std::stod(rows[1][1]) == -0.2);

    // Without the override the file value applies.
    CHECK(run_cli("steady-state --config cli_run.cfg") == 0);
    CHECK(std::stod(read_csv("cli_cfg.csv")[1][1]) == -0.8);
}

TEST_CASE("unknown_config_key_is_rejected_by_name") {
    {
        std::ofstream cfg("cli_bad.cfg");
        cfg << "[steady-state]\nomega = 1\nbogus-knob = 3\n";
    }
    std::string err;
    CHECK(run_cli("steady-state --config cli_bad.cfg", &err) != 0);
    CHECK(err.find("bogus-knob") != std::string::npos);
}

TEST_CASE("invalid_values_exit_nonzero_naming_the_key") {
    std::string err;

    CHECK(run_cli("steady-state --omega 0:5:-1", &err) == 1);
    CHECK(err.find("--omega") != std::string::npos);

    CHECK(run_cli("steady-state --initial psi --omega 1", &err) == 1);
    CHECK(err.find("--initial") != std::string::npos);

    CHECK(run_cli("trajectory --mode none --omega 1 --lambda 0.3", &err) == 1);
    CHECK(err.find("--lambda") != std::string::npos);

    CHECK(run_cli("trajectory --mode bayesian --omega 1 --lambda 0.5 --dt 0 "
                  "--t-final 1",
                  &err) == 1);
    CHECK(err.find("--dt") != std::string::npos);

    CHECK(run_cli("steady-state --mode bayesian --omega 1", &err) == 1);
    CHECK(err.find("--mode") != std::string::npos);

    // Missing required option is a parse error from the option itself.
    CHECK(run_cli("steady-state", &err) != 0);
    CHECK(err.find("--omega") != std::string::npos);
}

TEST_CASE("numerical_failure_exits_with_module_diagnostic") {
    // dt far above the stiffness limit at omega = 5 triggers the integrator's
    // instability guard, which the driver reports as a numerical failure.
    std::string err;
    CHECK(run_cli("trajectory --mode none --initial 00 --omega 5 --dt 0.05 "
                  "--t-final 5 --n-traj 1 --output cli_unstable.csv",
                  &err) == 2);
    CHECK(err.find("numerical failure") != std::string::npos);
}
