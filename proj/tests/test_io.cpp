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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimerfb/algebra.hpp"
#include "dimerfb/io.hpp"

namespace {

using namespace dimerfb;

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("format_full_round_trips_doubles_bit_exactly") {
    const double values[] = {0.0,       1.0 / 3.0, 0.1,    -2.5e-308, 1.7e308,
                             -0.303119, 5.0,       1e-17,  123456789.123456789,
                             -1.0 / 7.0};
    for (const double v : values) {
        const double back = std::stod(format_full(v));
        CHECK(back == v);  // bitwise equality after text round trip
    }
}

TEST_CASE("format_full_renders_non_finite_values") {
    CHECK(format_full(std::nan("")) == "nan");
    CHECK(format_full(HUGE_VAL) == "inf");
    CHECK(format_full(-HUGE_VAL) == "-inf");
}

TEST_CASE("parse_grid_scalar") {
    const std::vector<double> g = parse_grid("--omega", "0.4");
    REQUIRE(g.size() == 1);
    CHECK(g[0] == 0.4);
}

TEST_CASE("parse_grid_inclusive_range") {
    // The acceptance grids: 101 omega points, 81 lambda points.
    const std::vector<double> omega = parse_grid("--omega", "0:5:0.05");
    REQUIRE(omega.size() == 101);
    CHECK(omega.front() == 0.0);
    CHECK(omega.back() == doctest::Approx(5.0).epsilon(1e-12));

    const std::vector<double> lambda = parse_grid("--lambda", "-2:2:0.05");
    REQUIRE(lambda.size() == 81);
    CHECK(lambda.front() == -2.0);
    CHECK(lambda.back() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("parse_grid_endpoint_not_on_grid_is_dropped") {
    const std::vector<double> g = parse_grid("--omega", "0:1:0.3");
    REQUIRE(g.size() == 4);  // 0, 0.3, 0.6, 0.9
    CHECK(g.back() == doctest::Approx(0.9));
}

TEST_CASE("parse_grid_rejects_malformed_specs_naming_the_key") {
    for (const char* bad : {"", "0.4x", "1:2", "1:2:3:4", "0:5:0", "0:5:-0.1", "2:1:0.1", "a:b:c"}) {
        try {
            parse_grid("--omega", bad);
            FAIL("expected invalid_argument for '" << bad << "'");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("--omega") != std::string::npos);
        }
    }
}

TEST_CASE("parse_initial_state_presets") {
    CHECK((parse_initial_state("--initial", "00") - projector_00()).norm() == 0.0);
    CHECK((parse_initial_state("--initial", "11") - projector_11()).norm() == 0.0);
    CHECK((parse_initial_state("--initial", "10") - projector_10()).norm() == 0.0);
    CHECK((parse_initial_state("--initial", "singlet") - singlet_projector()).norm() == 0.0);
}

TEST_CASE("parse_initial_state_explicit_entries_round_trip") {
    const Matrix4c rho = 0.5 * projector_10() + 0.5 * singlet_projector();
    std::string text;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (!text.empty()) text += ",";
            text += format_full(rho(i, j).real()) + "," + format_full(rho(i, j).imag());
        }
    }
    const Matrix4c back = parse_initial_state("--initial", text);
    CHECK((back - rho).norm() == 0.0);
}

TEST_CASE("parse_initial_state_rejects_invalid_input_naming_the_key") {
    // Wrong field count, non-numeric fields, and physically invalid matrices.
    const char* bad[] = {
        "psi",
        "1,2,3",
        // trace 2 (two |11><11| populations of 1 each): Hermitian but not unit trace
        "1,0,0,0,0,0,0,0, 0,0,1,0,0,0,0,0, 0,0,0,0,0,0,0,0, 0,0,0,0,0,0,0,0",
        // non-Hermitian off-diagonal
        "1,0,1,0,0,0,0,0, 0,0,0,0,0,0,0,0, 0,0,0,0,0,0,0,0, 0,0,0,0,0,0,0,0",
    };
    for (const char* text : bad) {
        try {
            parse_initial_state("--initial", text);
            FAIL("expected invalid_argument for '" << text << "'");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("--initial") != std::string::npos);
        }
    }
}

TEST_CASE("steady_state_csv_schema_and_round_trip") {
    SteadyStateRow row;
    row.omega = 0.4;
    row.lambda = -0.8;
    row.r_value = 2.0;
    row.concurrence = 1.0 / 3.0;
    row.rho = 0.25 * projector_00() + 0.75 * singlet_projector();
    write_steady_state_csv("test_io_steady.csv", {row});

    const std::vector<std::string> lines = read_lines("test_io_steady.csv");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("omega,lambda,R,C,rho_00_re,rho_00_im,", 0) == 0);
    CHECK(lines[0].find("rho_33_re,rho_33_im") != std::string::npos);

    const std::vector<std::string> fields = split_csv(lines[1]);
    REQUIRE(fields.size() == 4 + 32);
    CHECK(std::stod(fields[0]) == 0.4);
    CHECK(std::stod(fields[1]) == -0.8);
    CHECK(std::stod(fields[2]) == 2.0);
    CHECK(std::stod(fields[3]) == 1.0 / 3.0);
    // Entry rho_10,01 = <10|rho|01> sits at row-major index (1,2): field
    // offset 4 + 2*(4*1+2) = 16.
    CHECK(std::stod(fields[16]) == row.rho(1, 2).real());
    CHECK(std::stod(fields[17]) == row.rho(1, 2).imag());
}

TEST_CASE("trajectory_csv_schema") {
    EnsembleResult ens;
    ens.times = {0.0, 0.5};
    ens.mean_states = {maximally_mixed(), maximally_mixed()};
    ens.concurrence_of_mean = {0.0, 1.0 / 7.0};
    ens.mean_concurrence = {0.0, 2.0 / 7.0};
    ens.mean_current = {0.0, -0.25};
    ens.standard_error = {0.0, 0.001953125};
    ens.n_trajectories = 2;
    write_trajectory_csv("test_io_traj.csv", ens);

    const std::vector<std::string> lines = read_lines("test_io_traj.csv");
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t,C_mean_state,C_mean_of_C,stderr,I_mean");
    const std::vector<std::string> fields = split_csv(lines[2]);
    REQUIRE(fields.size() == 5);
    CHECK(std::stod(fields[0]) == 0.5);
    CHECK(std::stod(fields[1]) == 1.0 / 7.0);
    CHECK(std::stod(fields[2]) == 2.0 / 7.0);
    CHECK(std::stod(fields[3]) == 0.001953125);
    CHECK(std::stod(fields[4]) == -0.25);
}

TEST_CASE("sweep_csv_schema_with_nan_holes_and_optima_file") {
    SweepResult res;
    res.omega_grid = {0.0, 5.0};
    res.lambda_grid = {-0.5, 0.0};
    res.concurrence = {{0.5, 0.25}, {std::nan(""), 0.125}};
    res.c_hat = {0.5, 0.125};
    res.lambda_hat = {-0.5, 0.0};
    write_sweep_csv("test_io_sweep.csv", res);
    write_sweep_optima_csv("test_io_sweep_optima.csv", res);

    const std::vector<std::string> grid = read_lines("test_io_sweep.csv");
    REQUIRE(grid.size() == 5);
    CHECK(grid[0] == "omega,lambda,C,stderr");
    CHECK(grid[1] == "0,-0.5,0.5,0");     // closed-form: stderr column is 0
    CHECK(split_csv(grid[3])[2] == "nan");  // refinement hole renders as nan

    const std::vector<std::string> optima = read_lines("test_io_sweep_optima.csv");
    REQUIRE(optima.size() == 3);
    CHECK(optima[0] == "omega,c_hat,lambda_hat");
    CHECK(optima[1] == "0,0.5,-0.5");
    CHECK(optima[2] == "5,0.125,0");
}

TEST_CASE("sweep_csv_emits_statistical_error_when_present") {
    SweepResult res;
    res.omega_grid = {5.0};
    res.lambda_grid = {1.0};
    res.concurrence = {{0.40625}};
    res.c_hat = {0.40625};
    res.lambda_hat = {1.0};
    res.statistical_error = {{0.0078125}};
    write_sweep_csv("test_io_sweep_err.csv", res);
    const std::vector<std::string> lines = read_lines("test_io_sweep_err.csv");
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "5,1,0.40625,0.0078125");
}

TEST_CASE("write_text_file_round_trip") {
    const std::string text = "{\"tool\":\"x\"}\n";
    write_text_file("test_io_manifest.json", text);
    std::ifstream in("test_io_manifest.json");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == text);
}

TEST_CASE("writers_report_unwritable_paths") {
    CHECK_THROWS_AS(write_text_file("no_such_dir/x.json", "{}"), std::runtime_error);
    CHECK_THROWS_AS(write_steady_state_csv("no_such_dir/x.csv", {}), std::runtime_error);
}
