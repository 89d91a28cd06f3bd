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

#include "dimerfb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimerfb {
namespace {

// Splits on a single-character delimiter, keeping empty fields so malformed
// inputs like "0.1::2" are detected rather than silently collapsed.
std::vector<std::string> split(const std::string& text, char delim) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    while (true) {
        const std::string::size_type pos = text.find(delim, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(const std::string& text) {
    const std::string::size_type first = text.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const std::string::size_type last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

// Parses a double requiring the whole token to be consumed, so "0.4x" is an
// error instead of 0.4.
double parse_double(const std::string& key, const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw std::invalid_argument(key + ": empty numeric field");
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": cannot parse '" + t + "' as a number");
    }
    if (consumed != t.size()) {
        throw std::invalid_argument(key + ": trailing characters in '" + t + "'");
    }
    return value;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
    const std::vector<std::string> parts = split(trim(text), ':');
    if (parts.size() == 1) return {parse_double(key, parts[0])};
    if (parts.size() != 3) {
        throw std::invalid_argument(key + ": expected a scalar or 'min:max:step', got '" + text +
                                    "'");
    }
    const double min = parse_double(key, parts[0]);
    const double max = parse_double(key, parts[1]);
    const double step = parse_double(key, parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument(key + ": step must be positive");
    if (max < min) throw std::invalid_argument(key + ": max must be >= min");

    // Inclusive arithmetic grid. The count is rounded so that an endpoint
    // within 1e-9*step of min + n*step is kept despite accumulated rounding.
    const long n = std::lround(std::floor((max - min) / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) grid.push_back(min + static_cast<double>(k) * step);
    return grid;
}

Matrix4c parse_initial_state(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "00") return projector_00();
    if (t == "11") return projector_11();
    if (t == "10") return projector_10();
    if (t == "singlet") return singlet_projector();

    const std::vector<std::string> parts = split(t, ',');
    if (parts.size() != 32) {
        throw std::invalid_argument(
            key + ": expected a preset (00, 11, 10, singlet) or 32 comma-separated reals "
                  "(16 row-major entries, real/imag interleaved), got " +
            std::to_string(parts.size()) + " fields");
    }
    Matrix4c rho;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const int base = 2 * (4 * i + j);
            rho(i, j) = Complex(parse_double(key, parts[base]), parse_double(key, parts[base + 1]));
        }
    }
    if (!is_valid_density(rho)) {
        throw std::invalid_argument(key +
                                    ": matrix is not a density matrix (must be Hermitian, "
                                    "unit-trace, positive semidefinite)");
    }
    return rho;
}

void write_steady_state_csv(const std::string& path, const std::vector<SteadyStateRow>& rows) {
    std::ofstream out = open_output(path);
    out << "omega,lambda,R,C";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            out << ",rho_" << i << j << "_re,rho_" << i << j << "_im";
        }
    }
    out << "\n";
    for (const SteadyStateRow& row : rows) {
        out << format_full(row.omega) << ',' << format_full(row.lambda) << ','
            << format_full(row.r_value) << ',' << format_full(row.concurrence);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                out << ',' << format_full(row.rho(i, j).real()) << ','
                    << format_full(row.rho(i, j).imag());
            }
        }
        out << "\n";
    }
    finish_output(out, path);
}

void write_trajectory_csv(const std::string& path, const EnsembleResult& result) {
    std::ofstream out = open_output(path);
    out << "t,C_mean_state,C_mean_of_C,stderr,I_mean\n";
    for (std::size_t j = 0; j < result.times.size(); ++j) {
        out << format_full(result.times[j]) << ',' << format_full(result.concurrence_of_mean[j])
            << ',' << format_full(result.mean_concurrence[j]) << ','
            << format_full(result.standard_error[j]) << ',' << format_full(result.mean_current[j])
            << "\n";
    }
    finish_output(out, path);
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out = open_output(path);
    out << "omega,lambda,C,stderr\n";
    const bool has_error = !result.statistical_error.empty();
    for (std::size_t i = 0; i < result.omega_grid.size(); ++i) {
        for (std::size_t j = 0; j < result.lambda_grid.size(); ++j) {
            const double err = has_error ? result.statistical_error[i][j] : 0.0;
            out << format_full(result.omega_grid[i]) << ',' << format_full(result.lambda_grid[j])
                << ',' << format_full(result.concurrence[i][j]) << ',' << format_full(err) << "\n";
        }
    }
    finish_output(out, path);
}

void write_sweep_optima_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out = open_output(path);
    out << "omega,c_hat,lambda_hat\n";
    for (std::size_t i = 0; i < result.omega_grid.size(); ++i) {
        out << format_full(result.omega_grid[i]) << ',' << format_full(result.c_hat[i]) << ','
            << format_full(result.lambda_hat[i]) << "\n";
    }
    finish_output(out, path);
}

void write_text_file(const std::string& path, const std::string& json_text) {
    std::ofstream out = open_output(path);
    out << json_text;
    finish_output(out, path);
}

}  // namespace dimerfb
