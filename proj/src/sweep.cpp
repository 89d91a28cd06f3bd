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

#include "dimerfb/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "dimerfb/entanglement.hpp"
#include "dimerfb/errors.hpp"
#include "dimerfb/rng.hpp"

namespace dimerfb {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Exchange weight R = Tr(rho (I + SWAP)) of the initial state; conserved by
// every mode, it selects the stationary state the closed forms evaluate.
double exchange_weight(const Matrix4c& rho) {
    return (operators().conserved_op * rho).trace().real();
}

// One closed-form cell, deferring to the linear-algebra path at the isolated
// Markovian degeneracy where the rational form is 0/0 but the steady state
// reached from a concrete initial state is still unique.
double closed_form_cell(FeedbackMode mode, const Matrix4c& initial_state, double R, double omega,
                        double lambda) {
    try {
        return concurrence_of_stationary(omega, lambda, mode, R);
    } catch (const DegenerateStationaryPoint&) {
        const StationaryState st = steady_state(initial_state, build_generator(omega, lambda, mode));
        return concurrence(st.rho_inf).value;
    }
}

// Outcome of one Bayesian Monte Carlo cell.
struct BayesCell {
    double value = kNaN;
    double error = kNaN;
    bool stationary = false;
};

BayesCell bayesian_cell(const Matrix4c& initial_state, double omega, double lambda,
                        const MonteCarloParams& mc, std::uint64_t master_seed) {
    const ControllerSpec controller = ControllerSpec::bayesian(lambda, mc.window_steps);
    EnsembleOptions options;
    options.store_stride = mc.store_stride;
    options.n_threads = mc.n_threads;
    const EnsembleResult ens =
        ensemble_average(initial_state, omega, controller, mc.dt, mc.t_final, mc.n_trajectories,
                         sweep_cell_seed(master_seed, omega, lambda), options);

    // Tail = the last 10% of the window. The stored grid always contains the
    // final time, so the tail is nonempty.
    const double tail_start = 0.9 * mc.t_final;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < ens.times.size(); ++j) {
        if (ens.times[j] < tail_start) continue;
        const double c = ens.concurrence_of_mean[j];
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        sum += c;
        ++count;
    }
    BayesCell cell;
    cell.error = ens.standard_error.back();
    cell.stationary = (hi - lo) < cell.error;
    cell.value = sum / count;
    return cell;
}

// Argmax over one omega row with the tie rule "prefer the smallest |lambda|".
// NaN cells (never evaluated / excluded) are skipped.
void row_argmax(const std::vector<double>& lambdas, const std::vector<double>& values,
                double* c_hat, double* lambda_hat) {
    *c_hat = kNaN;
    *lambda_hat = kNaN;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double c = values[j];
        if (std::isnan(c)) continue;
        const bool better =
            std::isnan(*c_hat) || c > *c_hat ||
            (c == *c_hat && std::abs(lambdas[j]) < std::abs(*lambda_hat));
        if (better) {
            *c_hat = c;
            *lambda_hat = lambdas[j];
        }
    }
}

}  // namespace

std::uint64_t sweep_cell_seed(std::uint64_t master_seed, double omega, double lambda) {
    // Chain two splitmix64 rounds over the parameter bit patterns. Keying on
    // values (not grid indices) keeps coarse-stage seeds stable when the
    // refinement stage adds cells.
    std::uint64_t s = master_seed ^ std::bit_cast<std::uint64_t>(omega);
    (void)splitmix64_next(s);
    s ^= std::bit_cast<std::uint64_t>(lambda);
    (void)splitmix64_next(s);
    return s;
}

SweepResult sweep(FeedbackMode mode, const Matrix4c& initial_state,
                  const std::vector<double>& omega_grid, const std::vector<double>& lambda_grid,
                  const std::optional<MonteCarloParams>& mc) {
    if (omega_grid.empty() || lambda_grid.empty()) {
        throw std::invalid_argument("sweep: omega and lambda grids must be nonempty");
    }
    if (mode == FeedbackMode::Bayesian && !mc.has_value()) {
        throw std::invalid_argument("sweep: Bayesian mode requires MonteCarloParams");
    }
    require_valid_density(initial_state);

    SweepResult result;
    result.mode = mode;
    result.initial_state = initial_state;
    result.omega_grid = omega_grid;

    const std::size_t n_omega = omega_grid.size();

    if (mode != FeedbackMode::Bayesian) {
        const double R = exchange_weight(initial_state);
        result.lambda_grid = lambda_grid;
        result.concurrence.assign(n_omega, std::vector<double>(lambda_grid.size(), kNaN));
        result.c_hat.assign(n_omega, kNaN);
        result.lambda_hat.assign(n_omega, kNaN);
        for (std::size_t i = 0; i < n_omega; ++i) {
            for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
                result.concurrence[i][j] =
                    closed_form_cell(mode, initial_state, R, omega_grid[i], lambda_grid[j]);
            }
            row_argmax(result.lambda_grid, result.concurrence[i], &result.c_hat[i],
                       &result.lambda_hat[i]);
        }
        return result;
    }

    // Bayesian: per omega, a coarse scan over the requested lambda range and
    // one refinement around the coarse argmax. All candidate amplitudes live
    // on the integer lattice  lambda_lo + idx * kFineLambdaStep  (the coarse
    // step is an exact multiple of the fine one), so a value evaluated by
    // both stages is represented by the same index and the same double.
    const auto [lo_it, hi_it] = std::minmax_element(lambda_grid.begin(), lambda_grid.end());
    const double lambda_lo = *lo_it;
    const long n_lattice = std::lround((*hi_it - lambda_lo) / kFineLambdaStep);
    const long coarse_stride = std::lround(kCoarseLambdaStep / kFineLambdaStep);
    const auto lattice_lambda = [&](long idx) {
        return lambda_lo + static_cast<double>(idx) * kFineLambdaStep;
    };

    // cells[i] maps lattice index -> outcome for omega_grid[i].
    std::vector<std::map<long, BayesCell>> cells(n_omega);

    for (std::size_t i = 0; i < n_omega; ++i) {
        const double omega = omega_grid[i];
        auto evaluate = [&](long idx) {
            if (cells[i].count(idx)) return;
            BayesCell cell =
                bayesian_cell(initial_state, omega, lattice_lambda(idx), *mc, mc->master_seed);
            if (!cell.stationary) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "Bayesian cell (omega=%g, lambda=%g) not stationary by t=%g; "
                              "excluded from argmax",
                              omega, lattice_lambda(idx), mc->t_final);
                result.warnings.emplace_back(buf);
                std::fprintf(stderr, "warning: %s\n", buf);
            }
            cells[i].emplace(idx, cell);
        };

        for (long idx = 0; idx < n_lattice; idx += coarse_stride) evaluate(idx);
        evaluate(n_lattice);  // the upper end of the range, on or off stride

        // Coarse argmax over stationary cells, smallest |lambda| on ties.
        double best = -1.0;
        long best_idx = -1;
        for (const auto& [idx, cell] : cells[i]) {
            if (!cell.stationary) continue;
            const bool better =
                best_idx < 0 || cell.value > best ||
                (cell.value == best &&
                 std::abs(lattice_lambda(idx)) < std::abs(lattice_lambda(best_idx)));
            if (better) {
                best = cell.value;
                best_idx = idx;
            }
        }
        if (best_idx >= 0) {
            const long fine_lo = std::max(0L, best_idx - coarse_stride);
            const long fine_hi = std::min(n_lattice, best_idx + coarse_stride);
            for (long idx = fine_lo; idx <= fine_hi; ++idx) evaluate(idx);
        }
    }

    // Assemble the union lambda grid and the rectangular per-cell arrays.
    std::vector<long> union_idx;
    for (const auto& row : cells) {
        for (const auto& [idx, cell] : row) union_idx.push_back(idx);
    }
    std::sort(union_idx.begin(), union_idx.end());
    union_idx.erase(std::unique(union_idx.begin(), union_idx.end()), union_idx.end());

    const std::size_t n_lambda = union_idx.size();
    result.lambda_grid.resize(n_lambda);
    for (std::size_t j = 0; j < n_lambda; ++j) result.lambda_grid[j] = lattice_lambda(union_idx[j]);

    result.concurrence.assign(n_omega, std::vector<double>(n_lambda, kNaN));
    result.statistical_error.assign(n_omega, std::vector<double>(n_lambda, kNaN));
    result.stationary.assign(n_omega, std::vector<bool>(n_lambda, false));
    result.c_hat.assign(n_omega, kNaN);
    result.lambda_hat.assign(n_omega, kNaN);

    for (std::size_t i = 0; i < n_omega; ++i) {
        std::vector<double> argmax_row(n_lambda, kNaN);
        for (std::size_t j = 0; j < n_lambda; ++j) {
            const auto it = cells[i].find(union_idx[j]);
            if (it == cells[i].end()) continue;
            result.concurrence[i][j] = it->second.value;
            result.statistical_error[i][j] = it->second.error;
            result.stationary[i][j] = it->second.stationary;
            if (it->second.stationary) argmax_row[j] = it->second.value;
        }
        row_argmax(result.lambda_grid, argmax_row, &result.c_hat[i], &result.lambda_hat[i]);
        if (std::isnan(result.c_hat[i])) {
            char buf[120];
            std::snprintf(buf, sizeof buf,
                          "no stationary Bayesian cell at omega=%g; c_hat undefined",
                          omega_grid[i]);
            result.warnings.emplace_back(buf);
            std::fprintf(stderr, "warning: %s\n", buf);
        }
    }
    return result;
}

}  // namespace dimerfb
