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
// Serialization and argument-parsing helpers shared by the command-line
// driver and the test suite.
//
// All floating-point output uses 17 significant digits ("%.17g"), which is
// enough for a double to survive a text round trip bit-exactly.  The CSV
// schemas here are the interchange format consumed by tools/plot_figures.py
// and by downstream analysis scripts, so column names and order are part of
// the public contract and must not be reordered.

#ifndef DIMERFB_IO_HPP_
#define DIMERFB_IO_HPP_

#include <string>
#include <vector>

#include "dimerfb/algebra.hpp"
#include "dimerfb/sweep.hpp"
#include "dimerfb/trajectories.hpp"

namespace dimerfb {

// Formats a double with 17 significant digits.  Values parse back to the
// identical bit pattern; NaN and infinities render as "nan"/"inf"/"-inf".
std::string format_full(double value);

// Parses a grid specification.  Accepts either a single scalar ("0.4") or an
// inclusive range "min:max:step" with step > 0 and max >= min.  The grid is
// generated as min + k*step for k = 0, 1, ...; the right endpoint is included
// when it lands within 1e-9*step of a grid point (so "0:5:0.05" has 101
// entries despite rounding).  Throws std::invalid_argument naming `key` on a
// malformed specification.
std::vector<double> parse_grid(const std::string& key, const std::string& text);

// Parses an initial density matrix.  Accepts one of the preset names
//   00, 11, 10, singlet
// or an explicit matrix as 32 comma-separated reals: the 16 entries of rho in
// row-major order over the basis {|11>, |10>, |01>, |00>}, each entry given as
// its real part followed by its imaginary part.  The explicit form is
// validated (Hermitian, unit trace, positive semidefinite).  Throws
// std::invalid_argument naming `key` on a malformed or unphysical input.
Matrix4c parse_initial_state(const std::string& key, const std::string& text);

// One row of the steady-state table: the closed-form stationary state at a
// single (omega, lambda) grid point.
struct SteadyStateRow {
  double omega = 0.0;
  double lambda = 0.0;
  double r_value = 0.0;    // conserved weight R = Tr[rho (I + SWAP)]
  double concurrence = 0.0;
  Matrix4c rho = Matrix4c::Zero();
};

// Writes the steady-state table:
//   omega,lambda,R,C,rho_00_re,rho_00_im,...,rho_33_re,rho_33_im
// with the 16 density-matrix entries in row-major order, real and imaginary
// parts interleaved.  Throws std::runtime_error when the file cannot be
// written.
void write_steady_state_csv(const std::string& path,
                            const std::vector<SteadyStateRow>& rows);

// Writes the ensemble-trajectory table:
//   t,C_mean_state,C_mean_of_C,stderr,I_mean
// one row per stored time.  C_mean_state is the concurrence of the ensemble
// mean state, C_mean_of_C the ensemble mean of per-trajectory concurrences,
// stderr the trace-distance standard error of the mean state, and I_mean the
// ensemble-averaged measurement current.
void write_trajectory_csv(const std::string& path, const EnsembleResult& result);

// Writes the sweep surface as long-format rows:
//   omega,lambda,C,stderr
// one row per (omega, lambda) cell in grid order.  Cells never evaluated
// (outside the refinement window of a Bayesian sweep) hold NaN and render as
// "nan".  stderr is 0 for closed-form modes.
void write_sweep_csv(const std::string& path, const SweepResult& result);

// Writes the per-omega optimum table:
//   omega,c_hat,lambda_hat
void write_sweep_optima_csv(const std::string& path, const SweepResult& result);

// Writes `json_text` (an already-serialized JSON document) to `path`.  The
// driver assembles the run manifest -- resolved configuration, tool version,
// seed, wall-clock time, output files -- and serializes it before calling
// this.
void write_text_file(const std::string& path, const std::string& json_text);

}  // namespace dimerfb

#endif  // DIMERFB_IO_HPP_
