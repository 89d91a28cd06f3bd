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

#pragma once

// Deterministic master-equation machinery.
//
// THE MODEL. Two qubits decay collectively into a common environment through
// the collective lowering operator Sigma = sigma_1 + sigma_2 and are driven
// by a resonant classical field omega * Sigma_x:
//
//     drho/dt = -i omega [Sigma_x, rho] + D[Sigma] rho.                  (ME)
//
// The emitted field is monitored by homodyne detection of the y quadrature
// of the collective emission; the measurement operator entering the
// conditioned dynamics is -i Sigma, with homodyne current
//
//     I dt = Tr(-i Sigma rho + i rho Sigma^dag) dt + dW.
//
// Markovian feedback adds the current-proportional Hamiltonian
// lambda I(t) Sigma_x. Averaging over the measurement noise yields the
// feedback master equation
//
//     drho/dt = -i [H_eff, rho] + D[Sigma + lambda Sigma_x] rho,
//     H_eff   = omega Sigma_x
//             + (i lambda / 2)(Sigma^dag Sigma_x - Sigma_x Sigma),       (FME)
//
// which reduces to (ME) at lambda = 0.
//
// Both equations are affine in the 15-vector parametrization:
// vdot = M v - w; the 15x15 generators are hard-coded here AND cross-checked
// against finite-difference Jacobians of the matrix-valued right-hand sides
// in the test suite (transcription errors in 15x15 matrices being the single
// most likely bug, the dual derivation makes them detectable).
//
// Steady states: the generator is singular by design (rho_a, the singlet, is
// always a dark fixed point alongside the in-sector stationary state), so
// plain solves are ill-posed. steady_state() augments the linear system with
// every conserved functional of the dynamics - at generic parameters exactly
// one, the exchange-symmetry weight R = Tr(rho (I + SWAP)) - evaluated on
// the initial state, which pins the long-time limit uniquely.

#include <vector>

#include "dimerfb/algebra.hpp"

namespace dimerfb {

enum class FeedbackMode { NoFeedback, Markovian, Bayesian };

// Affine generator of the vectorized master equation vdot = M v - w.
struct AffineGenerator {
    Matrix15 M;
    Vector15 w;
    double omega = 0.0;
    double lambda = 0.0;
    FeedbackMode mode = FeedbackMode::NoFeedback;
};

// Stationary state decomposed as rho_inf = (R/2) rho_s + ((2-R)/2) rho_a,
// with rho_a the singlet projector and rho_s the symmetric-sector stationary
// state (independent of the initial state at fixed parameters).
struct StationaryState {
    Matrix4c rho_inf;
    Matrix4c rho_s;
    Matrix4c rho_a;
    double R = 2.0;
};

// Strided deterministic solution path.
struct MEPath {
    std::vector<double> times;
    std::vector<Matrix4c> states;
    double dt = 0.0;
    long stride = 1;
};

// Right-hand side of (ME). Hermitian and traceless for valid rho.
Matrix4c me_rhs(const Matrix4c& rho, double omega);

// Right-hand side of (FME). Equals me_rhs at lambda = 0 exactly.
Matrix4c markovian_me_rhs(const Matrix4c& rho, double omega, double lambda);

// Hard-coded affine generator for the requested mode (lambda is ignored for
// NoFeedback). Bayesian feedback has no averaged master equation; requesting
// it here throws std::invalid_argument.
AffineGenerator build_generator(double omega, double lambda, FeedbackMode mode);

// Classical fixed-step 4th-order integration of vdot = M v - w. States are
// stored every `store_stride` steps (plus the initial and final states) and
// validated against the DensityMatrix invariants; a violation raises
// IntegrationDiverged with the offending step index.
MEPath integrate_me(const Matrix4c& rho0, const AffineGenerator& gen, double t_final, double dt,
                    long store_stride = 100);

// Stationary state reached from rho0: solves M v = w augmented with the
// conserved-functional rows valued at rho0 (rank-revealing least squares).
// Throws AmbiguousSteadyState if the augmented system is still rank
// deficient (never observed for this model; the error reports the
// generator's null-space dimension).
StationaryState steady_state(const Matrix4c& rho0, const AffineGenerator& gen);

// Closed-form stationary state. NoFeedback requires lambda = 0 and evaluates
// the rational form with denominator 12 w^4 + 4 w^2 + 1; Markovian evaluates
// the hard-coded degree-8 coefficient polynomials. The Markovian denominator
// has a single real zero, the isolated point (omega, lambda) = (1/4, -1/2),
// where the stationary state is genuinely non-unique within the symmetric
// sector; evaluation there throws DegenerateStationaryPoint and callers fall
// back to steady_state(), which remains well-posed given an initial state.
StationaryState analytic_stationary(double omega, double lambda, FeedbackMode mode, double R);

}  // namespace dimerfb
