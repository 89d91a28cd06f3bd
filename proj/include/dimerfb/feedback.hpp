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

#ifndef DIMERFB_FEEDBACK_HPP_
#define DIMERFB_FEEDBACK_HPP_

// The two control laws.
//
// Markovian feedback feeds the homodyne current straight back as a drive
// lambda * I(t) * Sigma_x. Its ensemble average is the closed master
// equation in module master (markovian_me_rhs); the trajectory-level Ito
// form lives here as markovian_trajectory_drift so the equivalence can be
// checked numerically.
//
// Bayesian feedback drives with f(rho) * Sigma_x where f depends on the
// conditioned state itself: f = lambda * sgn[C(rho(t)) - C(rho(t - dt_c))],
// i.e. keep driving with the same sign while the concurrence of the
// estimated state grows, flip the sign when it shrinks. No averaged master
// equation exists for it; it is simulated with module trajectories.

#include <cstddef>
#include <utility>
#include <vector>

#include "dimerfb/algebra.hpp"

namespace dimerfb {

// Sign decisions ignore concurrence changes at or below this magnitude;
// the controller then keeps its previous sign (a two-state toggle, never 0).
inline constexpr double kSignDeadband = 1e-12;

// State of the sign-of-concurrence-change controller for one trajectory.
// The comparison interval dt_c is expressed in integrator steps
// (window_steps = round(dt_c / dt), at least 1, default one step). The ring
// buffer holds the last window_steps concurrence values, pre-filled with
// C(rho0) so early steps compare against the initial state.
struct BayesianControllerState {
    double lambda = 0.0;
    int window_steps = 1;
    double last_concurrence = 0.0;
    double last_sign = 1.0;  // +1 or -1; starts at +1 by convention
    std::vector<double> history;
    std::size_t head = 0;  // index of the oldest buffered value

    static BayesianControllerState create(double lambda, int window_steps,
                                          const Matrix4c& rho0);
};

// One controller decision: computes C(rho), compares it against the value
// window_steps steps ago, returns f = lambda * sign and updates the state.
// Output is always +lambda or -lambda.
double bayesian_control(BayesianControllerState& ctrl, const Matrix4c& rho);

// Drift and dW-coefficient of the Markovian-feedback stochastic master
// equation (the Ito form whose ensemble mean is markovian_me_rhs):
//   drift     = markovian_me_rhs(rho, omega, lambda)
//   diffusion = H[-i(Sigma + lambda Sigma_x)] rho
// At lambda = 0 this reduces to the uncontrolled conditioned equation
// (me_rhs, H[-i Sigma] rho).
std::pair<Matrix4c, Matrix4c> markovian_trajectory_drift(const Matrix4c& rho,
                                                         double omega,
                                                         double lambda);

}  // namespace dimerfb

#endif  // DIMERFB_FEEDBACK_HPP_
