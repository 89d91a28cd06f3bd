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

#include "dimerfb/feedback.hpp"

#include <cmath>
#include <stdexcept>

#include "dimerfb/entanglement.hpp"
#include "dimerfb/master.hpp"

namespace dimerfb {

BayesianControllerState BayesianControllerState::create(double lambda, int window_steps,
                                                        const Matrix4c& rho0) {
    if (window_steps < 1) {
        throw std::invalid_argument("BayesianControllerState: window_steps must be >= 1");
    }
    BayesianControllerState ctrl;
    ctrl.lambda = lambda;
    ctrl.window_steps = window_steps;
    ctrl.last_concurrence = concurrence_fast(rho0);
    ctrl.last_sign = 1.0;
    ctrl.history.assign(static_cast<std::size_t>(window_steps), ctrl.last_concurrence);
    ctrl.head = 0;
    return ctrl;
}

double bayesian_control(BayesianControllerState& ctrl, const Matrix4c& rho) {
    const double c_now = concurrence_fast(rho);
    const double diff = c_now - ctrl.history[ctrl.head];
    if (std::abs(diff) > kSignDeadband) {
        ctrl.last_sign = (diff > 0.0) ? 1.0 : -1.0;
    }
    // Overwrite the oldest buffered value and advance the ring.
    ctrl.history[ctrl.head] = c_now;
    ctrl.head = (ctrl.head + 1) % ctrl.history.size();
    ctrl.last_concurrence = c_now;
    return ctrl.lambda * ctrl.last_sign;
}

std::pair<Matrix4c, Matrix4c> markovian_trajectory_drift(const Matrix4c& rho, double omega,
                                                         double lambda) {
    const OperatorSet& ops = operators();
    const Matrix4c jump = Complex(0.0, -1.0) * (ops.Sigma + lambda * ops.Sigma_x);
    return {markovian_me_rhs(rho, omega, lambda), h_superoperator(jump, rho)};
}

}  // namespace dimerfb
