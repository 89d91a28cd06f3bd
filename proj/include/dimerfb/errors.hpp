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

#include <stdexcept>
#include <string>

namespace dimerfb {

// Base class for all simulator-specific failures so callers can catch the
// whole family at once. Contract violations (bad arguments, malformed
// states) use std::invalid_argument instead.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic integration left the valid-state manifold (trace, Hermiticity
// or positivity beyond tolerance). Reports the offending step index.
class IntegrationDiverged : public SimulationError {
public:
    IntegrationDiverged(const std::string& what, long step) : SimulationError(what), step_index(step) {}
    long step_index;
};

// A stochastic Euler-Maruyama step produced a state with minimum eigenvalue
// below the hard floor; the standard remedy is a smaller dt.
class StepInstability : public SimulationError {
public:
    StepInstability(const std::string& what, long step, double min_eigenvalue)
        : SimulationError(what), step_index(step), min_eig(min_eigenvalue) {}
    long step_index;
    double min_eig;
};

// The constrained stationary solve remained rank-deficient even after
// augmenting with every conserved functional; carries the null-space
// dimension of the generator at the operating point.
class AmbiguousSteadyState : public SimulationError {
public:
    AmbiguousSteadyState(const std::string& what, int null_dim) : SimulationError(what), null_dimension(null_dim) {}
    int null_dimension;
};

// The closed-form stationary state is evaluated at (or numerically on top of)
// the isolated parameter point where its denominator vanishes and the limit
// is direction-dependent. Callers should fall back to the constrained linear
// solve, which remains well-posed given an initial state.
class DegenerateStationaryPoint : public SimulationError {
public:
    DegenerateStationaryPoint(const std::string& what, double omega_, double lambda_)
        : SimulationError(what), omega(omega_), lambda(lambda_) {}
    double omega;
    double lambda;
};

}  // namespace dimerfb
