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

// Two-qubit operator algebra: Pauli/ladder operators, the collective
// operators of the common-environment model, superoperator building blocks,
// and the 15-real-parameter state vectorization.
//
// BASIS ORDERING (used by every matrix in this codebase):
//
//     index 0 = |11>,  1 = |10>,  2 = |01>,  3 = |00>
//
// i.e. the doubly excited state comes FIRST and the ground state LAST. Most
// quantum toolkits order the computational basis the other way around;
// mixing the two conventions silently transposes every hard-coded matrix
// below, so all fixtures and tests pin this ordering explicitly.

#include <complex>

#include <Eigen/Dense>

namespace dimerfb {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector15 = Eigen::Matrix<double, 15, 1>;
using Matrix15 = Eigen::Matrix<double, 15, 15>;

// Tolerances of the DensityMatrix validity contract.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = -1e-8;

// ---------------------------------------------------------------------------
// Operator set
// ---------------------------------------------------------------------------

// All the fixed operators of the model, in the basis ordering above.
// Integer-valued matrices are exact; no tolerance is involved.
struct OperatorSet {
    Matrix2c sigma1q;       // single-qubit lowering operator [[0,0],[1,0]]
    Matrix4c sigma1;        // lowering on qubit 1 (sigma x I)
    Matrix4c sigma2;        // lowering on qubit 2 (I x sigma)
    Matrix4c sigma1_dag;
    Matrix4c sigma2_dag;
    Matrix4c pauli_x1, pauli_y1, pauli_z1;   // Pauli operators on qubit 1
    Matrix4c pauli_x2, pauli_y2, pauli_z2;   // Pauli operators on qubit 2
    Matrix4c Sigma;         // collective lowering sigma1 + sigma2
    Matrix4c Sigma_dag;
    Matrix4c Sigma_x;       // Sigma + Sigma_dag (the classical drive operator)
    Matrix4c conserved_op;  // identity + SWAP: diagonal blocks 2, [[1,1],[1,1]], 2
};

// Returns the operator set (cheap; all members are 4x4 constants).
const OperatorSet& operators();

// ---------------------------------------------------------------------------
// Canonical states
// ---------------------------------------------------------------------------

Matrix4c projector_11();      // |11><11|
Matrix4c projector_10();      // |10><10|
Matrix4c projector_01();      // |01><01|
Matrix4c projector_00();      // |00><00|
Matrix4c singlet_projector(); // rho_a = |a><a|, |a> = (|10> - |01>)/sqrt(2)
Matrix4c maximally_mixed();   // I/4

// ---------------------------------------------------------------------------
// Density-matrix contract
// ---------------------------------------------------------------------------

// True iff rho is Hermitian (1e-12), unit trace (1e-10) and positive
// semidefinite down to minimum eigenvalue >= -1e-8. Positivity is monitored,
// never repaired by projection: projecting would mask integrator bugs.
bool is_valid_density(const Matrix4c& rho, double positivity_floor = kPositivityTol);

// Throws std::invalid_argument naming the violated invariant if rho is not a
// valid density matrix.
void require_valid_density(const Matrix4c& rho, double positivity_floor = kPositivityTol);

// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const Matrix4c& rho);

// Trace distance (1/2)||rho1 - rho2||_1 via eigenvalues of the Hermitian
// difference.
double trace_distance(const Matrix4c& rho1, const Matrix4c& rho2);

// ---------------------------------------------------------------------------
// Superoperator building blocks
// ---------------------------------------------------------------------------

// Lindblad dissipator D[L]rho = L rho L^dag - (1/2){L^dag L, rho}.
// Hermitian and traceless for Hermitian rho.
Matrix4c dissipator(const Matrix4c& L, const Matrix4c& rho);

// Homodyne measurement superoperator
//   H[L]rho = L rho + rho L^dag - Tr(L rho + rho L^dag) rho.
// Traceless by construction.
Matrix4c h_superoperator(const Matrix4c& L, const Matrix4c& rho);

// ---------------------------------------------------------------------------
// 15-vector state parametrization
// ---------------------------------------------------------------------------

// The density matrix is parametrized as
//
//     rho = [ A      B      C      D   ]
//           [ B*     E      F      G   ]      (rows/cols |11>,|10>,|01>,|00>)
//           [ C*     F*     H      I   ]
//           [ D*     G*     I*     1-A-E-H ]
//
// and vectorized in the fixed componentwise order
//
//     v = (A, B_R, B_I, C_R, C_I, D_R, D_I, E, F_R, F_I, G_R, G_I, H, I_R, I_I)
//
// with X = X_R + i X_I. The (4,4) entry is eliminated by unit trace, making
// vectorize/devectorize an exact bijection on trace-one Hermitian matrices.
Vector15 vectorize(const Matrix4c& rho);
Matrix4c devectorize(const Vector15& v);

// Conserved exchange-symmetry weight R = Tr(rho (I + SWAP)) = 2 + 2 F_R - E - H.
// R = 2 on the symmetric subspace, R = 0 on the singlet; constant under every
// master equation and trajectory in this codebase (all operators are
// collective, hence exchange-symmetric).
double conserved_R(const Matrix4c& rho);

}  // namespace dimerfb
