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

#include "dimerfb/algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace dimerfb {

namespace {

OperatorSet build_operators() {
    OperatorSet ops;
    const Complex i(0.0, 1.0);

    // Single-qubit operators in the local ordering {|1>, |0>}; the lowering
    // operator maps |1> -> |0>, i.e. it has the 1 below the diagonal.
    Matrix2c sig, sx, sy, sz, id2;
    sig << 0, 0,
           1, 0;
    sx << 0, 1,
          1, 0;
    sy << 0, -i,
          i, 0;
    sz << 1, 0,
          0, -1;
    id2.setIdentity();

    ops.sigma1q = sig;
    ops.sigma1 = Eigen::kroneckerProduct(sig, id2);
    ops.sigma2 = Eigen::kroneckerProduct(id2, sig);
    ops.sigma1_dag = ops.sigma1.adjoint();
    ops.sigma2_dag = ops.sigma2.adjoint();
    ops.pauli_x1 = Eigen::kroneckerProduct(sx, id2);
    ops.pauli_y1 = Eigen::kroneckerProduct(sy, id2);
    ops.pauli_z1 = Eigen::kroneckerProduct(sz, id2);
    ops.pauli_x2 = Eigen::kroneckerProduct(id2, sx);
    ops.pauli_y2 = Eigen::kroneckerProduct(id2, sy);
    ops.pauli_z2 = Eigen::kroneckerProduct(id2, sz);
    ops.Sigma = ops.sigma1 + ops.sigma2;
    ops.Sigma_dag = ops.Sigma.adjoint();
    ops.Sigma_x = ops.Sigma + ops.Sigma_dag;

    // I + SWAP: block-diagonal 2, [[1,1],[1,1]], 2; commutes with every
    // collective (exchange-symmetric) operator.
    Matrix4c O = Matrix4c::Zero();
    O(0, 0) = 2.0;
    O(1, 1) = 1.0;
    O(1, 2) = 1.0;
    O(2, 1) = 1.0;
    O(2, 2) = 1.0;
    O(3, 3) = 2.0;
    ops.conserved_op = O;
    return ops;
}

Matrix4c basis_projector(int k) {
    Matrix4c p = Matrix4c::Zero();
    p(k, k) = 1.0;
    return p;
}

}  // namespace

const OperatorSet& operators() {
    static const OperatorSet ops = build_operators();
    return ops;
}

Matrix4c projector_11() { return basis_projector(0); }
Matrix4c projector_10() { return basis_projector(1); }
Matrix4c projector_01() { return basis_projector(2); }
Matrix4c projector_00() { return basis_projector(3); }

Matrix4c singlet_projector() {
    // |a> = (|10> - |01>)/sqrt(2): rho_a has 1/2 on the middle diagonal and
    // -1/2 on the middle off-diagonal entries.
    Matrix4c rho = Matrix4c::Zero();
    rho(1, 1) = 0.5;
    rho(2, 2) = 0.5;
    rho(1, 2) = -0.5;
    rho(2, 1) = -0.5;
    return rho;
}

Matrix4c maximally_mixed() { return 0.25 * Matrix4c::Identity(); }

double min_eigenvalue(const Matrix4c& rho) {
    const Matrix4c herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_valid_density(const Matrix4c& rho, double positivity_floor) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) return false;
    if (std::abs(rho.trace().real() - 1.0) > kTraceTol || std::abs(rho.trace().imag()) > kTraceTol) return false;
    return min_eigenvalue(rho) >= positivity_floor;
}

void require_valid_density(const Matrix4c& rho, double positivity_floor) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw std::invalid_argument("density matrix is not Hermitian within 1e-12");
    }
    const Complex tr = rho.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
        std::ostringstream msg;
        msg << "density matrix trace " << tr.real() << " violates unit trace within 1e-10";
        throw std::invalid_argument(msg.str());
    }
    const double min_eig = min_eigenvalue(rho);
    if (min_eig < positivity_floor) {
        std::ostringstream msg;
        msg << "density matrix minimum eigenvalue " << min_eig << " below positivity floor " << positivity_floor;
        throw std::invalid_argument(msg.str());
    }
}

double trace_distance(const Matrix4c& rho1, const Matrix4c& rho2) {
    const Matrix4c diff = 0.5 * ((rho1 - rho2) + (rho1 - rho2).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix4c dissipator(const Matrix4c& L, const Matrix4c& rho) {
    const Matrix4c LdL = L.adjoint() * L;
    return L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

Matrix4c h_superoperator(const Matrix4c& L, const Matrix4c& rho) {
    const Matrix4c sandwich = L * rho + rho * L.adjoint();
    return sandwich - sandwich.trace() * rho;
}

Vector15 vectorize(const Matrix4c& rho) {
    Vector15 v;
    v << rho(0, 0).real(),                      // A
        rho(0, 1).real(), rho(0, 1).imag(),     // B
        rho(0, 2).real(), rho(0, 2).imag(),     // C
        rho(0, 3).real(), rho(0, 3).imag(),     // D
        rho(1, 1).real(),                       // E
        rho(1, 2).real(), rho(1, 2).imag(),     // F
        rho(1, 3).real(), rho(1, 3).imag(),     // G
        rho(2, 2).real(),                       // H
        rho(2, 3).real(), rho(2, 3).imag();     // I
    return v;
}

Matrix4c devectorize(const Vector15& v) {
    Matrix4c rho;
    const Complex B(v[1], v[2]), C(v[3], v[4]), D(v[5], v[6]);
    const Complex F(v[8], v[9]), G(v[10], v[11]), I(v[13], v[14]);
    const double A = v[0], E = v[7], H = v[12];
    rho << A, B, C, D,
        std::conj(B), E, F, G,
        std::conj(C), std::conj(F), H, I,
        std::conj(D), std::conj(G), std::conj(I), 1.0 - A - E - H;
    return rho;
}

double conserved_R(const Matrix4c& rho) {
    return (rho * operators().conserved_op).trace().real();
}

}  // namespace dimerfb
