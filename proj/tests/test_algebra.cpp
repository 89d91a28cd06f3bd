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

#include <complex>

#include "dimerfb/algebra.hpp"
#include "dimerfb/rng.hpp"

namespace {

using namespace dimerfb;

const Complex kI(0.0, 1.0);

// Random full-rank density matrix: rho = G G^dag / Tr(G G^dag) with G a
// complex Gaussian matrix (Wishart construction, uniform over full-rank
// states).
Matrix4c random_density(Xoshiro256ss& rng) {
    Matrix4c g;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.next_normal(), rng.next_normal());
    }
    Matrix4c rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

}  // namespace

TEST_CASE("basis_ordering_of_lowering_operators") {
    // index 0 = |11>, 1 = |10>, 2 = |01>, 3 = |00>. sigma1 lowers qubit 1:
    // |11> -> |01>, |10> -> |00|; sigma2 lowers qubit 2.
    const OperatorSet& ops = operators();
    Matrix4c s1 = Matrix4c::Zero();
    s1(2, 0) = 1.0;
    s1(3, 1) = 1.0;
    Matrix4c s2 = Matrix4c::Zero();
    s2(1, 0) = 1.0;
    s2(3, 2) = 1.0;
    CHECK((ops.sigma1 - s1).norm() == 0.0);
    CHECK((ops.sigma2 - s2).norm() == 0.0);
    CHECK((ops.sigma1_dag - s1.adjoint()).norm() == 0.0);
    CHECK((ops.sigma2_dag - s2.adjoint()).norm() == 0.0);
}

TEST_CASE("collective_operators_are_sums_and_satisfy_ladder_algebra") {
    const OperatorSet& ops = operators();
    CHECK((ops.Sigma - (ops.sigma1 + ops.sigma2)).norm() == 0.0);
    CHECK((ops.Sigma_dag - ops.Sigma.adjoint()).norm() == 0.0);
    CHECK((ops.Sigma_x - (ops.Sigma + ops.Sigma_dag)).norm() == 0.0);

    // Sigma^2 maps |11> to 2|00> and annihilates everything else.
    Matrix4c sigma_sq = Matrix4c::Zero();
    sigma_sq(3, 0) = 2.0;
    CHECK(((ops.Sigma * ops.Sigma) - sigma_sq).norm() == 0.0);
    CHECK((ops.Sigma * ops.Sigma * ops.Sigma).norm() == 0.0);

    // Single-qubit ladder commutators: [sigma_z, sigma_-] = -2 sigma_-.
    CHECK((ops.pauli_z1 * ops.sigma1 - ops.sigma1 * ops.pauli_z1 + 2.0 * ops.sigma1).norm() ==
          0.0);
    CHECK((ops.pauli_z2 * ops.sigma2 - ops.sigma2 * ops.pauli_z2 + 2.0 * ops.sigma2).norm() ==
          0.0);

    // Qubit-1 and qubit-2 operators act on different factors, so they
    // commute.
    CHECK((ops.pauli_x1 * ops.pauli_y2 - ops.pauli_y2 * ops.pauli_x1).norm() == 0.0);
    CHECK((ops.sigma1 * ops.sigma2_dag - ops.sigma2_dag * ops.sigma1).norm() == 0.0);
}

TEST_CASE("conserved_operator_is_identity_plus_swap_and_commutes_with_dynamics") {
    const OperatorSet& ops = operators();
    Matrix4c swap = Matrix4c::Zero();
    swap(0, 0) = 1.0;
    swap(1, 2) = 1.0;
    swap(2, 1) = 1.0;
    swap(3, 3) = 1.0;
    CHECK((ops.conserved_op - (Matrix4c::Identity() + swap)).norm() == 0.0);

    // Exchange symmetry of the collective model: I + SWAP commutes with every
    // operator entering the dynamics, which is why R is conserved.
    for (const Matrix4c& op : {ops.Sigma, ops.Sigma_dag, ops.Sigma_x}) {
        CHECK((ops.conserved_op * op - op * ops.conserved_op).norm() == 0.0);
    }
}

TEST_CASE("canonical_states_are_projectors_with_known_exchange_weight") {
    for (const Matrix4c& p :
         {projector_11(), projector_10(), projector_01(), projector_00(), singlet_projector()}) {
        CHECK(std::abs(p.trace() - 1.0) == 0.0);
        CHECK((p * p - p).norm() < 1e-15);  // pure states are idempotent
        CHECK(is_valid_density(p));
    }
    CHECK(is_valid_density(maximally_mixed()));

    // R distinguishes the symmetric sector (R = 2) from the singlet (R = 0).
    CHECK(conserved_R(projector_00()) == 2.0);
    CHECK(conserved_R(projector_11()) == 2.0);
    CHECK(conserved_R(projector_10()) == 1.0);
    CHECK(conserved_R(projector_01()) == 1.0);
    CHECK(conserved_R(singlet_projector()) == 0.0);
    CHECK(conserved_R(maximally_mixed()) == 1.5);
}

TEST_CASE("conserved_R_matches_trace_formula_on_random_states") {
    Xoshiro256ss rng(11);
    for (int k = 0; k < 1000; ++k) {
        const Matrix4c rho = random_density(rng);
        const double via_trace = (operators().conserved_op * rho).trace().real();
        CHECK(conserved_R(rho) == doctest::Approx(via_trace).epsilon(1e-13));
    }
}

TEST_CASE("density_matrix_contract_accepts_states_and_rejects_violations") {
    Xoshiro256ss rng(13);
    for (int k = 0; k < 100; ++k) CHECK(is_valid_density(random_density(rng)));

    Matrix4c not_unit_trace = 2.0 * maximally_mixed();
    CHECK(!is_valid_density(not_unit_trace));
    CHECK_THROWS_AS(require_valid_density(not_unit_trace), std::invalid_argument);

    Matrix4c not_hermitian = maximally_mixed();
    not_hermitian(0, 1) = 0.3;  // (1,0) stays zero
    CHECK(!is_valid_density(not_hermitian));
    CHECK_THROWS_AS(require_valid_density(not_hermitian), std::invalid_argument);

    Matrix4c not_positive = Matrix4c::Zero();
    not_positive(0, 0) = 1.1;
    not_positive(1, 1) = -0.1;
    CHECK(!is_valid_density(not_positive));
    CHECK_THROWS_AS(require_valid_density(not_positive), std::invalid_argument);

    // The positivity floor is a parameter: a small negative excursion can be
    // admitted explicitly (the trajectory integrator does this on purpose).
    Matrix4c small_dip = Matrix4c::Zero();
    small_dip(0, 0) = 1.000001;
    small_dip(1, 1) = -0.000001;
    CHECK(!is_valid_density(small_dip));
    CHECK(is_valid_density(small_dip, -1e-5));
}

TEST_CASE("min_eigenvalue_and_trace_distance") {
    CHECK(min_eigenvalue(projector_00()) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(min_eigenvalue(maximally_mixed()) == doctest::Approx(0.25).epsilon(1e-14));

    CHECK(trace_distance(projector_00(), projector_00()) == 0.0);
    // Orthogonal pure states are perfectly distinguishable.
    CHECK(trace_distance(projector_00(), projector_11()) == doctest::Approx(1.0).epsilon(1e-14));
    // Diagonal case by hand: eigenvalues of the difference are
    // (-1/4, -1/4, -1/4, 3/4), so TD = 3/4.
    CHECK(trace_distance(maximally_mixed(), projector_00()) ==
          doctest::Approx(0.75).epsilon(1e-14));

    Xoshiro256ss rng(17);
    for (int k = 0; k < 200; ++k) {
        const Matrix4c a = random_density(rng);
        const Matrix4c b = random_density(rng);
        const Matrix4c c = random_density(rng);
        const double dab = trace_distance(a, b);
        CHECK(dab >= 0.0);
        CHECK(dab <= 1.0 + 1e-14);
        CHECK(dab == doctest::Approx(trace_distance(b, a)).epsilon(1e-13));
        CHECK(dab <= trace_distance(a, c) + trace_distance(c, b) + 1e-13);
    }
}

TEST_CASE("dissipator_on_doubly_excited_state_matches_hand_computation") {
    // D[Sigma] |11><11| = (|01>+|10>)(<01|+<10|) - 2 |11><11|, exactly.
    const OperatorSet& ops = operators();
    Matrix4c expected = Matrix4c::Zero();
    expected(1, 1) = 1.0;
    expected(1, 2) = 1.0;
    expected(2, 1) = 1.0;
    expected(2, 2) = 1.0;
    expected(0, 0) = -2.0;
    CHECK((dissipator(ops.Sigma, projector_11()) - expected).norm() == 0.0);
}

TEST_CASE("superoperators_preserve_hermiticity_and_trace_on_random_states") {
    const OperatorSet& ops = operators();
    const Matrix4c meas = -kI * ops.Sigma;  // y-quadrature measurement operator
    Xoshiro256ss rng(19);
    for (int k = 0; k < 1000; ++k) {
        const Matrix4c rho = random_density(rng);

        const Matrix4c d = dissipator(ops.Sigma, rho);
        CHECK(std::abs(d.trace()) < 1e-14);
        CHECK((d - d.adjoint()).norm() < 1e-13);

        const Matrix4c h = h_superoperator(meas, rho);
        CHECK(std::abs(h.trace()) < 1e-14);
        CHECK((h - h.adjoint()).norm() < 1e-13);
    }
}

TEST_CASE("dark_states_are_annihilated_by_dissipation_and_measurement") {
    // Sigma kills both |00> and the singlet, so dissipator and measurement
    // backaction vanish there identically.
    const OperatorSet& ops = operators();
    const Matrix4c meas = -kI * ops.Sigma;
    for (const Matrix4c& rho : {projector_00(), singlet_projector()}) {
        CHECK(dissipator(ops.Sigma, rho).norm() == 0.0);
        CHECK(h_superoperator(meas, rho).norm() == 0.0);
    }
}

TEST_CASE("vectorize_devectorize_is_a_bijection") {
    Xoshiro256ss rng(23);
    for (int k = 0; k < 1000; ++k) {
        const Matrix4c rho = random_density(rng);
        const Matrix4c back = devectorize(vectorize(rho));
        // The (3,3) entry is reconstructed from unit trace, everything else
        // is copied, so the round trip is exact up to one subtraction.
        CHECK((back - rho).norm() < 1e-15);
        CHECK(std::abs(back.trace() - 1.0) == 0.0);  // trace exact by construction
        CHECK((back - back.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("vectorize_component_order_is_pinned") {
    // v = (A, B_R, B_I, C_R, C_I, D_R, D_I, E, F_R, F_I, G_R, G_I, H, I_R, I_I)
    Matrix4c rho = Matrix4c::Zero();
    rho(0, 0) = 0.10;                    // A
    rho(0, 1) = Complex(0.01, 0.02);     // B
    rho(0, 2) = Complex(0.03, 0.04);     // C
    rho(0, 3) = Complex(0.05, 0.06);     // D
    rho(1, 1) = 0.20;                    // E
    rho(1, 2) = Complex(0.07, 0.08);     // F
    rho(1, 3) = Complex(0.09, 0.11);     // G
    rho(2, 2) = 0.30;                    // H
    rho(2, 3) = Complex(0.12, 0.13);     // I
    rho(3, 3) = 0.40;
    rho = (rho + Matrix4c(rho.adjoint())).eval();
    for (int i = 0; i < 4; ++i) rho(i, i) *= 0.5;

    const Vector15 v = vectorize(rho);
    const double expected[15] = {0.10, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.20,
                                 0.07, 0.08, 0.09, 0.11, 0.30, 0.12, 0.13};
    for (int i = 0; i < 15; ++i) CHECK(v[i] == doctest::Approx(expected[i]).epsilon(1e-15));
}
