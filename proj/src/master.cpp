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

#include "dimerfb/master.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "dimerfb/errors.hpp"

namespace dimerfb {

namespace {

using std::pow;

// Relative singular-value threshold below which a generator direction counts
// as null (the generator norms are O(1)-O(10) on the supported parameter
// ranges, so this is far below any genuine decay rate).
constexpr double kNullTol = 1e-10;

Matrix15 nofeedback_matrix(double o) {
    Matrix15 M = Matrix15::Zero();
    M(0, 0) = -2;
    M(0, 2) = -2 * o;
    M(0, 4) = -2 * o;
    M(1, 1) = -3.0 / 2.0;
    M(1, 3) = -1.0 / 2.0;
    M(1, 6) = -o;
    M(1, 9) = -o;
    M(2, 0) = o;
    M(2, 2) = -3.0 / 2.0;
    M(2, 4) = -1.0 / 2.0;
    M(2, 5) = o;
    M(2, 7) = -o;
    M(2, 8) = -o;
    M(3, 1) = -1.0 / 2.0;
    M(3, 3) = -3.0 / 2.0;
    M(3, 6) = -o;
    M(3, 9) = o;
    M(4, 0) = o;
    M(4, 2) = -1.0 / 2.0;
    M(4, 4) = -3.0 / 2.0;
    M(4, 5) = o;
    M(4, 8) = -o;
    M(4, 12) = -o;
    M(5, 2) = -o;
    M(5, 4) = -o;
    M(5, 5) = -1;
    M(5, 11) = o;
    M(5, 14) = o;
    M(6, 1) = o;
    M(6, 3) = o;
    M(6, 6) = -1;
    M(6, 10) = -o;
    M(6, 13) = -o;
    M(7, 0) = 1;
    M(7, 2) = 2 * o;
    M(7, 7) = -1;
    M(7, 8) = -1;
    M(7, 11) = -2 * o;
    M(8, 0) = 1;
    M(8, 2) = o;
    M(8, 4) = o;
    M(8, 7) = -1.0 / 2.0;
    M(8, 8) = -1;
    M(8, 11) = -o;
    M(8, 12) = -1.0 / 2.0;
    M(8, 14) = -o;
    M(9, 1) = o;
    M(9, 3) = -o;
    M(9, 9) = -1;
    M(9, 10) = o;
    M(9, 13) = -o;
    M(10, 1) = 1;
    M(10, 3) = 1;
    M(10, 6) = o;
    M(10, 9) = -o;
    M(10, 10) = -1.0 / 2.0;
    M(10, 13) = -1.0 / 2.0;
    M(11, 0) = o;
    M(11, 2) = 1;
    M(11, 4) = 1;
    M(11, 5) = -o;
    M(11, 7) = 2 * o;
    M(11, 8) = o;
    M(11, 11) = -1.0 / 2.0;
    M(11, 12) = o;
    M(11, 14) = -1.0 / 2.0;
    M(12, 0) = 1;
    M(12, 4) = 2 * o;
    M(12, 8) = -1;
    M(12, 12) = -1;
    M(12, 14) = -2 * o;
    M(13, 1) = 1;
    M(13, 3) = 1;
    M(13, 6) = o;
    M(13, 9) = o;
    M(13, 10) = -1.0 / 2.0;
    M(13, 13) = -1.0 / 2.0;
    M(14, 0) = o;
    M(14, 2) = 1;
    M(14, 4) = 1;
    M(14, 5) = -o;
    M(14, 7) = o;
    M(14, 8) = o;
    M(14, 11) = -1.0 / 2.0;
    M(14, 12) = 2 * o;
    M(14, 14) = -1.0 / 2.0;
    return M;
}

Vector15 nofeedback_drift(double o) {
    Vector15 w = Vector15::Zero();
    w(11) = o;
    w(14) = o;
    return w;
}

Matrix15 markovian_matrix(double o, double l) {
    Matrix15 M = Matrix15::Zero();
    M(0, 0) = l * (-2 * l - 4) - 2;
    M(0, 2) = -2 * o;
    M(0, 4) = -2 * o;
    M(0, 5) = -2 * pow(l, 2);
    M(0, 7) = pow(l, 2);
    M(0, 8) = 2 * pow(l, 2);
    M(0, 12) = pow(l, 2);
    M(1, 1) = l * (-l - 2) - 3.0 / 2.0;
    M(1, 3) = -1.0 / 2.0;
    M(1, 6) = -o;
    M(1, 9) = -o;
    M(1, 13) = pow(l, 2);
    M(2, 0) = o;
    M(2, 2) = l * (-3 * l - 4) - 3.0 / 2.0;
    M(2, 4) = l * (-2 * l - 2) - 1.0 / 2.0;
    M(2, 5) = o;
    M(2, 7) = -o;
    M(2, 8) = -o;
    M(2, 11) = 2 * pow(l, 2);
    M(2, 14) = pow(l, 2);
    M(3, 1) = -1.0 / 2.0;
    M(3, 3) = l * (-l - 2) - 3.0 / 2.0;
    M(3, 6) = -o;
    M(3, 9) = o;
    M(3, 10) = pow(l, 2);
    M(4, 0) = o;
    M(4, 2) = l * (-2 * l - 2) - 1.0 / 2.0;
    M(4, 4) = l * (-3 * l - 4) - 3.0 / 2.0;
    M(4, 5) = o;
    M(4, 8) = -o;
    M(4, 11) = pow(l, 2);
    M(4, 12) = -o;
    M(4, 14) = 2 * pow(l, 2);
    M(5, 0) = -2 * l;
    M(5, 2) = -o;
    M(5, 4) = -o;
    M(5, 5) = l * (-2 * l - 2) - 1;
    M(5, 7) = l * (2 * l + 1);
    M(5, 8) = l * (2 * l + 2);
    M(5, 11) = o;
    M(5, 12) = l * (2 * l + 1);
    M(5, 14) = o;
    M(6, 1) = o;
    M(6, 3) = o;
    M(6, 6) = l * (-2 * l - 2) - 1;
    M(6, 10) = -o;
    M(6, 13) = -o;
    M(7, 0) = 2 * l + 1;
    M(7, 2) = 2 * o;
    M(7, 5) = l * (2 * l + 2);
    M(7, 7) = l * (-3 * l - 2) - 1;
    M(7, 8) = l * (-2 * l - 2) - 1;
    M(7, 11) = -2 * o;
    M(7, 12) = -pow(l, 2);
    M(8, 0) = 2 * l + 1;
    M(8, 2) = o;
    M(8, 4) = o;
    M(8, 5) = l * (2 * l + 2);
    M(8, 7) = l * (-2 * l - 1) - 1.0 / 2.0;
    M(8, 8) = l * (-2 * l - 2) - 1;
    M(8, 11) = -o;
    M(8, 12) = l * (-2 * l - 1) - 1.0 / 2.0;
    M(8, 14) = -o;
    M(9, 1) = o;
    M(9, 3) = -o;
    M(9, 9) = l * (-2 * l - 2) - 1;
    M(9, 10) = o;
    M(9, 13) = -o;
    M(10, 1) = 1;
    M(10, 3) = l * (l + 2) + 1;
    M(10, 6) = o;
    M(10, 9) = -o;
    M(10, 10) = -pow(l, 2) - 1.0 / 2.0;
    M(10, 13) = -1.0 / 2.0;
    M(11, 0) = o;
    M(11, 2) = l * (2 * l + 4) + 1;
    M(11, 4) = l * (l + 2) + 1;
    M(11, 5) = -o;
    M(11, 7) = 2 * o;
    M(11, 8) = o;
    M(11, 11) = l * (-3 * l - 2) - 1.0 / 2.0;
    M(11, 12) = o;
    M(11, 14) = l * (-2 * l - 2) - 1.0 / 2.0;
    M(12, 0) = 2 * l + 1;
    M(12, 4) = 2 * o;
    M(12, 5) = l * (2 * l + 2);
    M(12, 7) = -pow(l, 2);
    M(12, 8) = l * (-2 * l - 2) - 1;
    M(12, 12) = l * (-3 * l - 2) - 1;
    M(12, 14) = -2 * o;
    M(13, 1) = l * (l + 2) + 1;
    M(13, 3) = 1;
    M(13, 6) = o;
    M(13, 9) = o;
    M(13, 10) = -1.0 / 2.0;
    M(13, 13) = -pow(l, 2) - 1.0 / 2.0;
    M(14, 0) = o;
    M(14, 2) = l * (l + 2) + 1;
    M(14, 4) = l * (2 * l + 4) + 1;
    M(14, 5) = -o;
    M(14, 7) = o;
    M(14, 8) = o;
    M(14, 11) = l * (-2 * l - 2) - 1.0 / 2.0;
    M(14, 12) = 2 * o;
    M(14, 14) = l * (-3 * l - 2) - 1.0 / 2.0;
    return M;
}

Vector15 markovian_drift(double o, double l) {
    Vector15 w = Vector15::Zero();
    w(5) = pow(l, 2);
    w(7) = -pow(l, 2);
    w(8) = -pow(l, 2);
    w(11) = o;
    w(12) = -pow(l, 2);
    w(14) = o;
    return w;
}

// Symmetric-sector closed-form stationary state rho_s for the Markovian
// feedback master equation. Throws DegenerateStationaryPoint when the
// denominator cancels (isolated point (1/4, -1/2)).
Matrix4c markovian_rho_s(double o, double l) {
    const double Tden = l * (l * (l * (l * (l * (l * (l * (192 * l + 704) + 1452) + 1852) + 240 * pow(o, 2) + 1578) + 464 * pow(o, 2) + 864) + 260 * pow(o, 2) + 286) + 88 * pow(o, 2) + 52) + pow(o, 2) * (48 * pow(o, 2) + 16) + 4;
    const double numA = pow(l, 2) * (l * (l * (l * (l * (l * (64 * l + 128) + 132) + 56) + 80 * pow(o, 2) + 8) + 128 * pow(o, 2)) + 36 * pow(o, 2)) + 16 * pow(o, 4);
    const double numBI = l * (l * (l * (l * (-64 * l * o - 112 * o) - 60 * o) - 10 * o) - 16 * pow(o, 3)) - 8 * pow(o, 3);
    const double numDR = l * (l * (l * (l * (l * (l * (-64 * l - 160) - 196) - 122) - 16 * pow(o, 2) - 36) - 56 * pow(o, 2) - 4) - 40 * pow(o, 2)) - 8 * pow(o, 2);
    const double numE = l * (l * (l * (l * (l * (l * (l * (32 * l + 96) + 146) + 126) + 40 * pow(o, 2) + 65) + 72 * pow(o, 2) + 18) + 46 * pow(o, 2) + 2) + 20 * pow(o, 2)) + pow(o, 2) * (8 * pow(o, 2) + 4);
    const double numGI = l * (l * (l * (l * (-64 * l * o - 208 * o) - 236 * o) - 130 * o) + o * (-16 * pow(o, 2) - 36)) + o * (-8 * pow(o, 2) - 4);

    // Cancellation guard: compare against the same polynomial with all-
    // positive coefficients. The denominator's only real zero is the
    // isolated degenerate point (1/4, -1/2).
    const double labs = std::abs(l), oabs = std::abs(o);
    const double Tscale = labs * (labs * (labs * (labs * (labs * (labs * (labs * (192 * labs + 704) + 1452) + 1852) + 240 * pow(oabs, 2) + 1578) + 464 * pow(oabs, 2) + 864) + 260 * pow(oabs, 2) + 286) + 88 * pow(oabs, 2) + 52) + pow(oabs, 2) * (48 * pow(oabs, 2) + 16) + 4;
    if (std::abs(Tden) < 1e-12 * Tscale) {
        std::ostringstream msg;
        msg << "closed-form stationary state is degenerate at (omega=" << o << ", lambda=" << l
            << "): denominator vanishes and the symmetric-sector steady state is not unique; "
               "use steady_state() with an initial state instead";
        throw DegenerateStationaryPoint(msg.str(), o, l);
    }

    const double A = numA / Tden;
    const double BI = numBI / Tden;
    const double DR = numDR / Tden;
    const double E = numE / Tden;
    const double GI = numGI / Tden;

    Matrix4c rho = Matrix4c::Zero();
    const Complex i(0.0, 1.0);
    rho(0, 0) = A;
    rho(0, 1) = i * BI;
    rho(0, 2) = i * BI;
    rho(0, 3) = DR;
    rho(1, 1) = E;
    rho(1, 2) = E;  // F_R = E in the stationary state; F_I = 0
    rho(1, 3) = i * GI;
    rho(2, 2) = E;
    rho(2, 3) = i * GI;
    rho(3, 3) = 1.0 - A - 2.0 * E;
    rho(1, 0) = std::conj(rho(0, 1));
    rho(2, 0) = std::conj(rho(0, 2));
    rho(3, 0) = std::conj(rho(0, 3));
    rho(2, 1) = std::conj(rho(1, 2));
    rho(3, 1) = std::conj(rho(1, 3));
    rho(3, 2) = std::conj(rho(2, 3));
    return rho;
}

// No-feedback closed form; denominator 12 w^4 + 4 w^2 + 1 never vanishes.
Matrix4c nofeedback_rho_s(double o) {
    const double den = 12 * pow(o, 4) + 4 * pow(o, 2) + 1;
    const double A = 4 * pow(o, 4) / den;
    const double BI = -2 * pow(o, 3) / den;
    const double DR = -2 * pow(o, 2) / den;
    const double E = pow(o, 2) * (2 * pow(o, 2) + 1) / den;
    const double GI = -o * (2 * pow(o, 2) + 1) / den;

    Matrix4c rho = Matrix4c::Zero();
    const Complex i(0.0, 1.0);
    rho(0, 0) = A;
    rho(0, 1) = i * BI;
    rho(0, 2) = i * BI;
    rho(0, 3) = DR;
    rho(1, 1) = E;
    rho(1, 2) = E;
    rho(1, 3) = i * GI;
    rho(2, 2) = E;
    rho(2, 3) = i * GI;
    rho(3, 3) = 1.0 - A - 2.0 * E;
    rho(1, 0) = std::conj(rho(0, 1));
    rho(2, 0) = std::conj(rho(0, 2));
    rho(3, 0) = std::conj(rho(0, 3));
    rho(2, 1) = std::conj(rho(1, 2));
    rho(3, 1) = std::conj(rho(1, 3));
    rho(3, 2) = std::conj(rho(2, 3));
    return rho;
}

StationaryState combine_with_singlet(const Matrix4c& rho_s, double R) {
    StationaryState st;
    st.rho_s = rho_s;
    st.rho_a = singlet_projector();
    st.R = R;
    st.rho_inf = (R / 2.0) * rho_s + ((2.0 - R) / 2.0) * st.rho_a;
    require_valid_density(st.rho_inf);
    return st;
}

}  // namespace

Matrix4c me_rhs(const Matrix4c& rho, double omega) {
    const OperatorSet& ops = operators();
    const Complex i(0.0, 1.0);
    const Matrix4c comm = ops.Sigma_x * rho - rho * ops.Sigma_x;
    return -i * omega * comm + dissipator(ops.Sigma, rho);
}

Matrix4c markovian_me_rhs(const Matrix4c& rho, double omega, double lambda) {
    const OperatorSet& ops = operators();
    const Complex i(0.0, 1.0);
    const Matrix4c H_eff = omega * ops.Sigma_x
        + (i * lambda / 2.0) * (ops.Sigma_dag * ops.Sigma_x - ops.Sigma_x * ops.Sigma);
    const Matrix4c L = ops.Sigma + lambda * ops.Sigma_x;
    return -i * (H_eff * rho - rho * H_eff) + dissipator(L, rho);
}

AffineGenerator build_generator(double omega, double lambda, FeedbackMode mode) {
    if (!std::isfinite(omega) || !std::isfinite(lambda)) {
        throw std::invalid_argument("build_generator: omega and lambda must be finite");
    }
    AffineGenerator gen;
    gen.omega = omega;
    gen.mode = mode;
    switch (mode) {
        case FeedbackMode::NoFeedback:
            gen.lambda = 0.0;
            gen.M = nofeedback_matrix(omega);
            gen.w = nofeedback_drift(omega);
            break;
        case FeedbackMode::Markovian:
            gen.lambda = lambda;
            gen.M = markovian_matrix(omega, lambda);
            gen.w = markovian_drift(omega, lambda);
            break;
        case FeedbackMode::Bayesian:
            throw std::invalid_argument(
                "build_generator: Bayesian feedback has no averaged master equation");
    }
    return gen;
}

MEPath integrate_me(const Matrix4c& rho0, const AffineGenerator& gen, double t_final, double dt,
                    long store_stride) {
    if (dt <= 0.0) throw std::invalid_argument("integrate_me: dt must be positive");
    if (t_final < dt) throw std::invalid_argument("integrate_me: t_final must be at least dt");
    if (store_stride < 1) throw std::invalid_argument("integrate_me: store_stride must be >= 1");
    require_valid_density(rho0);

    const long n_steps = static_cast<long>(std::llround(t_final / dt));
    const Matrix15& M = gen.M;
    const Vector15& w = gen.w;

    MEPath path;
    path.dt = dt;
    path.stride = store_stride;
    path.times.reserve(static_cast<size_t>(n_steps / store_stride) + 2);
    path.states.reserve(static_cast<size_t>(n_steps / store_stride) + 2);

    auto emit = [&](double t, const Vector15& v, long step) {
        const Matrix4c rho = devectorize(v);
        if (min_eigenvalue(rho) < kPositivityTol) {
            std::ostringstream msg;
            msg << "integrate_me: state positivity violated at step " << step
                << " (t=" << t << "); reduce dt";
            throw IntegrationDiverged(msg.str(), step);
        }
        path.times.push_back(t);
        path.states.push_back(rho);
    };

    Vector15 v = vectorize(rho0);
    emit(0.0, v, 0);
    for (long step = 1; step <= n_steps; ++step) {
        const Vector15 k1 = M * v - w;
        const Vector15 k2 = M * (v + 0.5 * dt * k1) - w;
        const Vector15 k3 = M * (v + 0.5 * dt * k2) - w;
        const Vector15 k4 = M * (v + dt * k3) - w;
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % store_stride == 0 || step == n_steps) {
            emit(step * dt, v, step);
        }
    }
    return path;
}

StationaryState steady_state(const Matrix4c& rho0, const AffineGenerator& gen) {
    require_valid_density(rho0);
    const Vector15 v0 = vectorize(rho0);
    const double R0 = conserved_R(rho0);

    // Every left-singular direction with (relatively) vanishing singular
    // value is a conserved functional: u^T M = 0 forces d/dt (u^T v) =
    // -u^T w, and u^T w = 0 because the dynamics is bounded. At generic
    // parameters there is exactly one such direction, proportional to the
    // exchange-symmetry functional R; extra directions appear only at
    // isolated degeneracies (e.g. the undriven, feedback-free point) and
    // are handled by the same augmentation.
    Eigen::JacobiSVD<Matrix15> svd(gen.M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv(0);
    int null_dim = 0;
    for (int i = 0; i < 15; ++i) {
        if (sv(i) < kNullTol * sigma_max) ++null_dim;
    }
    if (null_dim == 0) {
        // Cannot happen for a trace-preserving generator with a dark state;
        // treat as a contract violation of the supplied generator.
        throw std::invalid_argument("steady_state: generator has no null direction");
    }

    auto solve_with_values = [&](const Vector15& vref) -> Vector15 {
        Eigen::MatrixXd A(15 + null_dim, 15);
        Eigen::VectorXd b(15 + null_dim);
        A.topRows<15>() = gen.M;
        b.head<15>() = gen.w;
        for (int k = 0; k < null_dim; ++k) {
            const Eigen::Matrix<double, 15, 1> u = svd.matrixU().col(15 - null_dim + k);
            if (std::abs(u.dot(gen.w)) > 1e-8 * (1.0 + gen.w.norm())) {
                throw AmbiguousSteadyState(
                    "steady_state: null direction is not conserved (u^T w != 0); "
                    "generator is inconsistent",
                    null_dim);
            }
            A.row(15 + k) = u.transpose();
            b(15 + k) = u.dot(vref);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() < 15) {
            std::ostringstream msg;
            msg << "steady_state: stationary state remains ambiguous after augmenting with "
                << null_dim << " conserved functionals (generator null-space dimension "
                << null_dim << ")";
            throw AmbiguousSteadyState(msg.str(), null_dim);
        }
        const Eigen::VectorXd v = qr.solve(b);
        return Vector15(v);
    };

    StationaryState st;
    st.rho_a = singlet_projector();
    st.R = R0;
    const Vector15 v_inf = solve_with_values(v0);
    st.rho_inf = devectorize(v_inf);
    require_valid_density(st.rho_inf, /*positivity_floor=*/-1e-7);

    if (R0 > 1e-6) {
        st.rho_s = (st.rho_inf - ((2.0 - R0) / 2.0) * st.rho_a) * (2.0 / R0);
    } else {
        // Antisymmetric initial state: rho_inf carries no information about
        // the symmetric sector, so report the rho_s reached from the ground
        // state (any symmetric reference gives the same answer away from
        // degeneracies).
        st.rho_s = devectorize(solve_with_values(vectorize(projector_00())));
    }
    return st;
}

StationaryState analytic_stationary(double omega, double lambda, FeedbackMode mode, double R) {
    if (R < 0.0 || R > 2.0) {
        throw std::invalid_argument("analytic_stationary: R must lie in [0, 2]");
    }
    switch (mode) {
        case FeedbackMode::NoFeedback:
            if (lambda != 0.0) {
                throw std::invalid_argument("analytic_stationary: NoFeedback requires lambda = 0");
            }
            return combine_with_singlet(nofeedback_rho_s(omega), R);
        case FeedbackMode::Markovian:
            return combine_with_singlet(markovian_rho_s(omega, lambda), R);
        case FeedbackMode::Bayesian:
            throw std::invalid_argument(
                "analytic_stationary: no closed form exists for Bayesian feedback");
    }
    throw std::invalid_argument("analytic_stationary: unknown mode");
}

}  // namespace dimerfb
