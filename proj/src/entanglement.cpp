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

#include "dimerfb/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "dimerfb/detail/quartic.hpp"

namespace dimerfb {

namespace {

constexpr double kEigClip = -1e-10;  // roundoff clip on eigenvalue real parts

// Signs of the antidiagonal spin-flip matrix sy x sy = antidiag(-1, 1, 1, -1).
constexpr double kFlipSign[4] = {-1.0, 1.0, 1.0, -1.0};

std::array<double, 4> sorted_roots(std::array<double, 4> l) {
    std::sort(l.begin(), l.end(), std::greater<double>());
    return l;
}

ConcurrenceValue from_moduli(const std::array<double, 4>& moduli) {
    ConcurrenceValue out;
    std::array<double, 4> l;
    for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, moduli[i]));
    out.eigenroots = sorted_roots(l);
    out.value = std::max(0.0, out.eigenroots[0] - out.eigenroots[1] - out.eigenroots[2] - out.eigenroots[3]);
    return out;
}

// Eigenvalue moduli of rho * spin_flip(rho) via the general complex
// eigensolver, with the documented clip on tiny negative real parts.
std::array<double, 4> product_eig_moduli(const Matrix4c& product) {
    Eigen::ComplexEigenSolver<Matrix4c> es(product, /*computeEigenvectors=*/false);
    std::array<double, 4> moduli;
    for (int i = 0; i < 4; ++i) {
        const Complex ev = es.eigenvalues()[i];
        double re = ev.real();
        if (re < 0.0 && re > kEigClip) re = 0.0;
        moduli[static_cast<std::size_t>(i)] = std::abs(Complex(re, ev.imag()));
    }
    return moduli;
}

}  // namespace

Matrix4c spin_flip(const Matrix4c& rho) {
    Matrix4c flipped;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            flipped(i, j) = kFlipSign[i] * kFlipSign[j] * std::conj(rho(3 - i, 3 - j));
        }
    }
    return flipped;
}

ConcurrenceValue concurrence(const Matrix4c& rho) {
    require_valid_density(rho, /*positivity_floor=*/-1e-4);
    return from_moduli(product_eig_moduli(rho * spin_flip(rho)));
}

double concurrence_of_stationary(double omega, double lambda, FeedbackMode mode, double R) {
    return concurrence(analytic_stationary(omega, lambda, mode, R).rho_inf).value;
}

double concurrence_fast(const Matrix4c& rho) {
    const Matrix4c product = rho * spin_flip(rho);

    // Power sums tr(product^k). Real in exact arithmetic even when the
    // spectrum carries conjugate pairs: tr((rho rho~)^k) equals its own
    // conjugate by Hermiticity of the factors plus cyclic invariance.
    const Matrix4c p2m = product * product;
    const double p1 = product.trace().real();
    const double p2 = p2m.trace().real();
    double p3 = 0.0, p4 = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            p3 += (p2m(i, j) * product(j, i)).real();
            p4 += (p2m(i, j) * p2m(j, i)).real();
        }
    }

    // Newton's identities: elementary symmetric polynomials from power sums.
    const double e1 = p1;
    const double e2 = (e1 * p1 - p2) / 2.0;
    const double e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    const double e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;

    // max(0, 2 max_i sqrt(l_i) - sum_i sqrt(l_i)) without sorting, from
    // the eigenvalue moduli.
    auto assemble = [](const std::array<double, 4>& mods) {
        double sum = 0.0, top = 0.0;
        for (double m : mods) {
            const double l = std::sqrt(m);
            sum += l;
            top = std::max(top, l);
        }
        return std::max(0.0, 2.0 * top - sum);
    };

    // Closed-form solve allowing conjugate pairs. A single rung decides
    // realness per quadratic factor by its discriminant sign -- the only
    // place the pair's signature (-Im^2) appears above roundoff. Deciding
    // it from the assembled coefficients instead (e.g. solving for a real
    // spectrum first and checking the result) cannot work: a pair with
    // |Im| ~ 1e-5 perturbs every Vieta sum by less than the coefficients'
    // own formation noise, so a falsely realized spectrum verifies -- and
    // its concurrence sits ~1e-2 from the moduli convention.
    //
    // No lower bound is imposed on real roots: for physical rho the
    // spectrum is nonnegative, but excursion states also produce small
    // negative real eigenvalues (same origin as the pairs), and those
    // enter as moduli exactly like the eigensolver path's. Accuracy is
    // guarded by the per-root certificates and Vieta verification alone.
    std::array<std::complex<double>, 4> zroots;
    if (detail::quartic_conjugate_roots(e1, e2, e3, e4, zroots)) {
        std::array<double, 4> mods;
        for (std::size_t i = 0; i < 4; ++i) mods[i] = std::abs(zroots[i]);
        return assemble(mods);
    }
    return from_moduli(product_eig_moduli(product)).value;
}

}  // namespace dimerfb
