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

#include "dimerfb/trajectories.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <thread>

#include "dimerfb/detail/quartic.hpp"
#include "dimerfb/entanglement.hpp"
#include "dimerfb/errors.hpp"
#include "dimerfb/master.hpp"

namespace dimerfb {

namespace {

// ---- v-space tables for the stochastic terms -------------------------------
//
// The drift reuses the affine generators from module master. The diffusion
// H[M] rho with M = -i (Sigma + lambda Sigma_x) decomposes, in the 15 real
// coordinates, as
//
//   diff(v) = (H0 + lambda*H1) v + lambda*h01 - (s . v) v,
//
// where H1 equals the drive coefficient matrix MW := d(drift)/d(omega)
// (both are the coordinate form of -i[Sigma_x, .], since Sigma_x is
// Hermitian), h01 = -wW (the omega-coefficient of the drift shift), and the
// trace functional s has no lambda part because Tr(Sigma_x rho) is real.
// All entries below are generated symbolically from those definitions and
// validated against direct matrix arithmetic in the unit tests.

Matrix15 make_diffusion0() {
    Matrix15 H0 = Matrix15::Zero();
    H0(2, 0) = 1;
    H0(4, 0) = 1;
    H0(5, 2) = -1;
    H0(5, 4) = -1;
    H0(6, 1) = 1;
    H0(6, 3) = 1;
    H0(7, 2) = 2;
    H0(8, 2) = 1;
    H0(8, 4) = 1;
    H0(9, 1) = 1;
    H0(9, 3) = -1;
    H0(10, 6) = 1;
    H0(10, 9) = -1;
    H0(11, 5) = -1;
    H0(11, 7) = 1;
    H0(11, 8) = 1;
    H0(12, 4) = 2;
    H0(13, 6) = 1;
    H0(13, 9) = 1;
    H0(14, 5) = -1;
    H0(14, 8) = 1;
    H0(14, 12) = 1;
    return H0;
}

Matrix15 make_drive_matrix() {
    Matrix15 MW = Matrix15::Zero();
    MW(0, 2) = -2;
    MW(0, 4) = -2;
    MW(1, 6) = -1;
    MW(1, 9) = -1;
    MW(2, 0) = 1;
    MW(2, 5) = 1;
    MW(2, 7) = -1;
    MW(2, 8) = -1;
    MW(3, 6) = -1;
    MW(3, 9) = 1;
    MW(4, 0) = 1;
    MW(4, 5) = 1;
    MW(4, 8) = -1;
    MW(4, 12) = -1;
    MW(5, 2) = -1;
    MW(5, 4) = -1;
    MW(5, 11) = 1;
    MW(5, 14) = 1;
    MW(6, 1) = 1;
    MW(6, 3) = 1;
    MW(6, 10) = -1;
    MW(6, 13) = -1;
    MW(7, 2) = 2;
    MW(7, 11) = -2;
    MW(8, 2) = 1;
    MW(8, 4) = 1;
    MW(8, 11) = -1;
    MW(8, 14) = -1;
    MW(9, 1) = 1;
    MW(9, 3) = -1;
    MW(9, 10) = 1;
    MW(9, 13) = -1;
    MW(10, 6) = 1;
    MW(10, 9) = -1;
    MW(11, 0) = 1;
    MW(11, 5) = -1;
    MW(11, 7) = 2;
    MW(11, 8) = 1;
    MW(11, 12) = 1;
    MW(12, 4) = 2;
    MW(12, 14) = -2;
    MW(13, 6) = 1;
    MW(13, 9) = 1;
    MW(14, 0) = 1;
    MW(14, 5) = -1;
    MW(14, 7) = 1;
    MW(14, 8) = 1;
    MW(14, 12) = 2;
    return MW;
}

Vector15 make_drive_shift() {
    Vector15 wW = Vector15::Zero();
    wW(11) = 1;
    wW(14) = 1;
    return wW;
}

const Matrix15& diffusion0() {
    static const Matrix15 H0 = make_diffusion0();
    return H0;
}

const Matrix15& drive_matrix() {
    static const Matrix15 MW = make_drive_matrix();
    return MW;
}

const Vector15& drive_shift() {
    static const Vector15 wW = make_drive_shift();
    return wW;
}

// Homodyne signal 2 Im Tr(Sigma rho) = s . v; the same functional appears
// as the trace term of the diffusion for every lambda.
inline double meas_signal(const Vector15& v) {
    return 2.0 * (v(2) + v(4) + v(11) + v(14));
}

// Tr(rho^2) in the 15 coordinates (off-diagonals count twice, the (3,3)
// entry is 1 - A - E - H).
inline double purity_of(const Vector15& v) {
    const double p33 = 1.0 - v(0) - v(7) - v(12);
    double off = 0.0;
    off += v(1) * v(1) + v(2) * v(2);
    off += v(3) * v(3) + v(4) * v(4);
    off += v(5) * v(5) + v(6) * v(6);
    off += v(8) * v(8) + v(9) * v(9);
    off += v(10) * v(10) + v(11) * v(11);
    off += v(13) * v(13) + v(14) * v(14);
    return v(0) * v(0) + v(7) * v(7) + v(12) * v(12) + p33 * p33 + 2.0 * off;
}

// A state with an eigenvalue at or below -1 must have Tr(rho^2) >= 7/3
// (the other three eigenvalues then sum to >= 2), so purity below this
// trigger proves every eigenvalue sits above -1 -- far above the -32
// divergence floor -- without any eigenvalue work. Deep-excursion episodes
// (see the header) pay one 4x4 eigenvalue solve per step, a ~0.1% tax at
// the roughest working point.
constexpr double kPurityGuardTrigger = 2.3;

void check_stability(const Vector15& v, long long step) {
    const double purity = purity_of(v);
    if (purity < kPurityGuardTrigger) return;  // also filters out NaN below
    if (!std::isfinite(purity)) {
        throw IntegrationDiverged("stochastic integration produced a non-finite state", step);
    }
    const double min_eig = detail::hermitian4_min_eig(devectorize(v));
    if (!(min_eig >= kStepInstabilityFloor)) {
        if (!std::isfinite(min_eig)) {
            throw IntegrationDiverged("stochastic integration produced a non-finite state", step);
        }
        throw StepInstability(
            "Euler-Maruyama step pushed the conditioned state's minimum eigenvalue below the "
            "stability floor; reduce dt",
            step, min_eig);
    }
}

// Mode-resolved coefficients: drift = A v - b (+ f * (MW v - wW) when a
// Bayesian controller is driving), diffusion = D v + dh - (s . v) v.
struct StepTables {
    Matrix15 A;
    Vector15 b;
    Matrix15 D;
    Vector15 dh;
    bool bayesian = false;
};

StepTables build_tables(double omega, const ControllerSpec& controller) {
    StepTables t;
    switch (controller.kind) {
        case ControllerKind::None:
        case ControllerKind::Bayesian: {
            const AffineGenerator gen = build_generator(omega, 0.0, FeedbackMode::NoFeedback);
            t.A = gen.M;
            t.b = gen.w;
            t.D = diffusion0();
            t.dh = Vector15::Zero();
            t.bayesian = (controller.kind == ControllerKind::Bayesian);
            break;
        }
        case ControllerKind::MarkovianTrajectory: {
            const AffineGenerator gen =
                build_generator(omega, controller.lambda, FeedbackMode::Markovian);
            t.A = gen.M;
            t.b = gen.w;
            t.D = diffusion0() + controller.lambda * drive_matrix();
            t.dh = -controller.lambda * drive_shift();
            break;
        }
    }
    return t;
}

// One Euler-Maruyama update in the 15 coordinates; returns the pre-step
// homodyne signal so the caller can form the current sample.
inline double em_update(const StepTables& t, double f, double dt, double dW, Vector15& v,
                        Vector15& drift, Vector15& diff) {
    const double sig = meas_signal(v);
    drift.noalias() = t.A * v;
    drift -= t.b;
    if (t.bayesian) {
        diff.noalias() = drive_matrix() * v;  // reused as scratch for the drive term
        diff -= drive_shift();
        drift += f * diff;
    }
    diff.noalias() = t.D * v;
    diff += t.dh;
    diff -= sig * v;
    v += dt * drift + dW * diff;
    return sig;
}

// Steps one trajectory, invoking sink(step, v, current_sample, f_sample) at
// step 0, every `stride` steps, and at the final step.
template <typename Sink>
void run_core(Vector15 v, const StepTables& tables, const ControllerSpec& controller, double dt,
              long long steps, int stride, Xoshiro256ss rng, const Matrix4c& rho0, Sink&& sink) {
    BayesianControllerState ctrl;
    if (tables.bayesian) {
        ctrl = BayesianControllerState::create(controller.lambda, controller.window_steps, rho0);
    }
    double f = tables.bayesian ? ctrl.lambda * ctrl.last_sign : 0.0;
    sink(0LL, v, 0.0, f);
    Vector15 drift, diff;
    for (long long k = 0; k < steps; ++k) {
        if (tables.bayesian) f = bayesian_control(ctrl, devectorize(v));
        const double dW = wiener_increment(rng, dt);
        const double sig = em_update(tables, f, dt, dW, v, drift, diff);
        check_stability(v, k);
        if ((k + 1) % stride == 0 || k + 1 == steps) {
            sink(k + 1, v, sig + dW / dt, f);
        }
    }
}

long long step_count(double dt, double t_final) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (t_final < 0.0) throw std::invalid_argument("t_final must be nonnegative");
    return std::llround(t_final / dt);
}

// Trace distance via the closed-form Hermitian spectrum.
double trace_distance_fast(const Matrix4c& a, const Matrix4c& b) {
    const std::array<double, 4> eigs = detail::hermitian4_eigs(a - b);
    return 0.5 * (std::abs(eigs[0]) + std::abs(eigs[1]) + std::abs(eigs[2]) + std::abs(eigs[3]));
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
    return master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
}

std::pair<Matrix4c, double> sme_step(const Matrix4c& rho, double omega, double f, double dt,
                                     double dW) {
    if (!(dt > 0.0)) throw std::invalid_argument("sme_step: dt must be positive");
    // Mid-trajectory states are legitimately O(dt) outside the positive
    // cone, so validate against the integrator floor, not the strict one.
    require_valid_density(rho, kStepInstabilityFloor);
    const StepTables tables = build_tables(omega, ControllerSpec::none());
    Vector15 v = vectorize(rho);
    Vector15 drift, diff, scratch;
    const double sig = meas_signal(v);
    drift.noalias() = tables.A * v;
    drift -= tables.b;
    if (f != 0.0) {
        scratch.noalias() = drive_matrix() * v;
        scratch -= drive_shift();
        drift += f * scratch;
    }
    diff.noalias() = tables.D * v;
    diff -= sig * v;
    v += dt * drift + dW * diff;
    check_stability(v, 0);
    return {devectorize(v), sig + dW / dt};
}

TrajectoryRecord simulate_trajectory(const Matrix4c& rho0, double omega,
                                     const ControllerSpec& controller, double dt, double t_final,
                                     std::uint64_t seed, int store_stride) {
    require_valid_density(rho0);
    if (store_stride < 1) throw std::invalid_argument("store_stride must be >= 1");
    const long long steps = step_count(dt, t_final);
    const StepTables tables = build_tables(omega, controller);

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.dt = dt;
    const std::size_t expected = static_cast<std::size_t>(steps / store_stride) + 2;
    rec.times.reserve(expected);
    rec.states.reserve(expected);
    rec.current.reserve(expected);
    if (tables.bayesian) rec.controller_output.reserve(expected);

    run_core(vectorize(rho0), tables, controller, dt, steps, store_stride, Xoshiro256ss(seed),
             rho0, [&](long long k, const Vector15& v, double current, double f) {
                 rec.times.push_back(static_cast<double>(k) * dt);
                 rec.states.push_back(devectorize(v));
                 rec.current.push_back(current);
                 if (tables.bayesian) rec.controller_output.push_back(f);
             });
    return rec;
}

EnsembleResult ensemble_average(const Matrix4c& rho0, double omega,
                                const ControllerSpec& controller, double dt, double t_final,
                                int n_traj, std::uint64_t master_seed,
                                const EnsembleOptions& options) {
    require_valid_density(rho0);
    if (n_traj < 1) throw std::invalid_argument("n_traj must be >= 1");
    if (options.store_stride < 1) throw std::invalid_argument("store_stride must be >= 1");
    const long long steps = step_count(dt, t_final);
    const int stride = options.store_stride;
    const StepTables tables = build_tables(omega, controller);
    const Vector15 v0 = vectorize(rho0);

    // Per-trajectory slots, filled independently and reduced afterwards in
    // index order. States are kept in single precision: the reduction needs
    // ~1e-7 relative accuracy at worst (spread estimates of order 1e-3),
    // and this caps ensemble memory at ~130 MB for the largest stock runs.
    struct Slot {
        std::vector<Eigen::Matrix4cf> states;
        std::vector<float> conc;
        std::vector<float> current;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_traj));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_traj));
    std::atomic<long long> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&]() {
        while (!stop.load(std::memory_order_relaxed)) {
            const long long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_traj) break;
            Slot& slot = slots[static_cast<std::size_t>(i)];
            try {
                run_core(v0, tables, controller, dt, steps, stride,
                         Xoshiro256ss(trajectory_seed(master_seed, static_cast<std::uint64_t>(i))),
                         rho0, [&](long long, const Vector15& v, double current, double) {
                             const Matrix4c state = devectorize(v);
                             slot.states.push_back(state.cast<std::complex<float>>());
                             slot.conc.push_back(static_cast<float>(concurrence_fast(state)));
                             slot.current.push_back(static_cast<float>(current));
                         });
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
            }
        }
    };

    int n_threads = options.n_threads;
    if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    if (n_threads > n_traj) n_threads = n_traj;
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);  // abort policy: first failing index
    }

    const std::size_t points = slots[0].states.size();
    EnsembleResult res;
    res.n_trajectories = n_traj;
    res.times.resize(points);
    {
        std::size_t j = 0;
        for (long long k = 0; k <= steps; ++k) {
            if (k == 0 || k % stride == 0 || k == steps) res.times[j++] = static_cast<double>(k) * dt;
        }
    }
    res.mean_states.resize(points);
    res.concurrence_of_mean.resize(points);
    res.mean_concurrence.resize(points);
    res.mean_current.resize(points);
    res.standard_error.assign(points, 0.0);

    const double inv_n = 1.0 / static_cast<double>(n_traj);
    for (std::size_t j = 0; j < points; ++j) {
        Matrix4c mean = Matrix4c::Zero();
        double conc_sum = 0.0;
        double cur_sum = 0.0;
        for (int i = 0; i < n_traj; ++i) {
            const Slot& slot = slots[static_cast<std::size_t>(i)];
            mean += slot.states[j].cast<Complex>();
            conc_sum += static_cast<double>(slot.conc[j]);
            cur_sum += static_cast<double>(slot.current[j]);
        }
        mean *= inv_n;
        res.mean_states[j] = mean;
        // The mean of desk-scale Euler-Maruyama states can sit slightly
        // outside the positive cone, so use the unvalidated fast path.
        res.concurrence_of_mean[j] = concurrence_fast(mean);
        res.mean_concurrence[j] = conc_sum * inv_n;
        res.mean_current[j] = cur_sum * inv_n;
        if (n_traj > 1) {
            double sq = 0.0;
            for (int i = 0; i < n_traj; ++i) {
                const double td = trace_distance_fast(
                    slots[static_cast<std::size_t>(i)].states[j].cast<Complex>(), mean);
                sq += td * td;
            }
            res.standard_error[j] =
                std::sqrt(sq / (static_cast<double>(n_traj) * static_cast<double>(n_traj - 1)));
        }
    }
    return res;
}

}  // namespace dimerfb
