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
//
// Command-line front end.
//
// Three commands, one per experiment family:
//
//   dimerfb steady-state  closed-form stationary states on an (omega, lambda)
//                         grid (modes none / markovian)
//   dimerfb trajectory    Monte Carlo ensemble of conditioned trajectories at
//                         a single parameter point (all modes)
//   dimerfb sweep         optimization of the stationary concurrence over
//                         lambda per omega (closed form or Monte Carlo)
//
// Every run writes a results CSV (schemas documented in io.hpp and the
// README) plus a JSON manifest echoing the fully-resolved configuration, the
// tool version, the seed, and the wall-clock time, so any run can be
// reproduced from its manifest alone.
//
// Options may come from a config file (--config): flat key = value lines with
// one [command] section per subcommand; command-line flags take precedence
// over file values. Unknown keys are rejected by name. Thread count resolves
// as --threads flag, then config key, then the DIMERFB_THREADS environment
// variable, then one worker per hardware thread.
//
// Exit status: 0 on success, 1 for configuration or I/O errors (the message
// names the offending key), 2 for numerical failures reported by the
// simulation modules.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dimerfb/algebra.hpp"
#include "dimerfb/entanglement.hpp"
#include "dimerfb/errors.hpp"
#include "dimerfb/io.hpp"
#include "dimerfb/master.hpp"
#include "dimerfb/sweep.hpp"
#include "dimerfb/trajectories.hpp"
#include "dimerfb/version.hpp"

namespace {

using nlohmann::json;

dimerfb::FeedbackMode parse_mode(const std::string& key, const std::string& text) {
    if (text == "none") return dimerfb::FeedbackMode::NoFeedback;
    if (text == "markovian") return dimerfb::FeedbackMode::Markovian;
    if (text == "bayesian") return dimerfb::FeedbackMode::Bayesian;
    throw std::invalid_argument(key + ": unknown mode '" + text +
                                "' (expected none, markovian, or bayesian)");
}

std::string mode_name(dimerfb::FeedbackMode mode) {
    switch (mode) {
        case dimerfb::FeedbackMode::NoFeedback: return "none";
        case dimerfb::FeedbackMode::Markovian: return "markovian";
        case dimerfb::FeedbackMode::Bayesian: return "bayesian";
    }
    return "unknown";
}

// Derives sibling output names from the primary CSV path: "runs/x.csv" ->
// "runs/x.manifest.json" / "runs/x_optima.csv".
std::string stem_of(const std::string& output) {
    if (output.size() >= 4 && output.substr(output.size() - 4) == ".csv") {
        return output.substr(0, output.size() - 4);
    }
    return output;
}

std::string manifest_path_for(const std::string& output) {
    return stem_of(output) + ".manifest.json";
}

std::string optima_path_for(const std::string& output) { return stem_of(output) + "_optima.csv"; }

json state_to_json(const dimerfb::Matrix4c& rho) {
    json entries = json::array();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            entries.push_back(rho(i, j).real());
            entries.push_back(rho(i, j).imag());
        }
    }
    return entries;
}

void require_positive(const std::string& key, double value) {
    if (!(value > 0.0)) throw std::invalid_argument(key + ": must be positive");
}

void require_at_least(const std::string& key, long value, long minimum) {
    if (value < minimum) {
        throw std::invalid_argument(key + ": must be at least " + std::to_string(minimum));
    }
}

// Shared Monte Carlo options (trajectory and Bayesian sweep cells).
struct McFlags {
    double dt = 1e-4;
    double t_final = 10.0;
    int n_traj = 1000;
    std::uint64_t seed = 1;
    int window = 1;
    int stride = dimerfb::kDefaultStoreStride;
    int threads = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dt", dt, "Integrator time step")->capture_default_str();
        cmd->add_option("--t-final", t_final, "Simulated time horizon")->capture_default_str();
        cmd->add_option("--n-traj", n_traj, "Number of trajectories in the ensemble")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
        cmd->add_option("--window", window,
                        "Bayesian controller comparison interval, in integrator steps")
            ->capture_default_str();
        cmd->add_option("--stride", stride, "Store every Nth integrator step")
            ->capture_default_str();
        cmd->add_option("--threads", threads,
                        "Worker thread cap (0 = one per hardware thread)")
            ->envname("DIMERFB_THREADS")
            ->capture_default_str();
    }

    void validate() const {
        require_positive("--dt", dt);
        require_positive("--t-final", t_final);
        require_at_least("--n-traj", n_traj, 1);
        require_at_least("--window", window, 1);
        require_at_least("--stride", stride, 1);
        require_at_least("--threads", threads, 0);
    }

    json to_json() const {
        return json{{"dt", dt},         {"t_final", t_final}, {"n_traj", n_traj},
                    {"seed", seed},     {"window", window},   {"stride", stride},
                    {"threads", threads}};
    }
};

// ----------------------------------------------------------------------------
// steady-state

struct SteadyStateCmd {
    std::string mode = "none";
    std::string initial = "00";
    std::string omega;
    std::string lambda = "0";
    std::string output = "steady_state.csv";

    json run(std::vector<std::string>* outputs) const {
        const dimerfb::FeedbackMode fb = parse_mode("--mode", mode);
        if (fb == dimerfb::FeedbackMode::Bayesian) {
            throw std::invalid_argument(
                "--mode: steady-state is closed-form only (none or markovian); Bayesian "
                "feedback has no averaged master equation");
        }
        const dimerfb::Matrix4c rho0 = dimerfb::parse_initial_state("--initial", initial);
        const std::vector<double> omegas = dimerfb::parse_grid("--omega", omega);
        const std::vector<double> lambdas = dimerfb::parse_grid("--lambda", lambda);
        if (fb == dimerfb::FeedbackMode::NoFeedback) {
            for (const double l : lambdas) {
                if (l != 0.0) {
                    throw std::invalid_argument("--lambda: must be 0 when --mode none");
                }
            }
        }

        const double R = dimerfb::conserved_R(rho0);
        std::vector<dimerfb::SteadyStateRow> rows;
        rows.reserve(omegas.size() * lambdas.size());
        for (const double w : omegas) {
            for (const double l : lambdas) {
                dimerfb::StationaryState st;
                try {
                    st = dimerfb::analytic_stationary(w, l, fb, R);
                } catch (const dimerfb::DegenerateStationaryPoint&) {
                    // Isolated Markovian degeneracy: the rational closed form
                    // is 0/0 but the steady state from a concrete initial
                    // state is still unique.
                    st = dimerfb::steady_state(rho0, dimerfb::build_generator(w, l, fb));
                }
                dimerfb::SteadyStateRow row;
                row.omega = w;
                row.lambda = l;
                row.r_value = R;
                row.concurrence = dimerfb::concurrence(st.rho_inf).value;
                row.rho = st.rho_inf;
                rows.push_back(row);
            }
        }
        dimerfb::write_steady_state_csv(output, rows);
        outputs->push_back(output);

        return json{{"mode", mode},
                    {"initial", initial},
                    {"initial_state", state_to_json(rho0)},
                    {"omega", omegas},
                    {"lambda", lambdas},
                    {"R", R},
                    {"output", output}};
    }
};

// ----------------------------------------------------------------------------
// trajectory

struct TrajectoryCmd {
    std::string mode = "none";
    std::string initial = "00";
    double omega = 0.0;
    double lambda = 0.0;
    McFlags mc;
    std::string output = "trajectory.csv";

    json run(std::vector<std::string>* outputs) const {
        const dimerfb::FeedbackMode fb = parse_mode("--mode", mode);
        const dimerfb::Matrix4c rho0 = dimerfb::parse_initial_state("--initial", initial);
        mc.validate();

        dimerfb::ControllerSpec controller = dimerfb::ControllerSpec::none();
        switch (fb) {
            case dimerfb::FeedbackMode::NoFeedback:
                if (lambda != 0.0) {
                    throw std::invalid_argument("--lambda: must be 0 when --mode none");
                }
                break;
            case dimerfb::FeedbackMode::Markovian:
                controller = dimerfb::ControllerSpec::markovian(lambda);
                break;
            case dimerfb::FeedbackMode::Bayesian:
                controller = dimerfb::ControllerSpec::bayesian(lambda, mc.window);
                break;
        }

        dimerfb::EnsembleOptions options;
        options.store_stride = mc.stride;
        options.n_threads = mc.threads;
        const dimerfb::EnsembleResult ens = dimerfb::ensemble_average(
            rho0, omega, controller, mc.dt, mc.t_final, mc.n_traj, mc.seed, options);
        dimerfb::write_trajectory_csv(output, ens);
        outputs->push_back(output);

        json config = mc.to_json();
        config["mode"] = mode;
        config["initial"] = initial;
        config["initial_state"] = state_to_json(rho0);
        config["omega"] = omega;
        config["lambda"] = lambda;
        config["output"] = output;
        return config;
    }
};

// ----------------------------------------------------------------------------
// sweep

struct SweepCmd {
    std::string mode = "none";
    std::string initial = "00";
    std::string omega;
    std::string lambda = "0";
    McFlags mc;
    std::string output = "sweep.csv";

    json run(std::vector<std::string>* outputs) const {
        const dimerfb::FeedbackMode fb = parse_mode("--mode", mode);
        const dimerfb::Matrix4c rho0 = dimerfb::parse_initial_state("--initial", initial);
        const std::vector<double> omegas = dimerfb::parse_grid("--omega", omega);
        const std::vector<double> lambdas = dimerfb::parse_grid("--lambda", lambda);
        if (fb == dimerfb::FeedbackMode::NoFeedback) {
            for (const double l : lambdas) {
                if (l != 0.0) {
                    throw std::invalid_argument("--lambda: must be 0 when --mode none");
                }
            }
        }

        std::optional<dimerfb::MonteCarloParams> params;
        if (fb == dimerfb::FeedbackMode::Bayesian) {
            mc.validate();
            dimerfb::MonteCarloParams p;
            p.dt = mc.dt;
            p.t_final = mc.t_final;
            p.n_trajectories = mc.n_traj;
            p.master_seed = mc.seed;
            p.window_steps = mc.window;
            p.store_stride = mc.stride;
            p.n_threads = mc.threads;
            params = p;
        }

        const dimerfb::SweepResult res = dimerfb::sweep(fb, rho0, omegas, lambdas, params);
        for (const std::string& warning : res.warnings) {
            std::fprintf(stderr, "warning: %s\n", warning.c_str());
        }
        const std::string optima = optima_path_for(output);
        dimerfb::write_sweep_csv(output, res);
        dimerfb::write_sweep_optima_csv(optima, res);
        outputs->push_back(output);
        outputs->push_back(optima);

        json config{{"mode", mode},
                    {"initial", initial},
                    {"initial_state", state_to_json(rho0)},
                    {"omega", omegas},
                    {"lambda", lambdas},
                    {"output", output},
                    {"optima_output", optima}};
        if (fb == dimerfb::FeedbackMode::Bayesian) config.update(mc.to_json());
        return config;
    }
};

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary entanglement of a dissipative two-qubit system under measurement-"
                 "based feedback: closed-form steady states, trajectory ensembles, and "
                 "feedback-amplitude sweeps."};
    app.set_version_flag("--version", std::string(dimerfb::kToolName) + " " + dimerfb::kVersion);
    app.set_config("--config", "",
                   "Config file: flat key = value lines with one [command] section per "
                   "subcommand; flags win");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    // Let global options (--config in particular) appear after the command
    // name as well as before it.
    app.fallthrough();

    SteadyStateCmd steady;
    CLI::App* steady_cmd = app.add_subcommand(
        "steady-state", "Closed-form stationary states on an (omega, lambda) grid");
    steady_cmd->add_option("--mode", steady.mode, "Control mode: none | markovian")
        ->capture_default_str();
    steady_cmd
        ->add_option("--initial", steady.initial,
                     "Initial state: 00 | 11 | 10 | singlet, or 32 comma-separated reals")
        ->capture_default_str();
    steady_cmd->add_option("--omega", steady.omega, "Drive amplitude: scalar or min:max:step")
        ->required();
    steady_cmd->add_option("--lambda", steady.lambda, "Feedback amplitude: scalar or min:max:step")
        ->capture_default_str();
    steady_cmd->add_option("--output", steady.output, "Results CSV path")->capture_default_str();

    TrajectoryCmd traj;
    CLI::App* traj_cmd = app.add_subcommand(
        "trajectory", "Monte Carlo trajectory ensemble at a single parameter point");
    traj_cmd->add_option("--mode", traj.mode, "Control mode: none | markovian | bayesian")
        ->capture_default_str();
    traj_cmd
        ->add_option("--initial", traj.initial,
                     "Initial state: 00 | 11 | 10 | singlet, or 32 comma-separated reals")
        ->capture_default_str();
    traj_cmd->add_option("--omega", traj.omega, "Drive amplitude")->required();
    traj_cmd->add_option("--lambda", traj.lambda, "Feedback amplitude")->capture_default_str();
    traj.mc.attach(traj_cmd);
    traj_cmd->add_option("--output", traj.output, "Results CSV path")->capture_default_str();

    SweepCmd sweep_args;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Optimize stationary concurrence over lambda, per omega");
    sweep_cmd->add_option("--mode", sweep_args.mode, "Control mode: none | markovian | bayesian")
        ->capture_default_str();
    sweep_cmd
        ->add_option("--initial", sweep_args.initial,
                     "Initial state: 00 | 11 | 10 | singlet, or 32 comma-separated reals")
        ->capture_default_str();
    sweep_cmd->add_option("--omega", sweep_args.omega, "Drive grid: scalar or min:max:step")
        ->required();
    sweep_cmd
        ->add_option("--lambda", sweep_args.lambda,
                     "Feedback grid or (Bayesian) search range: scalar or min:max:step")
        ->capture_default_str();
    sweep_args.mc.attach(sweep_cmd);
    sweep_cmd->add_option("--output", sweep_args.output, "Results CSV path")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        json config;
        std::string command;
        std::string output_path;
        std::vector<std::string> outputs;
        if (steady_cmd->parsed()) {
            command = "steady-state";
            output_path = steady.output;
            config = steady.run(&outputs);
        } else if (traj_cmd->parsed()) {
            command = "trajectory";
            output_path = traj.output;
            config = traj.run(&outputs);
        } else {
            command = "sweep";
            output_path = sweep_args.output;
            config = sweep_args.run(&outputs);
        }

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest{{"tool", dimerfb::kToolName},
                      {"version", dimerfb::kVersion},
                      {"command", command},
                      {"config", config},
                      {"outputs", outputs},
                      {"wall_clock_seconds", elapsed},
                      {"finished_at_utc", utc_timestamp()}};
        if (config.contains("seed")) manifest["seed"] = config["seed"];
        dimerfb::write_text_file(manifest_path_for(output_path), manifest.dump(2) + "\n");
        return 0;
    } catch (const dimerfb::SimulationError& e) {
        std::fprintf(stderr, "%s: numerical failure: %s\n", dimerfb::kToolName, e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s: invalid configuration: %s\n", dimerfb::kToolName, e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: error: %s\n", dimerfb::kToolName, e.what());
        return 1;
    }
}
