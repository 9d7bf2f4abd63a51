// Copyright 2026 The weakeraser Authors
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
#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weakeraser/cli.hpp"
#include "weakeraser/errors.hpp"
#include "weakeraser/sim_io.hpp"
#include "weakeraser/version.hpp"

namespace weakeraser::cli {

namespace {

void add_options(CLI::App &app, RunConfig &c) {
    app.set_config("--config", "", "Read options from an INI/TOML file; flags override it");
    app.add_option("--out", c.out_dir, "Output directory")->envname(kOutputDirEnv);

    const char *state = "State";
    app.add_option("--alpha-re", c.alpha_re, "Re(alpha)")->group(state);
    app.add_option("--alpha-im", c.alpha_im, "Im(alpha)")->group(state);
    app.add_option("--beta-re", c.beta_re, "Re(beta)")->group(state);
    app.add_option("--beta-im", c.beta_im, "Im(beta)")->group(state);
    app.add_flag("--renormalize", c.renormalize,
                 "Rescale alpha, beta to unit norm instead of rejecting them")
        ->group(state);
    app.add_option("--envelope", c.envelope, "Envelope family")
        ->check(CLI::IsMember({"lorentzian", "gaussian"}))
        ->group(state);
    app.add_option("--width", c.envelope_width, "Envelope width")->group(state);
    app.add_option("--center-a", c.slit_a_center, "Center of slit a envelope")->group(state);
    app.add_option("--center-b", c.slit_b_center, "Center of slit b envelope")->group(state);
    app.add_option("--k", c.k, "Wavenumber")->group(state);
    app.add_option("--grad-a", c.phase_gradient_a, "Phase gradient of slit a")->group(state);
    app.add_option("--grad-b", c.phase_gradient_b, "Phase gradient of slit b")->group(state);
    app.add_option("--omega", c.omega, "Angular frequency")->group(state);
    app.add_option("--t", c.t, "Time")->group(state);

    const char *grid = "Grid";
    app.add_option("--x-min", c.x_min, "Screen grid lower end")->group(grid);
    app.add_option("--x-max", c.x_max, "Screen grid upper end")->group(grid);
    app.add_option("--points", c.n_points, "Screen grid points")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
        ->group(grid);

    const char *wv = "Weak values";
    app.add_option("--method", c.method, "exact or idealized")
        ->check(CLI::IsMember({"exact", "idealized"}))
        ->group(wv);
    app.add_option("--theta", c.theta, "Polar angle of the custom axis")->group(wv);
    app.add_option("--phi", c.phi, "Azimuth of the custom axis")->group(wv);

    const char *ptr = "Pointer";
    app.add_option("--g", c.g_values, "Coupling strengths (comma separated)")
        ->delimiter(',')
        ->group(ptr);
    app.add_option("--t-int", c.t_int, "Interaction time")->group(ptr);
    app.add_option("--sigma", c.sigma, "Pointer width")->check(CLI::PositiveNumber)->group(ptr);
    app.add_option("--pointer-half-width", c.pointer_half_width,
                   "Pointer grid half-width in units of sigma")
        ->check(CLI::PositiveNumber)
        ->group(ptr);
    app.add_option("--pointer-points", c.pointer_points, "Pointer grid points")
        ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 24))
        ->group(ptr);
    app.add_option("--bin-x", c.bin_x, "Center of the coupled position bin")->group(ptr);
    app.add_option("--bin-points", c.bin_points, "Grid points in the coupled bin (odd)")
        ->check(CLI::PositiveNumber)
        ->group(ptr);
    app.add_option("--order", c.order, "exact or first-order")
        ->check(CLI::IsMember({"exact", "first-order"}))
        ->group(ptr);

    const char *sim = "Simulation";
    app.add_option("--n", c.n, "Number of detection events")
        ->check(CLI::PositiveNumber)
        ->group(sim);
    app.add_option("--policy", c.policy, "z, x, random or custom")
        ->check(CLI::IsMember({"z", "x", "random", "custom"}))
        ->group(sim);
    app.add_option("--p-z", c.p_z, "Probability of the Z basis under the random policy")
        ->check(CLI::Range(0.0, 1.0))
        ->group(sim);
    app.add_option("--seed", c.seed, "Master seed")->group(sim);
    app.add_option("--threads", c.threads, "Worker threads (0 = hardware)")->group(sim);
    app.add_option("--cells-per-bin", c.cells_per_bin, "Grid cells per chi-square bin")
        ->check(CLI::PositiveNumber)
        ->group(sim);
    app.add_option("--visibility-cells-per-bin", c.visibility_cells_per_bin,
                   "Grid cells per visibility bin")
        ->check(CLI::PositiveNumber)
        ->group(sim);
    app.add_option("--chi2-min", c.chi2_min, "Lower bound of the reduced chi-square band")
        ->group(sim);
    app.add_option("--chi2-max", c.chi2_max, "Upper bound of the reduced chi-square band")
        ->group(sim);
    app.add_option("--z-threshold", c.z_threshold, "Marginal comparison threshold")->group(sim);
    app.add_flag("--compare-policies,!--no-compare-policies", c.compare_policies,
                 "Run the marginal invariance comparison")
        ->group(sim);
}

ExitCode dispatch(const std::string &name, const RunConfig &cfg, std::ostream &out) {
    if (name == "curves") return cmd_curves(cfg, out);
    if (name == "fig1") return cmd_fig1(cfg, out);
    if (name == "weak-values") return cmd_weak_values(cfg, out);
    if (name == "simulate") return cmd_simulate(cfg, out);
    if (name == "pointer") return cmd_pointer(cfg, out);
    return cmd_check(cfg, out);
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    CLI::App app{"Weak values and delayed-choice quantum eraser toolkit", "weakeraser"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    add_options(app, cfg);

    const std::vector<std::pair<const char *, const char *>> commands{
        {"curves", "Tabulate the screen densities"},
        {"fig1", "Tabulate weak values against psi2_density"},
        {"weak-values", "Tabulate weak values and post-selection probabilities"},
        {"simulate", "Sample detection events and run the statistical checks"},
        {"pointer", "Sweep the von Neumann pointer coupling"},
        {"check", "Evaluate the invariants and print a pass/fail table"},
    };
    for (const auto &[name, help] : commands) {
        app.add_subcommand(name, help)->fallthrough();
    }

    std::vector<std::string> argv(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        return static_cast<int>(dispatch(name, cfg, out));
    } catch (const IoError &e) {
        err << "io error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::io);
    } catch (const std::filesystem::filesystem_error &e) {
        err << "io error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::io);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::validation);
    }
}

} // namespace weakeraser::cli
