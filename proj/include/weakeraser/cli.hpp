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
/**
 * @file
 * Command-line front end. The `weakeraser` tool is a thin main() around
 * cli::run so the commands can be driven in-process by tests.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weakeraser/eraser_sim.hpp"
#include "weakeraser/hilbert.hpp"
#include "weakeraser/pointer.hpp"
#include "weakeraser/weak_values.hpp"

namespace weakeraser::cli {

enum class ExitCode : int {
    ok = 0,
    usage = 2,
    validation = 3,
    io = 4,
    check_failed = 5,
};

/// Environment variable consulted for the output directory when --out is
/// absent.
inline constexpr const char *kOutputDirEnv = "WEAKERASER_OUT";

/// Every tunable of every subcommand. Defaults reproduce the textbook
/// two-slit example with alpha = beta = 1/sqrt(2).
struct RunConfig {
    double alpha_re{0.70710678118654752};
    double alpha_im{0.0};
    double beta_re{0.70710678118654752};
    double beta_im{0.0};
    bool renormalize{false};

    std::string envelope{"lorentzian"};
    double envelope_width{1.0};
    double slit_a_center{0.0};
    double slit_b_center{0.0};
    double k{1.0};
    double phase_gradient_a{0.0};
    double phase_gradient_b{3.14159265358979323846};
    double omega{0.0};
    double t{0.0};

    double x_min{-20.0};
    double x_max{20.0};
    std::size_t n_points{4001};

    /// Empty selects the subcommand's default (idealized for fig1, exact
    /// otherwise).
    std::string method;

    double theta{0.0};
    double phi{0.0};

    std::vector<double> g_values{0.0, 1e-3, 1e-2, 1e-1};
    double t_int{1.0};
    double sigma{1.0};
    double pointer_half_width{8.0};
    std::size_t pointer_points{1024};
    double bin_x{0.0};
    std::size_t bin_points{1};
    std::string order{"exact"};

    std::size_t n{1000000};
    std::string policy{"x"};
    double p_z{0.5};
    std::uint64_t seed{1};
    unsigned threads{0};
    std::size_t cells_per_bin{10};
    std::size_t visibility_cells_per_bin{20};
    double chi2_min{0.8};
    double chi2_max{1.2};
    double z_threshold{3.0};
    bool compare_policies{true};

    std::string out_dir{"."};
};

/// Validated, ready-to-use objects derived from a RunConfig. Construction
/// throws ValidationError / DomainError / ConfigurationError.
struct Setup {
    EraserState state;
    Grid grid;

    static Setup from(const RunConfig &cfg);
};

/// |alpha|^2 + |beta|^2 may deviate from 1 by at most this much without
/// --renormalize.
inline constexpr double kCoefficientTolerance = 1e-9;

[[nodiscard]] nlohmann::json to_json(const RunConfig &cfg);
[[nodiscard]] Method resolve_method(const RunConfig &cfg, Method fallback);
[[nodiscard]] BasisPolicy resolve_policy(const RunConfig &cfg);
[[nodiscard]] ExpansionOrder resolve_order(const RunConfig &cfg);

// Subcommands. Each writes its files under cfg.out_dir, prints a summary to
// `out`, and returns the exit code.
ExitCode cmd_curves(const RunConfig &cfg, std::ostream &out);
ExitCode cmd_fig1(const RunConfig &cfg, std::ostream &out);
ExitCode cmd_weak_values(const RunConfig &cfg, std::ostream &out);
ExitCode cmd_simulate(const RunConfig &cfg, std::ostream &out);
ExitCode cmd_pointer(const RunConfig &cfg, std::ostream &out);
ExitCode cmd_check(const RunConfig &cfg, std::ostream &out);

/// Parses arguments (argv[0] is the program name) and dispatches.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace weakeraser::cli
