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
#include <cmath>
#include <string>

#include "weakeraser/cli.hpp"
#include "weakeraser/errors.hpp"

namespace weakeraser::cli {

namespace {

EnvelopeFamily parse_envelope(const std::string &s) {
    if (s == "lorentzian") {
        return EnvelopeFamily::lorentzian;
    }
    if (s == "gaussian") {
        return EnvelopeFamily::gaussian;
    }
    throw ValidationError("unknown envelope family '" + s +
                          "' (expected lorentzian or gaussian)");
}

EraserState build_state(const RunConfig &cfg) {
    complex_t alpha(cfg.alpha_re, cfg.alpha_im);
    complex_t beta(cfg.beta_re, cfg.beta_im);
    const double n = std::norm(alpha) + std::norm(beta);
    if (!std::isfinite(n) || !(n > 0.0)) {
        throw ValidationError("alpha and beta must be finite and not both zero");
    }
    if (std::abs(n - 1.0) > kCoefficientTolerance && !cfg.renormalize) {
        throw ValidationError("|alpha|^2 + |beta|^2 = " + std::to_string(n) +
                              " differs from 1; pass --renormalize to rescale");
    }
    // Within tolerance (or explicitly requested) the rescale is exact.
    alpha /= std::sqrt(n);
    beta /= std::sqrt(n);

    const EnvelopeFamily family = parse_envelope(cfg.envelope);
    const SlitAmplitude a(Envelope{family, cfg.envelope_width, cfg.slit_a_center}, cfg.k,
                          cfg.phase_gradient_a, cfg.omega, cfg.t);
    const SlitAmplitude b(Envelope{family, cfg.envelope_width, cfg.slit_b_center}, cfg.k,
                          cfg.phase_gradient_b, cfg.omega, cfg.t);
    return {alpha, beta, a, b};
}

} // namespace

Setup Setup::from(const RunConfig &cfg) {
    EraserState state = build_state(cfg);
    Grid grid(cfg.x_min, cfg.x_max, cfg.n_points);
    return {state, grid};
}

Method resolve_method(const RunConfig &cfg, Method fallback) {
    return cfg.method.empty() ? fallback : parse_method(cfg.method);
}

BasisPolicy resolve_policy(const RunConfig &cfg) {
    if (cfg.policy == "z") {
        return BasisPolicy::fixed_z();
    }
    if (cfg.policy == "x") {
        return BasisPolicy::fixed_x();
    }
    if (cfg.policy == "random") {
        return BasisPolicy::random(cfg.p_z);
    }
    if (cfg.policy == "custom") {
        return BasisPolicy::custom(cfg.theta, cfg.phi);
    }
    throw ValidationError("unknown policy '" + cfg.policy + "'");
}

ExpansionOrder resolve_order(const RunConfig &cfg) {
    if (cfg.order == "exact") {
        return ExpansionOrder::exact;
    }
    if (cfg.order == "first-order") {
        return ExpansionOrder::first_order;
    }
    throw ValidationError("unknown order '" + cfg.order + "' (expected exact or first-order)");
}

nlohmann::json to_json(const RunConfig &c) {
    return {
        {"alpha_re", c.alpha_re},
        {"alpha_im", c.alpha_im},
        {"beta_re", c.beta_re},
        {"beta_im", c.beta_im},
        {"renormalize", c.renormalize},
        {"envelope", c.envelope},
        {"envelope_width", c.envelope_width},
        {"slit_a_center", c.slit_a_center},
        {"slit_b_center", c.slit_b_center},
        {"k", c.k},
        {"phase_gradient_a", c.phase_gradient_a},
        {"phase_gradient_b", c.phase_gradient_b},
        {"omega", c.omega},
        {"t", c.t},
        {"x_min", c.x_min},
        {"x_max", c.x_max},
        {"n_points", c.n_points},
        {"method", c.method},
        {"theta", c.theta},
        {"phi", c.phi},
        {"g_values", c.g_values},
        {"t_int", c.t_int},
        {"sigma", c.sigma},
        {"pointer_half_width", c.pointer_half_width},
        {"pointer_points", c.pointer_points},
        {"bin_x", c.bin_x},
        {"bin_points", c.bin_points},
        {"order", c.order},
        {"n", c.n},
        {"policy", c.policy},
        {"p_z", c.p_z},
        {"seed", c.seed},
        {"cells_per_bin", c.cells_per_bin},
        {"visibility_cells_per_bin", c.visibility_cells_per_bin},
        {"chi2_min", c.chi2_min},
        {"chi2_max", c.chi2_max},
        {"z_threshold", c.z_threshold},
        {"compare_policies", c.compare_policies},
    };
}

} // namespace weakeraser::cli
