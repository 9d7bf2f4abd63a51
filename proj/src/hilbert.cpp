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
#include "weakeraser/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "weakeraser/errors.hpp"

namespace weakeraser {

namespace {

constexpr double kNormTolerance = 1e-12;

void require_finite(double v, const char *what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

template <class T>
T trapezoid_impl(std::span<const T> samples, const Grid &grid) {
    if (samples.size() != grid.size()) {
        throw ConfigurationError("trapezoid: sample count does not match grid");
    }
    T interior{};
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        interior += samples[i];
    }
    const T ends = (samples.front() + samples.back()) * 0.5;
    return (interior + ends) * grid.spacing();
}

} // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), spacing_(0.0) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw ConfigurationError("grid bounds must be finite");
    }
    if (n_points < 2) {
        throw ConfigurationError("grid needs at least 2 points");
    }
    if (!(x_min < x_max)) {
        throw ConfigurationError("grid requires x_min < x_max");
    }
    spacing_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

double Grid::point(std::size_t i) const noexcept {
    if (i + 1 == n_points_) {
        return x_max_;
    }
    return x_min_ + (x_max_ - x_min_) * static_cast<double>(i) /
                        static_cast<double>(n_points_ - 1);
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n_points_);
    for (std::size_t i = 0; i < n_points_; ++i) {
        xs[i] = point(i);
    }
    return xs;
}

double Grid::trapezoid_weight(std::size_t i) const noexcept {
    return (i == 0 || i + 1 == n_points_) ? 0.5 * spacing_ : spacing_;
}

std::size_t Grid::nearest_index(double x) const noexcept {
    const double r = std::round((x - x_min_) / spacing_);
    if (!(r > 0.0)) {
        return 0;
    }
    return std::min(static_cast<std::size_t>(r), n_points_ - 1);
}

double trapezoid(std::span<const double> samples, const Grid &grid) {
    return trapezoid_impl(samples, grid);
}

complex_t trapezoid(std::span<const complex_t> samples, const Grid &grid) {
    return trapezoid_impl(samples, grid);
}

// ---------------------------------------------------------------------------
// Envelope / SlitAmplitude

double Envelope::operator()(double x) const noexcept {
    const double u = (x - center) / width;
    switch (family) {
    case EnvelopeFamily::gaussian:
        return std::exp(-0.25 * u * u) /
               std::sqrt(std::sqrt(2.0 * std::numbers::pi) * width);
    case EnvelopeFamily::lorentzian:
    default:
        return 1.0 / std::sqrt(std::numbers::pi * width * (1.0 + u * u));
    }
}

double Envelope::tail_mass(double a, double b) const noexcept {
    const double ua = (a - center) / width;
    const double ub = (b - center) / width;
    switch (family) {
    case EnvelopeFamily::gaussian:
        return 0.5 * std::erfc(-ua / std::numbers::sqrt2) +
               0.5 * std::erfc(ub / std::numbers::sqrt2);
    case EnvelopeFamily::lorentzian:
    default:
        // atan(u) = pi/2 - atan(1/u) keeps precision for wide domains.
        auto upper = [](double u) {
            return u > 1.0 ? std::atan(1.0 / u) : std::numbers::pi / 2 - std::atan(u);
        };
        return (upper(ub) + upper(-ua)) / std::numbers::pi;
    }
}

SlitAmplitude::SlitAmplitude(Envelope envelope, double k, double phase_gradient,
                             double omega, double t)
    : envelope_(envelope), k_(k), phase_gradient_(phase_gradient),
      omega_(omega), t_(t) {
    require_finite(envelope.width, "envelope width");
    require_finite(envelope.center, "envelope center");
    require_finite(k, "k");
    require_finite(phase_gradient, "phase gradient");
    require_finite(omega, "omega");
    require_finite(t, "t");
    if (!(envelope.width > 0.0)) {
        throw DomainError("envelope width must be positive");
    }
}

SlitAmplitude SlitAmplitude::slit_a_default() {
    return SlitAmplitude(Envelope{}, 1.0, 0.0);
}

SlitAmplitude SlitAmplitude::slit_b_default() {
    return SlitAmplitude(Envelope{}, 1.0, std::numbers::pi);
}

complex_t SlitAmplitude::operator()(double x) const noexcept {
    const double phase = -((k_ + phase_gradient_) * x - omega_ * t_);
    return std::polar(envelope_(x), phase);
}

double SlitAmplitude::density(double x) const noexcept {
    const double e = envelope_(x);
    return e * e;
}

complex_t eval_amplitude(const SlitAmplitude &s, double x) {
    require_finite(x, "x");
    return s(x);
}

complex_t inner_product(const SlitAmplitude &f, const SlitAmplitude &g,
                        const Grid &grid) {
    std::vector<complex_t> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        integrand[i] = std::conj(f(x)) * g(x);
    }
    return trapezoid(std::span<const complex_t>(integrand), grid);
}

// ---------------------------------------------------------------------------
// Spinor

Spinor::Spinor(complex_t up_component, complex_t down_component)
    : up_(up_component), down_(down_component) {
    const double n = std::norm(up_) + std::norm(down_);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        throw ValidationError("spinor is not normalized: |up|^2 + |down|^2 = " +
                              std::to_string(n));
    }
}

Spinor Spinor::up() noexcept { return {Unchecked{}, 1.0, 0.0}; }
Spinor Spinor::down() noexcept { return {Unchecked{}, 0.0, 1.0}; }
Spinor Spinor::plus() noexcept {
    return {Unchecked{}, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
}
Spinor Spinor::minus() noexcept {
    return {Unchecked{}, std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2};
}

Spinor Spinor::from_axis(double theta, double phi) {
    require_finite(theta, "theta");
    require_finite(phi, "phi");
    return {Unchecked{}, std::cos(theta / 2),
            std::polar(std::sin(theta / 2), phi)};
}

Spinor Spinor::normalized(complex_t up_component, complex_t down_component) {
    const double n = std::sqrt(std::norm(up_component) + std::norm(down_component));
    if (!std::isfinite(n) || n < 1e-300) {
        throw ValidationError("cannot normalize a zero spin vector");
    }
    return {Unchecked{}, up_component / n, down_component / n};
}

Spinor Spinor::orthogonal() const noexcept {
    return {Unchecked{}, -std::conj(down_), std::conj(up_)};
}

complex_t inner_product(const Spinor &a, const Spinor &b) noexcept {
    return std::conj(a.up_component()) * b.up_component() +
           std::conj(a.down_component()) * b.down_component();
}

// ---------------------------------------------------------------------------
// EraserState

EraserState::EraserState(complex_t alpha, complex_t beta, SlitAmplitude psi_a,
                         SlitAmplitude psi_b)
    : alpha_(alpha), beta_(beta), psi_a_(psi_a), psi_b_(psi_b) {
    const double n = std::norm(alpha) + std::norm(beta);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        throw ValidationError("|alpha|^2 + |beta|^2 must equal 1, got " +
                              std::to_string(n));
    }
}

EraserState EraserState::symmetric_default() {
    const double c = std::numbers::sqrt2 / 2;
    return {c, c, SlitAmplitude::slit_a_default(), SlitAmplitude::slit_b_default()};
}

double psi1_density(complex_t alpha, complex_t beta, const SlitAmplitude &psi_a,
                    const SlitAmplitude &psi_b, double x) {
    require_finite(x, "x");
    return std::norm(alpha * psi_a(x) + beta * psi_b(x));
}

double psi2_density(const EraserState &state, double x) {
    require_finite(x, "x");
    return std::norm(state.alpha()) * state.psi_a().density(x) +
           std::norm(state.beta()) * state.psi_b().density(x);
}

} // namespace weakeraser
