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
 * Slit amplitudes, spin states and the which-way tagged two-slit state.
 *
 * Amplitudes are taken as given at the screen plane: time only enters as the
 * global phase e^{i omega t}, and no propagation from the slits is modeled.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace weakeraser {

using complex_t = std::complex<double>;

/// Uniform discretization of the screen coordinate.
class Grid {
  public:
    /// Throws ConfigurationError unless n_points >= 2 and x_min < x_max.
    Grid(double x_min, double x_max, std::size_t n_points);

    /// [-20, 20] with 4001 points (spacing 0.01).
    static Grid screen_default() { return Grid(-20.0, 20.0, 4001); }

    [[nodiscard]] double x_min() const noexcept { return x_min_; }
    [[nodiscard]] double x_max() const noexcept { return x_max_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_points_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }

    /// Computed as x_min + (x_max - x_min) * i / (n - 1) so that grid points
    /// that are exactly representable (0, +-1, ...) land exactly.
    [[nodiscard]] double point(std::size_t i) const noexcept;
    [[nodiscard]] std::vector<double> points() const;

    /// Composite trapezoid weight of point i.
    [[nodiscard]] double trapezoid_weight(std::size_t i) const noexcept;

    /// Nearest grid index to x (clamped to the grid).
    [[nodiscard]] std::size_t nearest_index(double x) const noexcept;

    [[nodiscard]] bool contains(double x) const noexcept {
        return x >= x_min_ && x <= x_max_;
    }

    friend bool operator==(const Grid &, const Grid &) = default;

  private:
    double x_min_;
    double x_max_;
    std::size_t n_points_;
    double spacing_;
};

/// Composite trapezoid rule of samples taken on every point of grid.
[[nodiscard]] double trapezoid(std::span<const double> samples, const Grid &grid);
[[nodiscard]] complex_t trapezoid(std::span<const complex_t> samples,
                                  const Grid &grid);

enum class EnvelopeFamily {
    /// 1 / sqrt(pi w (1 + ((x - c)/w)^2)); w = 1, c = 0 is the textbook
    /// two-slit example.
    lorentzian,
    /// (2 pi w^2)^{-1/4} exp(-(x - c)^2 / (4 w^2)); w is the standard
    /// deviation of |psi|^2.
    gaussian,
};

/// Real, nonnegative, unit-norm (on the real line) modulus of a slit
/// amplitude.
struct Envelope {
    EnvelopeFamily family{EnvelopeFamily::lorentzian};
    double width{1.0};
    double center{0.0};

    [[nodiscard]] double operator()(double x) const noexcept;
    /// Probability mass of |envelope|^2 outside [a, b].
    [[nodiscard]] double tail_mass(double a, double b) const noexcept;

    friend bool operator==(const Envelope &, const Envelope &) = default;
};

/**
 * Closed-form complex amplitude of one slit at the screen:
 *
 *   psi(x) = envelope(x) * exp(-i ((k + phase_gradient) x - omega t)).
 *
 * The default-constructed amplitude is the slit-a example (k = 1, no extra
 * gradient). `slit_b_default()` adds the pi gradient that produces
 * cos^2(pi x / 2) fringes.
 */
class SlitAmplitude {
  public:
    SlitAmplitude() = default;
    /// Throws DomainError on non-finite parameters or nonpositive width.
    SlitAmplitude(Envelope envelope, double k, double phase_gradient,
                  double omega = 0.0, double t = 0.0);

    static SlitAmplitude slit_a_default();
    static SlitAmplitude slit_b_default();

    [[nodiscard]] const Envelope &envelope() const noexcept { return envelope_; }
    [[nodiscard]] double k() const noexcept { return k_; }
    [[nodiscard]] double phase_gradient() const noexcept {
        return phase_gradient_;
    }
    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] double t() const noexcept { return t_; }

    /// Unchecked evaluation; callers guarantee finite x.
    [[nodiscard]] complex_t operator()(double x) const noexcept;
    /// |psi(x)|^2, computed from the envelope and therefore phase-free.
    [[nodiscard]] double density(double x) const noexcept;

    friend bool operator==(const SlitAmplitude &,
                           const SlitAmplitude &) = default;

  private:
    Envelope envelope_{};
    double k_{1.0};
    double phase_gradient_{0.0};
    double omega_{0.0};
    double t_{0.0};
};

/// Checked amplitude evaluation. Throws DomainError for non-finite x.
[[nodiscard]] complex_t eval_amplitude(const SlitAmplitude &s, double x);

/// <f|g> by trapezoid quadrature over grid.
[[nodiscard]] complex_t inner_product(const SlitAmplitude &f,
                                      const SlitAmplitude &g, const Grid &grid);

/// Normalized two-component spin state in the {up, down} basis.
class Spinor {
  public:
    /// Throws ValidationError unless |up|^2 + |down|^2 = 1 within 1e-12.
    Spinor(complex_t up_component, complex_t down_component);

    static Spinor up() noexcept;
    static Spinor down() noexcept;
    /// (up + down) / sqrt(2)
    static Spinor plus() noexcept;
    /// (up - down) / sqrt(2)
    static Spinor minus() noexcept;
    /// Bloch-sphere state (cos(theta/2), e^{i phi} sin(theta/2)).
    static Spinor from_axis(double theta, double phi);
    /// Normalizes first; throws ValidationError for a (near-)zero vector.
    static Spinor normalized(complex_t up_component, complex_t down_component);

    [[nodiscard]] complex_t up_component() const noexcept { return up_; }
    [[nodiscard]] complex_t down_component() const noexcept { return down_; }

    /// The orthonormal partner (-conj(down), conj(up)).
    [[nodiscard]] Spinor orthogonal() const noexcept;

    /// <this|v> for an unnormalized spin vector v = (v_up, v_down).
    [[nodiscard]] complex_t project(const std::array<complex_t, 2> &v) const noexcept {
        return std::conj(up_) * v[0] + std::conj(down_) * v[1];
    }

  private:
    struct Unchecked {};
    Spinor(Unchecked, complex_t u, complex_t d) noexcept : up_(u), down_(d) {}

    complex_t up_;
    complex_t down_;
};

/// <a|b>
[[nodiscard]] complex_t inner_product(const Spinor &a, const Spinor &b) noexcept;

/**
 * alpha |psi_a>|up> + beta |psi_b>|down>: each slit carries an orthogonal
 * spin tag, so the spin records which-way information.
 */
class EraserState {
  public:
    /// Throws ValidationError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    EraserState(complex_t alpha, complex_t beta, SlitAmplitude psi_a,
                SlitAmplitude psi_b);

    /// alpha = beta = 1/sqrt(2) with the default slit pair.
    static EraserState symmetric_default();

    [[nodiscard]] complex_t alpha() const noexcept { return alpha_; }
    [[nodiscard]] complex_t beta() const noexcept { return beta_; }
    [[nodiscard]] const SlitAmplitude &psi_a() const noexcept { return psi_a_; }
    [[nodiscard]] const SlitAmplitude &psi_b() const noexcept { return psi_b_; }

    /// <x|psi_2> as an unnormalized spin vector (alpha psi_a(x), beta psi_b(x)).
    [[nodiscard]] std::array<complex_t, 2> spin_amplitudes(double x) const noexcept {
        return {alpha_ * psi_a_(x), beta_ * psi_b_(x)};
    }

  private:
    complex_t alpha_;
    complex_t beta_;
    SlitAmplitude psi_a_;
    SlitAmplitude psi_b_;
};

/// |alpha psi_a(x) + beta psi_b(x)|^2: the untagged two-slit density, with
/// interference cross terms.
[[nodiscard]] double psi1_density(complex_t alpha, complex_t beta,
                                  const SlitAmplitude &psi_a,
                                  const SlitAmplitude &psi_b, double x);

/// |alpha|^2 |psi_a(x)|^2 + |beta|^2 |psi_b(x)|^2. The spin tags are
/// orthogonal so there are no cross terms.
[[nodiscard]] double psi2_density(const EraserState &state, double x);

} // namespace weakeraser
