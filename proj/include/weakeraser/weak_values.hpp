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
 * Weak values of the position projector |x><x| (tensored with the spin
 * identity) under spin post-selection.
 *
 * For a post-selected spinor f the weak value is
 *
 *   A_w(f, x) = <psi_2|f><f|x><x|psi_2> / <psi_2|f><f|psi_2>
 *             = |<f|<x|psi_2>|^2 / P(f),
 *
 * the density at x conditional on the spin being found in f.
 *
 * Two evaluation paths are provided:
 *  - Method::exact_quadrature computes P(f) from the slit overlap matrix
 *    <psi_i|psi_j> by quadrature. For the Lorentzian pair <psi_a|psi_b> =
 *    e^{-pi}, not zero.
 *  - Method::idealized_closed_form uses <psi_a|psi_b> = 0 and
 *    <psi_i|psi_i> = 1, which turns the weak values into the familiar closed
 *    forms |psi_a|^2, |psi_b|^2 and
 *    |alpha|^2|psi_a|^2 + |beta|^2|psi_b|^2 +- 2 Re(alpha* beta psi_a* psi_b).
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "weakeraser/hilbert.hpp"

namespace weakeraser {

enum class Method { exact_quadrature, idealized_closed_form };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
/// Accepts "exact" and "idealized"; throws ValidationError otherwise.
[[nodiscard]] Method parse_method(std::string_view s);

/// Post-selection threshold below which weak values are undefined.
inline constexpr double kDefaultPostSelectionEpsilon = 1e-12;

struct WeakValue {
    complex_t value;
    Spinor post_selection;
    double x;
    Method method;
};

enum class NamedSpin { up, down, plus, minus };

[[nodiscard]] Spinor spinor_of(NamedSpin s) noexcept;
[[nodiscard]] std::string_view to_string(NamedSpin s) noexcept;

/// A pair of orthonormal spinors measured at the screen.
class PostSelectionBasis {
  public:
    /// Throws ValidationError unless |<first|second>| <= 1e-12.
    PostSelectionBasis(Spinor first, Spinor second);

    /// {up, down}
    static PostSelectionBasis Z() noexcept;
    /// {+, -}
    static PostSelectionBasis X() noexcept;
    /// {n, -n} for the Bloch direction (theta, phi).
    static PostSelectionBasis axis(double theta, double phi);

    [[nodiscard]] const Spinor &first() const noexcept { return members_[0]; }
    [[nodiscard]] const Spinor &second() const noexcept { return members_[1]; }
    [[nodiscard]] const Spinor &member(std::size_t i) const noexcept {
        return members_[i];
    }

  private:
    struct Unchecked {};
    PostSelectionBasis(Unchecked, Spinor a, Spinor b) noexcept
        : members_{a, b} {}

    std::array<Spinor, 2> members_;
};

/// Gram matrix of the two slit amplitudes on a grid.
struct SlitOverlaps {
    double aa{1.0};
    complex_t ab{0.0};
    double bb{1.0};

    /// Orthonormal slits, as assumed by the closed forms.
    static SlitOverlaps idealized() noexcept { return {}; }
};

[[nodiscard]] SlitOverlaps slit_overlaps(const EraserState &state, const Grid &grid);

/// |<f|<x|psi_2>|^2: the joint density of landing at x with spin outcome f.
[[nodiscard]] double joint_subensemble_density(const EraserState &state,
                                               const Spinor &f, double x);

/// <psi_2|f><f|psi_2> evaluated with a given overlap matrix.
[[nodiscard]] double post_selection_probability(const EraserState &state,
                                                const Spinor &f,
                                                const SlitOverlaps &overlaps) noexcept;

/// Exact: quadrature over grid; idealized: |alpha|^2, |beta|^2, 1/2 for the
/// named states (and the orthonormal-slit value for any other spinor).
[[nodiscard]] double post_selection_probability(const EraserState &state,
                                                const Spinor &f, const Grid &grid,
                                                Method method);

/// Throws DegeneratePostSelection when P(f) <= epsilon.
[[nodiscard]] WeakValue weak_value_exact(const EraserState &state, const Spinor &f,
                                         double x, const Grid &grid,
                                         double epsilon = kDefaultPostSelectionEpsilon);
/// Same, with the overlaps precomputed (use for sweeps over x).
[[nodiscard]] WeakValue weak_value_exact(const EraserState &state, const Spinor &f,
                                         double x, const SlitOverlaps &overlaps,
                                         double epsilon = kDefaultPostSelectionEpsilon);

/// The printed closed forms. Throws DegeneratePostSelection for up with
/// |alpha|^2 <= epsilon or down with |beta|^2 <= epsilon.
[[nodiscard]] WeakValue weak_value_closed_form(const EraserState &state, NamedSpin f,
                                               double x,
                                               double epsilon = kDefaultPostSelectionEpsilon);

/// Weak value by either path for an arbitrary spinor. The idealized path for
/// a spinor that is not one of the named states uses joint / P with identity
/// slit overlaps.
[[nodiscard]] WeakValue weak_value(const EraserState &state, const Spinor &f, double x,
                                   const Grid &grid, Method method,
                                   double epsilon = kDefaultPostSelectionEpsilon);

/**
 * max over grid x of |P(f1) A_w(f1, x) + P(f2) A_w(f2, x) - psi2_density(x)|.
 *
 * A basis member whose probability is at most epsilon contributes its joint
 * density directly, which is what P * A_w tends to.
 */
[[nodiscard]] double sum_rule_residual(const EraserState &state,
                                       const PostSelectionBasis &basis,
                                       const Grid &grid, Method method,
                                       double epsilon = kDefaultPostSelectionEpsilon);

/// How far the orthonormal-slit closed forms are from the quadrature values.
struct IdealizationGap {
    std::array<double, 2> probability_idealized{};
    std::array<double, 2> probability_exact{};
    /// max over grid of |A_w^idealized - A_w^exact| per basis member.
    std::array<double, 2> max_weak_value_difference{};

    [[nodiscard]] double max_probability_difference() const noexcept;
    [[nodiscard]] double max_weak_value_gap() const noexcept;
};

[[nodiscard]] IdealizationGap idealization_gap(const EraserState &state,
                                               const PostSelectionBasis &basis,
                                               const Grid &grid);

} // namespace weakeraser
