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
#include "weakeraser/weak_values.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weakeraser/errors.hpp"

namespace weakeraser {

namespace {

void require_finite_x(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("x must be finite");
    }
}

// Coefficients of <f|<x|psi_2> = c_a psi_a(x) + c_b psi_b(x).
std::array<complex_t, 2> projected_coefficients(const EraserState &state,
                                                const Spinor &f) noexcept {
    return {std::conj(f.up_component()) * state.alpha(),
            std::conj(f.down_component()) * state.beta()};
}

[[noreturn]] void throw_degenerate(double p) {
    throw DegeneratePostSelection(
        "post-selection probability " + std::to_string(p) +
        " is below threshold; the weak value is undefined");
}

} // namespace

std::string_view to_string(Method m) noexcept {
    return m == Method::exact_quadrature ? "exact" : "idealized";
}

Method parse_method(std::string_view s) {
    if (s == "exact") {
        return Method::exact_quadrature;
    }
    if (s == "idealized") {
        return Method::idealized_closed_form;
    }
    throw ValidationError("unknown method '" + std::string(s) +
                          "' (expected exact or idealized)");
}

Spinor spinor_of(NamedSpin s) noexcept {
    switch (s) {
    case NamedSpin::up:
        return Spinor::up();
    case NamedSpin::down:
        return Spinor::down();
    case NamedSpin::plus:
        return Spinor::plus();
    case NamedSpin::minus:
    default:
        return Spinor::minus();
    }
}

std::string_view to_string(NamedSpin s) noexcept {
    switch (s) {
    case NamedSpin::up:
        return "up";
    case NamedSpin::down:
        return "down";
    case NamedSpin::plus:
        return "plus";
    case NamedSpin::minus:
    default:
        return "minus";
    }
}

// ---------------------------------------------------------------------------
// PostSelectionBasis

PostSelectionBasis::PostSelectionBasis(Spinor first, Spinor second)
    : members_{first, second} {
    if (std::abs(inner_product(first, second)) > 1e-12) {
        throw ValidationError("post-selection basis members are not orthogonal");
    }
}

PostSelectionBasis PostSelectionBasis::Z() noexcept {
    return {Unchecked{}, Spinor::up(), Spinor::down()};
}

PostSelectionBasis PostSelectionBasis::X() noexcept {
    return {Unchecked{}, Spinor::plus(), Spinor::minus()};
}

PostSelectionBasis PostSelectionBasis::axis(double theta, double phi) {
    const Spinor n = Spinor::from_axis(theta, phi);
    return {Unchecked{}, n, n.orthogonal()};
}

// ---------------------------------------------------------------------------
// Probabilities and densities

SlitOverlaps slit_overlaps(const EraserState &state, const Grid &grid) {
    return {inner_product(state.psi_a(), state.psi_a(), grid).real(),
            inner_product(state.psi_a(), state.psi_b(), grid),
            inner_product(state.psi_b(), state.psi_b(), grid).real()};
}

double joint_subensemble_density(const EraserState &state, const Spinor &f,
                                 double x) {
    require_finite_x(x);
    return std::norm(f.project(state.spin_amplitudes(x)));
}

double post_selection_probability(const EraserState &state, const Spinor &f,
                                  const SlitOverlaps &overlaps) noexcept {
    const auto [ca, cb] = projected_coefficients(state, f);
    return std::norm(ca) * overlaps.aa + std::norm(cb) * overlaps.bb +
           2.0 * (std::conj(ca) * cb * overlaps.ab).real();
}

double post_selection_probability(const EraserState &state, const Spinor &f,
                                  const Grid &grid, Method method) {
    const SlitOverlaps overlaps = method == Method::exact_quadrature
                                      ? slit_overlaps(state, grid)
                                      : SlitOverlaps::idealized();
    return post_selection_probability(state, f, overlaps);
}

// ---------------------------------------------------------------------------
// Weak values

WeakValue weak_value_exact(const EraserState &state, const Spinor &f, double x,
                           const Grid &grid, double epsilon) {
    return weak_value_exact(state, f, x, slit_overlaps(state, grid), epsilon);
}

WeakValue weak_value_exact(const EraserState &state, const Spinor &f, double x,
                           const SlitOverlaps &overlaps, double epsilon) {
    require_finite_x(x);
    const double p = post_selection_probability(state, f, overlaps);
    if (!(p > epsilon)) {
        throw_degenerate(p);
    }
    // <psi_2|f><f|x><x|psi_2>, kept complex; its imaginary part is roundoff.
    const complex_t amp = f.project(state.spin_amplitudes(x));
    const complex_t numerator = std::conj(amp) * amp;
    return {numerator / p, f, x, Method::exact_quadrature};
}

WeakValue weak_value_closed_form(const EraserState &state, NamedSpin f, double x,
                                 double epsilon) {
    require_finite_x(x);
    const double da = state.psi_a().density(x);
    const double db = state.psi_b().density(x);
    double value = 0.0;
    switch (f) {
    case NamedSpin::up:
        if (!(std::norm(state.alpha()) > epsilon)) {
            throw_degenerate(std::norm(state.alpha()));
        }
        value = da;
        break;
    case NamedSpin::down:
        if (!(std::norm(state.beta()) > epsilon)) {
            throw_degenerate(std::norm(state.beta()));
        }
        value = db;
        break;
    case NamedSpin::plus:
    case NamedSpin::minus: {
        const double sign = f == NamedSpin::plus ? 1.0 : -1.0;
        const complex_t cross = std::conj(state.alpha()) * state.beta() *
                                std::conj(state.psi_a()(x)) * state.psi_b()(x);
        value = std::norm(state.alpha()) * da + std::norm(state.beta()) * db +
                sign * 2.0 * cross.real();
        break;
    }
    }
    return {value, spinor_of(f), x, Method::idealized_closed_form};
}

WeakValue weak_value(const EraserState &state, const Spinor &f, double x,
                     const Grid &grid, Method method, double epsilon) {
    if (method == Method::exact_quadrature) {
        return weak_value_exact(state, f, x, grid, epsilon);
    }
    WeakValue wv = weak_value_exact(state, f, x, SlitOverlaps::idealized(), epsilon);
    wv.method = Method::idealized_closed_form;
    return wv;
}

double sum_rule_residual(const EraserState &state, const PostSelectionBasis &basis,
                         const Grid &grid, Method method, double epsilon) {
    const SlitOverlaps overlaps = method == Method::exact_quadrature
                                      ? slit_overlaps(state, grid)
                                      : SlitOverlaps::idealized();
    std::array<double, 2> prob{};
    for (std::size_t m = 0; m < 2; ++m) {
        prob[m] = post_selection_probability(state, basis.member(m), overlaps);
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        double total = 0.0;
        for (std::size_t m = 0; m < 2; ++m) {
            if (prob[m] > epsilon) {
                total += prob[m] *
                         weak_value_exact(state, basis.member(m), x, overlaps, epsilon)
                             .value.real();
            } else {
                total += joint_subensemble_density(state, basis.member(m), x);
            }
        }
        residual = std::max(residual, std::abs(total - psi2_density(state, x)));
    }
    return residual;
}

double IdealizationGap::max_probability_difference() const noexcept {
    return std::max(std::abs(probability_idealized[0] - probability_exact[0]),
                    std::abs(probability_idealized[1] - probability_exact[1]));
}

double IdealizationGap::max_weak_value_gap() const noexcept {
    return std::max(max_weak_value_difference[0], max_weak_value_difference[1]);
}

IdealizationGap idealization_gap(const EraserState &state,
                                 const PostSelectionBasis &basis, const Grid &grid) {
    const SlitOverlaps exact = slit_overlaps(state, grid);
    const SlitOverlaps ideal = SlitOverlaps::idealized();
    IdealizationGap gap;
    for (std::size_t m = 0; m < 2; ++m) {
        const Spinor &f = basis.member(m);
        gap.probability_idealized[m] = post_selection_probability(state, f, ideal);
        gap.probability_exact[m] = post_selection_probability(state, f, exact);
        if (!(gap.probability_idealized[m] > kDefaultPostSelectionEpsilon) ||
            !(gap.probability_exact[m] > kDefaultPostSelectionEpsilon)) {
            continue;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double joint = joint_subensemble_density(state, f, grid.point(i));
            worst = std::max(worst, std::abs(joint / gap.probability_idealized[m] -
                                             joint / gap.probability_exact[m]));
        }
        gap.max_weak_value_difference[m] = worst;
    }
    return gap;
}

} // namespace weakeraser
