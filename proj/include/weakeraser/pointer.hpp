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
 * Von Neumann pointer coupled to a binned position projector.
 *
 * The interaction H = g Pi_bin (x) P_d acts for a time t_int (hbar = 1), so
 * only the product lambda = g t_int matters. Because Pi_bin is a projector,
 *
 *   exp(-i lambda Pi_bin (x) P_d) = I + Pi_bin (x) (T_lambda - I),
 *
 * where T_lambda translates the pointer by lambda. The first-order path
 * applies I - i lambda Pi_bin (x) P_d instead and renormalizes.
 *
 * A JointState is stored in branch form: every system grid point carries a
 * two-component spin amplitude plus an index into a short list of pointer
 * wavefunctions. Before coupling there is a single branch; each coupling adds
 * one per distinct branch inside the bin. This is the full tensor product,
 * just without duplicating identical pointer columns.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "weakeraser/hilbert.hpp"

namespace weakeraser {

/// Periodic pointer grid q_j = -L + j (2L / n), j = 0..n-1, L = half_width.
struct PointerConfig {
    double sigma{1.0};
    /// L in units of sigma.
    double half_width_sigmas{8.0};
    std::size_t n_points{1024};

    [[nodiscard]] double half_width() const noexcept {
        return half_width_sigmas * sigma;
    }
    [[nodiscard]] double spacing() const noexcept {
        return 2.0 * half_width() / static_cast<double>(n_points);
    }
    [[nodiscard]] double position(std::size_t j) const noexcept {
        return -half_width() + spacing() * static_cast<double>(j);
    }
};

/// A translated Gaussian must stay this many sigma clear of the periodic
/// boundary.
inline constexpr double kPointerAliasMarginSigmas = 6.0;

enum class ExpansionOrder { exact, first_order };

struct CouplingConfig {
    double g{0.0};
    double t_int{1.0};
    /// Pi_bin covers `bin_points` system grid points (odd) centred on the grid
    /// point nearest to bin_center; its width is bin_points * grid spacing.
    double bin_center{0.0};
    std::size_t bin_points{1};
    ExpansionOrder order{ExpansionOrder::exact};

    [[nodiscard]] double coupling() const noexcept { return g * t_int; }
};

/// Grid index range [first, last] of the coupled bin.
struct BinRange {
    std::size_t first;
    std::size_t last;
    double width;

    [[nodiscard]] bool contains(std::size_t i) const noexcept {
        return i >= first && i <= last;
    }
};

/// Throws ConfigurationError if bin_points is even or zero, or the bin does
/// not fit on the grid.
[[nodiscard]] BinRange resolve_bin(const Grid &grid, const CouplingConfig &cfg);

class JointState {
  public:
    /// Discretizes |psi_2> on grid (trapezoid weights folded into the
    /// amplitudes), normalizes it, and attaches a Gaussian pointer of width
    /// sigma centred at 0. Throws ConfigurationError for a nonpositive sigma
    /// or fewer than 8 pointer points.
    static JointState prepare(const EraserState &state, const Grid &grid,
                              const PointerConfig &pointer = {});

    [[nodiscard]] const Grid &system_grid() const noexcept { return grid_; }
    [[nodiscard]] const PointerConfig &pointer_config() const noexcept {
        return pointer_;
    }
    [[nodiscard]] std::span<const std::array<complex_t, 2>> system_amplitudes() const noexcept {
        return system_;
    }
    [[nodiscard]] std::size_t branch_count() const noexcept { return branches_.size(); }
    [[nodiscard]] std::span<const complex_t> branch(std::size_t b) const noexcept {
        return branches_[b];
    }
    [[nodiscard]] std::size_t branch_of(std::size_t i) const noexcept {
        return branch_of_[i];
    }

    /// Joint amplitude <x_i, s, q_j|Psi> with the system trapezoid weight and
    /// the pointer spacing folded in, so that the sum of squared moduli is
    /// the squared norm.
    [[nodiscard]] complex_t amplitude(std::size_t i, std::size_t spin,
                                      std::size_t j) const noexcept;

    [[nodiscard]] double norm() const noexcept;

    friend JointState evolve(const JointState &joint, const CouplingConfig &cfg);

  private:
    JointState(Grid grid, PointerConfig pointer) : grid_(grid), pointer_(pointer) {}

    Grid grid_;
    PointerConfig pointer_;
    std::vector<std::array<complex_t, 2>> system_;
    std::vector<std::vector<complex_t>> branches_;
    std::vector<std::size_t> branch_of_;
};

/// Applies the coupling. g = 0 returns the input unchanged. Throws
/// ConfigurationError when lambda would push the pointer within
/// kPointerAliasMarginSigmas of the periodic boundary.
[[nodiscard]] JointState evolve(const JointState &joint, const CouplingConfig &cfg);

/// Pointer mean position after projecting the spin onto f and tracing
/// out the system. Throws DegeneratePostSelection when the probability of f
/// is at most epsilon.
[[nodiscard]] double conditional_pointer_mean(const JointState &joint, const Spinor &f,
                                              double epsilon = 1e-12);

/// Probability of spin outcome f in the joint state.
[[nodiscard]] double outcome_probability(const JointState &joint, const Spinor &f);

/// Unconditioned pointer mean.
[[nodiscard]] double pointer_mean(const JointState &joint);

/// 1 - Tr(rho_before rho_after) / (Tr rho_before Tr rho_after) for the
/// reduced system states; for a pure `before` this is 1 - fidelity. Throws
/// ConfigurationError if the system grids differ.
[[nodiscard]] double pointer_disturbance(const JointState &before,
                                         const JointState &after);

/**
 * Position density (per unit x, on the system grid) of the sub-ensemble with
 * spin outcome f, optionally also requiring the pointer to read q >=
 * pointer_threshold. Normalized to unit trapezoid integral.
 */
[[nodiscard]] std::vector<double>
conditional_position_density(const JointState &joint, const Spinor &f,
                             std::optional<double> pointer_threshold = std::nullopt);

} // namespace weakeraser
