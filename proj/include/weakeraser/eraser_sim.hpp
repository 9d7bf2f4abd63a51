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
 * Monte Carlo detection events for the quantum eraser and sub-ensemble
 * analysis.
 *
 * Screen positions are drawn from psi2_density by inverse CDF over the grid
 * cells (piecewise constant within a cell); the spin outcome is then drawn
 * from P(f|x) = |<f|<x|psi_2>|^2 / psi2_density(x) in the basis chosen for
 * that event. Positions never depend on the basis, which is what makes the
 * all-events marginal policy independent.
 *
 * Events are generated in fixed-size chunks, one RNG stream per chunk, so the
 * output is identical for any thread count.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "weakeraser/hilbert.hpp"
#include "weakeraser/weak_values.hpp"

namespace weakeraser {

enum class BasisTag : std::uint8_t { Z, X, custom };

struct DetectionEvent {
    double x;
    BasisTag basis;
    /// 0 for the first basis member (up, +, n), 1 for the second.
    std::uint8_t outcome;
    std::uint64_t stream_id;

    friend bool operator==(const DetectionEvent &, const DetectionEvent &) = default;
};

[[nodiscard]] std::string_view to_string(BasisTag b) noexcept;
/// "up"/"down" for Z, "plus"/"minus" for X, "first"/"second" for custom.
[[nodiscard]] std::string_view outcome_name(BasisTag b, std::uint8_t outcome) noexcept;

/// How each event's measurement basis is chosen.
class BasisPolicy {
  public:
    enum class Kind { fixed_z, fixed_x, random, custom };

    static BasisPolicy fixed_z() noexcept { return BasisPolicy(Kind::fixed_z, 1.0); }
    static BasisPolicy fixed_x() noexcept { return BasisPolicy(Kind::fixed_x, 0.0); }
    /// Z with probability p_z, X otherwise; decided per event after the
    /// position is drawn. Throws ValidationError unless 0 <= p_z <= 1.
    static BasisPolicy random(double p_z);
    static BasisPolicy custom(double theta, double phi);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double p_z() const noexcept { return p_z_; }
    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] double phi() const noexcept { return phi_; }
    [[nodiscard]] std::string name() const;

    /// The basis a tag stands for under this policy.
    [[nodiscard]] PostSelectionBasis basis(BasisTag tag) const;

  private:
    BasisPolicy(Kind k, double p_z) noexcept : kind_(k), p_z_(p_z) {}

    Kind kind_;
    double p_z_;
    double theta_{0.0};
    double phi_{0.0};
};

/// Seedable per-stream generator: mt19937_64 keyed by (seed, stream).
class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t stream);
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF table of psi2_density over the grid cells.
class ScreenSampler {
  public:
    ScreenSampler(const EraserState &state, const Grid &grid);

    /// Cell index for a uniform u in [0, 1). Zero-mass cells are never
    /// returned.
    [[nodiscard]] std::size_t cell(double u) const noexcept;
    [[nodiscard]] double cell_probability(std::size_t c) const noexcept;
    [[nodiscard]] const Grid &grid() const noexcept { return grid_; }

  private:
    Grid grid_;
    std::vector<double> cdf_; // cumulative cell mass, normalized, size n-1
};

struct SamplerOptions {
    std::size_t events_per_stream{1u << 16};
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads{0};
};

/// Throws ValidationError if n == 0.
[[nodiscard]] std::vector<DetectionEvent>
sample_events(const EraserState &state, const Grid &grid, std::size_t n,
              const BasisPolicy &policy, std::uint64_t seed,
              const SamplerOptions &options = {});

/// Counts on bins whose edges are every `cells_per_bin`-th grid point.
class Histogram {
  public:
    enum class Mode { counts, density };

    /// Throws ConfigurationError unless cells_per_bin divides the number of
    /// grid cells.
    Histogram(const Grid &grid, std::size_t cells_per_bin);

    void add(double x) noexcept;
    void merge(const Histogram &other);

    [[nodiscard]] std::size_t bin_count() const noexcept { return counts_.size(); }
    [[nodiscard]] double lower(std::size_t j) const noexcept;
    [[nodiscard]] double upper(std::size_t j) const noexcept;
    [[nodiscard]] double center(std::size_t j) const noexcept {
        return 0.5 * (lower(j) + upper(j));
    }
    [[nodiscard]] double width() const noexcept { return width_; }
    [[nodiscard]] std::uint64_t count(std::size_t j) const noexcept { return counts_[j]; }
    [[nodiscard]] std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    [[nodiscard]] std::uint64_t total() const noexcept;
    [[nodiscard]] std::size_t cells_per_bin() const noexcept { return cells_per_bin_; }
    [[nodiscard]] const Grid &grid() const noexcept { return grid_; }

    /// Count that density() divides by; defaults to total().
    [[nodiscard]] std::uint64_t normalizer() const noexcept;
    void set_normalizer(std::uint64_t n) noexcept { normalizer_ = n; }

    [[nodiscard]] double value(std::size_t j, Mode mode) const noexcept;
    [[nodiscard]] double density(std::size_t j) const noexcept {
        return value(j, Mode::density);
    }

  private:
    Grid grid_;
    std::size_t cells_per_bin_;
    double width_;
    std::vector<std::uint64_t> counts_;
    std::optional<std::uint64_t> normalizer_;
};

inline constexpr std::size_t kDefaultCellsPerBin = 10;

/// Events with the given basis tag and outcome, normalized to unit integral
/// (converges to the conditional density weak_value_exact). Throws
/// EmptySubEnsemble when nothing matches.
[[nodiscard]] Histogram subensemble_histogram(std::span<const DetectionEvent> events,
                                              BasisTag basis, std::uint8_t outcome,
                                              const Grid &grid,
                                              std::size_t cells_per_bin = kDefaultCellsPerBin);

/// All events (optionally only those measured in `basis`).
[[nodiscard]] Histogram marginal_histogram(std::span<const DetectionEvent> events,
                                           const Grid &grid,
                                           std::size_t cells_per_bin = kDefaultCellsPerBin,
                                           std::optional<BasisTag> basis = std::nullopt);

/// Max bin discrepancy between the summed outcome histograms and the
/// histogram of all events measured in `basis`. Zero for any event set.
[[nodiscard]] std::uint64_t recombine_check(std::span<const DetectionEvent> events,
                                            BasisTag basis, const Grid &grid,
                                            std::size_t cells_per_bin = kDefaultCellsPerBin);

struct ChiSquare {
    double statistic{0.0};
    std::size_t bins_used{0};
    std::size_t dof{0};

    [[nodiscard]] double reduced() const noexcept {
        return dof ? statistic / static_cast<double>(dof) : 0.0;
    }
};

/// Per-bin integral of the conditional density A_w(f, x) = joint / P(f)
/// (trapezoid on the grid points of each bin).
[[nodiscard]] std::vector<double>
conditional_bin_probabilities(const EraserState &state, const Spinor &f,
                              const Histogram &binning);

/// Pearson chi-square of the histogram counts against normalizer() *
/// expected_probability, over bins whose expected count is >= min_expected;
/// dof = bins used - 1.
[[nodiscard]] ChiSquare chi_square(const Histogram &hist,
                                   std::span<const double> expected_probability,
                                   double min_expected = 10.0);

[[nodiscard]] ChiSquare chi_square_vs_conditional(const Histogram &hist,
                                                  const EraserState &state,
                                                  const Spinor &f,
                                                  double min_expected = 10.0);

struct TwoSampleResult {
    double statistic{0.0};
    std::size_t dof{0};
    /// (statistic - dof) / sqrt(2 dof)
    double z{0.0};
};

/// Two-sample chi-square for equality of the underlying distributions, over
/// bins where the combined count is >= min_combined.
[[nodiscard]] TwoSampleResult two_sample_chi_square(const Histogram &a, const Histogram &b,
                                                    double min_combined = 10.0);

/**
 * Fringe visibility (max - min) / (max + min) over bins with centre in
 * [-half_range, half_range] of the histogram density divided by the bin
 * average of `envelope`. Dividing out the fringeless envelope makes a
 * single-slit peak read as ~0 and full-contrast fringes as ~1.
 */
[[nodiscard]] double fringe_visibility(const Histogram &hist,
                                       const std::function<double(double)> &envelope,
                                       double half_range = 3.0);

/// The same ratio with no envelope division.
[[nodiscard]] double raw_visibility(const Histogram &hist, double half_range = 3.0);

struct MarginalComparison {
    std::size_t first;
    std::size_t second;
    TwoSampleResult result;
    bool consistent;
};

struct MarginalReport {
    std::vector<std::string> policies;
    std::vector<std::uint64_t> seeds;
    std::vector<Histogram> marginals;
    std::vector<MarginalComparison> comparisons;
    double z_threshold{3.0};

    [[nodiscard]] bool consistent() const noexcept;
};

/// Derives the seed used for the i-th policy run of a marginal comparison.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Samples n events per policy (seeds derived from `seed`), builds the
/// all-events histograms and compares every pair. Throws ValidationError for
/// fewer than two policies.
[[nodiscard]] MarginalReport
marginal_invariance_test(const EraserState &state, const Grid &grid, std::size_t n,
                         std::span<const BasisPolicy> policies, std::uint64_t seed,
                         const SamplerOptions &options = {},
                         std::size_t cells_per_bin = kDefaultCellsPerBin,
                         double z_threshold = 3.0);

} // namespace weakeraser
