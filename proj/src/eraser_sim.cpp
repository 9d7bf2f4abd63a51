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
#include "weakeraser/eraser_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "weakeraser/errors.hpp"

namespace weakeraser {

std::string_view to_string(BasisTag b) noexcept {
    switch (b) {
    case BasisTag::Z:
        return "Z";
    case BasisTag::X:
        return "X";
    case BasisTag::custom:
    default:
        return "custom";
    }
}

std::string_view outcome_name(BasisTag b, std::uint8_t outcome) noexcept {
    switch (b) {
    case BasisTag::Z:
        return outcome == 0 ? "up" : "down";
    case BasisTag::X:
        return outcome == 0 ? "plus" : "minus";
    case BasisTag::custom:
    default:
        return outcome == 0 ? "first" : "second";
    }
}

// ---------------------------------------------------------------------------
// BasisPolicy

BasisPolicy BasisPolicy::random(double p_z) {
    if (!(p_z >= 0.0 && p_z <= 1.0)) {
        throw ValidationError("p_z must lie in [0, 1]");
    }
    return BasisPolicy(Kind::random, p_z);
}

BasisPolicy BasisPolicy::custom(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw ValidationError("custom axis angles must be finite");
    }
    BasisPolicy p(Kind::custom, 0.0);
    p.theta_ = theta;
    p.phi_ = phi;
    return p;
}

std::string BasisPolicy::name() const {
    char buf[96];
    switch (kind_) {
    case Kind::fixed_z:
        return "z";
    case Kind::fixed_x:
        return "x";
    case Kind::random:
        std::snprintf(buf, sizeof buf, "random(p_z=%.12g)", p_z_);
        return buf;
    case Kind::custom:
    default:
        std::snprintf(buf, sizeof buf, "custom(theta=%.12g,phi=%.12g)", theta_, phi_);
        return buf;
    }
}

PostSelectionBasis BasisPolicy::basis(BasisTag tag) const {
    switch (tag) {
    case BasisTag::Z:
        return PostSelectionBasis::Z();
    case BasisTag::X:
        return PostSelectionBasis::X();
    case BasisTag::custom:
    default:
        return PostSelectionBasis::axis(theta_, phi_);
    }
}

// ---------------------------------------------------------------------------
// RNG and sampler

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x5eed5eedu};
    engine_.seed(seq);
}

ScreenSampler::ScreenSampler(const EraserState &state, const Grid &grid) : grid_(grid) {
    std::vector<double> rho(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rho[i] = psi2_density(state, grid.point(i));
    }
    cdf_.resize(grid.size() - 1);
    double acc = 0.0;
    for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
        acc += 0.5 * (rho[c] + rho[c + 1]) * grid.spacing();
        cdf_[c] = acc;
    }
    if (!(acc > 0.0)) {
        throw ConfigurationError("psi2 density has no mass on the grid");
    }
    for (double &v : cdf_) {
        v /= acc;
    }
    cdf_.back() = 1.0;
}

std::size_t ScreenSampler::cell(double u) const noexcept {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

double ScreenSampler::cell_probability(std::size_t c) const noexcept {
    return c == 0 ? cdf_[0] : cdf_[c] - cdf_[c - 1];
}

namespace {

void sample_chunk(const EraserState &state, const ScreenSampler &sampler,
                  const BasisPolicy &policy, const std::array<PostSelectionBasis, 3> &bases,
                  std::uint64_t seed, std::uint64_t stream,
                  std::span<DetectionEvent> out) {
    StreamRng rng(seed, stream);
    const Grid &grid = sampler.grid();
    for (DetectionEvent &ev : out) {
        const std::size_t c = sampler.cell(rng.uniform());
        double x = 0.0;
        double rho = 0.0;
        // Resample inside the cell on the (measure-zero) chance of a node.
        do {
            x = grid.point(c) + rng.uniform() * grid.spacing();
            rho = psi2_density(state, x);
        } while (!(rho > 0.0));

        BasisTag tag = BasisTag::Z;
        switch (policy.kind()) {
        case BasisPolicy::Kind::fixed_z:
            tag = BasisTag::Z;
            break;
        case BasisPolicy::Kind::fixed_x:
            tag = BasisTag::X;
            break;
        case BasisPolicy::Kind::random:
            tag = rng.uniform() < policy.p_z() ? BasisTag::Z : BasisTag::X;
            break;
        case BasisPolicy::Kind::custom:
            tag = BasisTag::custom;
            break;
        }
        const PostSelectionBasis &basis = bases[static_cast<std::size_t>(tag)];
        const auto amp = state.spin_amplitudes(x);
        const double j0 = std::norm(basis.first().project(amp));
        const double j1 = std::norm(basis.second().project(amp));
        const double p_first = j0 / (j0 + j1);
        ev.x = x;
        ev.basis = tag;
        ev.outcome = rng.uniform() < p_first ? 0 : 1;
        ev.stream_id = stream;
    }
}

} // namespace

std::vector<DetectionEvent> sample_events(const EraserState &state, const Grid &grid,
                                          std::size_t n, const BasisPolicy &policy,
                                          std::uint64_t seed,
                                          const SamplerOptions &options) {
    if (n == 0) {
        throw ValidationError("number of events must be at least 1");
    }
    if (options.events_per_stream == 0) {
        throw ConfigurationError("events_per_stream must be positive");
    }
    const ScreenSampler sampler(state, grid);
    const std::array<PostSelectionBasis, 3> bases{policy.basis(BasisTag::Z),
                                                  policy.basis(BasisTag::X),
                                                  policy.basis(BasisTag::custom)};
    std::vector<DetectionEvent> events(n);
    const std::size_t chunk = options.events_per_stream;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_chunks)));

    auto work = [&](unsigned worker) {
        for (std::size_t c = worker; c < n_chunks; c += threads) {
            const std::size_t begin = c * chunk;
            const std::size_t len = std::min(chunk, n - begin);
            sample_chunk(state, sampler, policy, bases, seed, c,
                         std::span<DetectionEvent>(events).subspan(begin, len));
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t);
        }
    }
    return events;
}

// ---------------------------------------------------------------------------
// Histogram

Histogram::Histogram(const Grid &grid, std::size_t cells_per_bin)
    : grid_(grid), cells_per_bin_(cells_per_bin), width_(0.0) {
    const std::size_t cells = grid.size() - 1;
    if (cells_per_bin == 0 || cells % cells_per_bin != 0) {
        throw ConfigurationError("cells_per_bin must divide the number of grid cells");
    }
    width_ = grid.spacing() * static_cast<double>(cells_per_bin);
    counts_.assign(cells / cells_per_bin, 0);
}

void Histogram::add(double x) noexcept {
    const double r = (x - grid_.x_min()) / width_;
    std::size_t j = 0;
    if (r > 0.0) {
        j = std::min(static_cast<std::size_t>(r), counts_.size() - 1);
    }
    ++counts_[j];
}

void Histogram::merge(const Histogram &other) {
    if (!(other.grid_ == grid_) || other.cells_per_bin_ != cells_per_bin_) {
        throw ConfigurationError("cannot merge histograms with different binning");
    }
    for (std::size_t j = 0; j < counts_.size(); ++j) {
        counts_[j] += other.counts_[j];
    }
}

double Histogram::lower(std::size_t j) const noexcept {
    return grid_.point(j * cells_per_bin_);
}

double Histogram::upper(std::size_t j) const noexcept {
    return grid_.point((j + 1) * cells_per_bin_);
}

std::uint64_t Histogram::total() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts_) {
        s += c;
    }
    return s;
}

std::uint64_t Histogram::normalizer() const noexcept {
    return normalizer_ ? *normalizer_ : total();
}

double Histogram::value(std::size_t j, Mode mode) const noexcept {
    if (mode == Mode::counts) {
        return static_cast<double>(counts_[j]);
    }
    const auto n = normalizer();
    return n ? static_cast<double>(counts_[j]) / (static_cast<double>(n) * width_) : 0.0;
}

Histogram subensemble_histogram(std::span<const DetectionEvent> events, BasisTag basis,
                                std::uint8_t outcome, const Grid &grid,
                                std::size_t cells_per_bin) {
    Histogram h(grid, cells_per_bin);
    for (const auto &ev : events) {
        if (ev.basis == basis && ev.outcome == outcome) {
            h.add(ev.x);
        }
    }
    if (h.total() == 0) {
        throw EmptySubEnsemble("no events with basis " + std::string(to_string(basis)) +
                               " and outcome " +
                               std::string(outcome_name(basis, outcome)));
    }
    return h;
}

Histogram marginal_histogram(std::span<const DetectionEvent> events, const Grid &grid,
                             std::size_t cells_per_bin, std::optional<BasisTag> basis) {
    Histogram h(grid, cells_per_bin);
    for (const auto &ev : events) {
        if (!basis || ev.basis == *basis) {
            h.add(ev.x);
        }
    }
    return h;
}

std::uint64_t recombine_check(std::span<const DetectionEvent> events, BasisTag basis,
                              const Grid &grid, std::size_t cells_per_bin) {
    Histogram first(grid, cells_per_bin);
    Histogram second(grid, cells_per_bin);
    for (const auto &ev : events) {
        if (ev.basis == basis) {
            (ev.outcome == 0 ? first : second).add(ev.x);
        }
    }
    const Histogram all = marginal_histogram(events, grid, cells_per_bin, basis);
    first.merge(second);
    std::uint64_t worst = 0;
    for (std::size_t j = 0; j < all.bin_count(); ++j) {
        const auto a = first.count(j);
        const auto b = all.count(j);
        worst = std::max(worst, a > b ? a - b : b - a);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Statistics

std::vector<double> conditional_bin_probabilities(const EraserState &state,
                                                  const Spinor &f,
                                                  const Histogram &binning) {
    const Grid &grid = binning.grid();
    const SlitOverlaps overlaps = slit_overlaps(state, grid);
    const double p = post_selection_probability(state, f, overlaps);
    if (!(p > kDefaultPostSelectionEpsilon)) {
        throw DegeneratePostSelection("sub-ensemble has zero probability");
    }
    std::vector<double> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        a[i] = joint_subensemble_density(state, f, grid.point(i)) / p;
    }
    const std::size_t m = binning.cells_per_bin();
    std::vector<double> probs(binning.bin_count());
    for (std::size_t j = 0; j < probs.size(); ++j) {
        double s = 0.0;
        for (std::size_t c = j * m; c < (j + 1) * m; ++c) {
            s += 0.5 * (a[c] + a[c + 1]);
        }
        probs[j] = s * grid.spacing();
    }
    return probs;
}

ChiSquare chi_square(const Histogram &hist, std::span<const double> expected_probability,
                     double min_expected) {
    if (expected_probability.size() != hist.bin_count()) {
        throw ConfigurationError("chi_square: expected vector does not match binning");
    }
    const double n = static_cast<double>(hist.normalizer());
    ChiSquare out;
    for (std::size_t j = 0; j < hist.bin_count(); ++j) {
        const double e = n * expected_probability[j];
        if (e < min_expected) {
            continue;
        }
        const double d = static_cast<double>(hist.count(j)) - e;
        out.statistic += d * d / e;
        ++out.bins_used;
    }
    out.dof = out.bins_used > 0 ? out.bins_used - 1 : 0;
    return out;
}

ChiSquare chi_square_vs_conditional(const Histogram &hist, const EraserState &state,
                                    const Spinor &f, double min_expected) {
    const auto probs = conditional_bin_probabilities(state, f, hist);
    return chi_square(hist, probs, min_expected);
}

TwoSampleResult two_sample_chi_square(const Histogram &a, const Histogram &b,
                                      double min_combined) {
    if (a.bin_count() != b.bin_count()) {
        throw ConfigurationError("two_sample_chi_square: binning differs");
    }
    const double na = static_cast<double>(a.total());
    const double nb = static_cast<double>(b.total());
    if (!(na > 0.0) || !(nb > 0.0)) {
        throw EmptySubEnsemble("two_sample_chi_square: empty histogram");
    }
    const double ka = std::sqrt(nb / na);
    const double kb = std::sqrt(na / nb);
    TwoSampleResult out;
    std::size_t used = 0;
    for (std::size_t j = 0; j < a.bin_count(); ++j) {
        const double ca = static_cast<double>(a.count(j));
        const double cb = static_cast<double>(b.count(j));
        if (ca + cb < min_combined) {
            continue;
        }
        const double d = ka * ca - kb * cb;
        out.statistic += d * d / (ca + cb);
        ++used;
    }
    out.dof = used > 0 ? used - 1 : 0;
    out.z = out.dof ? (out.statistic - static_cast<double>(out.dof)) /
                          std::sqrt(2.0 * static_cast<double>(out.dof))
                    : 0.0;
    return out;
}

namespace {

double visibility_of(const Histogram &hist, double half_range,
                     const std::function<double(std::size_t)> &value) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t j = 0; j < hist.bin_count(); ++j) {
        if (std::abs(hist.center(j)) > half_range) {
            continue;
        }
        const double v = value(j);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > 0.0)) {
        return 0.0;
    }
    return (hi - lo) / (hi + lo);
}

double bin_average(const std::function<double(double)> &f, double a, double b) {
    // Composite Simpson, 64 panels.
    constexpr int panels = 64;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int k = 1; k < panels; ++k) {
        s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
    }
    return s * h / 3.0 / (b - a);
}

} // namespace

double fringe_visibility(const Histogram &hist, const std::function<double(double)> &envelope,
                         double half_range) {
    return visibility_of(hist, half_range, [&](std::size_t j) {
        return hist.density(j) / bin_average(envelope, hist.lower(j), hist.upper(j));
    });
}

double raw_visibility(const Histogram &hist, double half_range) {
    return visibility_of(hist, half_range, [&](std::size_t j) { return hist.density(j); });
}

// ---------------------------------------------------------------------------
// Marginal invariance

bool MarginalReport::consistent() const noexcept {
    return std::all_of(comparisons.begin(), comparisons.end(),
                       [](const MarginalComparison &c) { return c.consistent; });
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    // SplitMix64 finalizer.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

MarginalReport marginal_invariance_test(const EraserState &state, const Grid &grid,
                                        std::size_t n, std::span<const BasisPolicy> policies,
                                        std::uint64_t seed, const SamplerOptions &options,
                                        std::size_t cells_per_bin, double z_threshold) {
    if (policies.size() < 2) {
        throw ValidationError("marginal invariance needs at least two policies");
    }
    MarginalReport report;
    report.z_threshold = z_threshold;
    for (std::size_t i = 0; i < policies.size(); ++i) {
        const std::uint64_t s = derive_seed(seed, i);
        const auto events = sample_events(state, grid, n, policies[i], s, options);
        report.policies.push_back(policies[i].name());
        report.seeds.push_back(s);
        report.marginals.push_back(marginal_histogram(events, grid, cells_per_bin));
    }
    for (std::size_t i = 0; i < policies.size(); ++i) {
        for (std::size_t j = i + 1; j < policies.size(); ++j) {
            const auto r = two_sample_chi_square(report.marginals[i], report.marginals[j]);
            report.comparisons.push_back({i, j, r, r.z < z_threshold});
        }
    }
    return report;
}

} // namespace weakeraser
