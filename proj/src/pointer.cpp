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
#include "weakeraser/pointer.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "weakeraser/errors.hpp"

namespace weakeraser {

namespace {

// FFTW planning is not thread-safe; execution on a private plan is.
std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

enum class SpectralOp { translate, momentum };

/// Applies a diagonal operator in pointer momentum space: either the
/// translation exp(-i p lambda) or multiplication by p.
std::vector<complex_t> apply_spectral(std::span<const complex_t> wave,
                                      const PointerConfig &cfg, SpectralOp op,
                                      double lambda) {
    const std::size_t n = wave.size();
    std::vector<complex_t> buf(wave.begin(), wave.end());
    auto *data = reinterpret_cast<fftw_complex *>(buf.data());
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(static_cast<int>(n), data, data,
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(forward);
    const double dp = 2.0 * std::numbers::pi / (static_cast<double>(n) * cfg.spacing());
    for (std::size_t k = 0; k < n; ++k) {
        double p = 0.0;
        if (2 * k < n) {
            p = dp * static_cast<double>(k);
        } else if (2 * k > n) {
            p = -dp * static_cast<double>(n - k);
        }
        // Nyquist mode (2k == n) keeps p = 0.
        const complex_t factor =
            op == SpectralOp::translate ? std::polar(1.0, -p * lambda) : complex_t(p);
        buf[k] *= factor / static_cast<double>(n);
    }
    fftw_execute(backward);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    return buf;
}

double wave_norm2(std::span<const complex_t> wave, double h) {
    double s = 0.0;
    for (const complex_t &v : wave) {
        s += std::norm(v);
    }
    return s * h;
}

double wave_first_moment(std::span<const complex_t> wave, const PointerConfig &cfg) {
    double s = 0.0;
    for (std::size_t j = 0; j < wave.size(); ++j) {
        s += cfg.position(j) * std::norm(wave[j]);
    }
    return s * cfg.spacing();
}

double wave_mass_above(std::span<const complex_t> wave, const PointerConfig &cfg,
                       double threshold) {
    double s = 0.0;
    for (std::size_t j = 0; j < wave.size(); ++j) {
        if (cfg.position(j) >= threshold) {
            s += std::norm(wave[j]);
        }
    }
    return s * cfg.spacing();
}

complex_t wave_inner(std::span<const complex_t> a, std::span<const complex_t> b,
                     double h) {
    complex_t s{};
    for (std::size_t j = 0; j < a.size(); ++j) {
        s += std::conj(a[j]) * b[j];
    }
    return s * h;
}

// Per-branch weight of the spin-projected (or full) system amplitudes.
std::vector<double> branch_weights(const JointState &joint, const Spinor *f) {
    std::vector<double> w(joint.branch_count(), 0.0);
    const auto sys = joint.system_amplitudes();
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double v = f ? std::norm(f->project(sys[i]))
                           : std::norm(sys[i][0]) + std::norm(sys[i][1]);
        w[joint.branch_of(i)] += v;
    }
    return w;
}

} // namespace

BinRange resolve_bin(const Grid &grid, const CouplingConfig &cfg) {
    if (cfg.bin_points == 0 || cfg.bin_points % 2 == 0) {
        throw ConfigurationError("bin_points must be odd and positive");
    }
    if (!std::isfinite(cfg.bin_center) || !grid.contains(cfg.bin_center)) {
        throw ConfigurationError("bin center lies outside the system grid");
    }
    const std::size_t centre = grid.nearest_index(cfg.bin_center);
    const std::size_t half = cfg.bin_points / 2;
    if (centre < half || centre + half >= grid.size()) {
        throw ConfigurationError("bin does not fit on the system grid");
    }
    return {centre - half, centre + half,
            static_cast<double>(cfg.bin_points) * grid.spacing()};
}

JointState JointState::prepare(const EraserState &state, const Grid &grid,
                               const PointerConfig &pointer) {
    if (!(pointer.sigma > 0.0) || !std::isfinite(pointer.sigma)) {
        throw ConfigurationError("pointer sigma must be positive");
    }
    if (pointer.n_points < 8 || !(pointer.half_width_sigmas > 0.0)) {
        throw ConfigurationError("pointer grid needs at least 8 points and a positive width");
    }
    JointState joint(grid, pointer);
    joint.system_.resize(grid.size());
    double n2 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double sw = std::sqrt(grid.trapezoid_weight(i));
        auto amp = state.spin_amplitudes(grid.point(i));
        joint.system_[i] = {amp[0] * sw, amp[1] * sw};
        n2 += std::norm(joint.system_[i][0]) + std::norm(joint.system_[i][1]);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto &a : joint.system_) {
        a[0] *= inv;
        a[1] *= inv;
    }

    std::vector<complex_t> gauss(pointer.n_points);
    const double s = pointer.sigma;
    for (std::size_t j = 0; j < pointer.n_points; ++j) {
        const double q = pointer.position(j);
        gauss[j] = std::exp(-q * q / (4.0 * s * s));
    }
    const double gn = 1.0 / std::sqrt(wave_norm2(gauss, pointer.spacing()));
    for (auto &v : gauss) {
        v *= gn;
    }
    joint.branches_.push_back(std::move(gauss));
    joint.branch_of_.assign(grid.size(), 0);
    return joint;
}

complex_t JointState::amplitude(std::size_t i, std::size_t spin,
                                std::size_t j) const noexcept {
    return system_[i][spin] * branches_[branch_of_[i]][j] * std::sqrt(pointer_.spacing());
}

double JointState::norm() const noexcept {
    const double h = pointer_.spacing();
    std::vector<double> bn(branches_.size());
    for (std::size_t b = 0; b < branches_.size(); ++b) {
        bn[b] = wave_norm2(branches_[b], h);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < system_.size(); ++i) {
        s += (std::norm(system_[i][0]) + std::norm(system_[i][1])) * bn[branch_of_[i]];
    }
    return std::sqrt(s);
}

JointState evolve(const JointState &joint, const CouplingConfig &cfg) {
    const double lambda = cfg.coupling();
    if (!std::isfinite(lambda)) {
        throw ConfigurationError("g * t_int must be finite");
    }
    const BinRange bin = resolve_bin(joint.grid_, cfg);
    const PointerConfig &pc = joint.pointer_;
    if (std::abs(lambda) > pc.half_width() - kPointerAliasMarginSigmas * pc.sigma) {
        throw ConfigurationError(
            "pointer translation g*t_int = " + std::to_string(lambda) +
            " would alias on the periodic pointer grid of half-width " +
            std::to_string(pc.half_width()) + "; widen the pointer grid to at least " +
            std::to_string(std::abs(lambda) / pc.sigma + kPointerAliasMarginSigmas) +
            " sigma or reduce the coupling");
    }
    if (lambda == 0.0) {
        return joint;
    }

    JointState out = joint;
    const double norm_before = joint.norm();
    std::map<std::size_t, std::size_t> coupled; // old branch -> new branch
    for (std::size_t i = bin.first; i <= bin.last; ++i) {
        const std::size_t b = joint.branch_of_[i];
        auto it = coupled.find(b);
        if (it == coupled.end()) {
            std::vector<complex_t> next;
            if (cfg.order == ExpansionOrder::exact) {
                next = apply_spectral(joint.branches_[b], pc, SpectralOp::translate, lambda);
            } else {
                next = apply_spectral(joint.branches_[b], pc, SpectralOp::momentum, 0.0);
                const complex_t mi_lambda(0.0, -lambda);
                for (std::size_t j = 0; j < next.size(); ++j) {
                    next[j] = joint.branches_[b][j] + mi_lambda * next[j];
                }
            }
            out.branches_.push_back(std::move(next));
            it = coupled.emplace(b, out.branches_.size() - 1).first;
        }
        out.branch_of_[i] = it->second;
    }

    // Drop branches no longer referenced.
    std::vector<std::size_t> remap(out.branches_.size(), SIZE_MAX);
    std::vector<std::vector<complex_t>> kept;
    for (std::size_t &b : out.branch_of_) {
        if (remap[b] == SIZE_MAX) {
            remap[b] = kept.size();
            kept.push_back(out.branches_[b]);
        }
        b = remap[b];
    }
    out.branches_ = std::move(kept);

    if (cfg.order == ExpansionOrder::first_order) {
        const double scale = norm_before / out.norm();
        for (auto &a : out.system_) {
            a[0] *= scale;
            a[1] *= scale;
        }
    }
    return out;
}

double outcome_probability(const JointState &joint, const Spinor &f) {
    const auto w = branch_weights(joint, &f);
    const double h = joint.pointer_config().spacing();
    double p = 0.0;
    for (std::size_t b = 0; b < w.size(); ++b) {
        p += w[b] * wave_norm2(joint.branch(b), h);
    }
    return p;
}

double conditional_pointer_mean(const JointState &joint, const Spinor &f,
                                double epsilon) {
    const auto w = branch_weights(joint, &f);
    const PointerConfig &pc = joint.pointer_config();
    double p = 0.0;
    double m = 0.0;
    for (std::size_t b = 0; b < w.size(); ++b) {
        p += w[b] * wave_norm2(joint.branch(b), pc.spacing());
        m += w[b] * wave_first_moment(joint.branch(b), pc);
    }
    if (!(p > epsilon)) {
        throw DegeneratePostSelection("spin outcome has probability " +
                                      std::to_string(p) +
                                      "; conditional pointer mean is undefined");
    }
    return m / p;
}

double pointer_mean(const JointState &joint) {
    const auto w = branch_weights(joint, nullptr);
    const PointerConfig &pc = joint.pointer_config();
    double p = 0.0;
    double m = 0.0;
    for (std::size_t b = 0; b < w.size(); ++b) {
        p += w[b] * wave_norm2(joint.branch(b), pc.spacing());
        m += w[b] * wave_first_moment(joint.branch(b), pc);
    }
    return m / p;
}

double pointer_disturbance(const JointState &before, const JointState &after) {
    if (!(before.system_grid() == after.system_grid())) {
        throw ConfigurationError("pointer_disturbance: system grids differ");
    }
    const auto &pb = before.pointer_config();
    const auto &pa = after.pointer_config();
    if (pb.n_points != pa.n_points || pb.spacing() != pa.spacing()) {
        throw ConfigurationError("pointer_disturbance: pointer grids differ");
    }
    const std::size_t nb = before.branch_count();
    const std::size_t na = after.branch_count();
    const double h = pb.spacing();

    // Identical states (zero coupling) give exactly zero, not roundoff.
    if (nb == na && std::ranges::equal(before.system_amplitudes(), after.system_amplitudes())) {
        bool same = true;
        for (std::size_t i = 0; same && i < before.system_amplitudes().size(); ++i) {
            same = before.branch_of(i) == after.branch_of(i);
        }
        for (std::size_t b = 0; same && b < nb; ++b) {
            same = std::ranges::equal(before.branch(b), after.branch(b));
        }
        if (same) {
            return 0.0;
        }
    }

    // Pointer Gram matrices G[b', b] = <phi_b'|phi_b>.
    auto gram = [h](const JointState &s) {
        const std::size_t n = s.branch_count();
        std::vector<complex_t> g(n * n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                g[r * n + c] = wave_inner(s.branch(r), s.branch(c), h);
            }
        }
        return g;
    };
    const auto g1 = gram(before);
    const auto g2 = gram(after);

    // M[b1, b2] = S1_b1^dagger S2_b2 over system points.
    std::vector<complex_t> m(nb * na);
    const auto s1 = before.system_amplitudes();
    const auto s2 = after.system_amplitudes();
    for (std::size_t i = 0; i < s1.size(); ++i) {
        const complex_t v = std::conj(s1[i][0]) * s2[i][0] + std::conj(s1[i][1]) * s2[i][1];
        m[before.branch_of(i) * na + after.branch_of(i)] += v;
    }

    // Tr(rho1 rho2) = sum G1[b1',b1] G2[b2',b2] M[b1',b2] conj(M[b1,b2']).
    complex_t overlap{};
    for (std::size_t b1p = 0; b1p < nb; ++b1p) {
        for (std::size_t b1 = 0; b1 < nb; ++b1) {
            for (std::size_t b2p = 0; b2p < na; ++b2p) {
                for (std::size_t b2 = 0; b2 < na; ++b2) {
                    overlap += g1[b1p * nb + b1] * g2[b2p * na + b2] *
                               m[b1p * na + b2] * std::conj(m[b1 * na + b2p]);
                }
            }
        }
    }
    const double n1 = before.norm();
    const double n2 = after.norm();
    return std::max(0.0, 1.0 - overlap.real() / (n1 * n1 * n2 * n2));
}

std::vector<double> conditional_position_density(const JointState &joint,
                                                 const Spinor &f,
                                                 std::optional<double> pointer_threshold) {
    const PointerConfig &pc = joint.pointer_config();
    std::vector<double> mass(joint.branch_count());
    for (std::size_t b = 0; b < mass.size(); ++b) {
        mass[b] = pointer_threshold ? wave_mass_above(joint.branch(b), pc, *pointer_threshold)
                                    : wave_norm2(joint.branch(b), pc.spacing());
    }
    const Grid &grid = joint.system_grid();
    const auto sys = joint.system_amplitudes();
    std::vector<double> density(grid.size());
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = std::norm(f.project(sys[i])) * mass[joint.branch_of(i)];
        density[i] = p / grid.trapezoid_weight(i);
        total += p;
    }
    if (!(total > 0.0)) {
        throw DegeneratePostSelection("conditional position density has zero mass");
    }
    for (double &d : density) {
        d /= total;
    }
    return density;
}

} // namespace weakeraser
