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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "weakeraser/cli.hpp"
#include "weakeraser/errors.hpp"
#include "weakeraser/sim_io.hpp"
#include "weakeraser/version.hpp"

namespace weakeraser::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array<NamedSpin, 4> kNamed{NamedSpin::up, NamedSpin::down, NamedSpin::plus,
                                          NamedSpin::minus};

fs::path output_dir(const RunConfig &cfg) {
    const fs::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    return dir;
}

nlohmann::json base_metadata(const RunConfig &cfg, const char *command) {
    return {{"command", command}, {"software_version", kVersion}, {"config", to_json(cfg)}};
}

void write_text(const fs::path &path, const std::string &text) {
    std::FILE *f = std::fopen(path.string().c_str(), "wb");
    if (!f) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void write_csv_with_sidecar(const fs::path &path, const std::string &csv,
                            const nlohmann::json &meta) {
    write_text(path, csv);
    write_json(sidecar_path(path), meta);
}

void append_row(std::string &csv, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) {
            csv += ',';
        }
        first = false;
        append_number(csv, v);
    }
    csv += '\n';
}

// Weak value by the requested path; NaN where the post-selection is
// degenerate.
double weak_value_or_nan(const EraserState &state, NamedSpin f, double x,
                         const SlitOverlaps &overlaps, Method method) {
    try {
        if (method == Method::idealized_closed_form) {
            return weak_value_closed_form(state, f, x).value.real();
        }
        return weak_value_exact(state, spinor_of(f), x, overlaps).value.real();
    } catch (const DegeneratePostSelection &) {
        return NAN;
    }
}

double spinor_weak_value_or_nan(const EraserState &state, const Spinor &f, double x,
                                const SlitOverlaps &overlaps) {
    try {
        return weak_value_exact(state, f, x, overlaps).value.real();
    } catch (const DegeneratePostSelection &) {
        return NAN;
    }
}

std::string fmt(double v) {
    std::string s;
    append_number(s, v);
    return s;
}

} // namespace

// ---------------------------------------------------------------------------

ExitCode cmd_curves(const RunConfig &cfg, std::ostream &out) {
    const Setup setup = Setup::from(cfg);
    const fs::path dir = output_dir(cfg);
    const auto &st = setup.state;
    std::string csv = "x,psi1_density,psi2_density,|psi_a|^2,|psi_b|^2\n";
    for (std::size_t i = 0; i < setup.grid.size(); ++i) {
        const double x = setup.grid.point(i);
        append_row(csv, {x, psi1_density(st.alpha(), st.beta(), st.psi_a(), st.psi_b(), x),
                         psi2_density(st, x), st.psi_a().density(x), st.psi_b().density(x)});
    }
    auto meta = base_metadata(cfg, "curves");
    meta["state"] = to_json(st);
    meta["grid"] = to_json(setup.grid);
    write_csv_with_sidecar(dir / "curves.csv", csv, meta);
    out << "wrote " << (dir / "curves.csv").string() << " (" << setup.grid.size()
        << " rows)\n";
    return ExitCode::ok;
}

ExitCode cmd_fig1(const RunConfig &cfg, std::ostream &out) {
    const Setup setup = Setup::from(cfg);
    const Method method = resolve_method(cfg, Method::idealized_closed_form);
    const fs::path dir = output_dir(cfg);
    const auto &st = setup.state;
    const SlitOverlaps overlaps = method == Method::exact_quadrature
                                      ? slit_overlaps(st, setup.grid)
                                      : SlitOverlaps::idealized();
    std::string csv = "x,psi2_density,wv_plus,wv_minus,wv_up,wv_down,psi1_density\n";
    std::size_t anomalous_rows = 0;
    for (std::size_t i = 0; i < setup.grid.size(); ++i) {
        const double x = setup.grid.point(i);
        const double p2 = psi2_density(st, x);
        const double wp = weak_value_or_nan(st, NamedSpin::plus, x, overlaps, method);
        const double wm = weak_value_or_nan(st, NamedSpin::minus, x, overlaps, method);
        if (std::max(wp, wm) >= p2) {
            ++anomalous_rows;
        }
        append_row(csv, {x, p2, wp, wm, weak_value_or_nan(st, NamedSpin::up, x, overlaps, method),
                         weak_value_or_nan(st, NamedSpin::down, x, overlaps, method),
                         psi1_density(st.alpha(), st.beta(), st.psi_a(), st.psi_b(), x)});
    }
    auto meta = base_metadata(cfg, "fig1");
    meta["method"] = to_string(method);
    meta["state"] = to_json(st);
    meta["grid"] = to_json(setup.grid);
    write_csv_with_sidecar(dir / "fig1.csv", csv, meta);
    out << "wrote " << (dir / "fig1.csv").string() << " (method " << to_string(method)
        << "); max(wv_plus, wv_minus) >= psi2_density on " << anomalous_rows << "/"
        << setup.grid.size() << " rows\n";
    return ExitCode::ok;
}

ExitCode cmd_weak_values(const RunConfig &cfg, std::ostream &out) {
    const Setup setup = Setup::from(cfg);
    const Method method = resolve_method(cfg, Method::exact_quadrature);
    const fs::path dir = output_dir(cfg);
    const auto &st = setup.state;
    const PostSelectionBasis axis = PostSelectionBasis::axis(cfg.theta, cfg.phi);
    const SlitOverlaps exact = slit_overlaps(st, setup.grid);
    const SlitOverlaps used = method == Method::exact_quadrature ? exact : SlitOverlaps::idealized();

    std::string csv = "x,wv_up,wv_down,wv_plus,wv_minus,wv_axis_first,wv_axis_second\n";
    for (std::size_t i = 0; i < setup.grid.size(); ++i) {
        const double x = setup.grid.point(i);
        append_row(csv, {x, weak_value_or_nan(st, NamedSpin::up, x, exact, method),
                         weak_value_or_nan(st, NamedSpin::down, x, exact, method),
                         weak_value_or_nan(st, NamedSpin::plus, x, exact, method),
                         weak_value_or_nan(st, NamedSpin::minus, x, exact, method),
                         spinor_weak_value_or_nan(st, axis.first(), x, used),
                         spinor_weak_value_or_nan(st, axis.second(), x, used)});
    }
    auto meta = base_metadata(cfg, "weak-values");
    meta["method"] = to_string(method);
    meta["state"] = to_json(st);
    meta["grid"] = to_json(setup.grid);
    meta["overlaps"] = {{"aa", exact.aa}, {"ab", {exact.ab.real(), exact.ab.imag()}}, {"bb", exact.bb}};
    write_csv_with_sidecar(dir / "weak_values.csv", csv, meta);

    struct Row {
        const char *name;
        Spinor f;
    };
    const std::array<Row, 6> rows{{{"up", Spinor::up()},
                                   {"down", Spinor::down()},
                                   {"plus", Spinor::plus()},
                                   {"minus", Spinor::minus()},
                                   {"axis_first", axis.first()},
                                   {"axis_second", axis.second()}}};
    std::string pcsv = "post_selection,idealized,exact,difference\n";
    out << "post-selection probabilities (grid [" << fmt(setup.grid.x_min()) << ", "
        << fmt(setup.grid.x_max()) << "], " << setup.grid.size() << " points)\n";
    out << "  <psi_a|psi_b> = " << fmt(exact.ab.real()) << (exact.ab.imag() < 0 ? " - " : " + ")
        << fmt(std::abs(exact.ab.imag())) << "i\n";
    for (const auto &r : rows) {
        const double pi = post_selection_probability(st, r.f, SlitOverlaps::idealized());
        const double pe = post_selection_probability(st, r.f, exact);
        pcsv += r.name;
        pcsv += ',';
        append_row(pcsv, {pi, pe, pe - pi});
        out << "  " << r.name << ": idealized " << fmt(pi) << ", exact " << fmt(pe)
            << ", difference " << fmt(pe - pi) << '\n';
    }
    write_csv_with_sidecar(dir / "probabilities.csv", pcsv, meta);
    out << "wrote " << (dir / "weak_values.csv").string() << " and "
        << (dir / "probabilities.csv").string() << '\n';
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

ExitCode cmd_simulate(const RunConfig &cfg, std::ostream &out) {
    if (cfg.n == 0) {
        out << "error: --n must be at least 1\n";
        return ExitCode::usage;
    }
    const Setup setup = Setup::from(cfg);
    const BasisPolicy policy = resolve_policy(cfg);
    const fs::path dir = output_dir(cfg);
    const auto &st = setup.state;
    const auto &grid = setup.grid;
    SamplerOptions opts;
    opts.threads = cfg.threads;

    const auto events = sample_events(st, grid, cfg.n, policy, cfg.seed, opts);
    const fs::path events_path = dir / "events.csv";
    write_events_csv(events_path, events);
    auto meta = events_metadata(st, grid, cfg.n, policy, cfg.seed, opts);
    meta["command"] = "simulate";
    meta["config"] = to_json(cfg);
    write_json(sidecar_path(events_path), meta);

    auto hist_meta = base_metadata(cfg, "simulate");
    hist_meta["seed"] = cfg.seed;
    hist_meta["events_file"] = "events.csv";
    const Histogram all = marginal_histogram(events, grid, cfg.cells_per_bin);
    write_histogram_csv(dir / "hist_all.csv", all);
    write_json(dir / "hist_all.json", hist_meta);

    bool ok = true;
    nlohmann::json report{{"seed", cfg.seed}, {"n", cfg.n}, {"policy", to_json(policy)},
                          {"chi2_band", {cfg.chi2_min, cfg.chi2_max}}};
    const auto envelope = [&st](double x) { return psi2_density(st, x); };

    out << "sub-ensemble          events   reduced_chi2   dof  visibility  status\n";
    for (BasisTag tag : {BasisTag::Z, BasisTag::X, BasisTag::custom}) {
        const bool present = std::any_of(events.begin(), events.end(),
                                         [tag](const DetectionEvent &e) { return e.basis == tag; });
        if (!present) {
            continue;
        }
        const PostSelectionBasis basis = policy.basis(tag);
        for (std::uint8_t o : {std::uint8_t{0}, std::uint8_t{1}}) {
            Histogram h(grid, cfg.cells_per_bin);
            try {
                h = subensemble_histogram(events, tag, o, grid, cfg.cells_per_bin);
            } catch (const EmptySubEnsemble &) {
                continue;
            }
            const std::string name =
                std::string(to_string(tag)) + "_" + std::string(outcome_name(tag, o));
            const fs::path hp = dir / ("hist_" + name + ".csv");
            write_histogram_csv(hp, h);
            auto m = hist_meta;
            m["basis"] = to_string(tag);
            m["outcome"] = outcome_name(tag, o);
            write_json(sidecar_path(hp), m);

            const ChiSquare chi = chi_square_vs_conditional(h, st, basis.member(o));
            const Histogram coarse =
                subensemble_histogram(events, tag, o, grid, cfg.visibility_cells_per_bin);
            const double vis = fringe_visibility(coarse, envelope);
            const bool pass = chi.dof > 0 && chi.reduced() >= cfg.chi2_min &&
                              chi.reduced() <= cfg.chi2_max;
            ok = ok && pass;
            report["subensembles"][name] = {{"events", h.total()},
                                            {"chi2", chi.statistic},
                                            {"dof", chi.dof},
                                            {"reduced_chi2", chi.reduced()},
                                            {"fringe_visibility", vis},
                                            {"pass", pass}};
            char line[160];
            std::snprintf(line, sizeof line, "%-18s %10llu %14.4f %5zu %11.4f  %s\n",
                          name.c_str(), static_cast<unsigned long long>(h.total()),
                          chi.reduced(), chi.dof, vis, pass ? "PASS" : "FAIL");
            out << line;
        }
        const auto residual = recombine_check(events, tag, grid, cfg.cells_per_bin);
        ok = ok && residual == 0;
        report["recombine"][std::string(to_string(tag))] = residual;
        out << "recombine " << to_string(tag) << ": max bin residual " << residual << "  "
            << (residual == 0 ? "PASS" : "FAIL") << '\n';
    }

    if (cfg.compare_policies) {
        const std::array<BasisPolicy, 3> policies{BasisPolicy::fixed_z(), BasisPolicy::fixed_x(),
                                                  BasisPolicy::random(cfg.p_z)};
        const MarginalReport mr = marginal_invariance_test(st, grid, cfg.n, policies, cfg.seed,
                                                           opts, cfg.cells_per_bin,
                                                           cfg.z_threshold);
        ok = ok && mr.consistent();
        for (const auto &c : mr.comparisons) {
            report["marginal_invariance"].push_back({{"first", mr.policies[c.first]},
                                                     {"second", mr.policies[c.second]},
                                                     {"chi2", c.result.statistic},
                                                     {"dof", c.result.dof},
                                                     {"z", c.result.z},
                                                     {"consistent", c.consistent}});
            out << "marginal " << mr.policies[c.first] << " vs " << mr.policies[c.second]
                << ": z = " << fmt(c.result.z) << "  " << (c.consistent ? "PASS" : "FAIL")
                << '\n';
        }
    }
    report["pass"] = ok;
    write_json(dir / "report.json", report);
    out << (ok ? "all statistical checks passed\n" : "statistical checks FAILED\n");
    return ok ? ExitCode::ok : ExitCode::check_failed;
}

// ---------------------------------------------------------------------------

ExitCode cmd_pointer(const RunConfig &cfg, std::ostream &out) {
    const Setup setup = Setup::from(cfg);
    const ExpansionOrder order = resolve_order(cfg);
    const fs::path dir = output_dir(cfg);
    const auto &st = setup.state;
    const auto &grid = setup.grid;

    const PointerConfig pc{cfg.sigma, cfg.pointer_half_width, cfg.pointer_points};
    const JointState before = JointState::prepare(st, grid, pc);
    CouplingConfig coupling{0.0, cfg.t_int, cfg.bin_x, cfg.bin_points, order};
    const BinRange bin = resolve_bin(grid, coupling);
    const SlitOverlaps overlaps = slit_overlaps(st, grid);

    std::string csv =
        "g,post_selection,conditional_shift,inferred_weak_value,reference_weak_value,disturbance\n";
    for (double g : cfg.g_values) {
        coupling.g = g;
        const JointState after = evolve(before, coupling);
        const double lambda = coupling.coupling();
        const double disturbance = pointer_disturbance(before, after);
        for (NamedSpin f : kNamed) {
            const Spinor s = spinor_of(f);
            double reference = NAN;
            double shift = NAN;
            double inferred = NAN;
            if (post_selection_probability(st, s, overlaps) > kDefaultPostSelectionEpsilon) {
                double acc = 0.0;
                for (std::size_t i = bin.first; i <= bin.last; ++i) {
                    acc += grid.trapezoid_weight(i) *
                           weak_value_exact(st, s, grid.point(i), overlaps).value.real();
                }
                reference = acc / bin.width;
                shift = conditional_pointer_mean(after, s) - conditional_pointer_mean(before, s);
                if (lambda != 0.0) {
                    inferred = shift / (lambda * bin.width);
                }
            }
            append_number(csv, g);
            csv += ',';
            csv += to_string(f);
            csv += ',';
            append_row(csv, {shift, inferred, reference, disturbance});
        }
    }
    auto meta = base_metadata(cfg, "pointer");
    meta["state"] = to_json(st);
    meta["grid"] = to_json(grid);
    meta["bin"] = {{"first_index", bin.first}, {"last_index", bin.last}, {"width", bin.width}};
    write_csv_with_sidecar(dir / "pointer.csv", csv, meta);
    out << "wrote " << (dir / "pointer.csv").string() << " (" << cfg.g_values.size()
        << " couplings x 4 post-selections)\n";
    return ExitCode::ok;
}

// ---------------------------------------------------------------------------

namespace {

struct CheckRow {
    std::string name;
    std::string status; // PASS, FAIL, SKIP, INFO
    double value;
    double tolerance;
};

} // namespace

ExitCode cmd_check(const RunConfig &cfg, std::ostream &out) {
    const Setup setup = Setup::from(cfg);
    const fs::path dir = output_dir(cfg);
    const auto &st = setup.state;
    const auto &grid = setup.grid;
    const auto xs = grid.points();
    std::vector<CheckRow> rows;
    auto check = [&rows](std::string name, double value, double tol, bool pass) {
        rows.push_back({std::move(name), pass ? "PASS" : "FAIL", value, tol});
    };
    auto check_below = [&check](std::string name, double value, double tol) {
        check(std::move(name), value, tol, value <= tol);
    };

    // Normalization against the analytic tail mass outside the grid.
    const double tail_a = st.psi_a().envelope().tail_mass(grid.x_min(), grid.x_max());
    const double tail_b = st.psi_b().envelope().tail_mass(grid.x_min(), grid.x_max());
    const SlitOverlaps ov = slit_overlaps(st, grid);
    check_below("slit a norm = 1 - tail", std::abs(ov.aa - (1.0 - tail_a)), 1e-6);
    check_below("slit b norm = 1 - tail", std::abs(ov.bb - (1.0 - tail_b)), 1e-6);
    {
        std::vector<double> rho(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rho[i] = psi2_density(st, xs[i]);
        }
        const double expected =
            1.0 - std::norm(st.alpha()) * tail_a - std::norm(st.beta()) * tail_b;
        check_below("psi2 normalization", std::abs(trapezoid(rho, grid) - expected), 1e-6);
    }

    double min_density = INFINITY;
    for (double x : xs) {
        min_density = std::min({min_density, psi2_density(st, x),
                                psi1_density(st.alpha(), st.beta(), st.psi_a(), st.psi_b(), x)});
    }
    check("densities nonnegative", min_density, 0.0, min_density >= 0.0);

    // Sum rules.
    for (Method m : {Method::exact_quadrature, Method::idealized_closed_form}) {
        const std::string tag = std::string(to_string(m));
        check_below("sum rule Z (" + tag + ")",
                    sum_rule_residual(st, PostSelectionBasis::Z(), grid, m), 1e-10);
        check_below("sum rule X (" + tag + ")",
                    sum_rule_residual(st, PostSelectionBasis::X(), grid, m), 1e-10);
    }
    check_below("sum rule custom axis (exact)",
                sum_rule_residual(st, PostSelectionBasis::axis(cfg.theta, cfg.phi), grid,
                                  Method::exact_quadrature),
                1e-10);
    {
        StreamRng rng(cfg.seed, 0xb10c);
        double worst = 0.0;
        for (int r = 0; r < 100; ++r) {
            const double theta = std::acos(1.0 - 2.0 * rng.uniform());
            const double phi = 2.0 * 3.14159265358979323846 * rng.uniform();
            worst = std::max(worst, sum_rule_residual(st, PostSelectionBasis::axis(theta, phi),
                                                      grid, Method::exact_quadrature));
        }
        check_below("sum rule 100 random bases (exact)", worst, 1e-10);
    }

    // Bayes consistency, realness and nonnegativity of the named weak values.
    {
        double bayes = 0.0;
        double imag = 0.0;
        double min_wv = INFINITY;
        for (NamedSpin f : kNamed) {
            const Spinor s = spinor_of(f);
            const double p = post_selection_probability(st, s, ov);
            const bool defined = p > kDefaultPostSelectionEpsilon;
            for (double x : xs) {
                if (defined) {
                    const auto wv = weak_value_exact(st, s, x, ov);
                    bayes = std::max(bayes, std::abs(joint_subensemble_density(st, s, x) -
                                                     p * wv.value.real()));
                    imag = std::max(imag, std::abs(wv.value.imag()));
                    min_wv = std::min(min_wv, wv.value.real());
                }
                try {
                    min_wv = std::min(min_wv, weak_value_closed_form(st, f, x).value.real());
                } catch (const DegeneratePostSelection &) {
                }
            }
        }
        check_below("Bayes consistency joint = P * A_w", bayes, 1e-12);
        check_below("weak values real", imag, 1e-10);
        check("weak values nonnegative", min_wv, -1e-15, min_wv >= -1e-15);
    }

    // Closed-form identities.
    {
        double plus_psi1 = 0.0;
        double anomaly = INFINITY;
        double up_identity = 0.0;
        double up_exact_identity = 0.0;
        double equal_env = 0.0;
        double up_vs_psi2 = 0.0;
        double down_vs_psi2 = 0.0;
        const bool up_defined = std::norm(st.alpha()) > kDefaultPostSelectionEpsilon;
        const bool down_defined = std::norm(st.beta()) > kDefaultPostSelectionEpsilon;
        for (double x : xs) {
            const double p2 = psi2_density(st, x);
            const double wp = weak_value_closed_form(st, NamedSpin::plus, x).value.real();
            const double wm = weak_value_closed_form(st, NamedSpin::minus, x).value.real();
            plus_psi1 = std::max(plus_psi1,
                                 std::abs(wp - psi1_density(st.alpha(), st.beta(), st.psi_a(),
                                                            st.psi_b(), x)));
            anomaly = std::min(anomaly, std::max(wp, wm) - p2);
            equal_env = std::max(equal_env, std::abs(st.psi_a().density(x) - st.psi_b().density(x)));
            if (up_defined) {
                const double wu = weak_value_closed_form(st, NamedSpin::up, x).value.real();
                up_identity = std::max(up_identity, std::abs(wu - st.psi_a().density(x)));
                up_exact_identity = std::max(
                    up_exact_identity,
                    std::abs(weak_value_exact(st, Spinor::up(), x, ov).value.real() -
                             st.psi_a().density(x) / ov.aa));
                up_vs_psi2 = std::max(up_vs_psi2, std::abs(wu - p2));
            }
            if (down_defined) {
                const double wd = weak_value_closed_form(st, NamedSpin::down, x).value.real();
                down_vs_psi2 = std::max(down_vs_psi2, std::abs(wd - p2));
            }
        }
        check_below("wv_plus = psi1_density (idealized)", plus_psi1, 1e-12);
        check("max(wv_plus, wv_minus) >= psi2 (idealized)", anomaly, 0.0, anomaly >= -1e-15);
        if (up_defined) {
            check_below("wv_up = |psi_a|^2 (idealized)", up_identity, 1e-12);
            check_below("wv_up = |psi_a|^2 / <psi_a|psi_a> (exact)", up_exact_identity, 1e-12);
        } else {
            rows.push_back({"wv_up identities", "SKIP", NAN, 0.0});
        }
        if (equal_env <= 1e-15 && up_defined && down_defined) {
            check_below("wv_up = psi2_density (equal envelopes)", up_vs_psi2, 1e-12);
            check_below("wv_down = psi2_density (equal envelopes)", down_vs_psi2, 1e-12);
        } else {
            rows.push_back({"wv_up/wv_down = psi2_density", "SKIP", NAN, 0.0});
        }
    }

    // Probabilities over a basis.
    for (const auto &[name, basis] :
         {std::pair{"Z", PostSelectionBasis::Z()}, std::pair{"X", PostSelectionBasis::X()}}) {
        const double ideal = post_selection_probability(st, basis.first(), SlitOverlaps::idealized()) +
                             post_selection_probability(st, basis.second(), SlitOverlaps::idealized());
        const double exact = post_selection_probability(st, basis.first(), ov) +
                             post_selection_probability(st, basis.second(), ov);
        const double norm = std::norm(st.alpha()) * ov.aa + std::norm(st.beta()) * ov.bb;
        check_below(std::string("P sums to 1 over ") + name + " (idealized)", std::abs(ideal - 1.0),
                    1e-12);
        check_below(std::string("P sums to state norm over ") + name + " (exact)",
                    std::abs(exact - norm), 1e-12);
    }

    const IdealizationGap gap = idealization_gap(st, PostSelectionBasis::X(), grid);
    rows.push_back({"idealization gap |P(+) exact - idealized|", "INFO",
                    gap.probability_exact[0] - gap.probability_idealized[0], 0.0});
    rows.push_back({"idealization gap max |A_w idealized - exact| (X)", "INFO",
                    gap.max_weak_value_gap(), 0.0});

    bool ok = true;
    std::string csv = "invariant,status,value,tolerance\n";
    for (const auto &r : rows) {
        ok = ok && r.status != "FAIL";
        char line[200];
        std::snprintf(line, sizeof line, "%-4s  %-52s %-14.6g tol %.3g\n", r.status.c_str(),
                      r.name.c_str(), r.value, r.tolerance);
        out << line;
        csv += '"' + r.name + "\"," + r.status + ',';
        append_row(csv, {r.value, r.tolerance});
    }
    auto meta = base_metadata(cfg, "check");
    meta["state"] = to_json(st);
    meta["grid"] = to_json(grid);
    meta["pass"] = ok;
    write_csv_with_sidecar(dir / "check.csv", csv, meta);
    out << (ok ? "all invariants passed\n" : "invariant check FAILED\n");
    return ok ? ExitCode::ok : ExitCode::check_failed;
}

} // namespace weakeraser::cli
