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
#include "weakeraser/sim_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "weakeraser/errors.hpp"
#include "weakeraser/version.hpp"

namespace weakeraser {

namespace {

std::ofstream open_for_write(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::pair<BasisTag, std::uint8_t> parse_tags(std::string_view basis,
                                             std::string_view outcome) {
    for (BasisTag b : {BasisTag::Z, BasisTag::X, BasisTag::custom}) {
        if (basis != to_string(b)) {
            continue;
        }
        for (std::uint8_t o : {std::uint8_t{0}, std::uint8_t{1}}) {
            if (outcome == outcome_name(b, o)) {
                return {b, o};
            }
        }
        throw IoError("outcome '" + std::string(outcome) + "' is not valid for basis " +
                      std::string(basis));
    }
    throw IoError("unknown basis tag '" + std::string(basis) + "'");
}

} // namespace

void append_number(std::string &out, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.12g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

void write_events_csv(const std::filesystem::path &path,
                      std::span<const DetectionEvent> events) {
    auto out = open_for_write(path);
    std::string buf = "x,basis,outcome,stream_id\n";
    buf.reserve(1 << 20);
    for (const auto &ev : events) {
        append_number(buf, ev.x);
        buf += ',';
        buf += to_string(ev.basis);
        buf += ',';
        buf += outcome_name(ev.basis, ev.outcome);
        buf += ',';
        buf += std::to_string(ev.stream_id);
        buf += '\n';
        if (buf.size() > (1 << 20) - 128) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish(out, path);
}

std::vector<DetectionEvent> read_events_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != "x,basis,outcome,stream_id") {
        throw IoError("'" + path.string() + "' is not an event file");
    }
    std::vector<DetectionEvent> events;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::string_view v(line);
        std::array<std::string_view, 4> f;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto comma = v.find(',');
            if ((comma == std::string_view::npos) != (k == 3)) {
                throw IoError("malformed event line: " + line);
            }
            f[k] = v.substr(0, comma);
            v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
        }
        DetectionEvent ev{};
        ev.x = std::stod(std::string(f[0]));
        std::tie(ev.basis, ev.outcome) = parse_tags(f[1], f[2]);
        const auto r = std::from_chars(f[3].data(), f[3].data() + f[3].size(), ev.stream_id);
        if (r.ec != std::errc{}) {
            throw IoError("malformed stream id: " + line);
        }
        events.push_back(ev);
    }
    return events;
}

void write_histogram_csv(const std::filesystem::path &path, const Histogram &hist) {
    auto out = open_for_write(path);
    std::string buf = "x_center,density,count\n";
    for (std::size_t j = 0; j < hist.bin_count(); ++j) {
        append_number(buf, hist.center(j));
        buf += ',';
        append_number(buf, hist.density(j));
        buf += ',';
        buf += std::to_string(hist.count(j));
        buf += '\n';
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    finish(out, path);
}

void write_json(const std::filesystem::path &path, const nlohmann::json &value) {
    auto out = open_for_write(path);
    out << value.dump(2) << '\n';
    finish(out, path);
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv) {
    auto p = csv;
    p.replace_extension(".json");
    return p;
}

nlohmann::json to_json(const Grid &grid) {
    return {{"x_min", grid.x_min()}, {"x_max", grid.x_max()}, {"n_points", grid.size()}};
}

nlohmann::json to_json(const SlitAmplitude &s) {
    const auto &e = s.envelope();
    return {{"envelope",
             {{"family", e.family == EnvelopeFamily::gaussian ? "gaussian" : "lorentzian"},
              {"width", e.width},
              {"center", e.center}}},
            {"k", s.k()},
            {"phase_gradient", s.phase_gradient()},
            {"omega", s.omega()},
            {"t", s.t()}};
}

nlohmann::json to_json(const EraserState &state) {
    return {{"alpha", {state.alpha().real(), state.alpha().imag()}},
            {"beta", {state.beta().real(), state.beta().imag()}},
            {"psi_a", to_json(state.psi_a())},
            {"psi_b", to_json(state.psi_b())}};
}

nlohmann::json to_json(const BasisPolicy &policy) {
    nlohmann::json j{{"name", policy.name()}};
    switch (policy.kind()) {
    case BasisPolicy::Kind::fixed_z:
        j["kind"] = "z";
        break;
    case BasisPolicy::Kind::fixed_x:
        j["kind"] = "x";
        break;
    case BasisPolicy::Kind::random:
        j["kind"] = "random";
        j["p_z"] = policy.p_z();
        break;
    case BasisPolicy::Kind::custom:
        j["kind"] = "custom";
        j["theta"] = policy.theta();
        j["phi"] = policy.phi();
        break;
    }
    return j;
}

nlohmann::json events_metadata(const EraserState &state, const Grid &grid, std::size_t n,
                               const BasisPolicy &policy, std::uint64_t seed,
                               const SamplerOptions &options) {
    return {{"seed", seed},
            {"n", n},
            {"policy", to_json(policy)},
            {"state", to_json(state)},
            {"grid", to_json(grid)},
            {"events_per_stream", options.events_per_stream},
            {"rng", "mt19937_64 per stream, seed_seq(seed, stream)"},
            {"software_version", kVersion}};
}

} // namespace weakeraser
