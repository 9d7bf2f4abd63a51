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
 * File formats for detection events and histograms.
 *
 *   events:     CSV header `x,basis,outcome,stream_id`; basis is Z, X or
 *               custom, outcome is the member name (up/down, plus/minus,
 *               first/second).
 *   histograms: CSV header `x_center,density,count`.
 *   sidecars:   JSON object next to each CSV with the same stem.
 *
 * Numbers are written with 12 significant digits.
 */
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "weakeraser/eraser_sim.hpp"
#include "weakeraser/errors.hpp"

namespace weakeraser {

/// Appends `%.12g` of v to out.
void append_number(std::string &out, double v);

/// Throws Error (I/O) on failure.
void write_events_csv(const std::filesystem::path &path,
                      std::span<const DetectionEvent> events);
[[nodiscard]] std::vector<DetectionEvent> read_events_csv(const std::filesystem::path &path);

void write_histogram_csv(const std::filesystem::path &path, const Histogram &hist);

/// Writes `value` pretty-printed to path.
void write_json(const std::filesystem::path &path, const nlohmann::json &value);

/// foo/bar.csv -> foo/bar.json
[[nodiscard]] std::filesystem::path sidecar_path(const std::filesystem::path &csv);

[[nodiscard]] nlohmann::json to_json(const Grid &grid);
[[nodiscard]] nlohmann::json to_json(const SlitAmplitude &s);
[[nodiscard]] nlohmann::json to_json(const EraserState &state);
[[nodiscard]] nlohmann::json to_json(const BasisPolicy &policy);

/// Metadata for an event file: seed, n, policy, state, grid, version.
[[nodiscard]] nlohmann::json events_metadata(const EraserState &state, const Grid &grid,
                                             std::size_t n, const BasisPolicy &policy,
                                             std::uint64_t seed,
                                             const SamplerOptions &options);

/// Thrown for unreadable/unwritable files.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace weakeraser
