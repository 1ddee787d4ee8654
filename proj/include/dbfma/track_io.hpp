// Copyright 2026 The DBF-MA Authors
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

#pragma once

#include <filesystem>
#include <string>

#include "dbfma/track.hpp"

namespace dbfma {

/// Track file-set format, version 1.
///
///   track.json  {"format": "dbfma-track", "version": 1, "name": ..., "closed": bool,
///                "inner": "inner.csv", "outer": "outer.csv", "orl": "orl.csv"}
///   inner.csv, outer.csv   header `x,y` (meters)
///   orl.csv                header `s,x,y,vx,vy` (meters, m/s)
///
/// File names in the manifest are relative to the manifest's directory.
inline constexpr int kTrackFormatVersion = 1;

/// Loads and validates a track from its manifest; throws ConfigError.
TrackModel load_track(const std::filesystem::path& manifest);

/// Writes the file set into `dir` (created if needed); returns the manifest path.
std::filesystem::path save_track(const TrackModel& track, const std::filesystem::path& dir);

}  // namespace dbfma
