// Copyright 2026 The Authors.
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


// JSON file formats. Every document carries a "schema" tag:
//
//   mod-instance-v1       positions, efficiency means and halfwidths, seed
//   coverage-instance-v1  grid, obstacles, candidates, success probabilities
//   streetnet-v1          nodes, directed edges, wait/travel coefficients
//   sga-result-v1         selection, tau trace and certificate
//
// Doubles are written in shortest round-trip form, so load(dump(x)) == x
// bit for bit.

#ifndef CVARSEL_IO_H_
#define CVARSEL_IO_H_

#include <string>
#include <string_view>

#include "cvarsel/coverage.h"
#include "cvarsel/mod.h"
#include "cvarsel/sga.h"
#include "cvarsel/streetnet.h"
#include "json.hpp"

namespace cvarsel {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kModSchema = "mod-instance-v1";
inline constexpr std::string_view kCoverageSchema = "coverage-instance-v1";
inline constexpr std::string_view kStreetSchema = "streetnet-v1";
inline constexpr std::string_view kResultSchema = "sga-result-v1";

Json mod_to_json(const ModInstance& inst);
Json coverage_to_json(const CoverageInstance& inst);
Json streetnet_to_json(const StreetNetwork& net);

// Parsers throw InstanceError naming the offending field.
ModInstance mod_from_json(const Json& j);
CoverageInstance coverage_from_json(const Json& j);
StreetNetwork streetnet_from_json(const Json& j);

// "schema" of a document; InstanceError when missing.
std::string schema_of(const Json& j);

Json result_to_json(const SgaResult& result, const GroundSet& x,
                    const RiskParams& p);
Json certificate_to_json(const Certificate& c);

// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

// Throw IoError with the path in the message.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
Json read_json(const std::string& path);

}  // namespace cvarsel

#endif  // CVARSEL_IO_H_
