// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirror/geometry.hpp"

namespace mirror {

struct Domain {
  std::string name;
  std::vector<BoundaryPiece> pieces;
  double alpha = kPi / 4;
  BoundaryCurve curve;
};

nlohmann::json pieces_to_json(const std::vector<BoundaryPiece>& pieces, double alpha);
Domain domain_from_json(const nlohmann::json& doc, const std::string& name = "custom");
nlohmann::json domain_to_json(const Domain& d);

// Accepts a preset name or a path to a JSON file.
Domain load_domain(const std::string& spec);
Domain preset_domain(const std::string& name);
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);

// FNV-1a over the canonical JSON dump.
std::uint64_t domain_hash(const Domain& d);
std::string hex64(std::uint64_t v);

}  // namespace mirror
