// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace mirror {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::string domain_hash;
  nlohmann::json config;  // echo of every input that shapes the outputs
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;

  // Hash of command, domain, config and seed; timestamps excluded, so a
  // rerun with the same inputs has the same id.
  std::string run_id() const;
};

nlohmann::json manifest_json(const RunManifest& m);
std::string utc_now();

// Stamps an artifact with the run id and the manifest file name.
void stamp(nlohmann::json& artifact, const RunManifest& m, const std::string& manifest_file);
// Deterministic dump used for every JSON artifact.
std::string dump(const nlohmann::json& j);

}  // namespace mirror
