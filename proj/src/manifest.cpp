// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/manifest.hpp"

#include <chrono>
#include <ctime>

#include "mirror/domain_io.hpp"

namespace mirror {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string RunManifest::run_id() const {
  const nlohmann::json key = {{"command", command}, {"domain", domain_hash}, {"config", config}, {"seed", seed},
                              {"version", kToolVersion}};
  return hex64(fnv1a(key.dump()));
}

nlohmann::json manifest_json(const RunManifest& m) {
  return {{"kind", "manifest"},
          {"run_id", m.run_id()},
          {"command", m.command},
          {"domain_hash", m.domain_hash},
          {"config", m.config},
          {"tool_version", kToolVersion},
          {"seed", m.seed},
          {"started", m.started},
          {"finished", m.finished},
          {"outputs", m.outputs}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void stamp(nlohmann::json& artifact, const RunManifest& m, const std::string& manifest_file) {
  artifact["run_id"] = m.run_id();
  artifact["manifest"] = manifest_file;
}

std::string dump(const nlohmann::json& j) { return j.dump(1) + "\n"; }

}  // namespace mirror
