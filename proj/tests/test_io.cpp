// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "mirror/manifest.hpp"
#include "mirror/svg.hpp"

using namespace mirror;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal well-formedness: balanced tags and a single svg root.
bool balanced_xml(const std::string& s) {
  std::vector<std::string> stack;
  size_t i = 0;
  int roots = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    if (s.compare(i, 4, "<!--") == 0) {
      i = s.find("-->", i);
      if (i == std::string::npos) return false;
      continue;
    }
    const size_t j = s.find('>', i);
    if (j == std::string::npos) return false;
    const std::string tag = s.substr(i + 1, j - i - 1);
    i = j;
    if (tag.empty() || tag[0] == '?') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else if (tag.back() != '/') {
      const std::string name = tag.substr(0, tag.find(' '));
      if (stack.empty() && name == "svg") ++roots;
      stack.push_back(name);
    }
  }
  return stack.empty() && roots == 1;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MIRROR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(MIRROR_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("manifest") {
  TEST_CASE("run id ignores timestamps and tracks inputs") {
    RunManifest a{"eigen", "abc", {{"h", 0.1}}, 1, "2026-01-01T00:00:00Z", "2026-01-01T00:00:01Z", {}};
    RunManifest b = a;
    b.started = "2030-05-05T00:00:00Z";
    b.finished = "2030-05-05T00:10:00Z";
    b.outputs = {"x.json"};
    CHECK(a.run_id() == b.run_id());
    RunManifest c = a;
    c.seed = 2;
    CHECK(a.run_id() != c.run_id());
    RunManifest d = a;
    d.config["h"] = 0.05;
    CHECK(a.run_id() != d.run_id());
    CHECK(a.run_id().size() == 16);
  }

  TEST_CASE("stamped artifacts") {
    RunManifest m{"lyapunov", "abc", nlohmann::json::object(), 7, "", "", {}};
    nlohmann::json art = {{"kind", "lyapunov"}};
    stamp(art, m, "manifest-lyapunov.json");
    CHECK(art["run_id"] == m.run_id());
    CHECK(art["manifest"] == "manifest-lyapunov.json");
    const auto mj = manifest_json(m);
    CHECK(mj["tool_version"] == kToolVersion);
    CHECK(dump(mj).back() == '\n');
  }

  TEST_CASE("domain hash is stable") {
    CHECK(domain_hash(preset_domain("example1")) == domain_hash(preset_domain("example1")));
    CHECK(domain_hash(preset_domain("square")) != domain_hash(preset_domain("rect-1x2")));
  }
}

TEST_SUITE("svg") {
  TEST_CASE("domain figure is well formed") {
    const std::string s = svg_domain(fixtures::example1().curve, &fixtures::example1_sp());
    CHECK(balanced_xml(s));
    CHECK(s.find("Q'6") != std::string::npos);
  }

  TEST_CASE("comments cannot break the document") {
    SvgCanvas c({0, 0}, {1, 1});
    c.comment("run_id=abc -- manifest=x");
    c.text({0.5, 0.5}, "a < b & c");
    const std::string s = c.str();
    CHECK(balanced_xml(s));
    CHECK(s.find("a &lt; b &amp; c") != std::string::npos);
  }

  TEST_CASE("lyapunov artifact renders") {
    const auto j = lyapunov_json(fixtures::example1_lset());
    CHECK(balanced_xml(render_artifact(j)));
  }

  TEST_CASE("unknown kinds are rejected") {
    CHECK_THROWS_AS(render_artifact({{"kind", "teapot"}}), Error);
    CHECK_THROWS_AS(render_u_csv("a,b\n1,2\n", nullptr), Error);
  }

  TEST_CASE("half-plane clipping of the unit square") {
    const std::vector<Vec2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto left = clip_half_plane(sq, {0.5, 0}, {0.5, 1}, 1);
    double area = 0;
    for (size_t i = 0; i < left.size(); ++i) area += 0.5 * cross(left[i], left[(i + 1) % left.size()]);
    CHECK(area == doctest::Approx(0.5));
    for (const Vec2& p : left) CHECK(p.x <= 0.5 + 1e-12);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    const fs::path d = scratch("codes");
    CHECK(run_cli("--out-dir " + d.string() + " validate example1") == 0);
    std::ofstream(d / "open.json") << R"({"pieces":[{"kind":"segment","from":[0,0],"to":[1,0]},)"
                                      R"({"kind":"segment","from":[1,0],"to":[1,1]}]})";
    CHECK(run_cli("--out-dir " + d.string() + " validate " + (d / "open.json").string()) == 1);
    std::ofstream(d / "bad.json") << "{ not json";
    CHECK(run_cli("--out-dir " + d.string() + " validate " + (d / "bad.json").string()) == 1);
    CHECK(run_cli("--out-dir " + d.string() + " validate no-such-preset") == 1);
    CHECK(run_cli("--out-dir " + d.string() + " special-points disk") == 2);
    // A double eigenvalue is a resolved verdict; analysis of it is not possible.
    CHECK(run_cli("--out-dir " + d.string() + " eigen square --h 0.05") == 0);
    CHECK(nlohmann::json::parse(slurp(d / "eigen.json"))["multiplicity"] == "double");
    CHECK(run_cli("--out-dir " + d.string() + " analyze square --h 0.05") == 3);
    std::ofstream(d / "teapot.json") << R"({"kind":"teapot"})";
    CHECK(run_cli("--out-dir " + d.string() + " plot " + (d / "teapot.json").string() + " " +
                  (d / "t.svg").string()) == 1);
  }

  TEST_CASE("reruns are byte-identical and stamped") {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    REQUIRE(run_cli("--out-dir " + a.string() + " lyapunov example1") == 0);
    REQUIRE(run_cli("--threads 1 --out-dir " + b.string() + " lyapunov example1") == 0);
    const std::string ja = slurp(a / "lyapunov.json");
    CHECK_FALSE(ja.empty());
    CHECK(ja == slurp(b / "lyapunov.json"));
    CHECK(slurp(a / "lyapunov.svg") == slurp(b / "lyapunov.svg"));
    const auto art = nlohmann::json::parse(ja);
    const auto man = nlohmann::json::parse(slurp(a / art["manifest"].get<std::string>()));
    CHECK(art["run_id"] == man["run_id"]);
    CHECK(balanced_xml(slurp(a / "lyapunov.svg")));
  }

  TEST_CASE("simulate CSV and its plot") {
    const fs::path d = scratch("sim");
    REQUIRE(run_cli("--out-dir " + d.string() +
                    " simulate example1 --x -0.5 0.0 --y 0.5 0.2 --dt 1e-3 --tmax 0.2 --paths 2") == 0);
    fs::path csv;
    for (const auto& e : fs::directory_iterator(d))
      if (e.path().extension() == ".csv") csv = e.path();
    REQUIRE_FALSE(csv.empty());
    const std::string text = slurp(csv);
    CHECK(text.rfind("# run_id=", 0) == 0);
    CHECK(text.find("t,Xx,Xy,Yx,Yy,V,theta,u1,u2,absL,absM,coupled,path") != std::string::npos);
    REQUIRE(run_cli("--out-dir " + d.string() + " lyapunov example1") == 0);
    REQUIRE(run_cli("plot " + csv.string() + " " + (d / "u.svg").string() + " --lyapunov " +
                    (d / "lyapunov.json").string()) == 0);
    CHECK(balanced_xml(slurp(d / "u.svg")));
  }
}
