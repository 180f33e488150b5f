// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirror/mesh.hpp"
#include "mirror/special_points.hpp"

namespace mirror {

// Standalone SVG 1.1 in world coordinates (y up).  Numbers are printed
// with fixed precision so output is reproducible.
class SvgCanvas {
 public:
  SvgCanvas(Vec2 lo, Vec2 hi, double width_px = 640.0);

  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width_px,
                bool closed = false, const std::string& fill = "none", double fill_opacity = 1.0);
  void segment(Vec2 a, Vec2 b, const std::string& stroke, double width_px);
  void dot(Vec2 c, double r_px, const std::string& fill);
  void text(Vec2 p, const std::string& s, double size_px = 12.0);
  void comment(const std::string& s);
  std::string str() const;

 private:
  std::string xy(Vec2 p) const;
  Vec2 lo_;
  double scale_ = 1.0;
  double width_ = 0.0;
  double height_ = 0.0;
  std::ostringstream body_;
};

// Domain outline from n boundary samples and the named special points.
std::vector<Vec2> boundary_polygon(const BoundaryCurve& curve, int n = 512);
// Part of a polygon on the side of line a->b selected by sign (+1 left).
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 a, Vec2 b, int sign);

std::string svg_domain(const BoundaryCurve& curve, const SpecialPoints* sp);

// Mesh, nodal field and overlays for the eigen and analysis figures.
nlohmann::json field_json(const TriMesh& mesh, const std::vector<double>& psi);

// Renders a JSON artifact by its "kind": domain, lyapunov, eigen, analysis,
// invariance.  Throws UnknownArtifactKind otherwise.
std::string render_artifact(const nlohmann::json& artifact);
// U-trajectory from a simulate CSV, over the loop of an optional lyapunov
// artifact.
std::string render_u_csv(const std::string& csv, const nlohmann::json* lyapunov);

}  // namespace mirror
