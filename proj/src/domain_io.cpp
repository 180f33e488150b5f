// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/domain_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mirror {

using nlohmann::json;

namespace {

Vec2 read_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(Errc::InvalidInput, std::string("expected [x,y] for ") + what);
  return {j[0].get<double>(), j[1].get<double>()};
}

double read_num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(Errc::InvalidInput, std::string("missing numeric field ") + key);
  return j[key].get<double>();
}

std::vector<BoundaryPiece> example1_pieces() {
  const double r2 = std::sqrt(2.0);
  const double corner = kPi - std::atan(1.0 / (2.0 * r2));
  return {
      BoundaryPiece::ellipse_arc({0, 0}, 3.0, 2.0, 0.0, kPi / 2),
      BoundaryPiece::circle_arc({0, -1}, 3.0, kPi / 2, corner),
      BoundaryPiece::circle_arc({-r2, 0}, r2, kPi, 1.5 * kPi),
      BoundaryPiece::segment({-r2, -r2}, {0, -r2}),
      BoundaryPiece::ellipse_arc({0, 0}, 3.0, r2, 1.5 * kPi, 2.0 * kPi),
  };
}

// Two circles joined by their common external tangents; one symmetry axis.
std::vector<BoundaryPiece> example2_pieces() {
  const double R1 = 1.0, R2 = 0.6, d = 1.2;
  const double phi = std::acos((R1 - R2) / d);
  const Vec2 c2{d, 0.0};
  return {
      BoundaryPiece::circle_arc(c2, R2, -phi, phi),
      BoundaryPiece::segment(c2 + unit(phi) * R2, unit(phi) * R1),
      BoundaryPiece::circle_arc({0, 0}, R1, phi, kTwoPi - phi),
      BoundaryPiece::segment(unit(-phi) * R1, c2 + unit(-phi) * R2),
  };
}

std::vector<BoundaryPiece> rectangle(double w, double h) {
  return {
      BoundaryPiece::segment({0, 0}, {w, 0}),
      BoundaryPiece::segment({w, 0}, {w, h}),
      BoundaryPiece::segment({w, h}, {0, h}),
      BoundaryPiece::segment({0, h}, {0, 0}),
  };
}

}  // namespace

json pieces_to_json(const std::vector<BoundaryPiece>& pieces, double alpha) {
  json arr = json::array();
  for (const auto& p : pieces) {
    json j;
    switch (p.kind) {
      case PieceKind::CircleArc:
        j = {{"kind", "circle_arc"}, {"center", {p.center.x, p.center.y}}, {"radius", p.rx},
             {"from", p.t0}, {"to", p.t1}};
        break;
      case PieceKind::EllipseArc:
        j = {{"kind", "ellipse_arc"}, {"center", {p.center.x, p.center.y}},
             {"semi_axes", {p.rx, p.ry}}, {"from", p.t0}, {"to", p.t1}};
        break;
      case PieceKind::Segment:
        j = {{"kind", "segment"}, {"from", {p.a.x, p.a.y}}, {"to", {p.b.x, p.b.y}}};
        break;
    }
    arr.push_back(j);
  }
  return {{"pieces", arr}, {"alpha", alpha}};
}

Domain domain_from_json(const json& doc, const std::string& name) {
  if (!doc.is_object() || !doc.contains("pieces") || !doc["pieces"].is_array())
    throw Error(Errc::InvalidInput, "domain document needs a \"pieces\" array");
  Domain d;
  d.name = name;
  for (const auto& j : doc["pieces"]) {
    const std::string kind = j.value("kind", "");
    if (kind == "circle_arc") {
      d.pieces.push_back(BoundaryPiece::circle_arc(read_vec(j.at("center"), "center"),
                                                   read_num(j, "radius"), read_num(j, "from"),
                                                   read_num(j, "to")));
    } else if (kind == "ellipse_arc") {
      const Vec2 ax = read_vec(j.at("semi_axes"), "semi_axes");
      d.pieces.push_back(BoundaryPiece::ellipse_arc(read_vec(j.at("center"), "center"), ax.x,
                                                    ax.y, read_num(j, "from"), read_num(j, "to")));
    } else if (kind == "segment") {
      d.pieces.push_back(
          BoundaryPiece::segment(read_vec(j.at("from"), "from"), read_vec(j.at("to"), "to")));
    } else {
      throw Error(Errc::InvalidInput, "unknown piece kind '" + kind + "'");
    }
  }
  if (doc.contains("alpha")) {
    if (!doc["alpha"].is_number()) throw Error(Errc::InvalidInput, "alpha must be a number");
    d.alpha = doc["alpha"].get<double>();
  }
  d.curve = BoundaryCurve::build(d.pieces);
  return d;
}

json domain_to_json(const Domain& d) { return pieces_to_json(d.pieces, d.alpha); }

std::vector<std::string> preset_names() {
  return {"example1", "example2", "disk", "rect-1x2", "square"};
}

bool is_preset(const std::string& name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

Domain preset_domain(const std::string& name) {
  std::vector<BoundaryPiece> pieces;
  if (name == "example1") pieces = example1_pieces();
  else if (name == "example2") pieces = example2_pieces();
  else if (name == "disk") pieces = {BoundaryPiece::circle_arc({0, 0}, 1.0, 0.0, kTwoPi)};
  else if (name == "rect-1x2") pieces = rectangle(1.0, 2.0);
  else if (name == "square") pieces = rectangle(1.0, 1.0);
  else throw Error(Errc::InvalidInput, "unknown preset '" + name + "'");
  // Round-trip through the JSON form so presets and files share one path.
  const json doc = json::parse(pieces_to_json(pieces, kPi / 4).dump());
  return domain_from_json(doc, name);
}

Domain load_domain(const std::string& spec) {
  if (is_preset(spec)) return preset_domain(spec);
  std::ifstream in(spec);
  if (!in) throw Error(Errc::InvalidInput, "cannot open domain file '" + spec + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return domain_from_json(doc, spec);
}

std::uint64_t domain_hash(const Domain& d) {
  const std::string text = domain_to_json(d).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace mirror
