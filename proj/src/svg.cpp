// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mirror/errors.hpp"

namespace mirror {

using json = nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

Vec2 pt(const json& a) { return {a.at(0).get<double>(), a.at(1).get<double>()}; }

std::vector<Vec2> pts(const json& a) {
  std::vector<Vec2> v;
  for (const auto& p : a) v.push_back(pt(p));
  return v;
}

void bbox(const std::vector<Vec2>& v, Vec2& lo, Vec2& hi) {
  for (const Vec2& p : v) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
}

// Diverging blue-white-red by value in [-1, 1].
std::string color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  int r, g, b;
  if (v < 0) {
    r = static_cast<int>(255 * (1 + v));
    g = static_cast<int>(255 * (1 + 0.6 * v));
    b = 255;
  } else {
    r = 255;
    g = static_cast<int>(255 * (1 - 0.6 * v));
    b = static_cast<int>(255 * (1 - v));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string render_loop(const json& art) {
  std::vector<Vec2> loop;
  for (const auto& p : art.at("loop")) loop.push_back(pt(p));
  Vec2 lo{0, 0}, hi{1e-9, 1e-9};
  if (art.contains("ubar1")) hi = {art["ubar1"].get<double>(), art["ubar2"].get<double>()};
  bbox(loop, lo, hi);
  SvgCanvas c(lo, hi);
  c.polyline({{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}}, "#bbbbbb", 1.0, true);
  c.polyline(loop, "#1f4e9c", 2.0, true, "#dce6f5", 0.6);
  if (art.contains("corners")) {
    for (const auto& [name, p] : art["corners"].items()) {
      c.dot(pt(p), 3.0, "#1f4e9c");
      c.text(pt(p), name, 11.0);
    }
  }
  if (art.contains("u_paths"))
    for (const auto& path : art["u_paths"]) c.polyline(pts(path), "#c0392b", 0.8);
  c.text({lo.x, hi.y}, "u1 (horizontal), u2 (vertical)", 11.0);
  return c.str();
}

std::string render_points(const json& art) {
  const auto outline = pts(art.at("outline"));
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  bbox(outline, lo, hi);
  SvgCanvas c(lo, hi);
  c.polyline(outline, "#222222", 1.5, true, "#f4f4f4");
  if (art.contains("points")) {
    for (const auto& [name, p] : art["points"].items()) {
      const Vec2 x{p.at("x").get<double>(), p.at("y").get<double>()};
      c.dot(x, 3.0, "#c0392b");
      c.text(x, name, 11.0);
    }
  }
  return c.str();
}

std::string render_field(const json& art) {
  const json& f = art.at("field");
  const auto V = pts(f.at("vertices"));
  const auto psi = f.at("psi").get<std::vector<double>>();
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  bbox(V, lo, hi);
  SvgCanvas c(lo, hi);
  double amax = 0.0;
  for (double v : psi) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) amax = 1.0;
  // Filled contours: ten bands of the normalized field.
  for (const auto& T : f.at("triangles")) {
    const int a = T[0], b = T[1], d = T[2];
    const double m = (psi[a] + psi[b] + psi[d]) / (3.0 * amax);
    const double band = (std::floor(m * 5.0) + 0.5) / 5.0;
    c.polyline({V[a], V[b], V[d]}, "none", 0.0, true, color(band));
  }
  if (art.contains("overlay")) {
    const json& o = art["overlay"];
    if (o.contains("DL")) c.polyline(pts(o["DL"]), "#1f4e9c", 1.0, true, "#1f4e9c", 0.15);
    if (o.contains("DR")) c.polyline(pts(o["DR"]), "#c0392b", 1.0, true, "#c0392b", 0.15);
    if (o.contains("violations"))
      for (const auto& p : o["violations"]) c.dot(pt(p), 1.5, "#ff8c00");
  }
  if (art.contains("outline")) c.polyline(pts(art["outline"]), "#222222", 1.5, true);
  const json* nodal = nullptr;
  if (art.contains("nodal")) nodal = &art["nodal"];
  if (nodal && nodal->contains("polylines"))
    for (const auto& l : (*nodal)["polylines"]) c.polyline(pts(l), "#000000", 2.0);
  return c.str();
}

}  // namespace

SvgCanvas::SvgCanvas(Vec2 lo, Vec2 hi, double width_px) {
  const double pad = 0.05 * std::max(hi.x - lo.x, hi.y - lo.y);
  lo_ = {lo.x - pad, lo.y - pad};
  const Vec2 ext{hi.x - lo.x + 2 * pad, hi.y - lo.y + 2 * pad};
  scale_ = width_px / std::max(ext.x, 1e-12);
  width_ = width_px;
  height_ = ext.y * scale_;
}

std::string SvgCanvas::xy(Vec2 p) const {
  return num((p.x - lo_.x) * scale_) + "," + num(height_ - (p.y - lo_.y) * scale_);
}

void SvgCanvas::polyline(const std::vector<Vec2>& p, const std::string& stroke, double width_px, bool closed,
                         const std::string& fill, double fill_opacity) {
  if (p.empty()) return;
  body_ << (closed ? "<polygon" : "<polyline") << " points=\"";
  for (size_t i = 0; i < p.size(); ++i) body_ << (i ? " " : "") << xy(p[i]);
  body_ << "\" fill=\"" << fill << "\"";
  if (fill != "none" && fill_opacity < 1.0) body_ << " fill-opacity=\"" << num(fill_opacity) << "\"";
  body_ << " stroke=\"" << stroke << "\"";
  if (stroke != "none") body_ << " stroke-width=\"" << num(width_px) << "\"";
  body_ << "/>\n";
}

void SvgCanvas::segment(Vec2 a, Vec2 b, const std::string& stroke, double width_px) {
  polyline({a, b}, stroke, width_px);
}

void SvgCanvas::dot(Vec2 c, double r_px, const std::string& fill) {
  const auto s = xy(c);
  const auto k = s.find(',');
  body_ << "<circle cx=\"" << s.substr(0, k) << "\" cy=\"" << s.substr(k + 1) << "\" r=\"" << num(r_px)
        << "\" fill=\"" << fill << "\"/>\n";
}

void SvgCanvas::text(Vec2 p, const std::string& s, double size_px) {
  const auto q = xy(p);
  const auto k = q.find(',');
  body_ << "<text x=\"" << q.substr(0, k) << "\" y=\"" << q.substr(k + 1) << "\" font-size=\"" << num(size_px)
        << "\" font-family=\"sans-serif\">" << escape(s) << "</text>\n";
}

void SvgCanvas::comment(const std::string& s) {
  std::string t = s;
  for (size_t i; (i = t.find("--")) != std::string::npos;) t.replace(i, 2, "- -");
  body_ << "<!-- " << t << " -->\n";
}

std::string SvgCanvas::str() const {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_) << "\" height=\""
    << num(height_) << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
    << body_.str() << "</svg>\n";
  return o.str();
}

std::vector<Vec2> boundary_polygon(const BoundaryCurve& curve, int n) {
  std::vector<Vec2> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(curve.point_at(curve.total_length() * i / n));
  return v;
}

std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, Vec2 a, Vec2 b, int sign) {
  auto f = [&](Vec2 p) { return sign * cross(b - a, p - a); };
  std::vector<Vec2> out;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
    const double fp = f(p), fq = f(q);
    if (fp >= 0) out.push_back(p);
    if ((fp >= 0) != (fq >= 0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  return out;
}

std::string svg_domain(const BoundaryCurve& curve, const SpecialPoints* sp) {
  json art;
  json outline = json::array();
  for (const Vec2& p : boundary_polygon(curve)) outline.push_back({p.x, p.y});
  art["outline"] = outline;
  if (sp) art["points"] = special_points_json(*sp)["points"];
  return render_points(art);
}

json field_json(const TriMesh& mesh, const std::vector<double>& psi) {
  json V = json::array(), T = json::array();
  for (const Vec2& p : mesh.vertices) V.push_back({p.x, p.y});
  for (const auto& t : mesh.triangles) T.push_back({t[0], t[1], t[2]});
  return {{"vertices", V}, {"triangles", T}, {"psi", psi}};
}

std::string render_artifact(const json& art) {
  const std::string kind = art.value("kind", "");
  if (kind == "lyapunov" || (kind == "invariance" && art.contains("loop"))) return render_loop(art);
  if (kind == "special_points" || kind == "domain") return render_points(art);
  if ((kind == "eigen" || kind == "analysis") && art.contains("field")) return render_field(art);
  throw Error(Errc::UnknownArtifactKind, kind.empty() ? "artifact has no kind" : "cannot render kind " + kind);
}

std::string render_u_csv(const std::string& csv, const json* lyapunov) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> head;
  int i1 = -1, i2 = -1, ip = -1;
  json paths = json::array();
  json cur = json::array();
  std::string last_path;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
    if (head.empty()) {
      head = f;
      for (size_t k = 0; k < f.size(); ++k) {
        if (f[k] == "u1") i1 = static_cast<int>(k);
        if (f[k] == "u2") i2 = static_cast<int>(k);
        if (f[k] == "path") ip = static_cast<int>(k);
      }
      if (i1 < 0 || i2 < 0) throw Error(Errc::UnknownArtifactKind, "CSV lacks u1,u2 columns");
      continue;
    }
    const std::string pid = ip >= 0 ? f[ip] : "";
    if (pid != last_path && !cur.empty()) {
      paths.push_back(cur);
      cur = json::array();
    }
    last_path = pid;
    if (f[i1].empty() || f[i2].empty() || f[i1] == "nan" || f[i2] == "nan") {
      if (!cur.empty()) paths.push_back(cur);
      cur = json::array();
      continue;
    }
    cur.push_back({std::stod(f[i1]), std::stod(f[i2])});
  }
  if (!cur.empty()) paths.push_back(cur);
  json art = lyapunov ? *lyapunov : json{{"kind", "lyapunov"}, {"loop", json::array()}};
  art["u_paths"] = paths;
  return render_loop(art);
}

}  // namespace mirror
