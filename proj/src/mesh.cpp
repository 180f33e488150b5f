// Copyright 2026 The mirror-coupling Authors
// SPDX-License-Identifier: Apache-2.0
#include "mirror/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "mirror/errors.hpp"
#include "mirror/rng.hpp"

namespace mirror {

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> n;  // n[i] is across the edge opposite v[i]
  bool alive = true;
};

class Builder {
 public:
  explicit Builder(const std::vector<Vec2>& pts) : p_(pts) {
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (const auto& q : pts) {
      lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
      hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
    }
    const Vec2 c = (lo + hi) * 0.5;
    const double r = std::max(hi.x - lo.x, hi.y - lo.y) + 1.0;
    n_real_ = static_cast<int>(p_.size());
    p_.push_back(c + Vec2{-20 * r, -20 * r});
    p_.push_back(c + Vec2{20 * r, -20 * r});
    p_.push_back(c + Vec2{0, 20 * r});
    tris_.push_back({{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}, true});
  }

  void insert(int pi) {
    const Vec2 x = p_[pi];
    int t = locate(x);
    cavity_.clear();
    ++stamp_;
    mark_.resize(tris_.size(), 0);
    cavity_.push_back(t);
    mark_[t] = stamp_;
    for (size_t k = 0; k < cavity_.size(); ++k) {
      const Tri& T = tris_[cavity_[k]];
      for (int i = 0; i < 3; ++i) {
        const int nb = T.n[i];
        if (nb < 0 || marked(nb)) continue;
        const Tri& N = tris_[nb];
        if (incircle(p_[N.v[0]], p_[N.v[1]], p_[N.v[2]], x) > 0) {
          mark_[nb] = stamp_;
          cavity_.push_back(nb);
        }
      }
    }
    // Grow until every boundary edge is strictly visible from x.
    for (bool grown = true; grown;) {
      grown = false;
      for (size_t k = 0; k < cavity_.size() && !grown; ++k) {
        const Tri& T = tris_[cavity_[k]];
        for (int i = 0; i < 3; ++i) {
          const int nb = T.n[i];
          if (nb >= 0 && marked(nb)) continue;
          const Vec2 a = p_[T.v[(i + 1) % 3]], b = p_[T.v[(i + 2) % 3]];
          const double scale = norm2(b - a) + norm2(x - a);
          if (orient(a, b, x) <= 1e-13 * scale && nb >= 0) {
            mark_[nb] = stamp_;
            cavity_.push_back(nb);
            grown = true;
            break;
          }
        }
      }
    }
    edges_.clear();
    for (int c : cavity_) {
      const Tri& T = tris_[c];
      for (int i = 0; i < 3; ++i) {
        const int nb = T.n[i];
        if (nb >= 0 && marked(nb)) continue;
        edges_.push_back({T.v[(i + 1) % 3], T.v[(i + 2) % 3], nb});
      }
    }
    for (int c : cavity_) tris_[c].alive = false;
    const int first = static_cast<int>(tris_.size());
    for (const auto& e : edges_) {
      const int id = static_cast<int>(tris_.size());
      tris_.push_back({{e.a, e.b, pi}, {-1, -1, e.outside}, true});
      if (e.outside >= 0) {
        Tri& O = tris_[e.outside];
        for (int j = 0; j < 3; ++j) {
          const int u = O.v[(j + 1) % 3], w = O.v[(j + 2) % 3];
          if (u == e.b && w == e.a) O.n[j] = id;
        }
      }
    }
    // New triangle (a, b, p): across v[0]=a lies the one starting at b,
    // across v[1]=b lies the one ending at a.
    const int last = static_cast<int>(tris_.size());
    for (int i = first; i < last; ++i) {
      for (int j = first; j < last; ++j) {
        if (i == j) continue;
        if (tris_[j].v[0] == tris_[i].v[1]) tris_[i].n[0] = j;
        if (tris_[j].v[1] == tris_[i].v[0]) tris_[i].n[1] = j;
      }
    }
    last_ = first;
  }

  std::vector<std::array<int, 3>> result() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& T : tris_) {
      if (!T.alive) continue;
      if (T.v[0] >= n_real_ || T.v[1] >= n_real_ || T.v[2] >= n_real_) continue;
      out.push_back(T.v);
    }
    return out;
  }

 private:
  int locate(Vec2 x) {
    int t = last_;
    while (!tris_[t].alive) --t;
    for (int guard = 0; guard < 1 << 24; ++guard) {
      const Tri& T = tris_[t];
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int i = (k + guard) % 3;
        if (orient(p_[T.v[(i + 1) % 3]], p_[T.v[(i + 2) % 3]], x) < 0 && T.n[i] >= 0) {
          next = T.n[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    throw Error(Errc::MeshQualityFailure, "point location did not terminate");
  }

  std::vector<Vec2> p_;
  int n_real_ = 0;
  std::vector<Tri> tris_;
  int last_ = 0;
  struct Edge {
    int a, b, outside;
  };
  std::vector<int> cavity_;
  std::vector<int> mark_;  // stamp of the insertion that claimed the triangle
  int stamp_ = 0;
  std::vector<Edge> edges_;

  bool marked(int t) const { return mark_[t] == stamp_; }
};

}  // namespace

double TriMesh::area(int t) const {
  const auto& T = triangles[t];
  return 0.5 * orient(vertices[T[0]], vertices[T[1]], vertices[T[2]]);
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < n_triangles(); ++t) a += area(t);
  return a;
}

double TriMesh::min_angle() const {
  double best = kPi;
  for (const auto& T : triangles) {
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = vertices[T[i]], b = vertices[T[(i + 1) % 3]], c = vertices[T[(i + 2) % 3]];
      const Vec2 u = b - a, v = c - a;
      best = std::min(best, std::atan2(std::abs(cross(u, v)), dot(u, v)));
    }
  }
  return best;
}

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts) {
  // Insert in a serpentine row order for short walks.
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  if (pts.empty()) return {};
  double ymin = 1e300, ymax = -1e300;
  for (const auto& q : pts) ymin = std::min(ymin, q.y), ymax = std::max(ymax, q.y);
  const int rows = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()))));
  const double dy = (ymax - ymin) / rows + 1e-300;
  auto row = [&](int i) { return std::min(rows - 1, static_cast<int>((pts[i].y - ymin) / dy)); };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int ra = row(a), rb = row(b);
    if (ra != rb) return ra < rb;
    return (ra % 2 == 0) ? pts[a].x < pts[b].x : pts[a].x > pts[b].x;
  });
  Builder b(pts);
  for (int i : order) b.insert(i);
  return b.result();
}

TriMesh triangulate(const BoundaryCurve& curve, double h, const MeshOptions& opt) {
  if (!(h > 0.0) || h >= curve.diameter() / 10.0)
    throw Error(Errc::InvalidInput, "mesh size must lie in (0, diameter/10)");
  // Boundary samples between consecutive corners.
  std::vector<double> cuts = curve.corner_positions();
  const double L = curve.total_length();
  if (cuts.empty()) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> bs;
  for (size_t k = 0; k < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = k + 1 < cuts.size() ? cuts[k + 1] : cuts[0] + L;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
    for (int j = 0; j < n; ++j) bs.push_back(curve.wrap(a + (b - a) * j / n));
  }
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (double s : bs) {
    const Vec2 q = curve.point_at(s);
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  PhiloxStream rng(opt.seed, 0x6d657368ULL);
  for (int attempt = 0; attempt <= opt.retries; ++attempt) {
    TriMesh m;
    m.h = h;
    for (double s : bs) {
      m.vertices.push_back(curve.point_at(s));
      m.boundary.push_back(1);
      m.boundary_s.push_back(s);
    }
    // Triangular lattice with a random offset.
    const double dy = h * std::sqrt(3.0) / 2.0;
    const Vec2 off{rng.uniform() * h, rng.uniform() * dy};
    const int ny = static_cast<int>((hi.y - lo.y) / dy) + 3;
    const int nx = static_cast<int>((hi.x - lo.x) / h) + 3;
    for (int j = -1; j < ny; ++j) {
      for (int i = -1; i < nx; ++i) {
        Vec2 q{lo.x + off.x + (i + 0.5 * (j & 1)) * h, lo.y + off.y + j * dy};
        q = q + Vec2{rng.uniform() - 0.5, rng.uniform() - 0.5} * (2.0 * opt.jitter * h);
        if (curve.signed_distance(q) < 0.55 * h) continue;
        m.vertices.push_back(q);
        m.boundary.push_back(0);
        m.boundary_s.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    m.triangles = delaunay(m.vertices);
    // Drop slivers formed by collinear boundary samples on the hull.
    std::erase_if(m.triangles, [&](const std::array<int, 3>& T) {
      return 0.5 * orient(m.vertices[T[0]], m.vertices[T[1]], m.vertices[T[2]]) <= 1e-14 * h * h;
    });
    if (m.min_angle() >= opt.min_angle_deg * kPi / 180.0) return m;
  }
  throw Error(Errc::MeshQualityFailure, "minimum angle below threshold after retries");
}

TriMesh refine(const TriMesh& mesh, const BoundaryCurve& curve) {
  TriMesh out;
  out.h = mesh.h / 2.0;
  out.vertices = mesh.vertices;
  out.boundary = mesh.boundary;
  out.boundary_s = mesh.boundary_s;
  for (int i = 0; i < mesh.n_vertices(); ++i) out.parents.push_back({i, i});
  // Edges used by a single triangle lie on the boundary.
  std::unordered_map<std::uint64_t, int> count;
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint32_t>(std::max(a, b));
  };
  for (const auto& T : mesh.triangles)
    for (int i = 0; i < 3; ++i) ++count[key(T[i], T[(i + 1) % 3])];
  std::unordered_map<std::uint64_t, int> mid;
  const double L = curve.total_length();
  auto midpoint = [&](int a, int b) {
    const std::uint64_t k = key(a, b);
    auto it = mid.find(k);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    if (count[k] == 1 && mesh.boundary[a] && mesh.boundary[b]) {
      double sa = mesh.boundary_s[a], sb = mesh.boundary_s[b];
      double d = curve.wrap(sb - sa);
      if (d > 0.5 * L) {
        std::swap(sa, sb);
        d = L - d;
      }
      const double s = curve.wrap(sa + 0.5 * d);
      out.vertices.push_back(curve.point_at(s));
      out.boundary.push_back(1);
      out.boundary_s.push_back(s);
    } else {
      out.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]) * 0.5);
      out.boundary.push_back(0);
      out.boundary_s.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    out.parents.push_back({a, b});
    mid.emplace(k, id);
    return id;
  };
  out.triangles.reserve(4 * mesh.triangles.size());
  for (const auto& T : mesh.triangles) {
    const int a = T[0], b = T[1], c = T[2];
    const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

std::vector<double> prolong(const TriMesh& fine, const std::vector<double>& coarse) {
  if (fine.parents.size() != fine.vertices.size()) throw Error(Errc::InvalidInput, "mesh was not refined");
  std::vector<double> out(fine.vertices.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (coarse[fine.parents[i][0]] + coarse[fine.parents[i][1]]);
  return out;
}

bool in_circumcircle(const TriMesh& mesh, int t, Vec2 x) {
  const auto& T = mesh.triangles[t];
  return incircle(mesh.vertices[T[0]], mesh.vertices[T[1]], mesh.vertices[T[2]], x) > 0;
}

MeshLocator::MeshLocator(const TriMesh& mesh) : mesh_(&mesh) {
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& q : mesh.vertices) {
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  lo_ = lo;
  const double area = std::max((hi.x - lo.x) * (hi.y - lo.y), 1e-300);
  cell_ = std::sqrt(area / std::max(1, mesh.n_triangles())) * 2.0;
  nx_ = std::max(1, static_cast<int>((hi.x - lo.x) / cell_) + 1);
  ny_ = std::max(1, static_cast<int>((hi.y - lo.y) / cell_) + 1);
  std::vector<std::vector<int>> cells(static_cast<size_t>(nx_) * ny_);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& T = mesh.triangles[t];
    Vec2 a = mesh.vertices[T[0]], b = a;
    for (int i = 1; i < 3; ++i) {
      const Vec2 q = mesh.vertices[T[i]];
      a = {std::min(a.x, q.x), std::min(a.y, q.y)};
      b = {std::max(b.x, q.x), std::max(b.y, q.y)};
    }
    const int i0 = std::clamp(static_cast<int>((a.x - lo.x) / cell_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((b.x - lo.x) / cell_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((a.y - lo.y) / cell_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((b.y - lo.y) / cell_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) cells[static_cast<size_t>(j) * nx_ + i].push_back(t);
  }
  start_.assign(cells.size() + 1, 0);
  for (size_t c = 0; c < cells.size(); ++c) start_[c + 1] = start_[c] + static_cast<int>(cells[c].size());
  items_.reserve(start_.back());
  for (const auto& c : cells) items_.insert(items_.end(), c.begin(), c.end());
}

std::optional<int> MeshLocator::locate(Vec2 x, std::array<double, 3>* bary, double tol) const {
  const TriMesh& m = *mesh_;
  const int ci = static_cast<int>(std::floor((x.x - lo_.x) / cell_));
  const int cj = static_cast<int>(std::floor((x.y - lo_.y) / cell_));
  int best = -1;
  double best_min = -1e300;
  std::array<double, 3> best_w{};
  for (int j = cj - 1; j <= cj + 1; ++j) {
    for (int i = ci - 1; i <= ci + 1; ++i) {
      if (i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
      const size_t c = static_cast<size_t>(j) * nx_ + i;
      for (int k = start_[c]; k < start_[c + 1]; ++k) {
        const int t = items_[k];
        const auto& T = m.triangles[t];
        const Vec2 a = m.vertices[T[0]], b = m.vertices[T[1]], d = m.vertices[T[2]];
        const double A = orient(a, b, d);
        const std::array<double, 3> w{orient(b, d, x) / A, orient(d, a, x) / A, orient(a, b, x) / A};
        const double mn = std::min({w[0], w[1], w[2]});
        if (mn > best_min) {
          best_min = mn;
          best = t;
          best_w = w;
        }
      }
    }
  }
  if (best < 0 || best_min < -tol * (1.0 + 1.0 / std::max(m.h, 1e-300))) return std::nullopt;
  if (best_min < 0) {
    for (auto& v : best_w) v = std::max(v, 0.0);
    const double s = best_w[0] + best_w[1] + best_w[2];
    for (auto& v : best_w) v /= s;
  }
  if (bary) *bary = best_w;
  return best;
}

double MeshLocator::interpolate(const std::vector<double>& f, Vec2 x) const {
  std::array<double, 3> w;
  const auto t = locate(x, &w, 1e-3);
  if (!t) throw Error(Errc::InvalidInput, "point outside the mesh");
  const auto& T = mesh_->triangles[*t];
  return w[0] * f[T[0]] + w[1] * f[T[1]] + w[2] * f[T[2]];
}

}  // namespace mirror
