#include "kin/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kin {

namespace {

struct Tri {
  std::array<int, 3> v;
  bool alive = true;
};

using Edge = std::pair<int, int>;

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

}  // namespace

Triangulation build_delaunay_points(std::vector<Point2> points) {
  const int n_input = static_cast<int>(points.size());
  if (n_input < 3) throw std::invalid_argument("build_delaunay: need at least 3 points");

  // Scale-aware tolerance.
  double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
  for (const auto& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  if (span <= 0.0) throw std::invalid_argument("build_delaunay: degenerate point set");
  const double eps_area = 1e-12 * span * span;

  bool collinear = true;
  for (int i = 2; i < n_input && collinear; ++i)
    if (std::abs(orient2d(points[0], points[1], points[i])) > eps_area) collinear = false;
  if (collinear) throw std::invalid_argument("build_delaunay: all points collinear");

  // Super-triangle well outside the bounding box.
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  const double r = 20.0 * span + 1.0;
  std::vector<Point2> verts = points;
  const int s0 = n_input, s1 = n_input + 1, s2 = n_input + 2;
  verts.push_back({cx - 2.0 * r, cy - r});
  verts.push_back({cx + 2.0 * r, cy - r});
  verts.push_back({cx, cy + 2.0 * r});

  std::vector<Tri> tris;
  tris.push_back({{s0, s1, s2}, true});

  for (int ip = 0; ip < n_input; ++ip) {
    const Point2& p = verts[ip];
    // Cavity: all triangles whose circumcircle contains p. A relative
    // tolerance pulls cocircular configurations into the cavity, which keeps
    // it star-shaped for lattice-like inputs.
    std::map<Edge, int> boundary;  // edge -> count
    bool found = false;
    for (auto& t : tris) {
      if (!t.alive) continue;
      const Point2 &a = verts[t.v[0]], &b = verts[t.v[1]], &c = verts[t.v[2]];
      const double det = incircle(a, b, c, p);
      const double scale = std::max({dot(a - p, a - p), dot(b - p, b - p), dot(c - p, c - p)});
      if (det > -1e-12 * scale * scale) {
        t.alive = false;
        found = true;
        for (int e = 0; e < 3; ++e) boundary[make_edge(t.v[e], t.v[(e + 1) % 3])]++;
      }
    }
    if (!found) throw std::runtime_error("build_delaunay: insertion failed (duplicate point?)");
    for (const auto& [edge, count] : boundary) {
      if (count != 1) continue;  // interior cavity edge
      const auto [a, b] = edge;
      // Orient the new triangle ccw.
      if (orient2d(verts[a], verts[b], p) > 0.0)
        tris.push_back({{a, b, ip}, true});
      else
        tris.push_back({{b, a, ip}, true});
    }
    // Compact occasionally to keep the scan linear-ish.
    if (tris.size() > 16 * points.size() + 64) {
      std::vector<Tri> live;
      live.reserve(tris.size() / 2);
      for (const auto& t : tris)
        if (t.alive) live.push_back(t);
      tris.swap(live);
    }
  }

  Triangulation out;
  out.vertices.assign(verts.begin(), verts.begin() + n_input);
  out.is_generator.assign(n_input, 1);
  for (const auto& t : tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n_input || t.v[1] >= n_input || t.v[2] >= n_input) continue;
    const double a2 = orient2d(out.vertices[t.v[0]], out.vertices[t.v[1]], out.vertices[t.v[2]]);
    if (a2 <= eps_area) continue;  // degenerate sliver along the hull
    out.triangles.push_back(t.v);
  }
  if (out.triangles.empty()) throw std::runtime_error("build_delaunay: empty triangulation");
  return out;
}

Triangulation build_delaunay(std::vector<Point2> points, const Rect& domain) {
  const double tol = 1e-12 * std::max(domain.width(), domain.height());
  for (const auto& p : points)
    if (!domain.contains(p, tol))
      throw std::invalid_argument("build_delaunay: point outside domain");
  const Point2 corners[4] = {{domain.xmin, domain.ymin},
                             {domain.xmax, domain.ymin},
                             {domain.xmax, domain.ymax},
                             {domain.xmin, domain.ymax}};
  for (const auto& c : corners) {
    bool present = false;
    for (const auto& p : points)
      if (dist(p, c) < tol) {
        present = true;
        break;
      }
    if (!present) points.push_back(c);
  }
  return build_delaunay_points(std::move(points));
}

}  // namespace kin
