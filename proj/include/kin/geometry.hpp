#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace kin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2() = default;
  Point2(double x_, double y_) : x(x_), y(y_) {}

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double dist(const Point2& a, const Point2& b) { return norm(a - b); }

struct Rect {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
  }
};

// Twice the signed area of triangle (a,b,c); positive for counterclockwise order.
inline double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return cross(b - a, c - a);
}

inline double triangle_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * orient2d(a, b, c);
}

// > 0 when d lies strictly inside the circumcircle of the ccw triangle (a,b,c).
inline double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

inline Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c) {
  const double d = 2.0 * orient2d(a, b, c);
  const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
  return {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
          (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
}

inline double polygon_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& p = v[i];
    const Point2& q = v[(i + 1) % v.size()];
    s += cross(p, q);
  }
  return 0.5 * s;
}

inline Point2 polygon_centroid(const std::vector<Point2>& v) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& p = v[i];
    const Point2& q = v[(i + 1) % v.size()];
    const double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  a *= 0.5;
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

// Even-odd rule; boundary points are implementation-defined.
inline bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      const double xi =
          poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) * (poly[i].x - poly[j].x);
      if (p.x < xi) in = !in;
    }
  }
  return in;
}

}  // namespace kin
