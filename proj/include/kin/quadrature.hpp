#pragma once

#include <stdexcept>
#include <vector>

#include "kin/geometry.hpp"

namespace kin {

struct QuadPoint {
  Point2 p;
  double w;
};

// Symmetric Gauss rules on a triangle, exact for bivariate polynomials up to
// the requested degree. Supported degrees: 1, 2, 3, 5. Weights sum to the
// triangle area.
inline std::vector<QuadPoint> triangle_rule(const Point2& a, const Point2& b, const Point2& c,
                                            int degree) {
  struct BaryW {
    double l1, l2, l3, w;
  };
  std::vector<BaryW> rule;
  switch (degree) {
    case 0:
    case 1:
      rule = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}};
      break;
    case 2:
      rule = {{0.5, 0.5, 0.0, 1.0 / 3}, {0.0, 0.5, 0.5, 1.0 / 3}, {0.5, 0.0, 0.5, 1.0 / 3}};
      break;
    case 3:
      rule = {{1.0 / 3, 1.0 / 3, 1.0 / 3, -27.0 / 48},
              {0.6, 0.2, 0.2, 25.0 / 48},
              {0.2, 0.6, 0.2, 25.0 / 48},
              {0.2, 0.2, 0.6, 25.0 / 48}};
      break;
    case 4:
    case 5: {
      const double w0 = 9.0 / 40.0;
      const double a1 = (6.0 - std::sqrt(15.0)) / 21.0, w1 = (155.0 - std::sqrt(15.0)) / 1200.0;
      const double a2 = (6.0 + std::sqrt(15.0)) / 21.0, w2 = (155.0 + std::sqrt(15.0)) / 1200.0;
      rule = {{1.0 / 3, 1.0 / 3, 1.0 / 3, w0},
              {a1, a1, 1 - 2 * a1, w1},
              {a1, 1 - 2 * a1, a1, w1},
              {1 - 2 * a1, a1, a1, w1},
              {a2, a2, 1 - 2 * a2, w2},
              {a2, 1 - 2 * a2, a2, w2},
              {1 - 2 * a2, a2, a2, w2}};
      break;
    }
    default:
      throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  const double area = triangle_area(a, b, c);
  std::vector<QuadPoint> out;
  out.reserve(rule.size());
  for (const auto& r : rule) {
    Point2 p{r.l1 * a.x + r.l2 * b.x + r.l3 * c.x, r.l1 * a.y + r.l2 * b.y + r.l3 * c.y};
    out.push_back({p, r.w * area});
  }
  return out;
}

// Gauss-Legendre points on the segment [a,b]; npts in {1,2,3} is exact for
// 1D polynomials of degree 2*npts-1. Weights sum to the segment length.
inline std::vector<QuadPoint> segment_rule(const Point2& a, const Point2& b, int npts) {
  std::vector<std::pair<double, double>> xw;  // abscissa in [-1,1], weight
  switch (npts) {
    case 1:
      xw = {{0.0, 2.0}};
      break;
    case 2: {
      const double x = 1.0 / std::sqrt(3.0);
      xw = {{-x, 1.0}, {x, 1.0}};
      break;
    }
    case 3: {
      const double x = std::sqrt(3.0 / 5.0);
      xw = {{-x, 5.0 / 9}, {0.0, 8.0 / 9}, {x, 5.0 / 9}};
      break;
    }
    default:
      throw std::invalid_argument("segment_rule: unsupported point count");
  }
  const Point2 mid = (a + b) * 0.5;
  const Point2 half = (b - a) * 0.5;
  const double hl = 0.5 * dist(a, b);
  std::vector<QuadPoint> out;
  out.reserve(xw.size());
  for (const auto& [x, w] : xw) out.push_back({mid + half * x, w * hl});
  return out;
}

inline int face_points_for_degree(int degree) {
  if (degree <= 1) return 1;
  if (degree <= 3) return 2;
  if (degree <= 5) return 3;
  throw std::invalid_argument("face quadrature: unsupported degree");
}

}  // namespace kin
