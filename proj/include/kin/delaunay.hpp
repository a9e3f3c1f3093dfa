#pragma once

#include <array>
#include <vector>

#include "kin/geometry.hpp"

namespace kin {

struct Triangulation {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // ccw vertex index triples
  std::vector<char> is_generator;             // one flag per vertex

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
};

// Incremental Bowyer-Watson triangulation of the given points. The domain
// rectangle's corners are appended when not already present so that boundary
// cells of the dual tessellation stay well formed. Throws std::invalid_argument
// on fewer than 3 distinct points or an all-collinear set.
Triangulation build_delaunay(std::vector<Point2> points, const Rect& domain);

// Same construction without corner insertion (triangulates exactly the given
// point set).
Triangulation build_delaunay_points(std::vector<Point2> points);

}  // namespace kin
