#pragma once

#include <array>
#include <string>
#include <vector>

#include "kin/delaunay.hpp"
#include "kin/geometry.hpp"
#include "kin/quadrature.hpp"

namespace kin {

// Stencil member: neighbor cell viewed at (its coordinates + shift). The
// shift is nonzero only across periodic boundaries.
struct StencilEntry {
  int cell = -1;
  Point2 shift;
};

struct Face {
  int left = -1;
  int right = -1;  // -1 on boundary faces
  Point2 a, b;     // endpoints in the left cell's frame
  Point2 normal;   // unit normal, outward from the left cell
  double length = 0.0;
  int boundary_tag = 0;  // 0 interior, >0 assigned by the mesh builder
  Point2 shift;          // right cell coordinates + shift = face frame
  std::vector<QuadPoint> qp;  // weights sum to length
};

struct Cell {
  std::vector<int> verts;  // polygon vertex ids, ccw
  std::vector<int> faces;  // face ids in edge order
  Point2 barycenter;
  double area = 0.0;
  double h = 0.0;  // circumradius about the barycenter, basis normalization
  std::vector<std::array<Point2, 3>> subtris;
  std::vector<QuadPoint> qp;  // volume points, weights sum to area
  std::vector<StencilEntry> stencil;                 // central stencil, [0] = self
  std::vector<std::array<StencilEntry, 3>> sectors;  // one per face, [0] = self
  int generator = -1;  // generating vertex for dual meshes
};

struct PolyMesh {
  std::vector<Point2> nodes;
  std::vector<Cell> cells;
  std::vector<Face> faces;
  Rect bbox;
  double h_omega = 0.0;  // mean of sqrt(cell area)
  int quad_degree = 0;
  int stencil_M = 0;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  double total_area() const;
  // Outward normal of face f seen from cell c (+normal when c is the left cell).
  double face_sign(int f, int c) const { return faces[f].left == c ? 1.0 : -1.0; }
};

// Assembles cells+faces from closed polygons. Periods > 0 enable shift-aware
// face matching across that direction (torus topology).
PolyMesh assemble_mesh(const std::vector<std::vector<Point2>>& polygons, double period_x = 0.0,
                       double period_y = 0.0, const std::vector<int>& generators = {});

PolyMesh from_triangulation(const Triangulation& tri);

// Barycentric dual tessellation: one cell per generator, built by joining the
// mass centers of the triangles around each generator; boundary cells are
// closed with the boundary edge midpoints and the generator itself.
PolyMesh build_polygonal_dual(const Triangulation& tri);

void compute_quadrature(PolyMesh& mesh, int degree);
void build_stencils(PolyMesh& mesh, int M);

// Tags boundary faces of a rectangle-shaped mesh: 1 xmin, 2 xmax, 3 ymin, 4 ymax.
void assign_rect_tags(PolyMesh& mesh, const Rect& rect);

// Diagnostics used by tests and `validate`.
double partition_defect(const PolyMesh& mesh, double ref_area);
double max_face_closure(const PolyMesh& mesh);  // max over cells of |sum length*normal|
double min_incircle_diameter(const PolyMesh& mesh);

// Plain-text format: header `nodes <N> cells <C>`, node coordinates, then
// per-cell vertex-count + vertex-index lists.
void write_mesh(const PolyMesh& mesh, const std::string& path);
PolyMesh read_mesh(const std::string& path);
std::vector<Point2> read_generators(const std::string& path);

int basis_size(int M);  // (M+1)(M+2)/2

}  // namespace kin
