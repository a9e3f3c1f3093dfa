#pragma once

#include "kin/mesh.hpp"

namespace kin {

// Structured triangular mesh: nx*ny rectangles each split along the same
// diagonal. Periodic flags pair opposite sides with shift vectors.
PolyMesh structured_tri_mesh(int nx, int ny, const Rect& rect, bool periodic_x = false,
                             bool periodic_y = false);

// Centroid-based polygonal dual of a jittered nx*ny generator lattice.
// Deterministic jitter pattern; `swap_symmetric` makes generators (and hence
// the dual mesh) invariant under the (x,y) -> (y,x) reflection. Periodic
// variants build the dual on the torus via ghost generators.
PolyMesh dual_lattice_mesh(int nx, int ny, const Rect& rect, double jitter, bool periodic,
                           bool swap_symmetric = false, unsigned seed = 7u);

// One square cell with both direction pairs periodic onto itself.
PolyMesh single_cell_mesh(const Rect& rect);

// Rectangle with a sloped bottom from ramp_start to xmax rising at `angle`;
// sheared structured quads split into triangles. Tags 1..4 as usual with the
// full bottom (flat part + ramp) tagged 3.
PolyMesh ramp_mesh(int nx, int ny, double xmin, double xmax, double ramp_start, double angle,
                   double ytop);

// Four-digit symmetric profile polyline (closed, ccw) used for the airfoil
// test, with 2*n_side - 1 distinct points.
std::vector<Point2> naca0012_polyline(int n_side);

// Unstructured triangular mesh around the airfoil embedded in `rect`; sizes
// grade linearly from h_near at the profile to h_far at distance grade_dist.
// Airfoil faces get boundary tag 5.
PolyMesh naca_mesh(const Rect& rect, int n_side, double h_near, double h_far, double grade_dist);

}  // namespace kin
