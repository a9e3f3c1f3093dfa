#include "kin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kin {

int basis_size(int M) { return (M + 1) * (M + 2) / 2; }

double PolyMesh::total_area() const {
  double s = 0.0;
  for (const auto& c : cells) s += c.area;
  return s;
}

namespace {

long long quant(double v, double tol) { return static_cast<long long>(std::llround(v / tol)); }

double wrap_period(double v, double period) {
  if (period <= 0.0) return v;
  double w = std::fmod(v, period);
  if (w < 0.0) w += period;
  // Snap values within tolerance of the period back to zero.
  if (period - w < 1e-7 * period) w = 0.0;
  return w;
}

}  // namespace

PolyMesh assemble_mesh(const std::vector<std::vector<Point2>>& polygons, double period_x,
                       double period_y, const std::vector<int>& generators) {
  PolyMesh mesh;
  if (polygons.empty()) throw std::invalid_argument("assemble_mesh: no polygons");

  double xmin = polygons[0][0].x, xmax = xmin, ymin = polygons[0][0].y, ymax = ymin;
  for (const auto& poly : polygons)
    for (const auto& p : poly) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  mesh.bbox = {xmin, xmax, ymin, ymax};
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double tol = 1e-9 * span;

  // Dedupe nodes on a quantized lattice.
  std::map<std::pair<long long, long long>, int> node_ids;
  auto node_of = [&](const Point2& p) {
    const auto key = std::make_pair(quant(p.x, tol), quant(p.y, tol));
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    const int id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(p);
    node_ids.emplace(key, id);
    return id;
  };

  mesh.cells.resize(polygons.size());
  for (std::size_t ci = 0; ci < polygons.size(); ++ci) {
    std::vector<Point2> poly = polygons[ci];
    if (poly.size() < 3) throw std::invalid_argument("assemble_mesh: polygon with <3 vertices");
    const double area = polygon_area(poly);
    if (area < 0.0) std::reverse(poly.begin(), poly.end());
    Cell& cell = mesh.cells[ci];
    cell.area = std::abs(area);
    if (cell.area <= tol * tol)
      throw std::runtime_error("assemble_mesh: degenerate (zero-area) polygon");
    cell.barycenter = polygon_centroid(poly);
    cell.h = 0.0;
    for (const auto& p : poly) cell.h = std::max(cell.h, dist(p, cell.barycenter));
    for (const auto& p : poly) cell.verts.push_back(node_of(p));
    if (!generators.empty()) cell.generator = generators[ci];
  }

  // Face matching key: wrapped midpoint + wrapped sorted endpoints.
  struct PendingFace {
    int face_id;
    Point2 mid;
  };
  const double ftol = 1e-7 * span;
  std::map<std::array<long long, 2>, std::vector<PendingFace>> open_faces;
  auto face_key = [&](const Point2& mid) {
    return std::array<long long, 2>{quant(wrap_period(mid.x - xmin, period_x), ftol),
                                    quant(wrap_period(mid.y - ymin, period_y), ftol)};
  };

  for (std::size_t ci = 0; ci < polygons.size(); ++ci) {
    Cell& cell = mesh.cells[static_cast<int>(ci)];
    const int nv = static_cast<int>(cell.verts.size());
    for (int e = 0; e < nv; ++e) {
      const Point2 pa = mesh.nodes[cell.verts[e]];
      const Point2 pb = mesh.nodes[cell.verts[(e + 1) % nv]];
      const Point2 mid = (pa + pb) * 0.5;
      const auto key = face_key(mid);
      int matched = -1;
      auto it = open_faces.find(key);
      if (it != open_faces.end()) {
        for (std::size_t k = 0; k < it->second.size(); ++k) {
          Face& f = mesh.faces[it->second[k].face_id];
          if (std::abs(f.length - dist(pa, pb)) < ftol) {
            matched = it->second[k].face_id;
            // Shift maps this cell's frame onto the stored face frame.
            Point2 shift = (f.a + f.b - pa - pb) * 0.5;
            shift.x = std::round(shift.x / std::max(period_x, 1.0)) * period_x;
            shift.y = std::round(shift.y / std::max(period_y, 1.0)) * period_y;
            if (period_x == 0.0) shift.x = 0.0;
            if (period_y == 0.0) shift.y = 0.0;
            f.right = static_cast<int>(ci);
            f.shift = shift;
            it->second.erase(it->second.begin() + k);
            break;
          }
        }
      }
      if (matched < 0) {
        Face f;
        f.left = static_cast<int>(ci);
        f.a = pa;
        f.b = pb;
        f.length = dist(pa, pb);
        const Point2 t = pb - pa;
        f.normal = {t.y / f.length, -t.x / f.length};
        const int id = static_cast<int>(mesh.faces.size());
        mesh.faces.push_back(f);
        open_faces[key].push_back({id, mid});
        matched = id;
      }
      cell.faces.push_back(matched);
    }
  }

  double hsum = 0.0;
  for (const auto& c : mesh.cells) hsum += std::sqrt(c.area);
  mesh.h_omega = hsum / static_cast<double>(mesh.cells.size());
  return mesh;
}

PolyMesh from_triangulation(const Triangulation& tri) {
  std::vector<std::vector<Point2>> polys;
  polys.reserve(tri.triangles.size());
  for (const auto& t : tri.triangles)
    polys.push_back({tri.vertices[t[0]], tri.vertices[t[1]], tri.vertices[t[2]]});
  return assemble_mesh(polys);
}

PolyMesh build_polygonal_dual(const Triangulation& tri) {
  const int nv = tri.num_vertices();
  std::vector<std::vector<int>> incident(nv);
  for (int t = 0; t < tri.num_triangles(); ++t)
    for (int e = 0; e < 3; ++e) incident[tri.triangles[t][e]].push_back(t);

  // Boundary edges: owned by exactly one triangle.
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : tri.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_count[{a, b}]++;
    }
  std::vector<std::vector<int>> boundary_nbr(nv);
  for (const auto& [edge, count] : edge_count)
    if (count == 1) {
      boundary_nbr[edge.first].push_back(edge.second);
      boundary_nbr[edge.second].push_back(edge.first);
    }

  std::vector<std::vector<Point2>> polys;
  std::vector<int> gens;
  for (int g = 0; g < nv; ++g) {
    if (!tri.is_generator.empty() && !tri.is_generator[g]) continue;
    if (incident[g].empty()) throw std::invalid_argument("dual: generator with no triangle");
    const Point2 xg = tri.vertices[g];
    struct Spoke {
      double angle;
      Point2 p;
    };
    std::vector<Spoke> spokes;
    for (int t : incident[g]) {
      const auto& v = tri.triangles[t];
      const Point2 bc = (tri.vertices[v[0]] + tri.vertices[v[1]] + tri.vertices[v[2]]) * (1.0 / 3);
      spokes.push_back({std::atan2(bc.y - xg.y, bc.x - xg.x), bc});
    }
    const bool on_boundary = !boundary_nbr[g].empty();
    if (on_boundary) {
      if (boundary_nbr[g].size() != 2)
        throw std::runtime_error("dual: non-manifold boundary at generator");
      for (int nb : boundary_nbr[g]) {
        const Point2 mid = (xg + tri.vertices[nb]) * 0.5;
        spokes.push_back({std::atan2(mid.y - xg.y, mid.x - xg.x), mid});
      }
    }
    std::sort(spokes.begin(), spokes.end(),
              [](const Spoke& a, const Spoke& b) { return a.angle < b.angle; });
    std::vector<Point2> poly;
    if (on_boundary) {
      // Rotate so the list starts after the exterior angular gap, then close
      // the polygon through the generator itself.
      const int n = static_cast<int>(spokes.size());
      int gap = 0;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        double d = spokes[(i + 1) % n].angle - spokes[i].angle;
        if (d < 0) d += 2.0 * M_PI;
        if (d > best) {
          best = d;
          gap = (i + 1) % n;
        }
      }
      poly.push_back(xg);
      for (int i = 0; i < n; ++i) poly.push_back(spokes[(gap + i) % n].p);
    } else {
      for (const auto& s : spokes) poly.push_back(s.p);
    }
    polys.push_back(std::move(poly));
    gens.push_back(g);
  }
  return assemble_mesh(polys, 0.0, 0.0, gens);
}

void compute_quadrature(PolyMesh& mesh, int degree) {
  const int face_pts = face_points_for_degree(degree);
  for (auto& cell : mesh.cells) {
    cell.subtris.clear();
    cell.qp.clear();
    const int nv = static_cast<int>(cell.verts.size());
    if (nv == 3) {
      cell.subtris.push_back(
          {mesh.nodes[cell.verts[0]], mesh.nodes[cell.verts[1]], mesh.nodes[cell.verts[2]]});
    } else {
      for (int e = 0; e < nv; ++e) {
        std::array<Point2, 3> t = {cell.barycenter, mesh.nodes[cell.verts[e]],
                                   mesh.nodes[cell.verts[(e + 1) % nv]]};
        if (triangle_area(t[0], t[1], t[2]) <= 0.0)
          throw std::runtime_error("compute_quadrature: non-star-shaped cell");
        cell.subtris.push_back(t);
      }
    }
    for (const auto& t : cell.subtris) {
      auto pts = triangle_rule(t[0], t[1], t[2], degree);
      cell.qp.insert(cell.qp.end(), pts.begin(), pts.end());
    }
  }
  for (auto& face : mesh.faces) face.qp = segment_rule(face.a, face.b, face_pts);
  mesh.quad_degree = degree;
}

void build_stencils(PolyMesh& mesh, int M) {
  if (M < 1 || M > 2) throw std::invalid_argument("build_stencils: M must be 1 or 2");
  const int ne = 2 * basis_size(M);
  if (mesh.num_cells() < ne)
    throw std::invalid_argument("build_stencils: mesh has fewer than 2*M(M) cells");

  // Face adjacency with shifts.
  struct Nbr {
    int cell;
    Point2 shift;
  };
  std::vector<std::vector<Nbr>> nbrs(mesh.cells.size());
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    for (int fi : mesh.cells[ci].faces) {
      const Face& f = mesh.faces[fi];
      if (f.right < 0) continue;
      if (f.left == ci)
        nbrs[ci].push_back({f.right, f.shift});
      else
        nbrs[ci].push_back({f.left, f.shift * -1.0});
    }
  }

  const double span = std::max(mesh.bbox.width(), mesh.bbox.height());
  const double qtol = 1e-6 * std::max(span, 1.0);
  auto key_of = [&](int cell, const Point2& shift) {
    return std::make_pair(cell, std::make_pair(quant(shift.x, qtol), quant(shift.y, qtol)));
  };

  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    Cell& cell = mesh.cells[ci];
    const Point2 xb = cell.barycenter;

    // Grow rings of face neighbors, then keep the nearest by barycenter
    // distance with (distance, cell, shift) tie-breaking.
    std::set<decltype(key_of(0, Point2{}))> seen;
    seen.insert(key_of(ci, {0, 0}));
    std::vector<StencilEntry> ring = {{ci, {0, 0}}};
    std::vector<StencilEntry> candidates;
    const int want = std::max(3 * ne, ne + 8);
    for (int depth = 0; depth < 8 && static_cast<int>(candidates.size()) < want; ++depth) {
      std::vector<StencilEntry> next;
      for (const auto& cur : ring) {
        for (const auto& nb : nbrs[cur.cell]) {
          const Point2 shift = cur.shift + nb.shift;
          const auto key = key_of(nb.cell, shift);
          if (seen.count(key)) continue;
          seen.insert(key);
          next.push_back({nb.cell, shift});
        }
      }
      candidates.insert(candidates.end(), next.begin(), next.end());
      ring.swap(next);
      if (ring.empty()) break;
    }
    if (static_cast<int>(candidates.size()) < ne - 1)
      throw std::runtime_error("build_stencils: not enough reachable neighbors");
    std::sort(candidates.begin(), candidates.end(),
              [&](const StencilEntry& a, const StencilEntry& b) {
                const double da = dist(mesh.cells[a.cell].barycenter + a.shift, xb);
                const double db = dist(mesh.cells[b.cell].barycenter + b.shift, xb);
                if (da != db) return da < db;
                if (a.cell != b.cell) return a.cell < b.cell;
                if (a.shift.x != b.shift.x) return a.shift.x < b.shift.x;
                return a.shift.y < b.shift.y;
              });
    cell.stencil.clear();
    cell.stencil.push_back({ci, {0, 0}});
    for (int k = 0; k < ne - 1; ++k) cell.stencil.push_back(candidates[k]);

    // Sector stencils: the neighbor across face s plus the one across face
    // s+1 (cyclic). Boundary-truncated slots reuse the nearest central-stencil
    // member not already in the sector.
    const int nf = static_cast<int>(cell.faces.size());
    auto across = [&](int s) -> StencilEntry {
      const Face& f = mesh.faces[cell.faces[s]];
      if (f.right < 0) return {-1, {0, 0}};
      if (f.left == ci) return {f.right, f.shift};
      return {f.left, f.shift * -1.0};
    };
    cell.sectors.clear();
    for (int s = 0; s < nf; ++s) {
      std::array<StencilEntry, 3> sec = {StencilEntry{ci, {0, 0}}, across(s),
                                         across((s + 1) % nf)};
      for (int slot = 1; slot < 3; ++slot) {
        if (sec[slot].cell >= 0) {
          // Drop duplicates within the sector.
          bool dup = false;
          for (int o = 0; o < slot; ++o)
            if (sec[o].cell == sec[slot].cell && dist(sec[o].shift, sec[slot].shift) < qtol)
              dup = true;
          if (!dup) continue;
        }
        sec[slot] = {-1, {0, 0}};
        for (const auto& cand : cell.stencil) {
          bool used = false;
          for (int o = 0; o < 3; ++o)
            if (o != slot && sec[o].cell == cand.cell && dist(sec[o].shift, cand.shift) < qtol)
              used = true;
          if (!used) {
            sec[slot] = cand;
            break;
          }
        }
        if (sec[slot].cell < 0) throw std::runtime_error("build_stencils: sector fill failed");
      }
      cell.sectors.push_back(sec);
    }
  }
  mesh.stencil_M = M;
}

void assign_rect_tags(PolyMesh& mesh, const Rect& rect) {
  const double tol = 1e-8 * std::max(rect.width(), rect.height());
  for (auto& f : mesh.faces) {
    if (f.right >= 0) continue;
    auto on = [&](double va, double vb, double target) {
      return std::abs(va - target) < tol && std::abs(vb - target) < tol;
    };
    if (on(f.a.x, f.b.x, rect.xmin))
      f.boundary_tag = 1;
    else if (on(f.a.x, f.b.x, rect.xmax))
      f.boundary_tag = 2;
    else if (on(f.a.y, f.b.y, rect.ymin))
      f.boundary_tag = 3;
    else if (on(f.a.y, f.b.y, rect.ymax))
      f.boundary_tag = 4;
    else
      f.boundary_tag = 5;  // interior wall (embedded geometry)
  }
}

double partition_defect(const PolyMesh& mesh, double ref_area) {
  return std::abs(mesh.total_area() - ref_area) / ref_area;
}

double max_face_closure(const PolyMesh& mesh) {
  double worst = 0.0;
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    Point2 s{0, 0};
    for (int fi : mesh.cells[ci].faces) {
      const Face& f = mesh.faces[fi];
      s += f.normal * (f.length * mesh.face_sign(fi, ci));
    }
    worst = std::max(worst, norm(s));
  }
  return worst;
}

double min_incircle_diameter(const PolyMesh& mesh) {
  double best = std::numeric_limits<double>::max();
  for (int ci = 0; ci < mesh.num_cells(); ++ci) {
    double per = 0.0;
    for (int fi : mesh.cells[ci].faces) per += mesh.faces[fi].length;
    best = std::min(best, 2.0 * mesh.cells[ci].area / per);
  }
  return best;
}

void write_mesh(const PolyMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
  out.precision(17);
  out << "nodes " << mesh.nodes.size() << " cells " << mesh.cells.size() << "\n";
  for (const auto& p : mesh.nodes) out << p.x << " " << p.y << "\n";
  for (const auto& c : mesh.cells) {
    out << c.verts.size();
    for (int v : c.verts) out << " " << v;
    out << "\n";
  }
}

PolyMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  std::string word;
  std::size_t nn = 0, nc = 0;
  in >> word >> nn >> word >> nc;
  if (!in) throw std::runtime_error("read_mesh: bad header in " + path);
  std::vector<Point2> nodes(nn);
  for (auto& p : nodes) in >> p.x >> p.y;
  std::vector<std::vector<Point2>> polys(nc);
  for (auto& poly : polys) {
    std::size_t k = 0;
    in >> k;
    poly.resize(k);
    for (auto& p : poly) {
      int id = 0;
      in >> id;
      if (id < 0 || static_cast<std::size_t>(id) >= nn)
        throw std::runtime_error("read_mesh: vertex index out of range");
      p = nodes[id];
    }
  }
  if (!in) throw std::runtime_error("read_mesh: truncated file " + path);
  return assemble_mesh(polys);
}

std::vector<Point2> read_generators(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_generators: cannot open " + path);
  std::vector<Point2> pts;
  double x, y;
  while (in >> x >> y) pts.push_back({x, y});
  return pts;
}

}  // namespace kin
