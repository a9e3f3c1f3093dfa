#include "kin/mesh_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kin {

namespace {

// splitmix64, used for reproducible jitter patterns.
double hash_unit(unsigned long long x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  x = x ^ (x >> 31);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

PolyMesh structured_tri_mesh(int nx, int ny, const Rect& rect, bool periodic_x, bool periodic_y) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("structured_tri_mesh: bad dimensions");
  const double dx = rect.width() / nx, dy = rect.height() / ny;
  std::vector<std::vector<Point2>> polys;
  polys.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 v00{rect.xmin + i * dx, rect.ymin + j * dy};
      const Point2 v10{rect.xmin + (i + 1) * dx, rect.ymin + j * dy};
      const Point2 v01{rect.xmin + i * dx, rect.ymin + (j + 1) * dy};
      const Point2 v11{rect.xmin + (i + 1) * dx, rect.ymin + (j + 1) * dy};
      // "/" split: both triangles share the v10-v01 diagonal.
      polys.push_back({v00, v10, v01});
      polys.push_back({v10, v11, v01});
    }
  }
  PolyMesh mesh = assemble_mesh(polys, periodic_x ? rect.width() : 0.0,
                                periodic_y ? rect.height() : 0.0);
  mesh.bbox = rect;
  assign_rect_tags(mesh, rect);
  return mesh;
}

PolyMesh dual_lattice_mesh(int nx, int ny, const Rect& rect, double jitter, bool periodic,
                           bool swap_symmetric, unsigned seed) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("dual_lattice_mesh: lattice too small");
  const double dx = rect.width() / nx, dy = rect.height() / ny;
  auto jit = [&](int i, int j) -> Point2 {
    const unsigned long long key =
        (static_cast<unsigned long long>(i) << 24) ^ static_cast<unsigned long long>(j) ^
        (static_cast<unsigned long long>(seed) << 48);
    double ax = (hash_unit(key * 2 + 1) - 0.5) * 2.0 * jitter;
    double ay = (hash_unit(key * 2 + 2) - 0.5) * 2.0 * jitter;
    if (swap_symmetric) {
      if (i == j) {
        ay = ax;
      } else if (i > j) {
        const unsigned long long tkey =
            (static_cast<unsigned long long>(j) << 24) ^ static_cast<unsigned long long>(i) ^
            (static_cast<unsigned long long>(seed) << 48);
        ax = (hash_unit(tkey * 2 + 2) - 0.5) * 2.0 * jitter;
        ay = (hash_unit(tkey * 2 + 1) - 0.5) * 2.0 * jitter;
      }
    }
    return {ax * dx, ay * dy};
  };
  auto generator = [&](int i, int j) -> Point2 {
    const int iw = ((i % nx) + nx) % nx;
    const int jw = ((j % ny) + ny) % ny;
    const Point2 base{rect.xmin + (i + 0.5) * dx, rect.ymin + (j + 0.5) * dy};
    return base + jit(iw, jw);
  };

  if (periodic) {
    // Triangulate the lattice plus a ghost ring, then take the dual cells of
    // the in-box generators. Faces pair across the period by construction.
    const int ring = 2;
    std::vector<Point2> pts;
    std::vector<int> owner;  // in-box generator index or -1 for ghosts
    for (int j = -ring; j < ny + ring; ++j)
      for (int i = -ring; i < nx + ring; ++i) {
        pts.push_back(generator(i, j));
        const bool inbox = i >= 0 && i < nx && j >= 0 && j < ny;
        owner.push_back(inbox ? (j * nx + i) : -1);
      }
    Triangulation tri = build_delaunay_points(pts);
    std::vector<std::vector<int>> incident(tri.num_vertices());
    for (int t = 0; t < tri.num_triangles(); ++t)
      for (int e = 0; e < 3; ++e) incident[tri.triangles[t][e]].push_back(t);
    std::vector<std::vector<Point2>> polys(static_cast<std::size_t>(nx) * ny);
    for (int v = 0; v < tri.num_vertices(); ++v) {
      if (owner[v] < 0) continue;
      const Point2 xg = tri.vertices[v];
      struct Spoke {
        double angle;
        Point2 p;
      };
      std::vector<Spoke> spokes;
      for (int t : incident[v]) {
        const auto& tv = tri.triangles[t];
        const Point2 bc =
            (tri.vertices[tv[0]] + tri.vertices[tv[1]] + tri.vertices[tv[2]]) * (1.0 / 3);
        spokes.push_back({std::atan2(bc.y - xg.y, bc.x - xg.x), bc});
      }
      std::sort(spokes.begin(), spokes.end(),
                [](const Spoke& a, const Spoke& b) { return a.angle < b.angle; });
      auto& poly = polys[owner[v]];
      for (const auto& s : spokes) poly.push_back(s.p);
    }
    PolyMesh mesh = assemble_mesh(polys, rect.width(), rect.height());
    mesh.bbox = rect;
    return mesh;
  }

  std::vector<Point2> pts;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Point2 p = generator(i, j);
      p.x = std::clamp(p.x, rect.xmin, rect.xmax);
      p.y = std::clamp(p.y, rect.ymin, rect.ymax);
      pts.push_back(p);
    }
  Triangulation tri = build_delaunay(pts, rect);
  PolyMesh mesh = build_polygonal_dual(tri);
  mesh.bbox = rect;
  assign_rect_tags(mesh, rect);
  return mesh;
}

PolyMesh single_cell_mesh(const Rect& rect) {
  std::vector<std::vector<Point2>> polys = {{{rect.xmin, rect.ymin},
                                             {rect.xmax, rect.ymin},
                                             {rect.xmax, rect.ymax},
                                             {rect.xmin, rect.ymax}}};
  PolyMesh mesh = assemble_mesh(polys, rect.width(), rect.height());
  mesh.bbox = rect;
  return mesh;
}

PolyMesh ramp_mesh(int nx, int ny, double xmin, double xmax, double ramp_start, double angle,
                   double ytop) {
  const double tana = std::tan(angle);
  auto bottom = [&](double x) { return x > ramp_start ? (x - ramp_start) * tana : 0.0; };
  const double dx = (xmax - xmin) / nx;
  std::vector<std::vector<Point2>> polys;
  auto node = [&](int i, int j) -> Point2 {
    const double x = xmin + i * dx;
    const double b = bottom(x);
    return {x, b + (ytop - b) * static_cast<double>(j) / ny};
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Point2 v00 = node(i, j), v10 = node(i + 1, j), v01 = node(i, j + 1),
                   v11 = node(i + 1, j + 1);
      polys.push_back({v00, v10, v01});
      polys.push_back({v10, v11, v01});
    }
  PolyMesh mesh = assemble_mesh(polys);
  const double tol = 1e-8 * (xmax - xmin);
  for (auto& f : mesh.faces) {
    if (f.right >= 0) continue;
    if (std::abs(f.a.x - xmin) < tol && std::abs(f.b.x - xmin) < tol)
      f.boundary_tag = 1;
    else if (std::abs(f.a.x - xmax) < tol && std::abs(f.b.x - xmax) < tol)
      f.boundary_tag = 2;
    else if (std::abs(f.a.y - ytop) < tol && std::abs(f.b.y - ytop) < tol)
      f.boundary_tag = 4;
    else
      f.boundary_tag = 3;  // flat bottom and ramp
  }
  return mesh;
}

std::vector<Point2> naca0012_polyline(int n_side) {
  const double chord = 1.008930411365;
  auto profile = [&](double x) {
    return 0.594689181 * (0.298222773 * std::sqrt(x) - 0.127125232 * x -
                          0.357907906 * x * x + 0.291984971 * x * x * x -
                          0.105174606 * x * x * x * x);
  };
  std::vector<Point2> poly;
  // Clockwise from the trailing edge over the upper side, so the closed
  // polygon below comes out ccw w.r.t. the flow domain convention used here.
  for (int i = n_side; i >= 0; --i) {
    const double x = chord * i / n_side;
    poly.push_back({x, profile(x)});
  }
  for (int i = 1; i < n_side; ++i) {
    const double x = chord * i / n_side;
    poly.push_back({x, -profile(x)});
  }
  return poly;
}

PolyMesh naca_mesh(const Rect& rect, int n_side, double h_near, double h_far, double grade_dist) {
  const std::vector<Point2> airfoil = naca0012_polyline(n_side);
  const int na = static_cast<int>(airfoil.size());

  auto dist_to_airfoil = [&](const Point2& p) {
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i < na; ++i) {
      const Point2 a = airfoil[i], b = airfoil[(i + 1) % na];
      const Point2 ab = b - a;
      const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
      best = std::min(best, dist(p, a + ab * t));
    }
    return best;
  };
  auto target_h = [&](const Point2& p) {
    const double d = dist_to_airfoil(p);
    return std::min(h_far, h_near + (h_far - h_near) * d / grade_dist);
  };

  std::vector<Point2> pts = airfoil;
  // Outer boundary points.
  const int nbx = std::max(2, static_cast<int>(std::ceil(rect.width() / h_far)));
  const int nby = std::max(2, static_cast<int>(std::ceil(rect.height() / h_far)));
  for (int i = 1; i < nbx; ++i) {
    pts.push_back({rect.xmin + rect.width() * i / nbx, rect.ymin});
    pts.push_back({rect.xmin + rect.width() * i / nbx, rect.ymax});
  }
  for (int j = 1; j < nby; ++j) {
    pts.push_back({rect.xmin, rect.ymin + rect.height() * j / nby});
    pts.push_back({rect.xmax, rect.ymin + rect.height() * j / nby});
  }

  // Graded interior cloud: greedy thinning of a fine jittered lattice.
  struct GridHash {
    double cell;
    std::map<std::pair<long long, long long>, std::vector<int>> bins;
    std::vector<Point2> accepted;
    bool clear_of(const Point2& p, double r) const {
      const long long cx = static_cast<long long>(std::floor(p.x / cell));
      const long long cy = static_cast<long long>(std::floor(p.y / cell));
      const long long reach = static_cast<long long>(std::ceil(r / cell)) + 1;
      for (long long i = cx - reach; i <= cx + reach; ++i)
        for (long long j = cy - reach; j <= cy + reach; ++j) {
          auto it = bins.find({i, j});
          if (it == bins.end()) continue;
          for (int id : it->second)
            if (dist(accepted[id], p) < r) return false;
        }
      return true;
    }
    void insert(const Point2& p) {
      const int id = static_cast<int>(accepted.size());
      accepted.push_back(p);
      bins[{static_cast<long long>(std::floor(p.x / cell)),
            static_cast<long long>(std::floor(p.y / cell))}]
          .push_back(id);
    }
  };
  GridHash hash;
  hash.cell = h_near;
  for (const auto& p : pts) hash.insert(p);
  for (const auto& c : {Point2{rect.xmin, rect.ymin}, Point2{rect.xmax, rect.ymin},
                        Point2{rect.xmax, rect.ymax}, Point2{rect.xmin, rect.ymax}})
    hash.insert(c);

  const double fine = h_near / 1.4;
  const int mx = static_cast<int>(rect.width() / fine);
  const int my = static_cast<int>(rect.height() / fine);
  for (int j = 1; j < my; ++j) {
    for (int i = 1; i < mx; ++i) {
      const unsigned long long key = (static_cast<unsigned long long>(i) << 22) ^
                                     static_cast<unsigned long long>(j);
      Point2 p{rect.xmin + i * fine + (hash_unit(2 * key) - 0.5) * 0.5 * fine,
               rect.ymin + j * fine + (hash_unit(2 * key + 1) - 0.5) * 0.5 * fine};
      if (!rect.contains(p, -h_far * 0.4)) continue;
      const double h = target_h(p);
      if (dist_to_airfoil(p) < 0.62 * h_near) continue;
      if (point_in_polygon(p, airfoil)) continue;
      if (!hash.clear_of(p, 0.78 * h)) continue;
      hash.insert(p);
    }
  }

  Triangulation tri = build_delaunay(hash.accepted, rect);

  // Drop triangles inside the airfoil.
  std::vector<std::array<int, 3>> keep;
  for (const auto& t : tri.triangles) {
    const Point2 c = (tri.vertices[t[0]] + tri.vertices[t[1]] + tri.vertices[t[2]]) * (1.0 / 3);
    if (!point_in_polygon(c, airfoil)) keep.push_back(t);
  }
  tri.triangles = keep;

  PolyMesh mesh = from_triangulation(tri);
  mesh.bbox = rect;
  assign_rect_tags(mesh, rect);

  // Every airfoil segment must appear as a boundary face.
  int wall_faces = 0;
  for (const auto& f : mesh.faces)
    if (f.right < 0 && f.boundary_tag == 5) wall_faces++;
  if (wall_faces < na)
    throw std::runtime_error("naca_mesh: airfoil boundary not fully recovered");
  return mesh;
}

}  // namespace kin
