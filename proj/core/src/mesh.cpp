#include "tdg/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace tdg {

double TimePartition::max_step() const {
  double h = 0.0;
  for (int n = 0; n < slabs(); ++n) h = std::max(h, length(n));
  return h;
}

TimePartition uniform_time_partition(double final_time, int slab_count) {
  if (final_time <= 0.0) throw std::invalid_argument("final time must be positive");
  if (slab_count < 1) throw std::invalid_argument("slab count must be >= 1");
  TimePartition tp;
  tp.knots.resize(slab_count + 1);
  for (int n = 0; n <= slab_count; ++n)
    tp.knots[n] = final_time * static_cast<double>(n) / slab_count;
  return tp;
}

Point2 SpatialCell::centroid() const {
  Point2 c;
  for (int i = 0; i < nv; ++i) c = c + v[i];
  return (1.0 / nv) * c;
}

double SpatialMesh::measure() const {
  double m = 0.0;
  for (const auto& c : cells) m += c.measure;
  return m;
}

double SpatialMesh::boundary_measure() const {
  double m = 0.0;
  for (const auto& f : facets)
    if (f.boundary()) m += f.measure;
  return m;
}

namespace {

SpatialMesh build_interval_mesh(const Box2& domain, int nx) {
  SpatialMesh m;
  m.dim = 1;
  m.shape = CellShape::Interval;
  m.bounds = domain;
  m.nx = nx;
  m.ny = 1;
  const double x0 = domain.lo.x, x1 = domain.hi.x;
  const double h = (x1 - x0) / nx;
  m.cells.resize(nx);
  for (int i = 0; i < nx; ++i) {
    SpatialCell& c = m.cells[i];
    c.nv = 2;
    c.v[0] = {x0 + i * h, 0.0};
    c.v[1] = {x0 + (i + 1) * h, 0.0};
    c.diameter = h;
    c.measure = h;
  }
  m.h_max = h;
  // interior points plus the two boundary points
  for (int i = 0; i <= nx; ++i) {
    SpatialFacet f;
    f.a = f.b = {x0 + i * h, 0.0};
    f.measure = 1.0;
    if (i == 0) {
      f.cell_in = 0;
      f.normal = {-1.0, 0.0};
      f.h_fx = h;
    } else if (i == nx) {
      f.cell_in = nx - 1;
      f.normal = {+1.0, 0.0};
      f.h_fx = h;
    } else {
      f.cell_in = i - 1;
      f.cell_out = i;
      f.normal = {+1.0, 0.0};
      f.h_fx = h;
    }
    m.facets.push_back(f);
  }
  return m;
}

SpatialMesh build_planar_mesh(const Box2& domain, int nx, int ny, CellShape shape) {
  SpatialMesh m;
  m.dim = 2;
  m.shape = shape;
  m.bounds = domain;
  m.nx = nx;
  m.ny = ny;
  const double ax = (domain.hi.x - domain.lo.x) / nx;
  const double ay = (domain.hi.y - domain.lo.y) / ny;
  auto px = [&](int i) { return domain.lo.x + i * ax; };
  auto py = [&](int j) { return domain.lo.y + j * ay; };

  const bool split = shape == CellShape::SplitTriangles;
  const double diag = std::sqrt(ax * ax + ay * ay);

  if (!split) {
    m.cells.resize(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        SpatialCell& c = m.cells[j * nx + i];
        c.nv = 4;
        c.v[0] = {px(i), py(j)};
        c.v[1] = {px(i + 1), py(j)};
        c.v[2] = {px(i + 1), py(j + 1)};
        c.v[3] = {px(i), py(j + 1)};
        c.diameter = diag;
        c.measure = ax * ay;
      }
    m.h_max = diag;
    auto rect = [&](int i, int j) { return j * nx + i; };
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        SpatialFacet f;
        f.a = {px(i), py(j)};
        f.b = {px(i), py(j + 1)};
        f.measure = ay;
        f.normal = {i == 0 ? -1.0 : +1.0, 0.0};
        f.cell_in = i == 0 ? rect(0, j) : rect(i - 1, j);
        f.cell_out = (i == 0 || i == nx) ? -1 : rect(i, j);
        f.h_fx = diag;
        m.facets.push_back(f);
      }
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        SpatialFacet f;
        f.a = {px(i), py(j)};
        f.b = {px(i + 1), py(j)};
        f.measure = ax;
        f.normal = {0.0, j == 0 ? -1.0 : +1.0};
        f.cell_in = j == 0 ? rect(i, 0) : rect(i, j - 1);
        f.cell_out = (j == 0 || j == ny) ? -1 : rect(i, j);
        f.h_fx = diag;
        m.facets.push_back(f);
      }
    return m;
  }

  // Each rectangle splits along the (x0,y0)-(x1,y1) diagonal into a
  // lower-right triangle t0 and an upper-left triangle t1.
  m.cells.resize(static_cast<size_t>(nx) * ny * 2);
  auto lower = [&](int i, int j) { return 2 * (j * nx + i); };
  auto upper = [&](int i, int j) { return 2 * (j * nx + i) + 1; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      SpatialCell& t0 = m.cells[lower(i, j)];
      t0.nv = 3;
      t0.v[0] = {px(i), py(j)};
      t0.v[1] = {px(i + 1), py(j)};
      t0.v[2] = {px(i + 1), py(j + 1)};
      t0.diameter = diag;
      t0.measure = 0.5 * ax * ay;
      SpatialCell& t1 = m.cells[upper(i, j)];
      t1.nv = 3;
      t1.v[0] = {px(i), py(j)};
      t1.v[1] = {px(i + 1), py(j + 1)};
      t1.v[2] = {px(i), py(j + 1)};
      t1.diameter = diag;
      t1.measure = 0.5 * ax * ay;
    }
  m.h_max = diag;

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      SpatialFacet d;  // diagonal, shared by the two halves
      d.a = {px(i), py(j)};
      d.b = {px(i + 1), py(j + 1)};
      d.measure = diag;
      d.cell_in = lower(i, j);
      d.cell_out = upper(i, j);
      d.normal = {-ay / diag, ax / diag};  // towards the upper-left triangle
      d.h_fx = diag;
      m.facets.push_back(d);
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      SpatialFacet f;  // vertical edge x = px(i)
      f.a = {px(i), py(j)};
      f.b = {px(i), py(j + 1)};
      f.measure = ay;
      f.normal = {i == 0 ? -1.0 : +1.0, 0.0};
      f.cell_in = i == 0 ? upper(0, j) : lower(i - 1, j);
      f.cell_out = (i == 0 || i == nx) ? -1 : upper(i, j);
      f.h_fx = diag;
      m.facets.push_back(f);
    }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) {
      SpatialFacet f;  // horizontal edge y = py(j)
      f.a = {px(i), py(j)};
      f.b = {px(i + 1), py(j)};
      f.measure = ax;
      f.normal = {0.0, j == 0 ? -1.0 : +1.0};
      f.cell_in = j == 0 ? lower(i, 0) : upper(i, j - 1);
      f.cell_out = (j == 0 || j == ny) ? -1 : lower(i, j);
      f.h_fx = diag;
      m.facets.push_back(f);
    }
  return m;
}

}  // namespace

int SpatialMesh::locate(Point2 p) const {
  const double ax = (bounds.hi.x - bounds.lo.x) / nx;
  int i = std::clamp(static_cast<int>((p.x - bounds.lo.x) / ax), 0, nx - 1);
  if (dim == 1) return i;
  const double ay = (bounds.hi.y - bounds.lo.y) / ny;
  int j = std::clamp(static_cast<int>((p.y - bounds.lo.y) / ay), 0, ny - 1);
  if (shape == CellShape::Rectangle) return j * nx + i;
  const double u = (p.x - (bounds.lo.x + i * ax)) / ax;
  const double v = (p.y - (bounds.lo.y + j * ay)) / ay;
  return 2 * (j * nx + i) + (v <= u ? 0 : 1);
}

std::vector<Face> classify_faces(const SpaceTimeMesh& mesh) {
  std::vector<Face> faces;
  const int N = mesh.n_slabs();
  const int nc = mesh.n_cells();

  for (int lvl = 0; lvl <= N; ++lvl) {
    const double t = mesh.time.knots[lvl];
    for (int c = 0; c < nc; ++c) {
      Face f;
      f.tag = lvl == 0 ? FaceTag::Initial : (lvl == N ? FaceTag::Final : FaceTag::SpaceLike);
      f.cell = c;
      f.level = lvl;
      f.elem_a = lvl > 0 ? mesh.element(lvl - 1, c) : -1;
      f.elem_b = lvl < N ? mesh.element(lvl, c) : -1;
      f.t0 = f.t1 = t;
      f.measure = mesh.space.cells[c].measure;
      faces.push_back(f);
    }
  }
  for (int n = 0; n < N; ++n) {
    for (int fi = 0; fi < static_cast<int>(mesh.space.facets.size()); ++fi) {
      const SpatialFacet& sf = mesh.space.facets[fi];
      Face f;
      f.tag = sf.boundary() ? FaceTag::Dirichlet : FaceTag::TimeLike;
      f.facet = fi;
      f.slab = n;
      f.elem_a = mesh.element(n, sf.cell_in);
      f.elem_b = sf.boundary() ? -1 : mesh.element(n, sf.cell_out);
      f.normal = sf.normal;
      f.t0 = mesh.time.knots[n];
      f.t1 = mesh.time.knots[n + 1];
      f.h_fx = sf.h_fx;
      f.measure = sf.measure * (f.t1 - f.t0);
      faces.push_back(f);
    }
  }
  return faces;
}

SpaceTimeMesh build_mesh(const Box2& domain, int div_x, int div_y, int slab_count,
                         double final_time, CellShape shape) {
  const int dim = shape == CellShape::Interval ? 1 : 2;
  if (div_x < 1 || (dim == 2 && div_y < 1))
    throw std::invalid_argument("divisions must be >= 1");
  if (slab_count < 1) throw std::invalid_argument("slab count must be >= 1");
  if (domain.hi.x <= domain.lo.x || (dim == 2 && domain.hi.y <= domain.lo.y))
    throw std::invalid_argument("domain has zero measure");

  SpaceTimeMesh mesh;
  mesh.time = uniform_time_partition(final_time, slab_count);
  mesh.space = dim == 1 ? build_interval_mesh(domain, div_x)
                        : build_planar_mesh(domain, div_x, div_y, shape);

  // facets inherit h_fx = min of adjacent diameters (uniform grids: all equal)
  for (auto& f : mesh.space.facets) {
    double h = mesh.space.cells[f.cell_in].diameter;
    if (!f.boundary()) h = std::min(h, mesh.space.cells[f.cell_out].diameter);
    f.h_fx = h;
  }

  mesh.faces = classify_faces(mesh);
  mesh.slab_faces.assign(slab_count, {});
  mesh.level_faces.assign(slab_count + 1, {});
  for (int i = 0; i < static_cast<int>(mesh.faces.size()); ++i) {
    const Face& f = mesh.faces[i];
    if (f.tag == FaceTag::TimeLike || f.tag == FaceTag::Dirichlet)
      mesh.slab_faces[f.slab].push_back(i);
    else
      mesh.level_faces[f.level].push_back(i);
  }
  return mesh;
}

std::string mesh_report(const SpaceTimeMesh& mesh) {
  int counts[5] = {0, 0, 0, 0, 0};
  for (const auto& f : mesh.faces) counts[static_cast<int>(f.tag)]++;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "space-time mesh: d=%d, %d cells x %d slabs = %d elements\n"
                "  h_x = %.6g, h_t = %.6g\n"
                "  faces: %d space-like, %d time-like, %d initial, %d final, %d Dirichlet\n",
                mesh.dim(), mesh.n_cells(), mesh.n_slabs(), mesh.n_elements(),
                mesh.space.h_max, mesh.time.max_step(),
                counts[static_cast<int>(FaceTag::SpaceLike)],
                counts[static_cast<int>(FaceTag::TimeLike)],
                counts[static_cast<int>(FaceTag::Initial)],
                counts[static_cast<int>(FaceTag::Final)],
                counts[static_cast<int>(FaceTag::Dirichlet)]);
  return buf;
}

}  // namespace tdg
