#pragma once

#include <array>
#include <string>
#include <vector>

#include "tdg/types.hpp"

namespace tdg {

/// Partition 0 = t_0 < t_1 < ... < t_N = T of the time interval.
struct TimePartition {
  std::vector<double> knots;

  int slabs() const { return static_cast<int>(knots.size()) - 1; }
  double length(int n) const { return knots[n + 1] - knots[n]; }
  double final_time() const { return knots.back(); }
  double max_step() const;
};

TimePartition uniform_time_partition(double final_time, int slab_count);

enum class CellShape { Interval, Rectangle, SplitTriangles };

struct SpatialCell {
  std::array<Point2, 4> v{};  // vertices; nv of them are valid
  int nv = 0;
  double diameter = 0.0;
  double measure = 0.0;

  Point2 centroid() const;
};

/// Spatial facet: a point in 1d, a straight edge in 2d.
struct SpatialFacet {
  Point2 a, b;       // endpoints (a == b in 1d)
  int cell_in = -1;  // normal points out of this cell
  int cell_out = -1; // -1 on the domain boundary
  Point2 normal{};
  double measure = 0.0;  // edge length; 1 for a point
  double h_fx = 0.0;     // min of adjacent cell diameters; own diameter on the boundary

  bool boundary() const { return cell_out < 0; }
};

struct SpatialMesh {
  int dim = 1;
  CellShape shape = CellShape::Interval;
  Box2 bounds;
  int nx = 0, ny = 0;
  std::vector<SpatialCell> cells;
  std::vector<SpatialFacet> facets;
  double h_max = 0.0;

  double measure() const;
  double boundary_measure() const;
  /// Index of the cell containing x (structured lookup; clamps to the domain).
  int locate(Point2 x) const;
};

enum class FaceTag { SpaceLike, TimeLike, Initial, Final, Dirichlet };

/// One face of the space-time skeleton.
///
/// Constant-time faces (SpaceLike, Initial, Final) are a spatial cell at a
/// fixed knot t_level; elem_a is the element below, elem_b the one above.
/// TimeLike and Dirichlet faces are a spatial facet extruded over one slab;
/// the normal is purely spatial and points out of elem_a.
struct Face {
  FaceTag tag = FaceTag::SpaceLike;
  int cell = -1;
  int facet = -1;
  int slab = -1;
  int level = -1;
  int elem_a = -1;
  int elem_b = -1;
  Point2 normal{};
  double t0 = 0.0, t1 = 0.0;
  double h_fx = 0.0;
  double measure = 0.0;

  /// Time component of the outward normal seen from element e (+1, -1 or 0).
  int temporal_normal(int e) const {
    if (tag == FaceTag::TimeLike || tag == FaceTag::Dirichlet) return 0;
    return e == elem_a ? +1 : -1;
  }
};

/// Tensor-product space-time mesh: one spatial mesh shared by all slabs.
struct SpaceTimeMesh {
  TimePartition time;
  SpatialMesh space;
  std::vector<Face> faces;
  std::vector<std::vector<int>> slab_faces;   // TimeLike + Dirichlet ids, per slab
  std::vector<std::vector<int>> level_faces;  // constant-time ids, per knot

  int dim() const { return space.dim; }
  int n_slabs() const { return time.slabs(); }
  int n_cells() const { return static_cast<int>(space.cells.size()); }
  int n_elements() const { return n_slabs() * n_cells(); }
  int element(int slab, int cell) const { return slab * n_cells() + cell; }
  int slab_of(int elem) const { return elem / n_cells(); }
  int cell_of(int elem) const { return elem % n_cells(); }
};

/// Builds the structured space-time mesh over domain x (0, final_time).
/// div_y is ignored for 1d; triangles split each rectangle along the
/// lower-left to upper-right diagonal.
SpaceTimeMesh build_mesh(const Box2& domain, int div_x, int div_y, int slab_count,
                         double final_time, CellShape shape);

/// Recomputes the classified skeleton from the mesh structure.
std::vector<Face> classify_faces(const SpaceTimeMesh& mesh);

std::string mesh_report(const SpaceTimeMesh& mesh);

}  // namespace tdg
