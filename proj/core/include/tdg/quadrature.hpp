#pragma once

#include <functional>
#include <vector>

#include "tdg/mesh.hpp"
#include "tdg/types.hpp"

namespace tdg {

struct QuadratureRule {
  enum class Domain { Segment, Square, Triangle };
  Domain domain = Domain::Segment;
  std::vector<Point2> nodes;   // Segment rules use only .x
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; 1 <= n <= 64.
QuadratureRule gauss_legendre(int n);

/// n x n tensor rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}
/// via the Duffy map (u,v) -> (u, v(1-u)).
QuadratureRule duffy_triangle(int n);

/// Node-count policy for skeleton integrals of oscillatory exponentials.
/// base ~ p + 6 + ceil(phase_rate * extent); `scale` stretches it (used by
/// the quadrature-doubling check), `override_n` pins it outright.
struct QuadPolicy {
  int override_n = 0;
  double scale = 1.0;

  int nodes(double phase_rate, double extent, int p) const;
};

struct FacePoint {
  Point2 x;
  double t = 0.0;
  double w = 0.0;
};

/// Quadrature points of a face with n nodes per axis, mapped to physical
/// coordinates; weights include the surface measure.
std::vector<FacePoint> face_points_n(const SpaceTimeMesh& mesh, const Face& face, int n);

/// Same, with per-axis node counts chosen by the policy from the given
/// phase rates (radians per unit length along each axis of the face).
std::vector<FacePoint> face_points(const SpaceTimeMesh& mesh, const Face& face,
                                   double space_rate, double time_rate, int p,
                                   const QuadPolicy& policy);

Cx integrate_face(const SpaceTimeMesh& mesh, const Face& face, int n,
                  const std::function<Cx(Point2, double)>& integrand);

}  // namespace tdg
