#include "tdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace tdg {

namespace {

constexpr int kMaxNodes = 64;

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

QuadratureRule make_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.domain = QuadratureRule::Domain::Segment;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = {0.0, 0.0};
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton to full precision.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre(n, x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    auto [p, dp] = legendre(n, x);
    (void)p;
    rule.nodes[i] = {x, 0.0};
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  std::sort(rule.nodes.begin(), rule.nodes.end(),
            [](Point2 a, Point2 b) { return a.x < b.x; });
  for (int i = 0; i < n; ++i) {
    auto [p, dp] = legendre(n, rule.nodes[i].x);
    (void)p;
    rule.weights[i] = 2.0 / ((1.0 - rule.nodes[i].x * rule.nodes[i].x) * dp * dp);
  }
  return rule;
}

const QuadratureRule& cached_gauss_legendre(int n) {
  static std::array<QuadratureRule, kMaxNodes + 1> cache;
  static std::array<std::once_flag, kMaxNodes + 1> flags;
  std::call_once(flags[n], [n] { cache[n] = make_gauss_legendre(n); });
  return cache[n];
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > kMaxNodes) throw std::invalid_argument("gauss_legendre: n must be in [1, 64]");
  return cached_gauss_legendre(n);
}

QuadratureRule duffy_triangle(int n) {
  if (n < 1) throw std::invalid_argument("duffy_triangle: n must be >= 1");
  n = std::min(n, kMaxNodes);
  const QuadratureRule& gl = cached_gauss_legendre(n);
  QuadratureRule rule;
  rule.domain = QuadratureRule::Domain::Triangle;
  rule.nodes.reserve(static_cast<size_t>(n) * n);
  rule.weights.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (gl.nodes[i].x + 1.0);
    const double wu = 0.5 * gl.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (gl.nodes[j].x + 1.0);
      const double wv = 0.5 * gl.weights[j];
      rule.nodes.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(wu * wv * (1.0 - u));
    }
  }
  return rule;
}

int QuadPolicy::nodes(double phase_rate, double extent, int p) const {
  if (override_n > 0) return std::min(override_n, kMaxNodes);
  double base = p + 6 + std::ceil(std::max(0.0, phase_rate) * std::max(0.0, extent));
  int n = static_cast<int>(std::ceil(scale * base));
  return std::clamp(n, 1, kMaxNodes);
}

namespace {

// Tensor points on a rectangle cell at fixed time.
void rect_points(const SpatialCell& c, double t, int n, std::vector<FacePoint>& out) {
  const QuadratureRule& gl = cached_gauss_legendre(n);
  const double x0 = c.v[0].x, x1 = c.v[2].x, y0 = c.v[0].y, y1 = c.v[2].y;
  const double jx = 0.5 * (x1 - x0), jy = 0.5 * (y1 - y0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FacePoint p;
      p.x = {x0 + jx * (gl.nodes[i].x + 1.0), y0 + jy * (gl.nodes[j].x + 1.0)};
      p.t = t;
      p.w = gl.weights[i] * gl.weights[j] * jx * jy;
      out.push_back(p);
    }
}

void triangle_points(const SpatialCell& c, double t, int n, std::vector<FacePoint>& out) {
  QuadratureRule duffy = duffy_triangle(n);
  const Point2 a = c.v[0], b = c.v[1], d = c.v[2];
  const double jac = 2.0 * c.measure;  // affine map from the reference triangle
  for (size_t q = 0; q < duffy.nodes.size(); ++q) {
    const double u = duffy.nodes[q].x, v = duffy.nodes[q].y;
    FacePoint p;
    p.x = a + u * (b - a) + v * (d - a);
    p.t = t;
    p.w = duffy.weights[q] * jac;
    out.push_back(p);
  }
}

void cell_points(const SpatialMesh& space, int cell, double t, int n,
                 std::vector<FacePoint>& out) {
  const SpatialCell& c = space.cells[cell];
  if (space.dim == 1) {
    const QuadratureRule& gl = cached_gauss_legendre(n);
    const double x0 = c.v[0].x, x1 = c.v[1].x;
    const double j = 0.5 * (x1 - x0);
    for (int i = 0; i < n; ++i)
      out.push_back({{x0 + j * (gl.nodes[i].x + 1.0), 0.0}, t, gl.weights[i] * j});
  } else if (c.nv == 3) {
    triangle_points(c, t, n, out);
  } else {
    rect_points(c, t, n, out);
  }
}

}  // namespace

std::vector<FacePoint> face_points_n(const SpaceTimeMesh& mesh, const Face& face, int n) {
  std::vector<FacePoint> pts;
  switch (face.tag) {
    case FaceTag::SpaceLike:
    case FaceTag::Initial:
    case FaceTag::Final:
      cell_points(mesh.space, face.cell, face.t0, n, pts);
      break;
    case FaceTag::TimeLike:
    case FaceTag::Dirichlet: {
      const SpatialFacet& sf = mesh.space.facets[face.facet];
      const QuadratureRule& gl = cached_gauss_legendre(n);
      const double jt = 0.5 * (face.t1 - face.t0);
      if (mesh.dim() == 1) {
        for (int i = 0; i < n; ++i)
          pts.push_back({sf.a, face.t0 + jt * (gl.nodes[i].x + 1.0), gl.weights[i] * jt});
      } else {
        const double js = 0.5 * sf.measure;
        for (int i = 0; i < n; ++i) {
          const double s = 0.5 * (gl.nodes[i].x + 1.0);
          const Point2 x = sf.a + s * (sf.b - sf.a);
          for (int j = 0; j < n; ++j)
            pts.push_back({x, face.t0 + jt * (gl.nodes[j].x + 1.0),
                           gl.weights[i] * js * gl.weights[j] * jt});
        }
      }
      break;
    }
  }
  return pts;
}

std::vector<FacePoint> face_points(const SpaceTimeMesh& mesh, const Face& face,
                                   double space_rate, double time_rate, int p,
                                   const QuadPolicy& policy) {
  int n;
  if (face.tag == FaceTag::TimeLike || face.tag == FaceTag::Dirichlet) {
    const SpatialFacet& sf = mesh.space.facets[face.facet];
    const int ns = policy.nodes(space_rate, mesh.dim() == 1 ? 0.0 : sf.measure, p);
    const int nt = policy.nodes(time_rate, face.t1 - face.t0, p);
    n = std::max(ns, nt);
  } else {
    n = policy.nodes(space_rate, mesh.space.cells[face.cell].diameter, p);
  }
  return face_points_n(mesh, face, n);
}

Cx integrate_face(const SpaceTimeMesh& mesh, const Face& face, int n,
                  const std::function<Cx(Point2, double)>& integrand) {
  Cx sum = 0.0;
  for (const FacePoint& p : face_points_n(mesh, face, n)) sum += p.w * integrand(p.x, p.t);
  return sum;
}

}  // namespace tdg
