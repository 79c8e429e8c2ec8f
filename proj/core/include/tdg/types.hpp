#pragma once

#include <cmath>
#include <complex>

namespace tdg {

using Cx = std::complex<double>;

/// Spatial point; y is unused (zero) in one space dimension.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::sqrt(dot(a, a)); }

/// Complex-valued spatial vector (gradients of wave functions).
struct Cvec2 {
  Cx x{};
  Cx y{};
};

inline Cvec2 operator+(const Cvec2& a, const Cvec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Cvec2 operator-(const Cvec2& a, const Cvec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Cvec2 operator*(Cx s, const Cvec2& a) { return {s * a.x, s * a.y}; }
inline Cx dot(const Cvec2& a, Point2 n) { return a.x * n.x + a.y * n.y; }
inline double squared_norm(const Cvec2& a) { return std::norm(a.x) + std::norm(a.y); }

struct Box2 {
  Point2 lo;
  Point2 hi;
};

}  // namespace tdg
