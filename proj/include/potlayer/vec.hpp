#pragma once

#include <array>
#include <cmath>

namespace potlayer {

/// Points of R^n for n in {2,3}. A point of R^2 keeps its third slot at zero,
/// so the normal coordinate x_n lives at index n-1.
using Vec3 = std::array<double, 3>;

/// Tangential coordinates y' of R^{n-1}. For n = 2 the second slot is zero.
using Vec2 = std::array<double, 2>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

/// Splits x into (x', x_n) for dimension n.
inline Vec2 tangential(const Vec3& x, int n) { return n == 3 ? Vec2{x[0], x[1]} : Vec2{x[0], 0.0}; }
inline double normal_coord(const Vec3& x, int n) { return x[n - 1]; }

/// Builds the point (y', t) of R^n.
inline Vec3 lift(const Vec2& yp, double t, int n) {
  return n == 3 ? Vec3{yp[0], yp[1], t} : Vec3{yp[0], t, 0.0};
}

/// Unit normal e_n.
inline Vec3 unit_normal(int n) { return n == 3 ? Vec3{0, 0, 1} : Vec3{0, 1, 0}; }

}  // namespace potlayer
