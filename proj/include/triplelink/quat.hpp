#pragma once

#include <cmath>
#include <complex>

#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"

namespace triplelink {

// Points of R^3, identified with the pure imaginary quaternions span(i,j,k).
struct ImVec3 {
  double x = 0, y = 0, z = 0;

  ImVec3 operator+(const ImVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  ImVec3 operator-(const ImVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  ImVec3 operator*(double c) const { return {x * c, y * c, z * c}; }
  ImVec3 operator/(double c) const { return {x / c, y / c, z / c}; }
};

inline double dot(const ImVec3& a, const ImVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline ImVec3 cross(const ImVec3& a, const ImVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const ImVec3& v) { return std::sqrt(dot(v, v)); }
inline ImVec3 normalized(const ImVec3& v) {
  double n = norm(v);
  if (n <= 0) fail(errc::degenerate_plane, "cannot normalize zero vector");
  return v / n;
}

// Quaternion q = w + x i + y j + z k.
struct Quat {
  double w = 0, x = 0, y = 0, z = 0;

  Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  Quat operator*(double c) const { return {w * c, x * c, y * c, z * c}; }
};

inline Quat qmul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
inline Quat conj(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }
inline double re(const Quat& q) { return q.w; }
inline ImVec3 im(const Quat& q) { return {q.x, q.y, q.z}; }
inline double dot(const Quat& a, const Quat& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double norm(const Quat& q) { return std::sqrt(dot(q, q)); }

// Unit quaternion, i.e. a point of S^3.  Construction checks the norm; use
// renormalized() to repair nearly-unit data explicitly (never silently).
struct UnitQuat : Quat {
  UnitQuat() : Quat{1, 0, 0, 0} {}
  explicit UnitQuat(const Quat& q) : Quat(q) {
    if (std::abs(norm(q) - 1.0) > config::unit_norm_tol)
      fail(errc::invalid_link, "UnitQuat: norm deviates from 1 beyond tolerance");
  }
  UnitQuat(double w_, double x_, double y_, double z_) : UnitQuat(Quat{w_, x_, y_, z_}) {}
};

inline UnitQuat renormalized(const Quat& q) {
  double n = norm(q);
  if (n <= 0) fail(errc::invalid_link, "renormalized: zero quaternion");
  return UnitQuat(q * (1.0 / n));
}

inline Quat from_imvec(const ImVec3& v) { return {0, v.x, v.y, v.z}; }

// --- angle utilities -------------------------------------------------------

// Canonical representative in [0, 2pi).
inline double canon_angle(double a) {
  a = std::fmod(a, config::two_pi);
  if (a < 0) a += config::two_pi;
  if (a >= config::two_pi) a = 0;  // fmod can land exactly on 2pi after the shift
  return a;
}

// Wrapped difference a - b in (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::fmod(a - b, config::two_pi);
  if (d <= -config::pi) d += config::two_pi;
  if (d > config::pi) d -= config::two_pi;
  return d;
}

// Accumulates a continuous lift of a sampled angle, assuming successive
// samples differ by less than pi.
class AngleUnwinder {
public:
  double feed(double angle) {
    if (!started_) {
      started_ = true;
      lift_ = angle;
      last_ = angle;
      return lift_;
    }
    lift_ += angle_diff(angle, last_);
    last_ = angle;
    return lift_;
  }
  double lift() const { return lift_; }
  bool started() const { return started_; }

private:
  bool started_ = false;
  double last_ = 0, lift_ = 0;
};

// --- stereographic projection and the Grassmann/Stiefel projections --------

// Orientation-preserving stereographic projection from -1, S^3 \ {-1} -> R^3.
inline ImVec3 stereo_m1(const UnitQuat& q) {
  double denom = 1.0 + re(q);
  if (denom <= config::antipode_tol)
    fail(errc::near_antipode, "stereo_m1: point too close to -1");
  return im(q) / denom;
}

inline UnitQuat stereo_m1_inv(const ImVec3& v) {
  double n2 = dot(v, v);
  double d = 1.0 + n2;
  return UnitQuat((1.0 - n2) / d, 2 * v.x / d, 2 * v.y / d, 2 * v.z / d);
}

// pi+ <a,b> = normalize(Im b conj(a)); defined for linearly independent a, b.
inline ImVec3 pi_plus(const Quat& a, const Quat& b) {
  ImVec3 v = im(qmul(b, conj(a)));
  double n = norm(v);
  if (n <= config::degenerate_plane_tol)
    fail(errc::degenerate_plane, "pi_plus: a and b do not span a plane");
  return v / n;
}

// pi- <a,b> = normalize(Im conj(a) b).
inline ImVec3 pi_minus(const Quat& a, const Quat& b) {
  ImVec3 v = im(qmul(conj(a), b));
  double n = norm(v);
  if (n <= config::degenerate_plane_tol)
    fail(errc::degenerate_plane, "pi_minus: a and b do not span a plane");
  return v / n;
}

// --- the standard open book on S^3 ------------------------------------------
//
// Binding K = {cos u + k sin u}; pages indexed by the polar angle
// ell(q) = arg(q1 + q2 i), identified with the hyperbolic upper half plane via
// m(q) = (q3 + |q1 + q2 i| i) / (1 + q0).

struct PageCoord {
  double theta = 0;              // polar angle in [0, 2pi)
  std::complex<double> w{0, 1};  // meridional coordinate, Im(w) > 0
};

inline UnitQuat binding_point(double u) { return UnitQuat(std::cos(u), 0, 0, std::sin(u)); }

inline double page_angle(const Quat& q) {
  double rho = std::hypot(q.x, q.y);
  if (rho <= config::binding_tol) fail(errc::on_binding, "page_angle: point on the binding K");
  return canon_angle(std::atan2(q.y, q.x));
}

inline PageCoord book_coords(const UnitQuat& q) {
  double rho = std::hypot(q.x, q.y);
  if (rho <= config::binding_tol) fail(errc::on_binding, "book_coords: point on the binding K");
  double denom = 1.0 + q.w;
  return {canon_angle(std::atan2(q.y, q.x)), std::complex<double>(q.z / denom, rho / denom)};
}

// Closed-form inverse of book_coords: the unit quaternion on page theta with
// meridional coordinate w = a + b i, b > 0.
inline UnitQuat book_point(double theta, std::complex<double> w) {
  double a = w.real(), b = w.imag();
  if (b <= 0) fail(errc::non_positive_height, "book_point: Im(w) must be positive");
  double t = 2.0 / (1.0 + a * a + b * b);
  double r = b * t;
  return UnitQuat(t - 1.0, r * std::cos(theta), r * std::sin(theta), a * t);
}

// Left multiplication by a unit quaternion: an orientation-preserving isometry
// of S^3.
inline UnitQuat iso_act(const UnitQuat& g, const UnitQuat& q) { return renormalized(qmul(g, q)); }

// --- open-book coordinates in R^3 (stereographic image) --------------------
//
// For v in R^3 off the k-axis: ell(v) = arg(v1 + v2 i), m(v) = v3 + |v1+v2 i| i.

inline double page_angle_r3(const ImVec3& v) {
  double rho = std::hypot(v.x, v.y);
  if (rho <= config::binding_tol) fail(errc::on_binding, "page_angle_r3: point on the k-axis");
  return canon_angle(std::atan2(v.y, v.x));
}

inline std::complex<double> meridional_r3(const ImVec3& v) {
  return {v.z, std::hypot(v.x, v.y)};
}

} // namespace triplelink
