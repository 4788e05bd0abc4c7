#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/link.hpp"
#include "triplelink/parallel.hpp"
#include "triplelink/quat.hpp"

namespace triplelink {

// Uniform scalar samples over [0,2pi)^3, row-major in (i_s, i_t, i_u).
struct Grid3 {
  int N = 0;
  std::vector<double> v;

  Grid3() = default;
  explicit Grid3(int n) : N(n), v(static_cast<size_t>(n) * n * n, 0.0) {
    if (n < 8) fail(errc::bad_input, "Grid3: N must be at least 8");
  }
  double& at(int i, int j, int k) { return v[(static_cast<size_t>(i) * N + j) * N + k]; }
  double at(int i, int j, int k) const { return v[(static_cast<size_t>(i) * N + j) * N + k]; }
  double mean() const {
    double s = 0;
    for (double x : v) s += x;
    return s / v.size();
  }
};

// The characteristic 2-form of a link, sampled on a grid.  Component order is
// the single source of truth for the whole repository:
//   (a, b, c)  <->  (dt^du, du^ds, ds^dt)  <->  the (s, t, u) slots of *dx.
struct OmegaField {
  Grid3 a, b, c;
  int N() const { return a.N; }
};

// Skew bilinear form B(a,b) = ((i a).b, (j a).b, (k a).b) = Im(b conj(a)).
inline ImVec3 skew_form(const Quat& a, const Quat& b) {
  return {-a.x * b.w + a.w * b.x - a.z * b.y + a.y * b.z,
          -a.y * b.w + a.z * b.x + a.w * b.y - a.x * b.z,
          -a.z * b.w - a.y * b.x + a.x * b.y + a.w * b.z};
}

// F(x,y,z) = (x-z, y-z)_+ = B(x,y) + B(y,z) + B(z,x); nonzero for pairwise
// distinct points of S^3.
inline ImVec3 F_vec(const Quat& x, const Quat& y, const Quat& z) {
  return skew_form(x, y) + skew_form(y, z) + skew_form(z, x);
}

inline ImVec3 F_vec_checked(const UnitQuat& x, const UnitQuat& y, const UnitQuat& z) {
  if (norm(x - y) <= 1e-9 || norm(y - z) <= 1e-9 || norm(z - x) <= 1e-9)
    fail(errc::coincident_points, "F_vec: points must be pairwise distinct");
  return F_vec(x, y, z);
}

// Characteristic map g_L(s,t,u) = F/||F||.
inline ImVec3 g_L_eval(const Link3& link, double s, double t, double u) {
  ImVec3 F = F_vec(link.X.eval(s), link.Y.eval(t), link.Z.eval(u));
  double n = norm(F);
  if (n <= 0) fail(errc::coincident_points, "g_L_eval: F vanished (invalid link)");
  return F / n;
}

// Asymmetric characteristic map h_L(s,t,u) = normalize(y_z - x_z) with
// a_z = pr_{-1}(-a conj(z)).
inline ImVec3 h_L_point(const Quat& a, const Quat& z) {
  Quat p = qmul(a, conj(z)) * -1.0;
  double denom = 1.0 + p.w;
  if (denom <= config::binding_tol)
    fail(errc::near_pole, "h_L: stereographic pole hit (component meets Z)");
  return im(p) / denom;
}

inline ImVec3 h_L_eval(const Link3& link, double s, double t, double u) {
  Quat z = link.Z.eval(u);
  ImVec3 xz = h_L_point(link.X.eval(s), z);
  ImVec3 yz = h_L_point(link.Y.eval(t), z);
  return normalized(yz - xz);
}

namespace detail {

struct CurveTable {
  std::vector<Quat> p, d;
  CurveTable(const TrigCurve& c, int N, double shift) : p(N), d(N) {
    for (int i = 0; i < N; ++i) {
      double s = config::two_pi * (i + shift) / N;
      p[i] = c.eval(s);
      d[i] = c.deriv(s);
    }
  }
};

} // namespace detail

// Samples the characteristic 2-form on an N^3 grid using analytic partials:
// F is bilinear in (x, y, z), so each partial replaces the moving argument by
// the curve tangent in the terms that contain it.
//   a = (F_t x F_u).F / 4pi||F||^3,  b = (F_u x F_s).F / ...,  c = (F_s x F_t).F / ...
inline OmegaField omega_grid(const Link3& link, int N, double shift = 0.0) {
  if (N < 8) fail(errc::bad_input, "omega_grid: N must be at least 8");
  detail::CurveTable tx(link.X, N, shift), ty(link.Y, N, shift), tz(link.Z, N, shift);
  OmegaField f;
  f.a = Grid3(N);
  f.b = Grid3(N);
  f.c = Grid3(N);
  const double scale = 1.0 / (4.0 * config::pi);
  parallel_for(N, [&](int i) {
    const Quat &x = tx.p[i], &dx = tx.d[i];
    for (int j = 0; j < N; ++j) {
      const Quat &y = ty.p[j], &dy = ty.d[j];
      ImVec3 Bxy = skew_form(x, y);
      ImVec3 Fs_xy = skew_form(dx, y);   // d/ds of B(x,y)
      ImVec3 Ft_xy = skew_form(x, dy);   // d/dt of B(x,y)
      for (int k = 0; k < N; ++k) {
        const Quat &z = tz.p[k], &dz = tz.d[k];
        ImVec3 F = Bxy + skew_form(y, z) + skew_form(z, x);
        ImVec3 Fs = Fs_xy + skew_form(z, dx);
        ImVec3 Ft = Ft_xy + skew_form(dy, z);
        ImVec3 Fu = skew_form(y, dz) + skew_form(dz, x);
        double nf = norm(F);
        double inv = scale / (nf * nf * nf);
        f.a.at(i, j, k) = dot(cross(Ft, Fu), F) * inv;
        f.b.at(i, j, k) = dot(cross(Fu, Fs), F) * inv;
        f.c.at(i, j, k) = dot(cross(Fs, Ft), F) * inv;
      }
    }
  });
  return f;
}

// Minimum of ||F|| over the grid; positive for every valid link.
inline double min_F_norm(const Link3& link, int N) {
  detail::CurveTable tx(link.X, N, 0), ty(link.Y, N, 0), tz(link.Z, N, 0);
  double best = 1e300;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        best = std::min(best, norm(F_vec(tx.p[i], ty.p[j], tz.p[k])));
  return best;
}

// CSV dump: columns s,t,u,a,b,c, one row per grid point, row-major.
inline std::string field_dump_csv(const OmegaField& f) {
  std::string out = "s,t,u,a,b,c\n";
  char buf[160];
  int N = f.N();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.17g,%.17g,%.17g\n",
                      config::two_pi * i / N, config::two_pi * j / N, config::two_pi * k / N,
                      f.a.at(i, j, k), f.b.at(i, j, k), f.c.at(i, j, k));
        out += buf;
      }
  return out;
}

} // namespace triplelink
