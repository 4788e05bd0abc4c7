#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/parallel.hpp"
#include "triplelink/quat.hpp"
#include "triplelink/trig_curve.hpp"

namespace triplelink {

// Ordered, oriented three-component link in S^3.  Components are named X, Y, Z
// and parametrized by s, t, u; orientation is by increasing parameter.
struct Link3 {
  TrigCurve X, Y, Z;

  const TrigCurve& component(int i) const {
    switch (i) {
      case 0: return X;
      case 1: return Y;
      default: return Z;
    }
  }

  void validate() const {
    X.validate();
    Y.validate();
    Z.validate();
    const TrigCurve* curves[3] = {&X, &Y, &Z};
    const char* names[3] = {"X/Y", "X/Z", "Y/Z"};
    int pair = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b, ++pair) {
        int n = config::pair_distance_samples;
        std::vector<Quat> pa(n), pb(n);
        for (int i = 0; i < n; ++i) {
          double w = config::two_pi * i / n;
          pa[i] = curves[a]->eval(w);
          pb[i] = curves[b]->eval(w);
        }
        double best = 1e300;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double d = norm(pa[i] - pb[j]);
            if (d < best) best = d;
          }
        if (best < config::component_separation)
          fail(errc::invalid_link, std::string("Link3: components ") + names[pair] +
                                       " closer than separation tolerance");
      }
  }
};

// Swap two components (0=X, 1=Y, 2=Z); used by the symmetry tests.
inline Link3 swap_components(const Link3& link, int a, int b) {
  Link3 out = link;
  const TrigCurve* c[3] = {&link.X, &link.Y, &link.Z};
  const TrigCurve* tmp = c[a];
  TrigCurve arr[3] = {*c[0], *c[1], *c[2]};
  arr[a] = *c[b];
  arr[b] = *tmp;
  out.X = arr[0];
  out.Y = arr[1];
  out.Z = arr[2];
  return out;
}

inline Link3 cyclic_shift(const Link3& link) {
  // (X, Y, Z) -> (Y, Z, X)
  return Link3{link.Y, link.Z, link.X};
}

// Left multiplication acts coefficientwise on trigonometric curves, so the
// rotated link is exact (no resampling).
inline Link3 apply_isometry(const UnitQuat& g, const Link3& link) {
  auto rot = [&](const TrigCurve& c) {
    auto mapv = [&](const std::vector<Vec4>& in) {
      std::vector<Vec4> out(in.size());
      for (size_t k = 0; k < in.size(); ++k) {
        Quat q = qmul(g, Quat{in[k][0], in[k][1], in[k][2], in[k][3]});
        out[k] = {q.w, q.x, q.y, q.z};
      }
      return out;
    };
    return TrigCurve(mapv(c.cos_coeffs()), mapv(c.sin_coeffs()));
  };
  return Link3{rot(link.X), rot(link.Y), rot(link.Z)};
}

// --- built-in links ---------------------------------------------------------

// A concrete realization of the Borromean rings with mu = -1: the three
// cyclically interleaved ellipses in the coordinate planes of R^3
//   (cos s, b sin s, 0), (0, cos t, b sin t), (b sin u, 0, cos u)
// pushed onto S^3 by inverse stereographic projection from -1.  Round circles
// cannot form this link, so the minor axis b < 1 is essential; b = 9/10 keeps
// the clasps tight enough that the spectral truncation error is visible at
// moderate grids while every pipeline still resolves it cleanly.
inline Link3 builtin_borromean() {
  const double b = 0.9;
  const int harmonics = 64;
  Link3 link;
  link.X = project_to_harmonics(
      [&](double s) { return stereo_m1_inv({std::cos(s), b * std::sin(s), 0}); }, harmonics);
  link.Y = project_to_harmonics(
      [&](double t) { return stereo_m1_inv({0, std::cos(t), b * std::sin(t)}); }, harmonics);
  link.Z = project_to_harmonics(
      [&](double u) { return stereo_m1_inv({b * std::sin(u), 0, std::cos(u)}); }, harmonics);
  return link;
}

// Split unlink: three small round circles in well-separated regions of S^3.
// c(s) = cos(alpha) A + sin(alpha)(cos s U + sin s V) with (A,U,V) orthonormal.
inline Link3 builtin_unlink() {
  const double alpha = 0.3;
  auto circle = [&](Vec4 A, Vec4 U, Vec4 V) {
    double ca = std::cos(alpha), sa = std::sin(alpha);
    Vec4 a0, c1, s1;
    for (int d = 0; d < 4; ++d) {
      a0[d] = ca * A[d];
      c1[d] = sa * U[d];
      s1[d] = sa * V[d];
    }
    return TrigCurve({a0, c1}, {s1});
  };
  Link3 link;
  link.X = circle({1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0});
  link.Y = circle({-1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1});
  link.Z = circle({0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0});
  return link;
}

// --- open-book constructions -------------------------------------------------

// Page data for one non-binding component: theta(s) = winding*s + periodic
// perturbation, w(s) in the upper half plane.
struct OpenBookSpec {
  int winding = 0;
  std::vector<std::array<double, 2>> theta_perturbation;  // (a_k, b_k), k = 1..
  std::vector<std::array<double, 2>> w_cos;                // (re, im), k = 0..
  std::vector<std::array<double, 2>> w_sin;                // (re, im), k = 1..

  double theta(double s) const {
    double v = winding * s;
    for (size_t k = 1; k <= theta_perturbation.size(); ++k)
      v += theta_perturbation[k - 1][0] * std::cos(k * s) +
           theta_perturbation[k - 1][1] * std::sin(k * s);
    return v;
  }
  double theta_deriv(double s) const {
    double v = winding;
    for (size_t k = 1; k <= theta_perturbation.size(); ++k)
      v += k * (-theta_perturbation[k - 1][0] * std::sin(k * s) +
                theta_perturbation[k - 1][1] * std::cos(k * s));
    return v;
  }
  std::complex<double> w(double s) const {
    std::complex<double> v{0, 0};
    for (size_t k = 0; k < w_cos.size(); ++k)
      v += std::complex<double>(w_cos[k][0], w_cos[k][1]) * std::cos(double(k) * s);
    for (size_t k = 1; k <= w_sin.size(); ++k)
      v += std::complex<double>(w_sin[k - 1][0], w_sin[k - 1][1]) * std::sin(double(k) * s);
    return v;
  }

  void validate() const {
    for (int i = 0; i < config::curve_validate_samples; ++i) {
      double s = config::two_pi * i / config::curve_validate_samples;
      if (w(s).imag() <= 0)
        fail(errc::non_positive_height, "OpenBookSpec: Im(w) must stay positive");
    }
  }
};

// The exact binding curve Z(u) = cos u + k sin u.
inline TrigCurve binding_curve() {
  return TrigCurve({{0, 0, 0, 0}, {1, 0, 0, 0}}, {{0, 0, 0, 1}});
}

// General builder from closures; the result is projected onto trigonometric
// harmonics and re-validated.
inline Link3 build_open_book_link_fn(const std::function<double(double)>& thetaX,
                                     const std::function<std::complex<double>(double)>& wX,
                                     const std::function<double(double)>& thetaY,
                                     const std::function<std::complex<double>(double)>& wY,
                                     int harmonics = config::max_harmonics) {
  // Project onto the harmonic budget, then polish: re-projecting the
  // normalized curve pulls the truncation's off-sphere error down by an order
  // of magnitude or two without leaving the trigonometric model.
  auto fit = [&](const std::function<Quat(double)>& f) {
    TrigCurve c = project_to_harmonics(f, harmonics);
    for (int it = 0; it < 3; ++it) {
      TrigCurve prev = c;
      c = project_to_harmonics(
          [&](double s) {
            Quat v = prev.eval(s);
            return v * (1.0 / norm(v));
          },
          harmonics);
    }
    return c;
  };
  Link3 link;
  link.X = fit([&](double s) { return book_point(thetaX(s), wX(s)); });
  link.Y = fit([&](double t) { return book_point(thetaY(t), wY(t)); });
  link.Z = binding_curve();
  link.validate();
  return link;
}

inline Link3 build_open_book_link(const OpenBookSpec& specX, const OpenBookSpec& specY) {
  specX.validate();
  specY.validate();
  return build_open_book_link_fn([&](double s) { return specX.theta(s); },
                                 [&](double s) { return specX.w(s); },
                                 [&](double t) { return specY.theta(t); },
                                 [&](double t) { return specY.w(t); });
}

// --- genericity --------------------------------------------------------------

struct CriticalPoint {
  int component = 0;  // 0 = X, 1 = Y
  double param = 0;   // parameter of the critical point
  double value = 0;   // critical page angle, canonicalized
  int sign = 0;       // +1 local max of theta, -1 local min
  double second = 0;  // theta'' there
};

struct GenericityReport {
  std::vector<CriticalPoint> criticals;
};

namespace detail {

// theta(s) = arg(x1(s) + x2(s) i) along a curve; derivative via the explicit
// quotient, with the numerator g = x1 x2' - x2 x1'.
inline double page_angle_of(const TrigCurve& c, double s) {
  Quat q = c.eval(s);
  return page_angle(q);
}

inline double page_angle_deriv(const TrigCurve& c, double s) {
  Quat q = c.eval(s), d = c.deriv(s);
  double rho2 = q.x * q.x + q.y * q.y;
  if (rho2 <= config::binding_tol * config::binding_tol)
    fail(errc::on_binding, "page_angle_deriv: curve touches the binding");
  return (q.x * d.y - q.y * d.x) / rho2;
}

inline std::vector<CriticalPoint> critical_points_of(const TrigCurve& c, int comp) {
  std::vector<CriticalPoint> out;
  const int n = config::curve_validate_samples;
  double prev = page_angle_deriv(c, 0.0);
  for (int i = 1; i <= n; ++i) {
    double s = config::two_pi * i / n;
    double cur = page_angle_deriv(c, s);
    if ((prev < 0 && cur >= 0) || (prev > 0 && cur <= 0)) {
      double lo = config::two_pi * (i - 1) / n, hi = s;
      double flo = prev;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = page_angle_deriv(c, mid);
        if ((flo < 0) == (fm < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double s0 = 0.5 * (lo + hi);
      double h = 1e-5;
      double second = (page_angle_deriv(c, s0 + h) - page_angle_deriv(c, s0 - h)) / (2 * h);
      if (std::abs(second) < config::critical_second_deriv_tol)
        fail(errc::degenerate_critical, "genericity: degenerate critical point of the page angle");
      CriticalPoint cp;
      cp.component = comp;
      cp.param = s0;
      cp.value = page_angle_of(c, s0);
      cp.sign = second < 0 ? +1 : -1;
      cp.second = second;
      out.push_back(cp);
    }
    prev = cur;
  }
  return out;
}

} // namespace detail

// Checks that Z is the binding and that the page angle restricted to X and Y
// is Morse with one critical point per critical value.
inline GenericityReport genericity_check(const Link3& link) {
  const int n = 1024;
  for (int i = 0; i < n; ++i) {
    double u = config::two_pi * i / n;
    Quat z = link.Z.eval(u);
    Quat k = Quat{std::cos(u), 0, 0, std::sin(u)};
    if (norm(z - k) > config::open_book_tol)
      fail(errc::not_open_book, "genericity: Z is not the oriented binding K");
  }
  GenericityReport report;
  auto cx = detail::critical_points_of(link.X, 0);
  auto cy = detail::critical_points_of(link.Y, 1);
  report.criticals = cx;
  report.criticals.insert(report.criticals.end(), cy.begin(), cy.end());
  for (size_t i = 0; i < report.criticals.size(); ++i)
    for (size_t j = i + 1; j < report.criticals.size(); ++j) {
      double gap = std::abs(angle_diff(report.criticals[i].value, report.criticals[j].value));
      if (gap < config::critical_value_gap)
        fail(errc::shared_critical_value,
             "genericity: two critical points share a critical value");
    }
  return report;
}

// --- Gauss linking integral ---------------------------------------------------

// Orientation constant pinned by the calibration Lk(C, K) = +1, where C is the
// circle of page centers and K the binding, oriented as in the open book.
inline constexpr double gauss_sign = +1.0;

namespace detail {

// Stereographic projection from an arbitrary pole: rotate the pole to -1 by
// right multiplication, then project from -1.
struct StereoFromPole {
  Quat g;  // right factor: q -> q * g sends pole to -1
  explicit StereoFromPole(const UnitQuat& pole) : g(conj(pole) * -1.0) {}
  ImVec3 point(const Quat& q) const {
    Quat p = qmul(q, g);
    double denom = 1.0 + p.w;
    if (denom <= config::antipode_tol) fail(errc::pole_on_curve, "stereo: point hits the pole");
    return im(p) / denom;
  }
  ImVec3 tangent(const Quat& q, const Quat& dq) const {
    Quat p = qmul(q, g), dp = qmul(dq, g);
    double denom = 1.0 + p.w;
    ImVec3 ip = im(p), idp = im(dp);
    return (idp * denom - ip * dp.w) / (denom * denom);
  }
};

} // namespace detail

// Picks a pole maximizing the distance to both curves from a fixed candidate
// list; fails only if every candidate is too close.
inline UnitQuat choose_pole(const TrigCurve& A, const TrigCurve& B) {
  static const double r2 = std::sqrt(0.5);
  const Quat candidates[] = {
      {0.5, 0.5, 0.5, 0.5},   {0.5, -0.5, 0.5, -0.5}, {0.5, 0.5, -0.5, -0.5},
      {0.5, -0.5, -0.5, 0.5}, {r2, r2, 0, 0},         {r2, 0, r2, 0},
      {r2, 0, 0, r2},         {0, r2, r2, 0},         {0, r2, 0, r2},
      {0, 0, r2, r2},         {-1, 0, 0, 0},          {0, 1, 0, 0},
  };
  const int n = 512;
  double best = -1;
  Quat bestq = candidates[0];
  for (const Quat& cand : candidates) {
    double mind = 1e300;
    for (int i = 0; i < n; ++i) {
      double s = config::two_pi * i / n;
      mind = std::min(mind, std::min(norm(A.eval(s) - cand), norm(B.eval(s) - cand)));
    }
    if (mind > best) {
      best = mind;
      bestq = cand;
    }
  }
  if (best < config::pole_clearance) fail(errc::pole_on_curve, "choose_pole: no clear pole found");
  return UnitQuat(bestq);
}

struct GaussResult {
  int linking = 0;
  double estimate = 0;
  double residual = 0;
};

// Gauss double integral for Lk(A, B): project both curves from the pole and
// evaluate (1/4pi) iint (a' x b') . (a-b)/|a-b|^3 ds dt by the trapezoid rule.
inline GaussResult gauss_linking_full(const TrigCurve& A, const TrigCurve& B, const UnitQuat& pole,
                                      int N = config::gauss_grid) {
  detail::StereoFromPole st(pole);
  {
    const int n = 1024;
    for (int i = 0; i < n; ++i) {
      double s = config::two_pi * i / n;
      if (norm(A.eval(s) - pole) < config::pole_clearance ||
          norm(B.eval(s) - pole) < config::pole_clearance)
        fail(errc::pole_on_curve, "gauss_linking: pole too close to a curve");
    }
  }
  std::vector<ImVec3> a(N), da(N), b(N), db(N);
  for (int i = 0; i < N; ++i) {
    double s = config::two_pi * i / N;
    a[i] = st.point(A.eval(s));
    da[i] = st.tangent(A.eval(s), A.deriv(s));
    b[i] = st.point(B.eval(s));
    db[i] = st.tangent(B.eval(s), B.deriv(s));
  }
  std::vector<double> rows(N, 0.0);
  parallel_for(N, [&](int i) {
    double row = 0;
    for (int j = 0; j < N; ++j) {
      ImVec3 d = a[i] - b[j];
      double r = norm(d);
      row += dot(cross(da[i], db[j]), d) / (r * r * r);
    }
    rows[i] = row;
  });
  double sum = 0;
  for (double row : rows) sum += row;
  double h = config::two_pi / N;
  double estimate = gauss_sign * sum * h * h / (4.0 * config::pi);
  GaussResult res;
  res.estimate = estimate;
  res.linking = static_cast<int>(std::llround(estimate));
  res.residual = std::abs(estimate - res.linking);
  if (res.residual > config::gauss_residual_tol) {
    // curves that pass very close to each other need a finer trapezoid grid
    if (N < 4096) return gauss_linking_full(A, B, pole, 2 * N);
    fail(errc::non_integer_result,
         "gauss_linking: residual " + std::to_string(res.residual) + " exceeds tolerance");
  }
  return res;
}

inline int gauss_linking(const TrigCurve& A, const TrigCurve& B, const UnitQuat& pole,
                         int N = config::gauss_grid) {
  return gauss_linking_full(A, B, pole, N).linking;
}

inline int gauss_linking(const TrigCurve& A, const TrigCurve& B, int N = config::gauss_grid) {
  return gauss_linking_full(A, B, choose_pole(A, B), N).linking;
}

// Pairwise linking numbers in the paper's labeling:
//   p = Lk(Y,Z), q = Lk(X,Z), r = Lk(X,Y).
struct PairwiseLinking {
  int p = 0, q = 0, r = 0;
};

inline PairwiseLinking pairwise_linking(const Link3& link, int N = config::gauss_grid) {
  PairwiseLinking out;
  out.p = gauss_linking(link.Y, link.Z, N);
  out.q = gauss_linking(link.X, link.Z, N);
  out.r = gauss_linking(link.X, link.Y, N);
  return out;
}

} // namespace triplelink
