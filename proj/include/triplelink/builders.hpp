#pragma once

#include <cmath>
#include <complex>

#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/link.hpp"

namespace triplelink {

namespace detail {

// C^5 polynomial step: 0 for xi <= 0, 1 for xi >= 1.  At the transition
// widths used here, the degree-11 step has far smaller trigonometric tail
// beyond 64 harmonics than an exp-based bump.
inline double smooth_step(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double x2 = x * x, x3 = x2 * x, x6 = x3 * x3;
  return x6 * (462 - 1980 * x + 3465 * x2 - 3080 * x3 + 1386 * x2 * x2 - 252 * x2 * x3);
}

} // namespace detail

// Generic representative of the base link L_pqr: Z is the binding, X winds q
// times and Y winds p times monotonically, and X wraps the matched strand of Y
// r times inside one page window (a tight meridional spiral).  Requires
// p, q >= 1.
inline Link3 builtin_generic_lpqr(int p, int q, int r) {
  if (p < 1 || q < 1) fail(errc::bad_input, "generic L_pqr builder needs p, q >= 1");
  const std::complex<double> w1{0, 1.9}, w2{0, 1.0};
  const double rhoX = 0.35, rhoY = 0.35, rhoSp = 0.02;
  // Braid window: |s - sstar| < h (wrapped).  The window spans most of the
  // circle -- capture selectivity comes from the tight spiral radius, not the
  // window width, and a wide window keeps the harmonic content low.  sstar
  // puts the matched Y strand at the top of its meridional circle, nearest
  // the X track.
  const double h = 2.4, rise = 0.3;
  const double sstar = canon_angle(config::pi * p / (2.0 * q));

  auto wY = [=](double t) {
    return w2 + rhoY * std::complex<double>(std::cos(t), std::sin(t));
  };
  auto wX = [=](double s) {
    std::complex<double> track = w1 + rhoX * std::complex<double>(std::cos(s), std::sin(s));
    if (r == 0) return track;
    double off = angle_diff(s, sstar);
    if (std::abs(off) >= h) return track;
    double xi = (off + h) / (2 * h);
    double beta = detail::smooth_step(xi / rise) * detail::smooth_step((1 - xi) / rise);
    double psi = config::two_pi * detail::smooth_step((xi - rise) / (1 - 2 * rise));
    // the page-matched strand of Y and its position in the pages
    double tmatch = config::pi / 2 + off * q / double(p);
    std::complex<double> target = wY(tmatch);
    std::complex<double> spiral =
        target + rhoSp * std::complex<double>(std::cos(r * psi), std::sin(r * psi));
    return (1 - beta) * track + beta * spiral;
  };
  return build_open_book_link_fn([=](double s) { return double(q) * s; }, wX,
                                 [=](double t) { return double(p) * t; }, wY);
}

// Single clasp between X and Y near page 0 (the analogue of the textbook
// clasp picture): one icycle, meridional degree -1.
inline Link3 builtin_clasp() {
  auto thetaX = [](double s) { return 0.5 * std::sin(s); };
  auto thetaY = [](double t) { return 0.8 - 0.45 * std::sin(t); };
  auto wX = [](double s) {
    return std::complex<double>(0.2 * std::sin(s), 1.0 - 0.2 * std::cos(s));
  };
  auto wY = [](double t) {
    return std::complex<double>(0.2 * std::sin(t) - 0.12 * std::sin(2 * t),
                                1.0 + 0.25 * std::cos(t));
  };
  return build_open_book_link_fn(thetaX, wX, thetaY, wY);
}

// Generic Borromean-class link: p = q = r = 0 but mu = +-1.  X and Y clasp
// twice with opposite signs; between the clasps the pages shift by a full
// turn (the second clasp lives one 2 pi level down), which is what makes the
// pattern essential.
inline Link3 builtin_generic_borromean() {
  const double A = (config::pi + 0.25) / 2;
  auto thetaX = [=](double s) { return -config::pi / 2 + A * std::sin(s); };
  auto thetaY = [=](double t) { return config::pi / 2 - A * std::sin(t); };
  auto wX = [](double s) {
    return std::complex<double>(0.25 * std::sin(s), 1.0 - 0.25 * std::cos(s));
  };
  // the cos term makes Y cross the X track in the same transverse direction
  // at both clasps, so the oppositely oriented icycles pick up opposite
  // meridional degrees (r = 0, mu = +-1)
  auto wY = [](double t) {
    return std::complex<double>(0.25 * std::sin(t) + 0.15 * std::cos(t),
                                1.0 + 0.3 * std::cos(t));
  };
  return build_open_book_link_fn(thetaX, wX, thetaY, wY);
}

// X and Y on disjoint page ranges: no common pages, so no isogonal set.
inline Link3 builtin_split_pages() {
  auto thetaX = [](double s) { return 0.3 + 0.2 * std::sin(s); };
  auto thetaY = [](double t) { return 2.0 + 0.2 * std::sin(t); };
  auto wX = [](double s) {
    return std::complex<double>(0.25 * std::sin(s), 1.0 - 0.25 * std::cos(s));
  };
  auto wY = [](double t) {
    return std::complex<double>(0.25 * std::sin(t), 1.6 + 0.25 * std::cos(t));
  };
  return build_open_book_link_fn(thetaX, wX, thetaY, wY);
}

} // namespace triplelink
