#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/quat.hpp"

namespace triplelink {

using Vec4 = std::array<double, 4>;

// Closed curve on S^3 given by a trigonometric polynomial
//   c(s) = sum_k A_k cos ks + B_k sin ks,   s in [0, 2pi),
// with A_k = cosCoeffs[k] (k = 0..K) and B_k = sinCoeffs[k-1] (k = 1..K).
// Derivatives are exact, which the spectral pipeline depends on.
class TrigCurve {
public:
  TrigCurve() = default;
  TrigCurve(std::vector<Vec4> cosCoeffs, std::vector<Vec4> sinCoeffs)
      : cos_(std::move(cosCoeffs)), sin_(std::move(sinCoeffs)) {
    if (cos_.empty()) cos_.push_back({0, 0, 0, 0});
    if (sin_.size() + 1 > static_cast<size_t>(config::max_harmonics) + 1 ||
        cos_.size() > static_cast<size_t>(config::max_harmonics) + 1)
      fail(errc::invalid_link, "TrigCurve: harmonic count exceeds cap");
  }

  int harmonics() const { return static_cast<int>(std::max(cos_.size() - 1, sin_.size())); }
  const std::vector<Vec4>& cos_coeffs() const { return cos_; }
  const std::vector<Vec4>& sin_coeffs() const { return sin_; }

  Quat eval(double s) const {
    Vec4 p{0, 0, 0, 0};
    for (size_t k = 0; k < cos_.size(); ++k) {
      double c = std::cos(k * s);
      for (int d = 0; d < 4; ++d) p[d] += cos_[k][d] * c;
    }
    for (size_t k = 1; k <= sin_.size(); ++k) {
      double c = std::sin(k * s);
      for (int d = 0; d < 4; ++d) p[d] += sin_[k - 1][d] * c;
    }
    return {p[0], p[1], p[2], p[3]};
  }

  Quat deriv(double s) const {
    Vec4 p{0, 0, 0, 0};
    for (size_t k = 1; k < cos_.size(); ++k) {
      double c = -static_cast<double>(k) * std::sin(k * s);
      for (int d = 0; d < 4; ++d) p[d] += cos_[k][d] * c;
    }
    for (size_t k = 1; k <= sin_.size(); ++k) {
      double c = static_cast<double>(k) * std::cos(k * s);
      for (int d = 0; d < 4; ++d) p[d] += sin_[k - 1][d] * c;
    }
    return {p[0], p[1], p[2], p[3]};
  }

  // on-sphere and immersion invariants, sampled
  void validate() const {
    int n = config::curve_validate_samples;
    for (int i = 0; i < n; ++i) {
      double s = config::two_pi * i / n;
      if (std::abs(norm(eval(s)) - 1.0) > config::on_sphere_tol)
        fail(errc::invalid_link, "TrigCurve: point off the unit sphere at s=" + std::to_string(s));
      if (norm(deriv(s)) < config::immersion_tol)
        fail(errc::invalid_link, "TrigCurve: vanishing derivative at s=" + std::to_string(s));
    }
  }

private:
  std::vector<Vec4> cos_{Vec4{0, 0, 0, 0}};
  std::vector<Vec4> sin_;
};

// Least-squares projection of a sampled closed curve onto at most `harmonics`
// trigonometric modes (plain DFT of uniform samples).  Used to import curves
// that are only available pointwise, e.g. open-book constructions.
inline TrigCurve project_to_harmonics(const std::function<Quat(double)>& f, int harmonics,
                                      int samples = config::curve_validate_samples) {
  if (harmonics < 1 || harmonics > config::max_harmonics)
    fail(errc::bad_input, "project_to_harmonics: harmonic count out of range");
  std::vector<Vec4> cs(harmonics + 1, Vec4{0, 0, 0, 0}), sn(harmonics, Vec4{0, 0, 0, 0});
  std::vector<Vec4> vals(samples);
  for (int i = 0; i < samples; ++i) {
    Quat q = f(config::two_pi * i / samples);
    vals[i] = {q.w, q.x, q.y, q.z};
  }
  for (int k = 0; k <= harmonics; ++k) {
    Vec4 ac{0, 0, 0, 0}, as{0, 0, 0, 0};
    for (int i = 0; i < samples; ++i) {
      double ang = config::two_pi * k * i / samples;
      double c = std::cos(ang), s = std::sin(ang);
      for (int d = 0; d < 4; ++d) {
        ac[d] += vals[i][d] * c;
        as[d] += vals[i][d] * s;
      }
    }
    double scale = (k == 0 ? 1.0 : 2.0) / samples;
    for (int d = 0; d < 4; ++d) {
      ac[d] *= scale;
      as[d] *= scale;
    }
    cs[k] = ac;
    if (k >= 1) sn[k - 1] = as;
  }
  return TrigCurve(std::move(cs), std::move(sn));
}

} // namespace triplelink
