#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "triplelink/charfield.hpp"
#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/parallel.hpp"

namespace triplelink {

using cplx = std::complex<double>;

struct Vec3c {
  cplx s{0, 0}, t{0, 0}, u{0, 0};

  Vec3c operator+(const Vec3c& o) const { return {s + o.s, t + o.t, u + o.u}; }
  Vec3c operator-(const Vec3c& o) const { return {s - o.s, t - o.t, u - o.u}; }
  Vec3c operator*(cplx c) const { return {s * c, t * c, u * c}; }
  Vec3c operator*(double c) const { return {s * c, t * c, u * c}; }
};

inline cplx dotc(const Vec3c& a, const Vec3c& b) { return a.s * b.s + a.t * b.t + a.u * b.u; }
inline double norm2(const Vec3c& a) { return std::norm(a.s) + std::norm(a.t) + std::norm(a.u); }
inline Vec3c crossc(const Vec3c& a, const Vec3c& b) {
  return {a.t * b.u - a.u * b.t, a.u * b.s - a.s * b.u, a.s * b.t - a.t * b.s};
}
inline Vec3c to_vec3c(double n1, double n2, double n3) {
  return {cplx(n1, 0), cplx(n2, 0), cplx(n3, 0)};
}

// Truncated Fourier representation of a k-form on T^3 with the convention
//   f(x) = sum_{n in [-M..M]^3} c_n e^{i n.x} (. dx / . *dx / dV per degree).
// Coefficients are scalars for k in {0,3} and C^3 vectors for k in {1,2}.
class FourierForm {
public:
  FourierForm() = default;
  FourierForm(int degree, int M) : degree_(degree), M_(M) {
    if (degree < 0 || degree > 3) fail(errc::bad_input, "FourierForm: bad degree");
    if (M < 0) fail(errc::bad_input, "FourierForm: bad truncation");
    size_t n = static_cast<size_t>(side()) * side() * side();
    if (vector_valued())
      vec_.assign(n, Vec3c{});
    else
      sc_.assign(n, cplx{0, 0});
  }

  int degree() const { return degree_; }
  int M() const { return M_; }
  int side() const { return 2 * M_ + 1; }
  bool vector_valued() const { return degree_ == 1 || degree_ == 2; }

  size_t idx(int n1, int n2, int n3) const {
    return (static_cast<size_t>(n1 + M_) * side() + (n2 + M_)) * side() + (n3 + M_);
  }
  Vec3c& v(int n1, int n2, int n3) { return vec_[idx(n1, n2, n3)]; }
  const Vec3c& v(int n1, int n2, int n3) const { return vec_[idx(n1, n2, n3)]; }
  cplx& s(int n1, int n2, int n3) { return sc_[idx(n1, n2, n3)]; }
  const cplx& s(int n1, int n2, int n3) const { return sc_[idx(n1, n2, n3)]; }

  std::vector<Vec3c>& vec() { return vec_; }
  const std::vector<Vec3c>& vec() const { return vec_; }
  std::vector<cplx>& sc() { return sc_; }
  const std::vector<cplx>& sc() const { return sc_; }

  // Largest violation of c_{-n} = conj(c_n).
  double reality_defect() const {
    double worst = 0;
    for (int a = -M_; a <= M_; ++a)
      for (int b = -M_; b <= M_; ++b)
        for (int c = -M_; c <= M_; ++c) {
          if (vector_valued()) {
            Vec3c d = v(a, b, c) - Vec3c{std::conj(v(-a, -b, -c).s), std::conj(v(-a, -b, -c).t),
                                         std::conj(v(-a, -b, -c).u)};
            worst = std::max(worst, std::sqrt(norm2(d)));
          } else {
            worst = std::max(worst, std::abs(s(a, b, c) - std::conj(s(-a, -b, -c))));
          }
        }
    return worst;
  }

  // L^2 norm via Plancherel: ||f||^2 = 8 pi^3 sum |c_n|^2.
  double l2_norm() const {
    double acc = 0;
    if (vector_valued())
      for (const Vec3c& c : vec_) acc += norm2(c);
    else
      for (const cplx& c : sc_) acc += std::norm(c);
    return std::sqrt(8.0 * config::pi * config::pi * config::pi * acc);
  }

private:
  int degree_ = 0, M_ = 0;
  std::vector<Vec3c> vec_;
  std::vector<cplx> sc_;
};

namespace detail {

// Deterministic pairwise reduction of a term list (fixed recursion shape).
inline double pairwise_sum(const double* a, size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  size_t half = n / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}
inline double pairwise_sum(const std::vector<double>& a) { return pairwise_sum(a.data(), a.size()); }

// Partial DFT along one axis: keeps only frequencies in [-M, M], applying the
// 1/N normalization of that axis.  Values are exactly the full-FFT outputs of
// the retained modes, in a fixed summation order.
struct Twiddle {
  int N, M;
  std::vector<cplx> w;  // (2M+1) x N
  Twiddle(int N_, int M_) : N(N_), M(M_), w(static_cast<size_t>(2 * M_ + 1) * N_) {
    for (int n = -M; n <= M; ++n)
      for (int i = 0; i < N; ++i) {
        double ang = -config::two_pi * n * i / N;
        w[static_cast<size_t>(n + M) * N + i] = cplx(std::cos(ang), std::sin(ang)) * (1.0 / N);
      }
  }
  const cplx* row(int n) const { return &w[static_cast<size_t>(n + M) * N]; }
};

} // namespace detail

// Forward transform of a real scalar grid, truncated to [-M..M]^3, with the
// normalization that makes coefficients the series coefficients c_n.
inline FourierForm analyze_scalar(const Grid3& g, int M, int degree = 0) {
  const int N = g.N;
  if (M > N / 2 - 1) fail(errc::alias_bound, "analyze: M must be at most N/2 - 1");
  if (M < 0) fail(errc::bad_input, "analyze: M must be nonnegative");
  const int K = 2 * M + 1;
  detail::Twiddle tw(N, M);

  // axis u
  std::vector<cplx> A(static_cast<size_t>(N) * N * K);
  parallel_for(N, [&](int i) {
    for (int j = 0; j < N; ++j) {
      const double* src = &g.v[(static_cast<size_t>(i) * N + j) * N];
      cplx* dst = &A[(static_cast<size_t>(i) * N + j) * K];
      for (int m = 0; m < K; ++m) {
        const cplx* row = tw.row(m - M);
        cplx acc{0, 0};
        for (int k = 0; k < N; ++k) acc += src[k] * row[k];
        dst[m] = acc;
      }
    }
  });
  // axis t
  std::vector<cplx> B(static_cast<size_t>(N) * K * K);
  parallel_for(N, [&](int i) {
    for (int l = 0; l < K; ++l) {
      const cplx* row = tw.row(l - M);
      for (int m = 0; m < K; ++m) {
        cplx acc{0, 0};
        for (int j = 0; j < N; ++j) acc += A[(static_cast<size_t>(i) * N + j) * K + m] * row[j];
        B[(static_cast<size_t>(i) * K + l) * K + m] = acc;
      }
    }
  });
  // axis s
  FourierForm f(degree, M);
  parallel_for(K, [&](int h) {
    const cplx* row = tw.row(h - M);
    for (int l = 0; l < K; ++l)
      for (int m = 0; m < K; ++m) {
        cplx acc{0, 0};
        for (int i = 0; i < N; ++i) acc += B[(static_cast<size_t>(i) * K + l) * K + m] * row[i];
        f.s(h - M, l - M, m - M) = acc;
      }
  });
  return f;
}

// Forward transform of a sampled 2-form (component order (a,b,c) = *dx slots).
inline FourierForm analyze(const OmegaField& w, int M) {
  FourierForm fa = analyze_scalar(w.a, M);
  FourierForm fb = analyze_scalar(w.b, M);
  FourierForm fc = analyze_scalar(w.c, M);
  FourierForm f(2, M);
  const size_t n = fa.sc().size();
  for (size_t i = 0; i < n; ++i) f.vec()[i] = {fa.sc()[i], fb.sc()[i], fc.sc()[i]};
  return f;
}

// Inverse transform of one scalar coefficient lattice onto an N^3 grid.
inline Grid3 synthesize_scalar(const FourierForm& f, int N, int component = -1) {
  const int M = f.M();
  if (M > N / 2 - 1) fail(errc::alias_bound, "synthesize: M must be at most N/2 - 1");
  const int K = 2 * M + 1;
  auto coeff = [&](size_t i) -> cplx {
    if (!f.vector_valued()) return f.sc()[i];
    switch (component) {
      case 0: return f.vec()[i].s;
      case 1: return f.vec()[i].t;
      default: return f.vec()[i].u;
    }
  };
  std::vector<cplx> w(static_cast<size_t>(K) * N);
  for (int n = -M; n <= M; ++n)
    for (int i = 0; i < N; ++i) {
      double ang = config::two_pi * n * i / N;
      w[static_cast<size_t>(n + M) * N + i] = cplx(std::cos(ang), std::sin(ang));
    }
  // axis s, then t, then u
  std::vector<cplx> A(static_cast<size_t>(N) * K * K);
  parallel_for(N, [&](int i) {
    for (int l = 0; l < K; ++l)
      for (int m = 0; m < K; ++m) {
        cplx acc{0, 0};
        for (int h = 0; h < K; ++h)
          acc += coeff((static_cast<size_t>(h) * K + l) * K + m) * w[static_cast<size_t>(h) * N + i];
        A[(static_cast<size_t>(i) * K + l) * K + m] = acc;
      }
  });
  std::vector<cplx> B(static_cast<size_t>(N) * N * K);
  parallel_for(N, [&](int i) {
    for (int j = 0; j < N; ++j)
      for (int m = 0; m < K; ++m) {
        cplx acc{0, 0};
        for (int l = 0; l < K; ++l)
          acc += A[(static_cast<size_t>(i) * K + l) * K + m] * w[static_cast<size_t>(l) * N + j];
        B[(static_cast<size_t>(i) * N + j) * K + m] = acc;
      }
  });
  Grid3 out(N);
  parallel_for(N, [&](int i) {
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        cplx acc{0, 0};
        for (int m = 0; m < K; ++m)
          acc += B[(static_cast<size_t>(i) * N + j) * K + m] * w[static_cast<size_t>(m) * N + k];
        out.at(i, j, k) = acc.real();
      }
  });
  return out;
}

// --- the Fourier operator table ----------------------------------------------

inline FourierForm d_op(const FourierForm& f) {
  const int M = f.M();
  switch (f.degree()) {
    case 0: {
      FourierForm out(1, M);
      for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
          for (int c = -M; c <= M; ++c)
            out.v(a, b, c) = to_vec3c(a, b, c) * (cplx(0, 1) * f.s(a, b, c));
      return out;
    }
    case 1: {
      FourierForm out(2, M);
      for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
          for (int c = -M; c <= M; ++c)
            out.v(a, b, c) = crossc(to_vec3c(a, b, c), f.v(a, b, c)) * cplx(0, 1);
      return out;
    }
    case 2: {
      FourierForm out(3, M);
      for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
          for (int c = -M; c <= M; ++c)
            out.s(a, b, c) = cplx(0, 1) * dotc(to_vec3c(a, b, c), f.v(a, b, c));
      return out;
    }
    default:
      fail(errc::bad_input, "d_op: d of a 3-form is not represented");
  }
}

inline FourierForm delta_op(const FourierForm& f) {
  const int M = f.M();
  switch (f.degree()) {
    case 1: {
      FourierForm out(0, M);
      for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
          for (int c = -M; c <= M; ++c)
            out.s(a, b, c) = cplx(0, -1) * dotc(to_vec3c(a, b, c), f.v(a, b, c));
      return out;
    }
    case 2: {
      FourierForm out(1, M);
      for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
          for (int c = -M; c <= M; ++c)
            out.v(a, b, c) = crossc(to_vec3c(a, b, c), f.v(a, b, c)) * cplx(0, 1);
      return out;
    }
    case 3: {
      FourierForm out(2, M);
      for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
          for (int c = -M; c <= M; ++c)
            out.v(a, b, c) = to_vec3c(a, b, c) * (cplx(0, -1) * f.s(a, b, c));
      return out;
    }
    default:
      fail(errc::bad_input, "delta_op: delta of a 0-form is not represented");
  }
}

inline FourierForm laplacian_op(const FourierForm& f) {
  const int M = f.M();
  FourierForm out = f;
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        double n2 = double(a) * a + double(b) * b + double(c) * c;
        if (f.vector_valued())
          out.v(a, b, c) = f.v(a, b, c) * n2;
        else
          out.s(a, b, c) = f.s(a, b, c) * n2;
      }
  return out;
}

inline FourierForm green_op(const FourierForm& f) {
  const int M = f.M();
  double c0 = f.vector_valued() ? std::sqrt(norm2(f.v(0, 0, 0))) : std::abs(f.s(0, 0, 0));
  if (c0 > config::mean_zero_tol)
    fail(errc::non_mean_zero, "green_op: input has nonzero harmonic part");
  FourierForm out = f;
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        double n2 = double(a) * a + double(b) * b + double(c) * c;
        if (n2 == 0) {
          if (f.vector_valued())
            out.v(a, b, c) = Vec3c{};
          else
            out.s(a, b, c) = 0;
        } else if (f.vector_valued()) {
          out.v(a, b, c) = f.v(a, b, c) * (1.0 / n2);
        } else {
          out.s(a, b, c) = f.s(a, b, c) * (1.0 / n2);
        }
      }
  return out;
}

// Hodge decomposition into (im delta, harmonic, im d) parts.
struct HodgeParts {
  FourierForm im_delta, harmonic, im_d;
};

inline HodgeParts hodge_decompose(const FourierForm& f) {
  const int M = f.M();
  HodgeParts h{FourierForm(f.degree(), M), FourierForm(f.degree(), M), FourierForm(f.degree(), M)};
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        if (a == 0 && b == 0 && c == 0) {
          if (f.vector_valued())
            h.harmonic.v(0, 0, 0) = f.v(0, 0, 0);
          else
            h.harmonic.s(0, 0, 0) = f.s(0, 0, 0);
          continue;
        }
        if (!f.vector_valued()) {
          // 0-forms: nonconstant part is im delta; 3-forms: im d.
          if (f.degree() == 0)
            h.im_delta.s(a, b, c) = f.s(a, b, c);
          else
            h.im_d.s(a, b, c) = f.s(a, b, c);
          continue;
        }
        double n2 = double(a) * a + double(b) * b + double(c) * c;
        Vec3c n = to_vec3c(a, b, c);
        cplx along = dotc(f.v(a, b, c), n) / n2;
        Vec3c parallel = n * along;
        Vec3c perp = f.v(a, b, c) - parallel;
        if (f.degree() == 1) {
          h.im_d.v(a, b, c) = parallel;   // 1-forms: c_n || n lies in im d
          h.im_delta.v(a, b, c) = perp;
        } else {
          h.im_delta.v(a, b, c) = parallel;  // 2-forms: roles swap
          h.im_d.v(a, b, c) = perp;
        }
      }
  return h;
}

// Minimal-norm primitive of an exact 2-form: alpha = delta(Green(omega)), so
// d(alpha) = omega and alpha has least L^2 norm among all primitives.
inline FourierForm alpha_min(const FourierForm& omega) {
  if (omega.degree() != 2) fail(errc::bad_input, "alpha_min: expects a 2-form");
  const int M = omega.M();
  double c0 = std::sqrt(norm2(omega.v(0, 0, 0)));
  if (c0 > config::exactness_c0_tol)
    fail(errc::not_exact, "alpha_min: omega has a harmonic component");
  // closedness gate: n.c_n must vanish.  The defect is measured against the
  // form's overall coefficient scale (times ||n||); a per-mode ratio would be
  // ill-conditioned at the truncation edge where c_n itself underflows.
  double maxnorm = 0;
  for (const Vec3c& c : omega.vec()) maxnorm = std::max(maxnorm, std::sqrt(norm2(c)));
  if (maxnorm > 0)
    for (int a = -M; a <= M; ++a)
      for (int b = -M; b <= M; ++b)
        for (int c = -M; c <= M; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          double nn = std::sqrt(double(a) * a + double(b) * b + double(c) * c);
          double defect = std::abs(dotc(to_vec3c(a, b, c), omega.v(a, b, c))) / (nn * maxnorm);
          if (defect > config::closedness_tol)
            fail(errc::not_exact, "alpha_min: omega is not closed");
        }
  return delta_op(green_op(omega));
}

// integral of alpha ^ omega over T^3 = 8 pi^3 sum_n alpha_n . omega_{-n}.
inline cplx wedge_integral(const FourierForm& alpha, const FourierForm& omega) {
  if (alpha.degree() != 1 || omega.degree() != 2)
    fail(errc::bad_input, "wedge_integral: expects a 1-form and a 2-form");
  const int M = std::min(alpha.M(), omega.M());
  cplx acc{0, 0};
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) acc += dotc(alpha.v(a, b, c), omega.v(-a, -b, -c));
  return acc * (8.0 * config::pi * config::pi * config::pi);
}

// --- degrees and the mu formulas ----------------------------------------------

struct Degrees {
  int p = 0, q = 0, r = 0;
  double residual[3] = {0, 0, 0};
};

// Subtorus degrees from the harmonic coefficient: deg = 4 pi^2 c_0, per slot.
inline Degrees degrees(const FourierForm& omega) {
  if (omega.degree() != 2) fail(errc::bad_input, "degrees: expects a 2-form");
  Vec3c c0 = omega.v(0, 0, 0);
  double vals[3] = {4 * config::pi * config::pi * c0.s.real(),
                    4 * config::pi * config::pi * c0.t.real(),
                    4 * config::pi * config::pi * c0.u.real()};
  Degrees d;
  int snap[3];
  for (int i = 0; i < 3; ++i) {
    snap[i] = static_cast<int>(std::llround(vals[i]));
    d.residual[i] = std::abs(vals[i] - snap[i]);
    if (d.residual[i] > config::degree_residual_tol)
      fail(errc::non_integer_degree,
           "degrees: residual " + std::to_string(d.residual[i]) +
               " exceeds tolerance; the grid is under-resolved, increase N");
  }
  d.p = snap[0];
  d.q = snap[1];
  d.r = snap[2];
  return d;
}

inline Degrees degrees(const OmegaField& w) {
  double vals[3] = {4 * config::pi * config::pi * w.a.mean(),
                    4 * config::pi * config::pi * w.b.mean(),
                    4 * config::pi * config::pi * w.c.mean()};
  Degrees d;
  int snap[3];
  for (int i = 0; i < 3; ++i) {
    snap[i] = static_cast<int>(std::llround(vals[i]));
    d.residual[i] = std::abs(vals[i] - snap[i]);
    if (d.residual[i] > config::degree_residual_tol)
      fail(errc::non_integer_degree,
           "degrees: residual " + std::to_string(d.residual[i]) +
               " exceeds tolerance; the grid is under-resolved, increase N");
  }
  d.p = snap[0];
  d.q = snap[1];
  d.r = snap[2];
  return d;
}

namespace detail {

inline void require_null_degrees(const FourierForm& omega, const char* who) {
  Degrees d = degrees(omega);
  if (d.p != 0 || d.q != 0 || d.r != 0)
    fail(errc::nonzero_linking, std::string(who) + ": pairwise linking numbers must vanish");
}

} // namespace detail

// Fourier-series formula: mu = 8 pi^3 sum_{n != 0} (a_n x b_n) . n / ||n||^2,
// summed in lexicographic order with pairwise reduction.
inline double mu_formula3(const FourierForm& omega) {
  if (omega.degree() != 2) fail(errc::bad_input, "mu_formula3: expects a 2-form");
  detail::require_null_degrees(omega, "mu_formula3");
  const int M = omega.M();
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(omega.side()) * omega.side() * omega.side());
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const Vec3c& cn = omega.v(a, b, c);
        ImVec3 an{cn.s.real(), cn.t.real(), cn.u.real()};
        ImVec3 bn{cn.s.imag(), cn.t.imag(), cn.u.imag()};
        double n2 = double(a) * a + double(b) * b + double(c) * c;
        terms.push_back(dot(cross(an, bn), ImVec3{double(a), double(b), double(c)}) / n2);
      }
  return 8.0 * config::pi * config::pi * config::pi * detail::pairwise_sum(terms);
}

// Whitehead-style formula: mu = 1/2 int delta(phi * omega) ^ omega, computed
// through the operator calculus (an independent code path from formula 3).
inline double mu_formula1(const FourierForm& omega) {
  if (omega.degree() != 2) fail(errc::bad_input, "mu_formula1: expects a 2-form");
  detail::require_null_degrees(omega, "mu_formula1");
  FourierForm alpha = alpha_min(omega);
  cplx val = wedge_integral(alpha, omega) * 0.5;
  return val.real();
}

// --- fundamental solution of the Laplacian -----------------------------------

// phi(x) = (1/8pi^3) sum_{n != 0, |n|_inf <= M} cos(n.x) / ||n||^2.
inline double phi_eval(const ImVec3& x, int M) {
  if (M < 1) fail(errc::bad_input, "phi_eval: M must be at least 1");
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(2 * M + 1) * (2 * M + 1) * (2 * M + 1));
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        double n2 = double(a) * a + double(b) * b + double(c) * c;
        terms.push_back(std::cos(a * x.x + b * x.y + c * x.z) / n2);
      }
  return detail::pairwise_sum(terms) / (8.0 * config::pi * config::pi * config::pi);
}

// grad phi at x (same truncation).
inline ImVec3 phi_grad(const ImVec3& x, int M) {
  ImVec3 acc{0, 0, 0};
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        double n2 = double(a) * a + double(b) * b + double(c) * c;
        double sn = std::sin(a * x.x + b * x.y + c * x.z) / n2;
        acc.x -= a * sn;
        acc.y -= b * sn;
        acc.z -= c * sn;
      }
  return acc / (8.0 * config::pi * config::pi * config::pi);
}

// Helicity-style double sum (Theorem-B formula (2)): the N^6 trapezoid sum
// over grid pairs with grad phi truncated at M_phi.  For band-limited fields
// with bandwidth <= N/2 - 1 the trapezoid rule is exact, and the result equals
// the Fourier-series formula on the same coefficients.
inline double mu_formula2_direct(const Grid3& vs, const Grid3& vt, const Grid3& vu, int M_phi) {
  const int N = vs.N;
  if (N > config::mu2_max_grid) fail(errc::grid_too_large, "mu_formula2_direct: N^6 cost, N <= 16");
  if (vt.N != N || vu.N != N) fail(errc::bad_input, "mu_formula2_direct: mismatched grids");
  if (M_phi < 1 || M_phi > N / 2 - 1) fail(errc::alias_bound, "mu_formula2_direct: bad M_phi");

  // gradient table on the N^3 offset lattice (x - y is again a grid point)
  std::vector<ImVec3> gp(static_cast<size_t>(N) * N * N);
  parallel_for(N, [&](int i) {
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        ImVec3 x{config::two_pi * i / N, config::two_pi * j / N, config::two_pi * k / N};
        gp[(static_cast<size_t>(i) * N + j) * N + k] = phi_grad(x, M_phi);
      }
  });

  const double h3 = std::pow(config::two_pi / N, 3);
  std::vector<double> slices(N, 0.0);
  parallel_for(N, [&](int i1) {
    double acc = 0;
    for (int j1 = 0; j1 < N; ++j1)
      for (int k1 = 0; k1 < N; ++k1) {
        ImVec3 vx{vs.at(i1, j1, k1), vt.at(i1, j1, k1), vu.at(i1, j1, k1)};
        for (int i2 = 0; i2 < N; ++i2) {
          int di = i1 - i2 < 0 ? i1 - i2 + N : i1 - i2;
          for (int j2 = 0; j2 < N; ++j2) {
            int dj = j1 - j2 < 0 ? j1 - j2 + N : j1 - j2;
            const ImVec3* gprow = &gp[(static_cast<size_t>(di) * N + dj) * N];
            for (int k2 = 0; k2 < N; ++k2) {
              int dk = k1 - k2 < 0 ? k1 - k2 + N : k1 - k2;
              ImVec3 vy{vs.at(i2, j2, k2), vt.at(i2, j2, k2), vu.at(i2, j2, k2)};
              // grad_y phi(x - y) = -(grad phi)(x - y)
              acc -= dot(cross(vx, vy), gprow[dk]);
            }
          }
        }
      }
    slices[i1] = acc;
  });
  double total = detail::pairwise_sum(slices);
  return 0.5 * total * h3 * h3;
}

// 2-torus analogue of phi, truncated at |n|_inf <= M; used for figure data.
inline double phi2_eval(double x, double y, int M) {
  std::vector<double> terms;
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b) {
      if (a == 0 && b == 0) continue;
      double n2 = double(a) * a + double(b) * b;
      terms.push_back(std::cos(a * x + b * y) / n2);
    }
  return detail::pairwise_sum(terms) / (4.0 * config::pi * config::pi);
}

// gnuplot-style grid data for the 2-torus fundamental solution over
// [-3pi, 3pi]^2 (blank line between x-blocks).
inline std::string phi_plot2d(int M, int grid) {
  if (M < 1 || grid < 2) fail(errc::bad_input, "phi_plot2d: bad parameters");
  std::string out;
  char buf[96];
  for (int i = 0; i < grid; ++i) {
    double x = -3 * config::pi + 6 * config::pi * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      double y = -3 * config::pi + 6 * config::pi * j / (grid - 1);
      std::snprintf(buf, sizeof buf, "%.12g %.12g %.17g\n", x, y, phi2_eval(x, y, M));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

} // namespace triplelink
