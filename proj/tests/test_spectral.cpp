#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "triplelink/charfield.hpp"
#include "triplelink/fourier.hpp"

using namespace triplelink;

namespace {

std::mt19937_64 rng(424242);

double urand(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

// random real band-limited 1-form (c_{-n} = conj(c_n), c_0 real)
FourierForm random_real_1form(int M, double scale = 1.0) {
  FourierForm f(1, M);
  std::normal_distribution<double> g(0.0, scale);
  for (int a = -M; a <= M; ++a)
    for (int b = -M; b <= M; ++b)
      for (int c = -M; c <= M; ++c) {
        if (std::make_tuple(a, b, c) < std::make_tuple(0, 0, 0)) continue;  // upper half + 0
        if (a == 0 && b == 0 && c == 0) {
          f.v(0, 0, 0) = {cplx(g(rng), 0), cplx(g(rng), 0), cplx(g(rng), 0)};
          continue;
        }
        Vec3c v{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
        f.v(a, b, c) = v;
        f.v(-a, -b, -c) = {std::conj(v.s), std::conj(v.t), std::conj(v.u)};
      }
  return f;
}

// random real exact band-limited 2-form
FourierForm random_exact_2form(int M, double scale = 1.0) {
  return d_op(random_real_1form(M, scale));
}

double coeff_distance(const FourierForm& a, const FourierForm& b) {
  REQUIRE(a.degree() == b.degree());
  REQUIRE(a.M() == b.M());
  double worst = 0;
  if (a.vector_valued()) {
    for (size_t i = 0; i < a.vec().size(); ++i)
      worst = std::max(worst, std::sqrt(norm2(a.vec()[i] - b.vec()[i])));
  } else {
    for (size_t i = 0; i < a.sc().size(); ++i)
      worst = std::max(worst, std::abs(a.sc()[i] - b.sc()[i]));
  }
  return worst;
}

double l2_inner(const FourierForm& a, const FourierForm& b) {
  // Re <a, b> = 8 pi^3 sum a_n . conj(b_n)
  cplx acc{0, 0};
  const int M = a.M();
  for (int i = -M; i <= M; ++i)
    for (int j = -M; j <= M; ++j)
      for (int k = -M; k <= M; ++k) {
        if (a.vector_valued()) {
          const Vec3c &x = a.v(i, j, k), &y = b.v(i, j, k);
          acc += x.s * std::conj(y.s) + x.t * std::conj(y.t) + x.u * std::conj(y.u);
        } else {
          acc += a.s(i, j, k) * std::conj(b.s(i, j, k));
        }
      }
  return acc.real() * 8 * config::pi * config::pi * config::pi;
}

} // namespace

TEST_CASE("analyze: pinned normalization") {
  SECTION("constant field") {
    Grid3 g(16);
    for (double& v : g.v) v = 1.0;
    FourierForm f = analyze_scalar(g, 4);
    CHECK(std::abs(f.s(0, 0, 0) - 1.0) < 1e-14);
    double off = 0;
    for (int a = -4; a <= 4; ++a)
      for (int b = -4; b <= 4; ++b)
        for (int c = -4; c <= 4; ++c)
          if (a || b || c) off = std::max(off, std::abs(f.s(a, b, c)));
    CHECK(off < 1e-14);
  }
  SECTION("cos(s) hits the two first modes at exactly 1/2") {
    Grid3 g(16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        for (int k = 0; k < 16; ++k) g.at(i, j, k) = std::cos(config::two_pi * i / 16);
    FourierForm f = analyze_scalar(g, 4);
    CHECK(std::abs(f.s(1, 0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(f.s(-1, 0, 0) - 0.5) < 1e-14);
  }
  SECTION("alias bound enforced") {
    Grid3 g(16);
    CHECK_THROWS_AS(analyze_scalar(g, 8), error);
  }
  SECTION("synthesize . analyze = id on band-limited fields") {
    FourierForm f = random_real_1form(3);
    Grid3 gs = synthesize_scalar(f, 16, 0);
    FourierForm back = analyze_scalar(gs, 3);
    double worst = 0;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int c = -3; c <= 3; ++c)
          worst = std::max(worst, std::abs(back.s(a, b, c) - f.v(a, b, c).s));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("operator table identities") {
  SECTION("d o d = 0") {
    FourierForm f0(0, 4);
    std::normal_distribution<double> g;
    for (auto& c : f0.sc()) c = {g(rng), g(rng)};
    CHECK(d_op(d_op(f0)).l2_norm() < 1e-13);
    FourierForm f1 = random_real_1form(4);
    CHECK(d_op(d_op(f1)).l2_norm() < 1e-13);
  }
  SECTION("delta o delta = 0") {
    FourierForm f3(3, 4);
    std::normal_distribution<double> g;
    for (auto& c : f3.sc()) c = {g(rng), g(rng)};
    CHECK(delta_op(delta_op(f3)).l2_norm() < 1e-13);
    FourierForm f2 = random_exact_2form(4);
    CHECK(delta_op(delta_op(f2)).l2_norm() < 1e-13);
  }
  SECTION("laplacian = d delta + delta d") {
    FourierForm f = random_real_1form(4);
    FourierForm lhs = laplacian_op(f);
    FourierForm rhs = d_op(delta_op(f));
    FourierForm rhs2 = delta_op(d_op(f));
    double worst = 0;
    for (size_t i = 0; i < lhs.vec().size(); ++i)
      worst = std::max(worst,
                       std::sqrt(norm2(lhs.vec()[i] - rhs.vec()[i] - rhs2.vec()[i])));
    CHECK(worst < 1e-12);
  }
  SECTION("laplacian o green = id on mean-zero forms") {
    FourierForm f = random_real_1form(4);
    f.v(0, 0, 0) = Vec3c{};
    CHECK(coeff_distance(laplacian_op(green_op(f)), f) < 1e-13);
  }
  SECTION("green rejects nonzero harmonic part") {
    FourierForm f = random_real_1form(3);
    f.v(0, 0, 0) = {cplx(1, 0), cplx(0, 0), cplx(0, 0)};
    CHECK_THROWS_AS(green_op(f), error);
  }
  SECTION("delta kills harmonic (constant-coefficient) forms exactly") {
    FourierForm f(1, 3);
    f.v(0, 0, 0) = {cplx(0.3, 0), cplx(-1.2, 0), cplx(0.7, 0)};
    FourierForm df = delta_op(f);
    for (const cplx& c : df.sc()) CHECK(c == cplx(0, 0));
  }
  SECTION("reality propagation") {
    FourierForm f = random_real_1form(4);
    CHECK(f.reality_defect() < 1e-12);
    CHECK(d_op(f).reality_defect() < 1e-12);
    CHECK(delta_op(f).reality_defect() < 1e-12);
    f.v(0, 0, 0) = Vec3c{};
    CHECK(green_op(f).reality_defect() < 1e-12);
  }
  SECTION("coefficientwise ker/im characterizations") {
    // closed 1-form <=> c_n parallel to n
    FourierForm f(1, 3);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int c = -3; c <= 3; ++c) {
          if (!a && !b && !c) continue;
          double lam = urand(-1, 1);
          f.v(a, b, c) = to_vec3c(a, b, c) * cplx(lam, urand(-1, 1));
        }
    CHECK(d_op(f).l2_norm() < 1e-12);
  }
}

TEST_CASE("alpha_min") {
  SECTION("single-mode hand value") {
    FourierForm w(2, 2);
    w.v(0, 0, 1) = {cplx(1, 0), cplx(0, 0), cplx(0, 0)};
    FourierForm a = alpha_min(w);
    // i (0,0,1) x (1,0,0) = i (0,1,0)
    CHECK(std::abs(a.v(0, 0, 1).s - cplx(0, 0)) < 1e-15);
    CHECK(std::abs(a.v(0, 0, 1).t - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(a.v(0, 0, 1).u - cplx(0, 0)) < 1e-15);
  }
  SECTION("d(alpha_min(w)) = w on random exact forms") {
    for (int it = 0; it < 20; ++it) {
      FourierForm w = random_exact_2form(4);
      CHECK(coeff_distance(d_op(alpha_min(w)), w) < 1e-12);
    }
  }
  SECTION("strict L2 minimality against closed perturbations") {
    FourierForm w = random_exact_2form(3);
    FourierForm a = alpha_min(w);
    for (int it = 0; it < 20; ++it) {
      // closed 1-form: c_n = lambda_n n for n != 0, plus a harmonic constant
      FourierForm tau(1, 3);
      for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j)
          for (int k = -3; k <= 3; ++k) {
            if (!i && !j && !k) {
              tau.v(0, 0, 0) = {cplx(urand(-1, 1), 0), cplx(urand(-1, 1), 0),
                                cplx(urand(-1, 1), 0)};
              continue;
            }
            tau.v(i, j, k) = to_vec3c(i, j, k) * cplx(urand(-0.3, 0.3), urand(-0.3, 0.3));
          }
      FourierForm sum(1, 3);
      for (size_t i = 0; i < sum.vec().size(); ++i) sum.vec()[i] = a.vec()[i] + tau.vec()[i];
      CHECK(coeff_distance(d_op(sum), w) < 1e-10);  // still a primitive of w
      CHECK(a.l2_norm() < sum.l2_norm());
    }
  }
  SECTION("harmonic component is rejected") {
    FourierForm w = random_exact_2form(3);
    w.v(0, 0, 0) = {cplx(1e-3, 0), cplx(0, 0), cplx(0, 0)};
    CHECK_THROWS_AS(alpha_min(w), error);
  }
  SECTION("genuinely non-closed input is rejected") {
    FourierForm w(2, 2);
    w.v(1, 0, 0) = {cplx(1, 0), cplx(0, 0), cplx(0, 0)};  // n.c != 0
    CHECK_THROWS_AS(alpha_min(w), error);
  }
}

TEST_CASE("Hodge decomposition") {
  for (int degree : {1, 2}) {
    FourierForm f = degree == 1 ? random_real_1form(3) : random_exact_2form(3);
    if (degree == 2) {
      // add harmonic + coexact junk so all three parts are present
      f.v(0, 0, 0) = {cplx(0.37, 0), cplx(-0.11, 0), cplx(0.05, 0)};
      f.v(1, 1, 0) = f.v(1, 1, 0) + to_vec3c(1, 1, 0) * cplx(0.4, 0.1);
      f.v(-1, -1, 0) = f.v(-1, -1, 0) + to_vec3c(-1, -1, 0) * cplx(0.4, -0.1);
    }
    HodgeParts h = hodge_decompose(f);
    CHECK(std::abs(l2_inner(h.im_delta, h.harmonic)) < 1e-12);
    CHECK(std::abs(l2_inner(h.im_delta, h.im_d)) < 1e-12);
    CHECK(std::abs(l2_inner(h.harmonic, h.im_d)) < 1e-12);
    FourierForm sum(f.degree(), f.M());
    for (size_t i = 0; i < sum.vec().size(); ++i)
      sum.vec()[i] = h.im_delta.vec()[i] + h.harmonic.vec()[i] + h.im_d.vec()[i];
    CHECK(coeff_distance(sum, f) < 1e-13);
    // the pieces land where they should
    if (degree == 1) {
      CHECK(d_op(h.im_d).l2_norm() < 1e-12);       // im d is closed
      CHECK(delta_op(h.im_delta).l2_norm() < 1e-12);  // im delta is coclosed
    } else {
      CHECK(delta_op(h.im_delta).l2_norm() < 1e-12);
      CHECK(d_op(h.im_d).l2_norm() < 1e-12);
    }
  }
}

TEST_CASE("mu formulas agree with each other") {
  SECTION("formula 1 = formula 3 on random exact band-limited forms") {
    for (int it = 0; it < 20; ++it) {
      FourierForm w = random_exact_2form(4, 0.3);
      double m1 = mu_formula1(w), m3 = mu_formula3(w);
      CHECK(std::abs(m1 - m3) < 1e-10 * (1 + std::abs(m3)));
    }
  }
  SECTION("complex-route imaginary residue vanishes") {
    FourierForm w = random_exact_2form(4, 0.3);
    cplx acc{0, 0};
    for (int a = -4; a <= 4; ++a)
      for (int b = -4; b <= 4; ++b)
        for (int c = -4; c <= 4; ++c) {
          if (!a && !b && !c) continue;
          double n2 = double(a) * a + double(b) * b + double(c) * c;
          acc += cplx(0, 1) *
                 dotc(crossc(w.v(a, b, c), w.v(-a, -b, -c)), to_vec3c(a, b, c)) / n2;
        }
    acc *= 4 * config::pi * config::pi * config::pi;
    CHECK(std::abs(acc.imag()) < 1e-12 * (1 + std::abs(acc.real())));
    CHECK(std::abs(acc.real() - mu_formula3(w)) < 1e-10 * (1 + std::abs(acc.real())));
  }
  SECTION("formula 2 (double sum) = formula 3 on band-limited fields at N = 12") {
    FourierForm w = random_exact_2form(5, 0.2);
    Grid3 vs = synthesize_scalar(w, 12, 0);
    Grid3 vt = synthesize_scalar(w, 12, 1);
    Grid3 vu = synthesize_scalar(w, 12, 2);
    double m2 = mu_formula2_direct(vs, vt, vu, 5);
    double m3 = mu_formula3(w);
    CHECK(std::abs(m2 - m3) < 1e-9 * (1 + std::abs(m3)));
  }
  SECTION("formula 2 of the zero field is zero") {
    Grid3 z(12);
    CHECK(mu_formula2_direct(z, z, z, 5) == 0.0);
  }
  SECTION("formula 2 rejects large grids") {
    Grid3 z(18);
    CHECK_THROWS_AS(mu_formula2_direct(z, z, z, 5), error);
  }
  SECTION("nonzero linking is rejected") {
    FourierForm w = random_exact_2form(3);
    w.v(0, 0, 0) = {cplx(1.0 / (4 * config::pi * config::pi), 0), cplx(0, 0), cplx(0, 0)};
    CHECK_THROWS_AS(mu_formula3(w), error);
    CHECK_THROWS_AS(mu_formula1(w), error);
  }
}

TEST_CASE("degrees residual gate") {
  FourierForm w(2, 2);
  w.v(0, 0, 0) = {cplx(0.3 / (4 * config::pi * config::pi), 0), cplx(0, 0), cplx(0, 0)};
  CHECK_THROWS_AS(degrees(w), error);
}

TEST_CASE("fundamental solution phi") {
  SECTION("mean over a grid vanishes") {
    double acc = 0;
    const int G = 32;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j)
        for (int k = 0; k < G; ++k)
          acc += phi_eval({config::two_pi * i / G, config::two_pi * j / G,
                           config::two_pi * k / G},
                          4);
    CHECK(std::abs(acc / (G * G * G)) < 1e-12);
  }
  SECTION("phi is even") {
    for (int it = 0; it < 20; ++it) {
      ImVec3 x{urand(0, config::two_pi), urand(0, config::two_pi), urand(0, config::two_pi)};
      CHECK(phi_eval(x, 6) == phi_eval({-x.x, -x.y, -x.z}, 6));
    }
  }
  SECTION("convolution with phi inverts the Laplacian (pinned coefficients)") {
    // phi-hat_n = 1/(8 pi^3 ||n||^2); convolution multiplies by 8 pi^3 phi-hat
    FourierForm f = random_real_1form(3);
    f.v(0, 0, 0) = Vec3c{};
    FourierForm conv(1, 3);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int c = -3; c <= 3; ++c) {
          if (!a && !b && !c) continue;
          double n2 = double(a) * a + double(b) * b + double(c) * c;
          double phihat = 1.0 / (8 * config::pi * config::pi * config::pi * n2);
          conv.v(a, b, c) =
              f.v(a, b, c) * (8 * config::pi * config::pi * config::pi * phihat);
        }
    CHECK(coeff_distance(laplacian_op(conv), f) < 1e-12);
    CHECK(coeff_distance(conv, green_op(f)) < 1e-14);
  }
  SECTION("2-torus variant at nmax 1 matches the hand-summed cosines") {
    for (int it = 0; it < 20; ++it) {
      double x = urand(-9, 9), y = urand(-9, 9);
      double hand = (2 * std::cos(x) + 2 * std::cos(y) + std::cos(x + y) + std::cos(x - y)) /
                    (4 * config::pi * config::pi);
      CHECK(std::abs(phi2_eval(x, y, 1) - hand) < 1e-12);
    }
  }
  SECTION("plot grid is symmetric with its peak next to the origin") {
    const int G = 61;  // odd: includes the exact origin
    std::vector<double> vals(G * G);
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        double x = -3 * config::pi + 6 * config::pi * i / (G - 1);
        double y = -3 * config::pi + 6 * config::pi * j / (G - 1);
        vals[i * G + j] = phi2_eval(x, y, 10);
      }
    double best = -1e300;
    int bi = 0, bj = 0;
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j)
        if (vals[i * G + j] > best) {
          best = vals[i * G + j];
          bi = i;
          bj = j;
        }
    // peak at a lattice copy of the origin
    double px = std::abs(angle_diff(-3 * config::pi + 6 * config::pi * bi / (G - 1), 0));
    double py = std::abs(angle_diff(-3 * config::pi + 6 * config::pi * bj / (G - 1), 0));
    CHECK(px < 0.4);
    CHECK(py < 0.4);
    // x <-> -x symmetry
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j)
        CHECK(std::abs(vals[i * G + j] - vals[(G - 1 - i) * G + (G - 1 - j)]) < 1e-12);
  }
}
