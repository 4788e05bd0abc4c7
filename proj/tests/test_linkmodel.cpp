#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "triplelink/builders.hpp"
#include "triplelink/charfield.hpp"
#include "triplelink/fourier.hpp"
#include "triplelink/link.hpp"

using namespace triplelink;

TEST_CASE("built-in links satisfy the link invariants") {
  for (auto make : {builtin_borromean, builtin_unlink, builtin_clasp, builtin_generic_borromean,
                    builtin_split_pages}) {
    Link3 link = make();
    CHECK_NOTHROW(link.validate());
  }
}

TEST_CASE("borromean builtin") {
  Link3 b = builtin_borromean();
  Quat x0 = b.X.eval(0);
  CHECK(norm(x0 - Quat{0, 1, 0, 0}) < 1e-9);

  SECTION("pairwise linking vanishes (both pipelines)") {
    PairwiseLinking pl = pairwise_linking(b, 256);
    CHECK(pl.p == 0);
    CHECK(pl.q == 0);
    CHECK(pl.r == 0);
    Degrees d = degrees(omega_grid(b, 32));
    CHECK(d.p == 0);
    CHECK(d.q == 0);
    CHECK(d.r == 0);
  }
}

TEST_CASE("unlink builtin") {
  Link3 u = builtin_unlink();
  SECTION("components are far apart") {
    double best = 1e300;
    const TrigCurve* c[3] = {&u.X, &u.Y, &u.Z};
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        for (int i = 0; i < 128; ++i)
          for (int j = 0; j < 128; ++j)
            best = std::min(best, norm(c[a]->eval(config::two_pi * i / 128) -
                                       c[b]->eval(config::two_pi * j / 128)));
    CHECK(best > 0.5);
  }
  SECTION("all invariants vanish") {
    Degrees d = degrees(omega_grid(u, 32));
    CHECK(d.p == 0);
    CHECK(d.q == 0);
    CHECK(d.r == 0);
    double mu = mu_formula3(analyze(omega_grid(u, 32), 10));
    CHECK(std::abs(mu) <= 1e-3);
  }
}

TEST_CASE("gauss_linking calibration and properties") {
  // the circle of page centers C (i -> j) links the binding K (1 -> k) once,
  // positively
  TrigCurve C({{0, 0, 0, 0}, {0, 1, 0, 0}}, {{0, 0, 1, 0}});
  TrigCurve K = binding_curve();
  UnitQuat pole(0.5, 0.5, 0.5, 0.5);
  GaussResult g = gauss_linking_full(C, K, pole, 256);
  CHECK(g.linking == 1);
  CHECK(g.residual < 1e-6);

  SECTION("symmetry Lk(A,B) = Lk(B,A)") {
    Link3 L = builtin_generic_lpqr(2, 1, 1);
    CHECK(gauss_linking(L.X, L.Y) == gauss_linking(L.Y, L.X));
    CHECK(gauss_linking(L.X, L.Z) == gauss_linking(L.Z, L.X));
  }
  SECTION("pole independence") {
    UnitQuat pole2 = renormalized(Quat{0.3, -0.5, 0.6, 0.55});
    CHECK(gauss_linking_full(C, K, pole2, 256).linking == 1);
  }
  SECTION("split pairs do not link") {
    Link3 u = builtin_unlink();
    CHECK(gauss_linking(u.X, u.Y, 128) == 0);
    CHECK(gauss_linking(u.Y, u.Z, 128) == 0);
  }
  SECTION("pole too close to a curve is rejected") {
    CHECK_THROWS_AS(gauss_linking_full(C, K, UnitQuat(0, 1, 0, 0), 64), error);
  }
}

TEST_CASE("open-book builder") {
  SECTION("winding matches the linking number with the binding") {
    OpenBookSpec sx;
    sx.winding = 2;
    sx.w_cos = {{0, 1.8}, {0.3, 0}};
    sx.w_sin = {{0, 0.3}};
    OpenBookSpec sy;
    sy.winding = 1;
    sy.w_cos = {{0, 0.8}, {0.2, 0}};
    sy.w_sin = {{0, 0.2}};
    Link3 L = build_open_book_link(sx, sy);
    CHECK(gauss_linking(L.X, L.Z) == 2);
    CHECK(gauss_linking(L.Y, L.Z) == 1);
    CHECK(genericity_check(L).criticals.empty());
  }
  SECTION("negative height is rejected") {
    OpenBookSpec bad;
    bad.winding = 1;
    bad.w_cos = {{0, 0.5}, {0, 1.0}};  // Im(w) dips below zero
    OpenBookSpec ok;
    ok.winding = 1;
    ok.w_cos = {{0, 1.0}};
    CHECK_THROWS_AS(build_open_book_link(bad, ok), error);
  }
}

TEST_CASE("genericity_check") {
  SECTION("monotone lpqr builder has no critical points") {
    Link3 L = builtin_generic_lpqr(2, 1, 0);
    CHECK(genericity_check(L).criticals.empty());
  }
  SECTION("one perturbation hump gives two critical points on X") {
    Link3 L = build_open_book_link_fn(
        [](double s) { return s + 1.5 * std::sin(s); },
        [](double) { return std::complex<double>(0, 1.0); },
        [](double t) { return t; },
        [](double) { return std::complex<double>(0, 2.0); });
    GenericityReport rep = genericity_check(L);
    int onX = 0;
    for (const auto& c : rep.criticals)
      if (c.component == 0) ++onX;
    CHECK(onX == 2);
    CHECK(rep.criticals.size() == 2);
  }
  SECTION("two oscillating components give two critical points each") {
    Link3 L = build_open_book_link_fn(
        [](double s) { return 0.4 * std::sin(s); },
        [](double s) { return std::complex<double>(0.2 * std::sin(s), 1.0 - 0.2 * std::cos(s)); },
        [](double t) { return 1.7 + 0.35 * std::sin(t); },
        [](double t) { return std::complex<double>(0.2 * std::sin(t), 2.5 + 0.2 * std::cos(t)); });
    GenericityReport rep = genericity_check(L);
    CHECK(rep.criticals.size() == 4);
    int onX = 0, onY = 0;
    for (const auto& c : rep.criticals) (c.component == 0 ? onX : onY)++;
    CHECK(onX == 2);
    CHECK(onY == 2);
  }
  SECTION("links with Z off the binding are rejected") {
    CHECK_THROWS_AS(genericity_check(builtin_borromean()), error);
  }
  SECTION("shared critical values are rejected") {
    Link3 L = build_open_book_link_fn(
        [](double s) { return 0.5 * std::sin(s); },
        [](double s) { return std::complex<double>(0.2 * std::sin(s), 1.0 - 0.2 * std::cos(s)); },
        [](double t) { return 0.5 * std::sin(t); },  // same critical values as X
        [](double t) { return std::complex<double>(0.2 * std::sin(t), 2.5 + 0.2 * std::cos(t)); });
    CHECK_THROWS_AS(genericity_check(L), error);
  }
}

TEST_CASE("sampled-curve import projects and validates") {
  TrigCurve c = project_to_harmonics(
      [](double s) { return stereo_m1_inv({0.4 * std::cos(s), 0.4 * std::sin(s), 0.3}); }, 16);
  CHECK_NOTHROW(c.validate());
  CHECK(c.harmonics() <= 16);
}
