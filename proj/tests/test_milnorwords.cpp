#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "triplelink/words.hpp"

using namespace triplelink;

namespace {

std::mt19937_64 rng(9090);

Word random_word(int maxlen) {
  std::uniform_int_distribution<int> len(0, maxlen), sym(0, 2), ex(0, 1);
  Word w;
  int n = len(rng);
  for (int i = 0; i < n; ++i)
    w.push_back({static_cast<Symbol>(sym(rng)), ex(rng) ? 1 : -1});
  return w;
}

// quadratic-time oracle straight from the definition
long long m_count_brute(const Word& w, Symbol first, Symbol second) {
  long long total = 0;
  for (size_t i = 0; i < w.size(); ++i)
    for (size_t j = i + 1; j < w.size(); ++j)
      if (w[i].symbol == first && w[j].symbol == second)
        total += w[i].exponent * w[j].exponent;
  return total;
}

} // namespace

TEST_CASE("m_count") {
  SECTION("x^q y^p counts pq") {
    for (auto [p, q] : {std::pair{3, 5}, {2, -4}, {-3, -2}, {1, 0}}) {
      Word w = concat(word_power(Symbol::x, q), word_power(Symbol::y, p));
      CHECK(m_count(w, Symbol::x, Symbol::y) == (long long)p * q);
    }
  }
  SECTION("empty word") {
    CHECK(m_count({}, Symbol::x, Symbol::y) == 0);
  }
  SECTION("commutator x y x^-1 y^-1") {
    Word w = parse_word("x y x^-1 y^-1");
    CHECK(m_count(w, Symbol::x, Symbol::y) == 1);
  }
  SECTION("equal symbols are rejected") {
    CHECK_THROWS_AS(m_count({}, Symbol::x, Symbol::x), error);
  }
  SECTION("matches the brute-force pair enumerator on 1000 random words") {
    for (int it = 0; it < 1000; ++it) {
      Word w = random_word(12);
      for (auto [a, b] : {std::pair{Symbol::x, Symbol::y},
                          {Symbol::y, Symbol::z},
                          {Symbol::z, Symbol::x},
                          {Symbol::y, Symbol::x}})
        CHECK(m_count(w, a, b) == m_count_brute(w, a, b));
    }
  }
  SECTION("reversal relation against brute force") {
    for (int it = 0; it < 200; ++it) {
      Word w = random_word(12);
      Word rev;
      for (auto it2 = w.rbegin(); it2 != w.rend(); ++it2)
        rev.push_back({it2->symbol, -it2->exponent});
      CHECK(m_count(rev, Symbol::x, Symbol::y) == m_count_brute(rev, Symbol::x, Symbol::y));
      CHECK(m_count(rev, Symbol::x, Symbol::y) == m_count_brute(w, Symbol::y, Symbol::x));
    }
  }
}

TEST_CASE("mu_geometric") {
  SECTION("L_pqr words give class 0") {
    for (auto [p, q, r] : {std::tuple{5, 3, -2}, {2, 4, 6}, {0, 0, 3}, {7, 7, 7}}) {
      Word wX = concat(word_power(Symbol::y, r), word_power(Symbol::z, q));
      Word wY = concat(word_power(Symbol::z, p), word_power(Symbol::x, r));
      Word wZ = concat(word_power(Symbol::x, q), word_power(Symbol::y, p));
      ResidueClass mu = mu_geometric(wX, wY, wZ, 0, p, q, r);
      CHECK(mu.modulus() == gcd3(p, q, r));
      CHECK(mu.value() == 0);
    }
  }
  SECTION("borromean-style commutator word gives 1") {
    ResidueClass mu = mu_geometric({}, {}, parse_word("x y x^-1 y^-1"), 0, 0, 0, 0);
    CHECK(mu.modulus() == 0);
    CHECK(mu.value() == 1);
  }
  SECTION("all empty words give the unlink value") {
    ResidueClass mu = mu_geometric({}, {}, {}, 0, 0, 0, 0);
    CHECK(mu.value() == 0);
  }
}

TEST_CASE("delta move shifts mu by exactly +1") {
  for (int it = 0; it < 50; ++it) {
    Word wX = random_word(8), wY = random_word(8), wZ = random_word(8);
    std::uniform_int_distribution<long long> ti(-5, 5);
    std::uniform_int_distribution<long long> pq(-4, 4);
    long long p = pq(rng), q = pq(rng), r = pq(rng), t = ti(rng);
    ResidueClass shift = delta_move_mu_shift(wX, wY, wZ, t, p, q, r);
    CHECK(shift == ResidueClass(1, gcd3(p, q, r)));
  }
  SECTION("gcd > 0: applying the shift gcd times returns the original class") {
    long long p = 6, q = 9, r = 3;  // gcd 3
    Word wZ = parse_word("x y x y y");
    ResidueClass before = mu_geometric({}, {}, wZ, 2, p, q, r);
    ResidueClass acc = before;
    for (int k = 0; k < 3; ++k) acc = acc + ResidueClass(1, gcd3(p, q, r));
    CHECK(acc == before);
  }
  SECTION("gcd = 0: shifts compose additively over Z") {
    ResidueClass a(5, 0), s(1, 0);
    CHECK((a + s + s + s).value() == 8);
  }
}

TEST_CASE("residue class arithmetic") {
  SECTION("canonicalization") {
    CHECK(ResidueClass(-1, 4).value() == 3);
    CHECK(ResidueClass(9, 4).value() == 1);
    CHECK(ResidueClass(-7, 0).value() == -7);
  }
  SECTION("mod 0 behaves as Z") {
    std::uniform_int_distribution<long long> d(-50, 50);
    for (int it = 0; it < 100; ++it) {
      long long a = d(rng), b = d(rng);
      CHECK((ResidueClass(a, 0) + ResidueClass(b, 0)).value() == a + b);
      CHECK((ResidueClass(a, 0) * ResidueClass(b, 0)).value() == a * b);
    }
  }
  SECTION("associativity and commutativity mod m") {
    std::uniform_int_distribution<long long> d(-50, 50);
    for (long long m : {1, 2, 7, 12}) {
      for (int it = 0; it < 50; ++it) {
        ResidueClass a(d(rng), m), b(d(rng), m), c(d(rng), m);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK((a * b) * c == a * (b * c));
      }
    }
  }
  SECTION("mixed moduli are rejected") {
    CHECK_THROWS_AS(ResidueClass(1, 2) + ResidueClass(1, 3), error);
  }
}

TEST_CASE("word parsing and printing") {
  Word w = parse_word("x y^-1 z- x^1");
  REQUIRE(w.size() == 4);
  CHECK(w[0].symbol == Symbol::x);
  CHECK(w[1].symbol == Symbol::y);
  CHECK(w[1].exponent == -1);
  CHECK(w[2].symbol == Symbol::z);
  CHECK(w[2].exponent == -1);
  CHECK(w[3].exponent == 1);
  CHECK(word_str(w) == "x y^-1 z^-1 x");
  CHECK_THROWS_AS(parse_word("x q"), error);
  CHECK_THROWS_AS(parse_word("x^2"), error);
}
