#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "triplelink/errors.hpp"

namespace triplelink {

// Integer residue mod m >= 0; m = 0 means plain integer arithmetic in Z.
// Houses mu in Z_gcd(p,q,r) and nu in Z_{2 gcd(p,q,r)}.
class ResidueClass {
public:
  ResidueClass() = default;
  ResidueClass(long long value, long long modulus) : m_(modulus) {
    if (modulus < 0) fail(errc::bad_input, "ResidueClass: modulus must be >= 0");
    v_ = canon(value);
  }

  long long value() const { return v_; }
  long long modulus() const { return m_; }

  ResidueClass operator+(const ResidueClass& o) const { return combine(o, v_ + o.v_); }
  ResidueClass operator-(const ResidueClass& o) const { return combine(o, v_ - o.v_); }
  ResidueClass operator*(const ResidueClass& o) const { return combine(o, v_ * o.v_); }
  bool operator==(const ResidueClass& o) const { return m_ == o.m_ && v_ == o.v_; }

  std::string str() const {
    std::ostringstream os;
    os << v_;
    if (m_ > 0) os << " (mod " << m_ << ")";
    return os.str();
  }

private:
  long long canon(long long v) const {
    if (m_ == 0) return v;
    long long r = v % m_;
    return r < 0 ? r + m_ : r;
  }
  ResidueClass combine(const ResidueClass& o, long long raw) const {
    if (m_ != o.m_) fail(errc::bad_input, "ResidueClass: mixed moduli");
    return ResidueClass(raw, m_);
  }

  long long v_ = 0;
  long long m_ = 0;
};

inline long long gcd3(long long p, long long q, long long r) {
  return std::gcd(std::gcd(std::llabs(p), std::llabs(q)), std::llabs(r));
}

// --- words in the three-letter alphabet {x, y, z} ------------------------------

enum class Symbol : uint8_t { x = 0, y = 1, z = 2 };

struct Letter {
  Symbol symbol;
  int exponent;  // +1 or -1
};

using Word = std::vector<Letter>;

inline Symbol parse_symbol(char c) {
  switch (c) {
    case 'x': return Symbol::x;
    case 'y': return Symbol::y;
    case 'z': return Symbol::z;
    default: fail(errc::bad_symbol, std::string("unknown symbol '") + c + "'");
  }
}

// Tokens are whitespace-separated: `x`, `x^-1` (also accepted: `x-`).
inline Word parse_word(const std::string& text) {
  Word w;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    Symbol sym = parse_symbol(tok[0]);
    int e = 1;
    std::string rest = tok.substr(1);
    if (rest.empty())
      e = 1;
    else if (rest == "-" || rest == "^-1")
      e = -1;
    else if (rest == "^1" || rest == "+")
      e = 1;
    else
      fail(errc::bad_symbol, "bad token '" + tok + "' (use x, x^-1 or x-)");
    w.push_back({sym, e});
  }
  return w;
}

inline std::string word_str(const Word& w) {
  std::string out;
  for (const Letter& l : w) {
    if (!out.empty()) out += ' ';
    out += "xyz"[static_cast<int>(l.symbol)];
    if (l.exponent < 0) out += "^-1";
  }
  return out;
}

// m_{ab}(w): signed count of ordered pairs i < j with w[i] = a^e, w[j] = b^f,
// each contributing e*f.  Linear-time via a running sum of `first` exponents.
inline long long m_count(const Word& w, Symbol first, Symbol second) {
  if (first == second) fail(errc::bad_symbol, "m_count: the two symbols must differ");
  long long prefix = 0, total = 0;
  for (const Letter& l : w) {
    if (l.symbol == second) total += prefix * l.exponent;
    if (l.symbol == first) prefix += l.exponent;
  }
  return total;
}

// Mellor-Melvin surface formula:
//   mu(L) = m_yz(w_X) + m_zx(w_Y) + m_xy(w_Z) - t  mod gcd(p,q,r),
// where t is the signed triple-point count of the Seifert surfaces.
inline ResidueClass mu_geometric(const Word& wX, const Word& wY, const Word& wZ, long long t,
                                 long long p, long long q, long long r) {
  long long mX = m_count(wX, Symbol::y, Symbol::z);
  long long mY = m_count(wY, Symbol::z, Symbol::x);
  long long mZ = m_count(wZ, Symbol::x, Symbol::y);
  return ResidueClass(mX + mY + mZ - t, gcd3(p, q, r));
}

// A delta move on three distinct components keeps all the words and drops t by
// one, so mu shifts by exactly +1 in the common residue ring.
inline ResidueClass delta_move_mu_shift(const Word& wX, const Word& wY, const Word& wZ,
                                        long long t_before, long long p, long long q, long long r) {
  ResidueClass before = mu_geometric(wX, wY, wZ, t_before, p, q, r);
  ResidueClass after = mu_geometric(wX, wY, wZ, t_before - 1, p, q, r);
  return after - before;
}

// Convenience: the word a^e as letters (e may be negative).
inline Word word_power(Symbol a, long long e) {
  Word w;
  int sign = e < 0 ? -1 : 1;
  for (long long i = 0; i < std::llabs(e); ++i) w.push_back({a, sign});
  return w;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

} // namespace triplelink
