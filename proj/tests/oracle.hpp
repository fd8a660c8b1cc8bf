#pragma once

// Test-only arithmetic kept apart from the library: a bare 2x2 complex matrix,
// a seeded generator and a few closed forms. Nothing here calls into maskit.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace oracle {

using C = std::complex<double>;

struct M2 {
  C a, b, c, d;
  M2 operator*(const M2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  M2 inv() const { return {d, -b, -c, a}; }  // det 1 assumed
  C tr() const { return a + d; }
  C det() const { return a * d - b * c; }
};

inline const C I{0.0, 1.0};
inline M2 S() { return {1.0, 2.0, 0.0, 1.0}; }
inline M2 T(C mu) { return {-I * mu, -I, -I, 0.0}; }
inline M2 ident() { return {1.0, 0.0, 0.0, 1.0}; }

inline double dist(const M2& x, const M2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}
// Up to sign.
inline double pdist(const M2& x, const M2& y) {
  M2 ny{-y.a, -y.b, -y.c, -y.d};
  return std::min(dist(x, y), dist(x, ny));
}

// Stern-Brocot descent written independently: returns the word for p/q with
// 0 <= p/q <= 1 as a product of X^-1 ('x') and Y.
inline std::string sb_word(long p, long q) {
  if (q == 1 && p == 0) return "Y";
  if (q == 1 && p == 1) return "xY";
  long a = 0, b = 1, c = 1, d = 1;  // a/b < p/q < c/d
  std::string lo = "Y", hi = "xY";
  while (true) {
    long mp = a + c, mq = b + d;
    std::string mw = hi + lo;
    if (mp == p && mq == q) return mw;
    if (p * mq < mp * q) {
      c = mp, d = mq, hi = mw;
    } else {
      a = mp, b = mq, lo = mw;
    }
  }
}

inline M2 eval(const std::string& w, const M2& X, const M2& Y) {
  M2 r = ident();
  for (char ch : w) {
    switch (ch) {
      case 'X': r = r * X; break;
      case 'x': r = r * X.inv(); break;
      case 'Y': r = r * Y; break;
      case 'y': r = r * Y.inv(); break;
    }
  }
  return r;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  C box(double x0, double x1, double y0, double y1) { return {uniform(x0, x1), uniform(y0, y1)}; }
};

// Upper root of -mu^2 + 2 mu - 2 = t, the 1/2 trace polynomial.
inline C half_root(double t) { return {1.0, std::sqrt(1.0 + t)}; }

}  // namespace oracle
