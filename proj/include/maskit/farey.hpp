#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maskit/moebius.hpp"

namespace maskit {

// Reduced fraction p/q with q >= 0. 1/0 is the point at infinity.
struct Fraction {
  std::int64_t p = 0;
  std::int64_t q = 1;

  Fraction() = default;
  // Reduces and normalizes the sign; throws on 0/0.
  Fraction(std::int64_t num, std::int64_t den);

  static Fraction infinity() { return Fraction(1, 0); }
  bool is_infinite() const { return q == 0; }
  bool is_integral() const { return q == 1; }
  double value() const;
  std::string str() const;

  // Parses "p/q" or "p".
  static Fraction parse(const std::string& s);

  friend bool operator==(const Fraction& a, const Fraction& b) { return a.p == b.p && a.q == b.q; }
  friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
};

// a < b on the extended line, with 1/0 largest.
bool fraction_less(const Fraction& a, const Fraction& b);

bool is_neighbor(const Fraction& a, const Fraction& b);

// Stern-Brocot parents (a/b, c/d), a/b < f < c/d, of f in (0, 1].
// Throws std::invalid_argument for f outside (0, 1] or integral f other than 1/1.
std::pair<Fraction, Fraction> farey_parents(const Fraction& f);

// The upper parent r/s of f used to pair W_{p/q} with W_{r/s}; integers pair with 1/0.
Fraction upper_neighbor(const Fraction& f);

// Letters: 'x' = X^-1, 'X' = X, 'Y' = Y, 'y' = Y^-1.
struct FareyWord {
  Fraction fraction;
  std::string letters;
};

FareyWord word(const Fraction& f);

// Left-to-right product of letters. The SL(2) lift is kept (no sign canonicalization).
Mobius evaluate(const std::string& letters, const Mobius& X, const Mobius& Y);
inline Mobius evaluate(const FareyWord& w, const Mobius& X, const Mobius& Y) { return evaluate(w.letters, X, Y); }

std::string invert_letters(const std::string& letters);

// (m p + n r) / (m q + n s), reduced. Throws when p/q and r/s are not neighbors.
Fraction oz_compose(const Fraction& mn, const Fraction& pq, const Fraction& rs);

// Same denominator and p'/q' - p/q in nZ.
bool word_equal_mod_n(const Fraction& a, const Fraction& b, int n);

// Neighbor pairs (p/q, r/s) with 0 <= p/q <= 1, r/s the larger, q and s <= max_den.
std::vector<std::pair<Fraction, Fraction>> neighbor_pairs(int max_den);

// Reduced fractions in [lo, hi) with denominator <= max_den, sorted.
std::vector<Fraction> fractions_in(double lo, double hi, int max_den);

// max |W_{-s/q}[X, Z^-1] -+ S| with X = W_{p/q}, Z = W_{r/s} evaluated at mu,
// using 100-digit arithmetic. Intermediate products reach 1e45 and more for
// denominators near 20, so double precision cannot resolve the identity.
double oz_core_residual(const Fraction& pq, const Fraction& rs, cplx mu);

}  // namespace maskit
