#include "maskit/farey.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace maskit {

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  if (num == 0 && den == 0) throw std::invalid_argument("0/0 is not a fraction");
  if (den == 0) {
    p = 1;
    q = 0;
    return;
  }
  if (den < 0) num = -num, den = -den;
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  p = num / g;
  q = den / g;
}

double Fraction::value() const {
  if (q == 0) return HUGE_VAL;
  return static_cast<double>(p) / static_cast<double>(q);
}

std::string Fraction::str() const { return std::to_string(p) + "/" + std::to_string(q); }

Fraction Fraction::parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      std::int64_t v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Fraction(v, 1);
    }
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    std::size_t ua = 0, ub = 0;
    std::int64_t num = std::stoll(a, &ua), den = std::stoll(b, &ub);
    if (ua != a.size() || ub != b.size()) throw std::invalid_argument(s);
    return Fraction(num, den);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad fraction: " + s);
  }
}

bool fraction_less(const Fraction& a, const Fraction& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return static_cast<__int128>(a.p) * b.q < static_cast<__int128>(b.p) * a.q;
}

bool is_neighbor(const Fraction& a, const Fraction& b) {
  __int128 det = static_cast<__int128>(a.p) * b.q - static_cast<__int128>(b.p) * a.q;
  return det == 1 || det == -1;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

// Stern-Brocot descent for 0 < f < 1, non-integral.
std::pair<Fraction, Fraction> descend(const Fraction& f) {
  std::int64_t a = 0, b = 1, c = 1, d = 0;
  for (;;) {
    std::int64_t mp = a + c, mq = b + d;
    if (mp == f.p && mq == f.q) return {Fraction(a, b), Fraction(c, d)};
    if (static_cast<__int128>(f.p) * mq < static_cast<__int128>(mp) * f.q) {
      c = mp;
      d = mq;
    } else {
      a = mp;
      b = mq;
    }
  }
}

std::string base_word(const Fraction& f);

struct WordCache {
  std::shared_mutex mu;
  std::map<std::pair<std::int64_t, std::int64_t>, std::string> words;
};

WordCache& cache() {
  static WordCache c;
  return c;
}

std::string base_word_uncached(const Fraction& f) {
  if (f.is_infinite()) return "x";
  if (f.p == 0) return "Y";
  auto [lo, hi] = farey_parents(f);
  return base_word(hi) + base_word(lo);
}

// Words for 0 <= f <= 1 and 1/0.
std::string base_word(const Fraction& f) {
  auto key = std::make_pair(f.p, f.q);
  {
    std::shared_lock lock(cache().mu);
    auto it = cache().words.find(key);
    if (it != cache().words.end()) return it->second;
  }
  std::string w = base_word_uncached(f);
  std::unique_lock lock(cache().mu);
  cache().words.emplace(key, w);
  return w;
}

}  // namespace

std::pair<Fraction, Fraction> farey_parents(const Fraction& f) {
  if (f.is_infinite() || f.p <= 0 || f.p > f.q) throw std::invalid_argument("farey_parents: need 0 < f <= 1");
  if (f.p == 1 && f.q == 1) return {Fraction(0, 1), Fraction::infinity()};
  return descend(f);
}

Fraction upper_neighbor(const Fraction& f) {
  if (f.is_infinite() || f.is_integral()) return Fraction::infinity();
  std::int64_t m = floor_div(f.p, f.q);
  Fraction frac(f.p - m * f.q, f.q);
  Fraction hi = descend(frac).second;
  return Fraction(hi.p + m * hi.q, hi.q);
}

FareyWord word(const Fraction& f) {
  if (f.is_infinite()) return {f, "x"};
  std::int64_t m = floor_div(f.p, f.q);
  std::string w = base_word(Fraction(f.p - m * f.q, f.q));
  if (m == 0) return {f, w};
  // W_{g+m}: every Y becomes X^{-m} Y.
  std::string sub(static_cast<std::size_t>(m > 0 ? m : -m), m > 0 ? 'x' : 'X');
  sub += 'Y';
  std::string out;
  out.reserve(w.size() * 2);
  for (char ch : w) {
    if (ch == 'Y')
      out += sub;
    else
      out += ch;
  }
  return {f, out};
}

Mobius evaluate(const std::string& letters, const Mobius& X, const Mobius& Y) {
  const Mobius Xi = X.inverse(), Yi = Y.inverse();
  Mobius out;
  for (char ch : letters) {
    switch (ch) {
      case 'X': out = out * X; break;
      case 'x': out = out * Xi; break;
      case 'Y': out = out * Y; break;
      case 'y': out = out * Yi; break;
      default: throw std::invalid_argument(std::string("bad letter ") + ch);
    }
  }
  return out;
}

std::string invert_letters(const std::string& letters) {
  std::string out(letters.rbegin(), letters.rend());
  for (char& ch : out) {
    switch (ch) {
      case 'X': ch = 'x'; break;
      case 'x': ch = 'X'; break;
      case 'Y': ch = 'y'; break;
      case 'y': ch = 'Y'; break;
      default: break;
    }
  }
  return out;
}

Fraction oz_compose(const Fraction& mn, const Fraction& pq, const Fraction& rs) {
  if (!is_neighbor(pq, rs)) throw std::invalid_argument("oz_compose: " + pq.str() + ", " + rs.str() + " are not neighbors");
  std::int64_t m = mn.p, n = mn.q;
  std::int64_t num = m * pq.p + n * rs.p, den = m * pq.q + n * rs.q;
  if (den == 0) return Fraction::infinity();
  return Fraction(num, den);
}

bool word_equal_mod_n(const Fraction& a, const Fraction& b, int n) {
  if (a.q != b.q || a.q == 0) return a == b;
  std::int64_t diff = b.p - a.p;
  return diff % (static_cast<std::int64_t>(n) * a.q) == 0;
}

std::vector<std::pair<Fraction, Fraction>> neighbor_pairs(int max_den) {
  std::vector<std::pair<Fraction, Fraction>> out;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    for (std::int64_t p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      // r/s > p/q with p s - r q = -1: s ranges over one residue class mod q.
      for (std::int64_t s = 0; s <= max_den; ++s) {
        if ((1 + p * s) % q != 0) continue;
        std::int64_t r = (1 + p * s) / q;
        if (s == 0 && r != 1) continue;
        out.emplace_back(Fraction(p, q), Fraction(r, s));
      }
    }
  }
  return out;
}

std::vector<Fraction> fractions_in(double lo, double hi, int max_den) {
  std::vector<Fraction> out;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    auto p0 = static_cast<std::int64_t>(std::floor(lo * static_cast<double>(q))) - 1;
    auto p1 = static_cast<std::int64_t>(std::ceil(hi * static_cast<double>(q))) + 1;
    for (std::int64_t p = p0; p <= p1; ++p) {
      if (std::gcd(p < 0 ? -p : p, q) != 1) continue;
      double v = static_cast<double>(p) / static_cast<double>(q);
      if (v >= lo && v < hi) out.emplace_back(p, q);
    }
  }
  std::sort(out.begin(), out.end(), fraction_less);
  return out;
}

// ---------------------------------------------------------------------------
// 100-digit evaluation for the core identity check.

namespace {

using hp = boost::multiprecision::cpp_bin_float_100;

struct HpC {
  hp re, im;
  HpC operator+(const HpC& o) const { return {re + o.re, im + o.im}; }
  HpC operator-(const HpC& o) const { return {re - o.re, im - o.im}; }
  HpC operator*(const HpC& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  HpC operator-() const { return {-re, -im}; }
};

struct HpM {
  HpC a, b, c, d;
  HpM operator*(const HpM& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  HpM inv() const { return {d, -b, -c, a}; }
};

HpM hp_identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }

HpM hp_eval(const std::string& letters, const HpM& X, const HpM& Y) {
  HpM Xi = X.inv(), Yi = Y.inv(), out = hp_identity();
  for (char ch : letters) {
    switch (ch) {
      case 'X': out = out * X; break;
      case 'x': out = out * Xi; break;
      case 'Y': out = out * Y; break;
      case 'y': out = out * Yi; break;
      default: break;
    }
  }
  return out;
}

double hp_abs(const HpC& z) { return static_cast<double>(sqrt(z.re * z.re + z.im * z.im)); }

}  // namespace

double oz_core_residual(const Fraction& pq, const Fraction& rs, cplx mu) {
  if (!is_neighbor(pq, rs)) throw std::invalid_argument("oz_core_residual: not neighbors");
  HpC m{hp(mu.real()), hp(mu.imag())};
  HpC mi = HpC{0, -1} * m;
  HpM S{{1, 0}, {2, 0}, {0, 0}, {1, 0}};
  HpM T{mi, {0, -1}, {0, -1}, {0, 0}};
  HpM X = hp_eval(word(pq).letters, S, T);
  HpM Z = hp_eval(word(rs).letters, S, T);
  HpM W = hp_eval(word(Fraction(-rs.q, pq.q)).letters, X, Z.inv());
  auto diff = [&](double sign) {
    HpC sg{hp(sign), 0};
    return std::max({hp_abs(W.a - sg * S.a), hp_abs(W.b - sg * S.b), hp_abs(W.c - sg * S.c),
                     hp_abs(W.d - sg * S.d)});
  };
  return std::min(diff(1.0), diff(-1.0));
}

}  // namespace maskit
