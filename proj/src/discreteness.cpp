#include "maskit/discreteness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "maskit/families.hpp"
#include "maskit/simd.hpp"

namespace maskit {

std::string to_string(JorgensenVerdict v) {
  switch (v) {
    case JorgensenVerdict::Violating: return "violating";
    case JorgensenVerdict::Inconclusive: return "inconclusive";
    case JorgensenVerdict::ElementarySuspect: return "elementary-suspect";
  }
  return "?";
}

std::string to_string(SignatureVerdict v) {
  switch (v) {
    case SignatureVerdict::Triangle: return "triangle";
    case SignatureVerdict::Parabolic: return "parabolic";
    case SignatureVerdict::Loxodromic: return "loxodromic";
    case SignatureVerdict::NonDiscrete: return "non-discrete";
  }
  return "?";
}

namespace {

constexpr double kElemTol = 1e-9;

bool share_fixed_point(const Mobius& f, const Mobius& g) {
  std::vector<Point> ff = fixed_points(f), gg = fixed_points(g);
  for (const Point& a : ff)
    for (const Point& b : gg) {
      if (a.inf || b.inf) {
        if (a.inf && b.inf) return true;
        continue;
      }
      if (std::abs(a.z - b.z) <= kElemTol * std::max(1.0, std::abs(a.z))) return true;
    }
  return false;
}

}  // namespace

JorgensenReport jorgensen(const Mobius& f, const Mobius& g) {
  JorgensenReport r;
  cplx tf = f.trace();
  Mobius comm = f * g * f.inverse() * g.inverse();
  cplx tc = comm.trace();
  r.J = std::abs(tf * tf - 4.0) + std::abs(tc - 2.0);
  if (is_identity(f, kElemTol) || is_identity(g, kElemTol)) {
    r.verdict = JorgensenVerdict::ElementarySuspect;
    r.reason = "generator is the identity";
    return r;
  }
  if (std::abs(tc - 2.0) <= kElemTol) {
    r.verdict = JorgensenVerdict::ElementarySuspect;
    r.reason = "commutator trace is 2";
    return r;
  }
  if (share_fixed_point(f, g)) {
    r.verdict = JorgensenVerdict::ElementarySuspect;
    r.reason = "shared fixed point";
    return r;
  }
  Classification cg = classify(g);
  if (cg.kind == Kind::Elliptic && (cg.order == 2 || cg.order == 3 || cg.order == 4 || cg.order == 6)) {
    r.verdict = JorgensenVerdict::ElementarySuspect;
    r.reason = "elliptic of order " + std::to_string(cg.order);
    return r;
  }
  r.verdict = r.J < 1.0 - 1e-12 ? JorgensenVerdict::Violating : JorgensenVerdict::Inconclusive;
  return r;
}

int ScanResult::count(JorgensenVerdict v) const {
  int c = 0;
  for (const auto& cell : cells) c += cell.report.verdict == v;
  return c;
}

ScanResult nondiscreteness_scan(const ScanRegion& region, const Fraction& f, int n, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");
  if (n < 1) throw std::invalid_argument("power must be >= 1");
  ScanResult out;
  out.grid = grid;
  const std::size_t count = static_cast<std::size_t>(grid) * grid;
  std::vector<double> re(count), im(count);
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      double u = grid == 1 ? 0.0 : -1.0 + 2.0 * i / (grid - 1);
      double v = grid == 1 ? 0.0 : -1.0 + 2.0 * j / (grid - 1);
      std::size_t k = static_cast<std::size_t>(j) * grid + i;
      re[k] = region.center.real() + u * region.radius_re;
      im[k] = region.center.imag() + v * region.radius_im;
    }
  simd::MatrixBatch powers;
  simd::maskit_word_grid(word(f).letters, n, re.data(), im.data(), count, powers);
  const Mobius K = maskit_group(0.0).K;
  out.cells.reserve(count);
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      std::size_t k = static_cast<std::size_t>(j) * grid + i;
      ScanCell cell;
      cell.i = i;
      cell.j = j;
      cell.mu = cplx(re[k], im[k]);
      cell.report = jorgensen(K, powers.at(k));
      out.cells.push_back(cell);
    }
  return out;
}

std::string SignatureReport::str() const {
  std::ostringstream os;
  switch (verdict) {
    case SignatureVerdict::Triangle: os << "(" << k << ", " << k << ", inf)"; break;
    case SignatureVerdict::Parabolic: os << "(inf, inf, inf)"; break;
    case SignatureVerdict::Loxodromic: os << "loxodromic generator"; break;
    case SignatureVerdict::NonDiscrete: os << "non-discrete (non-primitive or irrational elliptic)"; break;
  }
  return os.str();
}

SignatureReport triangle_signature(cplx mu, const Fraction& f) {
  Fraction g = upper_neighbor(f);
  Mobius S = maskit_S(), T = maskit_T(mu);
  Mobius W = evaluate(word(f).letters, S, T);
  Mobius V = evaluate(word(g).letters, S, T);
  Mobius C = V.inverse() * W.inverse() * V;
  Mobius K = W * C;
  SignatureReport r;
  r.tr_W = W.trace();
  r.tr_conj = C.trace();
  r.tr_K = K.trace();
  r.max_imag = std::max({std::abs(r.tr_W.imag()), std::abs(r.tr_conj.imag()), std::abs(r.tr_K.imag())});
  if (r.max_imag > 1e-6) throw OffLocusError("traces are not real: max |Im tr| = " + std::to_string(r.max_imag));
  double t = std::abs(r.tr_W.real());
  if (std::abs(t - 2.0) <= 1e-9) {
    r.verdict = SignatureVerdict::Parabolic;
    return r;
  }
  if (t > 2.0) {
    r.verdict = SignatureVerdict::Loxodromic;
    return r;
  }
  // |tr| = 2 cos(pi / k)
  double k = M_PI / std::acos(t / 2.0);
  double kr = std::round(k);
  if (std::abs(k - kr) <= 1e-8 * std::max(1.0, k) && kr >= 2.0) {
    r.verdict = SignatureVerdict::Triangle;
    r.k = static_cast<int>(kr);
  } else {
    r.verdict = SignatureVerdict::NonDiscrete;
  }
  return r;
}

Circle isometric_circle(const Mobius& m) {
  double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (std::abs(m.c) <= 1e-14 * scale) throw std::invalid_argument("isometric_circle: map fixes infinity");
  return {-m.d / m.c, 1.0 / std::abs(m.c)};
}

std::vector<Circle> ford_circles(const std::vector<Mobius>& gens) {
  std::vector<Circle> out;
  for (const Mobius& g : gens)
    for (const Mobius& h : {g, g.inverse()}) {
      try {
        out.push_back(isometric_circle(h));
      } catch (const std::invalid_argument&) {
      }
    }
  return out;
}

}  // namespace maskit
