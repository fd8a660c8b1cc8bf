// Acceptance checks, one line per criterion. Usage: acceptance [--only k]

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "maskit/chains.hpp"
#include "maskit/discreteness.hpp"
#include "maskit/families.hpp"
#include "maskit/farey.hpp"
#include "maskit/locus.hpp"
#include "maskit/render.hpp"
#include "oracle.hpp"

using namespace maskit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

cplx mu_half_oracle(int n) { return oracle::half_root(2.0 * std::cos(M_PI / n)); }

// 1. W_{-s/q} of the neighbor pair collapses to the generator S, all pairs with q, s <= 20.
Outcome c1() {
  oracle::Rng rng(1);
  double worst = 0.0;
  int checked = 0;
  for (const auto& [pq, rs] : neighbor_pairs(20)) {
    if (rs.q == 0) continue;
    for (int k = 0; k < 10; ++k) {
      cplx mu = rng.box(-2.0, 2.0, 0.2, 3.0);
      worst = std::max(worst, oz_core_residual(pq, rs, mu));
      ++checked;
    }
  }
  return {worst <= 1e-9, std::to_string(checked) + " evaluations, max residual " + sci(worst)};
}

// 2. m/1 elliptic points are 2m + 2i cos(pi/n).
Outcome c2() {
  double worst = 0.0;
  for (int m = -2; m <= 2; ++m) {
    TraceFunction tf = TraceFunction::maskit(Fraction(m, 1));
    for (int n = 2; n <= 10; ++n) {
      cplx mu = elliptic_point(tf, n).param;
      worst = std::max(worst, std::abs(mu - cplx(2.0 * m, 2.0 * std::cos(M_PI / n))));
    }
  }
  return {worst <= 1e-10, "max error " + sci(worst)};
}

// 3. The 1/2 cusp and its elliptic points against the quadratic formula.
Outcome c3() {
  double cusp = std::abs(find_cusp(TraceFunction::maskit(Fraction(1, 2))).param - oracle::half_root(2.0));
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    cplx mu = elliptic_point(TraceFunction::maskit(Fraction(1, 2)), n).param;
    worst = std::max(worst, std::abs(mu - mu_half_oracle(n)));
  }
  return {cusp <= 1e-8 && worst <= 1e-8, "cusp error " + sci(cusp) + ", elliptic max error " + sci(worst)};
}

// 4. The elliptic points approach the cusp monotonically.
Outcome c4() {
  TraceFunction tf = TraceFunction::maskit(Fraction(1, 2));
  cplx cusp = find_cusp(tf).param;
  double prev = HUGE_VAL;
  bool ok = true;
  std::ostringstream os;
  for (int n = 2; n <= 12; ++n) {
    double d = std::abs(elliptic_point(tf, n).param - cusp);
    ok = ok && d < prev;
    prev = d;
    if (n == 2 || n == 12) os << "n=" << n << ": " << sci(d) << " ";
  }
  return {ok, os.str() + "strictly decreasing: " + (ok ? "yes" : "no")};
}

// 5. 0/1 Koebe boundary point: ray endpoint, closed form and the tr C = 2 solve agree.
Outcome c5() {
  double worst = 0.0, cross = 0.0;
  for (int n = 3; n <= 8; ++n) {
    RayTrace rt = koebe_ray(n, Fraction(0, 1));
    if (!rt.special(0)) return {false, "n=" + std::to_string(n) + ": no endpoint"};
    double s = std::sin(M_PI / n);
    cplx t2 = rt.special(0)->param * rt.special(0)->param;
    worst = std::max(worst, std::abs(t2 - (1 + s) / (1 - s)));
    // independent: tr C_n[tau] = cot(pi/n)(tau - 1/tau) = 2 has the positive root below
    double c = std::tan(M_PI / n);
    double tau = c + std::sqrt(c * c + 1.0);
    cross = std::max(cross, std::abs(t2 - tau * tau));
  }
  return {worst <= 1e-8 && cross <= 1e-8, "max |tau^2 - formula| " + sci(worst) + ", vs tr C solve " + sci(cross)};
}

// 6. beta conjugates the Maskit generators at mu_0(n) to the Koebe generators.
Outcome c6() {
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) worst = std::max(worst, check_conjugacy(n).max());
  return {worst <= 1e-9, "max residual " + sci(worst)};
}

// 7. Integral Koebe rays are radial; the 1/2 ray at n = 4 stays in its sector.
Outcome c7() {
  const int n = 5;
  double worst = 0.0;
  std::size_t samples = 0;
  for (int m = 0; m < n; ++m) {
    RayTrace rt = koebe_ray(n, Fraction(m, 1));
    if (!rt.complete) return {false, "m=" + std::to_string(m) + ": " + rt.note};
    for (const RaySample& s : rt.samples) {
      worst = std::max(worst, std::abs(wrap_angle(std::arg(s.param * s.param) + 2.0 * M_PI * m / n)));
      ++samples;
    }
  }
  RayTrace half = koebe_ray(4, Fraction(1, 2));
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (const RaySample& s : half.samples) {
    double a = std::arg(s.param * s.param);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  bool sector = half.sector_ok && lo > -M_PI / 2 && hi < 0.0;
  return {worst <= 1e-9 && sector, std::to_string(samples) + " samples, max arg error " + sci(worst) +
                                       "; 1/2 ray arg tau^2 in [" + sci(lo) + ", " + sci(hi) + "]"};
}

// 8. Closed 1/2 chains at n = 4, 2, 3 with every hypothesis of the combination theorem.
Outcome c8() {
  Outcome o;
  std::ostringstream os;
  for (int n : {4, 2, 3}) {
    Chain c = build_elliptic_chain(Fraction(1, 2), n);
    ChainReport rep = verify_combinatorial(c);
    bool ok = c.size() == 2 * n && rep.all_pass();
    double tang = 0.0, shift = 0.0, par = 0.0;
    for (const ConditionResult& r : rep.conditions) {
      if (!r.pass) os << "[n=" << n << " failed " << r.name << " " << sci(r.residual) << "] ";
      if (r.name == "tangent chain") tang = r.residual;
      if (r.name.rfind("(3)", 0) == 0 || r.name.rfind("(4)", 0) == 0) shift = std::max(shift, r.residual);
      if (r.name == "core word parabolic") par = r.residual;
    }
    PleatingCurves pc = pleating_curves(c, c.Z);
    ok = ok && pc.disjoint && par <= 1e-10;
    os << "n=" << n << ": " << c.size() << " disks, tangency " << sci(tang) << ", shifts " << sci(shift)
       << ", |tr^2-4| " << sci(par) << ", D_A/D_B " << (pc.disjoint ? "disjoint" : "overlap") << " margin "
       << sci(pc.margin) << "; ";
    o.pass = o.pass && ok;
  }
  o.detail = os.str();
  return o;
}

// 9. Jorgensen scan around mu_{1/2}(4).
Outcome c9() {
  const cplx center = elliptic_point(TraceFunction::maskit(Fraction(1, 2)), 4).param;
  ScanResult res = nondiscreteness_scan({center, 0.1, 0.1}, Fraction(1, 2), 4, 41);
  bool center_ok = res.at(20, 20).report.verdict == JorgensenVerdict::ElementarySuspect;
  // The 1/2 ray is the vertical line Re mu = 1 here, so its normal directions are the center row.
  int row = 0, hits = 0;
  for (int i = 0; i < 41; ++i) {
    if (i == 20) continue;
    ++row;
    hits += res.at(i, 20).report.verdict == JorgensenVerdict::Violating;
  }
  double frac = double(hits) / row;
  ScanResult control = nondiscreteness_scan({cplx(0, 3), 0.1, 0.1}, Fraction(1, 2), 4, 41);
  int control_hits = control.count(JorgensenVerdict::Violating);
  std::ostringstream os;
  os << "center " << to_string(res.at(20, 20).report.verdict) << ", normal row " << hits << "/" << row << " = "
     << sci(100 * frac) << "% violating (need 50%), whole grid " << res.count(JorgensenVerdict::Violating)
     << "/1681, control grid " << control_hits << " violating";
  return {center_ok && frac >= 0.5 && control_hits == 0, os.str()};
}

// 10. Invariant suites.
Outcome c10() {
  oracle::Rng rng(10);
  std::ostringstream os;
  bool ok = true;

  double comm = 0.0;
  for (int k = 0; k < 1000; ++k) {
    cplx mu = rng.box(-3, 3, -3, 3);
    Mobius S = maskit_S(), T = maskit_T(mu);
    comm = std::max(comm, std::abs((S * T * S.inverse() * T.inverse()).trace() + 2.0));
  }
  ok = ok && comm <= 1e-10;
  os << "commutator " << sci(comm);

  double rel = 0.0;
  for (int n = 2; n <= 12; ++n)
    for (int k = 0; k < 100; ++k) {
      cplx tau = std::polar(rng.uniform(0.3, 4.0), rng.uniform(-M_PI, M_PI));
      KoebeGroup g = koebe_group(n, tau);
      rel = std::max(rel, psl_distance(g.C.inverse() * g.A * g.C, g.B.inverse()));
    }
  ok = ok && rel <= 1e-10;
  os << ", Koebe relation " << sci(rel);

  double fd = 0.0;
  for (long q = 1; q <= 10; ++q)
    for (long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      TraceFunction tf = TraceFunction::maskit(Fraction(p, q));
      cplx mu = rng.box(-1, 1, 0.4, 1.4), h = 1e-5;
      cplx num = (tf.value(mu + h) - tf.value(mu - h)) / (2.0 * h), an = tf.derivative(mu);
      fd = std::max(fd, std::abs(an - num) / std::max(1.0, std::abs(an)));
    }
  ok = ok && fd <= 1e-6;
  os << ", derivative vs difference " << sci(fd);

  double fun = 0.0;
  for (int k = 0; k < 300; ++k) {
    auto rnd = [&] {
      cplx a = rng.box(-2, 2, -2, 2) + 1.5, b = rng.box(-2, 2, -2, 2), c = rng.box(-2, 2, -2, 2);
      return Mobius(a, b, c, (1.0 + b * c) / a);
    };
    Mobius g = rnd(), h = rnd();
    GeneralizedDisk d = k % 2 ? GeneralizedDisk::disk(rng.box(-1, 1, -1, 1), rng.uniform(0.2, 2))
                              : GeneralizedDisk::half_plane(rng.box(-1, 1, -1, 1), std::polar(1.0, rng.uniform(0, 6.3)));
    fun = std::max(fun, disk_distance(map_disk(g * h, d), map_disk(g, map_disk(h, d))));
  }
  ok = ok && fun <= 1e-9;
  os << ", disk functoriality " << sci(fun);

  std::vector<Mobius> gens = {maskit_S(), maskit_T(cplx(0, 3))};
  LimitSetOptions opt;
  opt.max_depth = 12;
  opt.min_cell = 1e-3;
  PointCloud pc = limit_set(gens, opt);
  double dfs = 0.0;
  for (int k = 0; k < 1000 && !pc.points.empty(); ++k) {
    const CloudPoint& p = pc.points[rng.integer(0, static_cast<int>(pc.points.size()) - 1)];
    Point w = evaluate_word(gens, p.word).apply(Point(p.z));
    dfs = std::max(dfs, w.inf ? HUGE_VAL : std::abs(w.z - p.z));
  }
  ok = ok && !pc.points.empty() && dfs <= 10 * opt.min_cell;
  os << ", DFS fixed points " << sci(dfs) << " over " << pc.points.size() << " points";
  return {ok, os.str()};
}

// 11. W_{p/q}[A_n, C] as matrices: equal up to sign exactly when the slopes differ by a multiple of n.
Outcome c11() {
  oracle::Rng rng(11);
  int pairs = 0, equal = 0, wrong = 0;
  for (int n : {3, 4, 5}) {
    std::vector<Fraction> fs = fractions_in(0.0, 2.0 * n, 5);
    cplx tau = std::polar(rng.uniform(1.1, 1.6), rng.uniform(-1.0, 1.0));
    std::vector<Mobius> m;
    for (const Fraction& f : fs) m.push_back(TraceFunction::koebe(n, f).matrix(tau));
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (fs[i].value() >= n) continue;
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        const Mobius &a = m[i], &b = m[j];
        double scale = std::max({1.0, std::abs(a.a), std::abs(a.b), std::abs(a.c), std::abs(a.d)});
        bool same = psl_distance(a, b) <= 1e-9 * scale;
        bool expect = word_equal_mod_n(fs[i], fs[j], n);
        wrong += same != expect;
        equal += same;
        ++pairs;
      }
    }
  }
  return {wrong == 0, std::to_string(pairs) + " pairs, " + std::to_string(equal) + " equal up to sign, " +
                          std::to_string(wrong) + " mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only k]\n");
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  int failed = 0;
  for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) {
    if (only != 0 && k != only) continue;
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d: %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
