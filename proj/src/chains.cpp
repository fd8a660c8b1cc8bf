#include "maskit/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "maskit/families.hpp"
#include "maskit/locus.hpp"
#include "maskit/simd.hpp"

namespace maskit {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

std::string repeat(const std::string& w, std::int64_t k) {
  std::string out;
  for (std::int64_t i = 0; i < k; ++i) out += w;
  return out;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

std::string free_reduce(const std::string& letters) {
  std::string out;
  out.reserve(letters.size());
  for (char ch : letters) {
    if (!out.empty()) {
      char b = out.back();
      if (b != ch && std::tolower(b) == std::tolower(ch)) {
        out.pop_back();
        continue;
      }
    }
    out.push_back(ch);
  }
  return out;
}

const GeneralizedDisk& Chain::disk_at(int i) const {
  if (closed()) return disks[static_cast<std::size_t>(wrap(i, size()))].disk;
  if (!has_index(i)) throw std::out_of_range("chain index " + std::to_string(i));
  return disks[static_cast<std::size_t>(i - first)].disk;
}

bool Chain::has_index(int i) const { return closed() || (i >= first && i < first + size()); }

std::string Chain::carrier_word(int i) const {
  const std::int64_t q = fraction.q;
  std::int64_t k = i + upper.q;
  std::int64_t a = floor_div(k, q), j = k - a * q;
  std::string head = a >= 0 ? repeat(invert_letters(x_word), a) : repeat(x_word, -a);
  return free_reduce(head + period[static_cast<std::size_t>(j)]);
}

Chain build_chain(const Fraction& f, cplx mu, int n, int count) {
  if (f.is_infinite()) throw std::invalid_argument("chain: fraction must be finite");
  if (n < 0 || (n == 0 && count < 0)) throw std::invalid_argument("chain: bad size");
  Chain c;
  c.fraction = f;
  c.upper = upper_neighbor(f);
  c.n = n;
  c.mu = mu;
  c.x_word = word(f).letters;
  c.z_word = word(c.upper).letters;
  const Mobius S = maskit_S(), T = maskit_T(mu);
  c.X = evaluate(c.x_word, S, T);
  c.Z = evaluate(c.z_word, S, T);

  // Rotation walk: Z^-1 moves the raw index by +s, X by -q.
  const std::int64_t q = f.q, s = c.upper.q;
  const std::string zi = invert_letters(c.z_word);
  std::vector<std::string> gw(static_cast<std::size_t>(q + s));
  std::int64_t i = 0;
  for (std::int64_t step = 0; step + 1 < q + s; ++step) {
    if (i < q) {
      gw[static_cast<std::size_t>(i + s)] = free_reduce(zi + gw[static_cast<std::size_t>(i)]);
      i += s;
    } else {
      gw[static_cast<std::size_t>(i - q)] = free_reduce(c.x_word + gw[static_cast<std::size_t>(i)]);
      i -= q;
    }
  }
  // right normalization: raw index q carries the identity
  const std::string h = free_reduce(invert_letters(gw[0]) + c.x_word);
  for (std::int64_t j = 0; j < q; ++j) c.period.push_back(free_reduce(gw[static_cast<std::size_t>(j)] + h));

  c.first = n > 0 || count == 0 ? 0 : -1;
  const int total = n > 0 ? static_cast<int>(n * q) : (count > 0 ? count + 1 : 0);
  for (int idx = c.first; idx < c.first + total; ++idx) {
    ChainDisk d;
    d.index = idx;
    d.word = c.carrier_word(idx);
    d.carrier = evaluate(d.word, S, T);
    d.disk = map_disk(d.carrier, c.base);
    c.disks.push_back(d);
  }
  Mobius K = c.X * c.Z.inverse() * c.X.inverse() * c.Z;
  c.fix_K = fixed_points(K).front();
  return c;
}

Chain build_cusp_chain(const Fraction& f, int window) {
  if (f.is_infinite() || f.q < 2 || f.p <= 0 || f.p >= f.q)
    throw std::invalid_argument("build_cusp_chain: need 0 < p/q < 1");
  if (window < 0) throw std::invalid_argument("build_cusp_chain: negative window");
  SpecialPoint cusp = find_cusp(TraceFunction::maskit(f));
  return build_chain(f, cusp.param, 0, window);
}

Chain build_elliptic_chain(const Fraction& f, int n) {
  if (n < 2) throw std::invalid_argument("build_elliptic_chain: n must be >= 2");
  SpecialPoint e = elliptic_point(TraceFunction::maskit(f), n);
  return build_chain(f, e.param, n, 0);
}

// ---------------------------------------------------------------------------

namespace {

double disk_scale(const GeneralizedDisk& d) { return d.is_circle() ? d.radius : 0.0; }

// Boundary-only tangency of generalized circles.
double circles_tangency(const GeneralizedDisk& a, const GeneralizedDisk& b) {
  if (a.is_circle() && b.is_circle()) {
    double dc = std::abs(a.center - b.center);
    double res = std::min(std::abs(dc - (a.radius + b.radius)), std::abs(dc - std::abs(a.radius - b.radius)));
    return res / std::max({a.radius, b.radius, 1.0});
  }
  if (!a.is_circle() && !b.is_circle()) {
    cplx u = a.normal * std::conj(b.normal);
    return std::abs(u.imag());  // parallel lines meet only at infinity
  }
  const GeneralizedDisk& circ = a.is_circle() ? a : b;
  const GeneralizedDisk& line = a.is_circle() ? b : a;
  double dist = std::abs(line.signed_distance(circ.center));
  return std::abs(dist - circ.radius) / std::max(circ.radius, 1.0);
}

GeneralizedDisk circle_through(const Point& p1, const Point& p2, const Point& p3) {
  if (!p1.inf && !p2.inf && !p3.inf) {
    cplx centroid = (p1.z + p2.z + p3.z) / 3.0;
    try {
      return disk_through(p1, p2, p3, Point(centroid));
    } catch (const std::exception&) {
      return disk_through(p1, p2, p3, Point(centroid + cplx(0, 1) * (p2.z - p1.z)));
    }
  }
  const Point& a = p1.inf ? p2 : p1;
  const Point& b = (p1.inf || p2.inf) ? p3 : p2;
  return disk_through(p1, p2, p3, Point(a.z + cplx(0, 1) * (b.z - a.z)));
}

double boundary_distance(const GeneralizedDisk& d, const Point& p) {
  if (p.inf) return d.is_circle() ? HUGE_VAL : 0.0;
  return std::abs(d.signed_distance(p.z)) / std::max(1.0, disk_scale(d));
}

}  // namespace

double tangency_residual(const GeneralizedDisk& a, const GeneralizedDisk& b) {
  double sep = disk_separation(a, b);
  if (std::isinf(sep)) return HUGE_VAL;
  return std::abs(sep) / std::max({disk_scale(a), disk_scale(b), 1.0});
}

bool ChainReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& r) { return r.pass; });
}

const ConditionResult* ChainReport::find(const std::string& prefix) const {
  for (const auto& c : conditions)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

ChainReport verify_combinatorial(const Chain& c, const Mobius& X, const Mobius& Z) {
  ChainReport rep;
  const int q = static_cast<int>(c.fraction.q), s = static_cast<int>(c.upper.q);
  const int lo = c.closed() ? 0 : c.first, hi = lo + c.size();  // indices [lo, hi)
  if (c.size() == 0) {
    rep.conditions.push_back({"empty chain", true, 0.0, "nothing to verify"});
    return rep;
  }
  const GeneralizedDisk& d0 = c.disk_at(0);
  // The chain generators: A = X^-1 shifts by q, C = Z by -s.
  const Mobius A = X.inverse(), C = Z;

  // (1) delta_0 touches the limit set of F = <X, Z^-1 X^-1 Z> at fix K.
  {
    ConditionResult r{"(1) delta_0 tangent to the F circle at fix K", true, 0.0, ""};
    r.residual = boundary_distance(d0, c.fix_K);
    if (c.n != 2) {
      GeneralizedDisk fc = circle_through(c.fix_K, X.apply(c.fix_K), X.apply(X.apply(c.fix_K)));
      r.residual = std::max(r.residual, circles_tangency(d0, fc));
      r.detail = "F circle " + describe(fc);
    } else {
      r.detail = "n = 2: the limit set of F is the single point fix K";
    }
    r.pass = r.residual <= kTangencyTol;
    rep.conditions.push_back(r);
  }
  // (2) the core word W_{-s/q}[A, C] is parabolic and stabilizes delta_0.
  {
    Mobius core = evaluate(word(Fraction(-c.upper.q, c.fraction.q)).letters, A, C);
    cplx tr = core.trace();
    double par = std::abs(tr * tr - 4.0);
    double inv = disk_distance(map_disk(core, d0), d0);
    ConditionResult r{"(2) core word stabilizes delta_0", inv <= kDiskTol, inv,
                      "core word vs S^+-1: " + fmt(std::min(psl_distance(core, maskit_S()), psl_distance(core, maskit_S().inverse())))};
    rep.conditions.push_back(r);
    rep.conditions.push_back({"core word parabolic", par <= 1e-10, par, "|tr^2 - 4|"});
  }
  // (3) C delta_j = delta_{j-s} for j = 0..q, (4) A delta_j = delta_{j+q} for j = 0..s.
  auto shift_check = [&](const char* name, const Mobius& g, int shift, int last) {
    ConditionResult r{name, true, 0.0, ""};
    int checked = 0;
    for (int j = 0; j <= last; ++j) {
      if (!c.has_index(j)) continue;
      if (!c.has_index(j + shift)) continue;
      double dd = disk_distance(map_disk(g, c.disk_at(j)), c.disk_at(j + shift));
      if (dd > r.residual) {
        r.residual = dd;
        r.detail = "worst at j = " + std::to_string(j);
      }
      ++checked;
    }
    r.pass = r.residual <= kDiskTol;
    r.detail += " (" + std::to_string(checked) + " indices)";
    rep.conditions.push_back(r);
  };
  shift_check("(3) C = Z shifts by -s", C, -s, q);
  shift_check("(4) A = X^-1 shifts by q", A, q, s);
  // (5) pairwise distinct
  {
    ConditionResult r{"(5) disks pairwise distinct", true, HUGE_VAL, ""};
    for (int i = lo; i < hi; ++i)
      for (int j = i + 1; j < hi; ++j) {
        double dd = disk_distance(c.disk_at(i), c.disk_at(j));
        if (dd < r.residual) {
          r.residual = dd;
          r.detail = "closest pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
        }
      }
    if (hi - lo < 2) r.residual = 0.0, r.detail = "single disk";
    r.pass = hi - lo < 2 || r.residual > kDiskTol;
    rep.conditions.push_back(r);
  }
  // tangent chain and (*)
  {
    ConditionResult tang{"tangent chain", true, 0.0, ""};
    ConditionResult star{"(*) non-adjacent disks disjoint", true, HUGE_VAL, ""};
    bool all_overlap = true;
    int touching = 0;
    const int N = hi - lo;
    auto adjacent = [&](int i, int j) {
      int d = std::abs(i - j);
      if (c.closed()) d = std::min(d, N - d);
      return d <= 1;
    };
    for (int i = lo; i < hi; ++i) {
      int j = i + 1;
      if (j >= hi && !(c.closed() && N > 1)) continue;
      if (c.closed() && N == 2 && j >= hi) continue;
      double t = tangency_residual(c.disk_at(i), c.disk_at(j));
      double sep = disk_separation(c.disk_at(i), c.disk_at(j));
      all_overlap = all_overlap && sep < -kTangencyTol * std::max({disk_scale(c.disk_at(i)), disk_scale(c.disk_at(j)), 1.0});
      if (t > tang.residual) {
        tang.residual = t;
        tang.detail = "worst pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      }
    }
    tang.pass = tang.residual <= kTangencyTol;
    for (int i = lo; i < hi; ++i)
      for (int j = i + 1; j < hi; ++j) {
        if (adjacent(i, j)) continue;
        const GeneralizedDisk &a = c.disk_at(i), &b = c.disk_at(j);
        double sep = disk_separation(a, b) / std::max({disk_scale(a), disk_scale(b), 1.0});
        // At n = 2 the chain pinches: disks two apart touch at parabolic points.
        if (c.n == 2 && std::abs(sep) <= kTangencyTol) {
          ++touching;
          continue;
        }
        if (sep < star.residual) {
          star.residual = sep;
          star.detail = "closest pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
        }
      }
    if (star.residual == HUGE_VAL) star.residual = 0.0, star.detail = "no separated non-adjacent pairs";
    else star.pass = star.residual > kTangencyTol;
    if (touching > 0) star.detail += "; " + std::to_string(touching) + " pairs touch at a point (n = 2)";
    rep.conditions.push_back(tang);
    rep.conditions.push_back(star);
    rep.proper = N > 1 && all_overlap;
  }
  // carrier consistency and closure
  {
    ConditionResult r{"carrier consistency", true, 0.0, ""};
    for (const ChainDisk& d : c.disks)
      r.residual = std::max(r.residual, disk_distance(map_disk(d.carrier, c.base), d.disk));
    r.pass = r.residual <= kDiskTol;
    rep.conditions.push_back(r);
    if (c.closed()) {
      Mobius Xn = power(X, c.n);
      double cl = psl_distance(Xn, Mobius::identity());
      rep.conditions.push_back({"closure X^n = identity", cl <= 1e-9, cl, "index arithmetic mod " + std::to_string(c.size())});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Pleating curves

namespace {

bool finite_small(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < 1e8; }

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool inside_polygon(const std::vector<cplx>& poly, cplx p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const cplx &a = poly[i], &b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) in = !in;
    }
  }
  return in;
}

bool polygon_simple(const std::vector<cplx>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  return true;
}

double point_segment(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  double L = std::norm(ab);
  double t = L > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / L, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + t * ab));
}

// Samples of the arc inside disk (center c, radius r) orthogonal to its boundary,
// from boundary point a to boundary point b; a included, b excluded.
void orthogonal_arc(cplx c, double r, cplx a, cplx b, int samples, std::vector<cplx>& out) {
  cplx ua = (a - c) / r, ub = (b - c) / r;
  double den = 1.0 + (ua * std::conj(ub)).real();
  if (std::abs(den) < 1e-9) {
    for (int k = 0; k < samples; ++k) out.push_back(a + (b - a) * (double(k) / samples));
    return;
  }
  cplx o = c + r * (ua + ub) / den;
  double rho = std::abs(a - o);
  double aa = std::arg(a - o), ab = std::arg(b - o);
  double delta = wrap_angle(ab - aa);
  for (int k = 0; k < samples; ++k) out.push_back(o + std::polar(rho, aa + delta * k / samples));
}

std::vector<cplx> apply_batch(const Mobius& m, const std::vector<cplx>& pts) {
  std::vector<double> re(pts.size()), im(pts.size()), ore(pts.size()), oim(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) re[k] = pts[k].real(), im[k] = pts[k].imag();
  simd::mobius_apply(m, re.data(), im.data(), ore.data(), oim.data(), pts.size());
  std::vector<cplx> out(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) out[k] = cplx(ore[k], oim[k]);
  return out;
}

std::vector<Point> to_points(const std::vector<cplx>& v) {
  std::vector<Point> out;
  out.reserve(v.size());
  for (cplx z : v) out.push_back(std::isfinite(z.real()) ? Point(z) : Point::infinity());
  return out;
}

}  // namespace

PleatingCurves pleating_curves(const Chain& c, const Mobius& C, int samples_per_arc) {
  if (!c.closed()) throw std::invalid_argument("pleating_curves: needs a closed chain");
  const int N = c.size();
  if (N < 2) throw std::invalid_argument("pleating_curves: chain too short");
  for (int i = 0; i < N; ++i)
    if (tangency_residual(c.disk_at(i), c.disk_at(i + 1)) > kTangencyTol)
      throw std::invalid_argument("pleating_curves: chain is not tangent at index " + std::to_string(i));
  if (c.fix_K.inf) throw std::invalid_argument("pleating_curves: fix K at infinity");

  PleatingCurves pc;
  // Chart centre p0: just outside delta_0 next to fix K.
  const GeneralizedDisk& d0 = c.disk_at(0);
  cplx away;
  switch (d0.type) {
    case GeneralizedDisk::Type::Disk: away = (c.fix_K.z - d0.center) / std::abs(c.fix_K.z - d0.center); break;
    case GeneralizedDisk::Type::Exterior: away = (d0.center - c.fix_K.z) / std::abs(d0.center - c.fix_K.z); break;
    case GeneralizedDisk::Type::HalfPlane: away = -d0.normal; break;
  }
  double eps = 1e-3 * std::max(1.0, std::abs(c.fix_K.z));
  auto inside_any = [&](cplx z) {
    for (int i = 0; i < N; ++i)
      if (c.disk_at(i).contains(Point(z))) return true;
    return false;
  };
  while (inside_any(c.fix_K.z + eps * away) && eps > 1e-6) eps /= 4.0;
  pc.p0 = c.fix_K.z + eps * away;
  if (inside_any(pc.p0)) {
    // At n = 2 several disks meet at fix K and the gaps near it are horns; move out
    // until some direction has clearance comparable to the distance.
    bool found = false;
    for (double r = eps; r <= 64.0 * std::max(1.0, std::abs(c.fix_K.z)) && !found; r *= 2.0) {
      double best = 0.0;
      for (int k = 0; k < 1440; ++k) {
        cplx z = c.fix_K.z + r * std::polar(1.0, M_PI * k / 720.0);
        double clear = HUGE_VAL;
        for (int i = 0; i < N; ++i) clear = std::min(clear, -c.disk_at(i).signed_distance(z));
        if (clear > best) best = clear, pc.p0 = z;
      }
      found = best >= 0.05 * r;
    }
    if (!found) throw std::runtime_error("pleating_curves: no chart centre outside the chain");
  }
  const Mobius phi = Mobius(0.0, 1.0, 1.0, -pc.p0), phi_inv = phi.inverse();

  // Tangency points in the chart, where every chain disk is bounded.
  std::vector<GeneralizedDisk> cd(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) cd[static_cast<std::size_t>(i)] = map_disk(phi, c.disk_at(i));
  auto tpoint = [&](int i) {  // delta_{i-1} meets delta_i
    return tangency_point(cd[static_cast<std::size_t>(wrap(i - 1, N))], cd[static_cast<std::size_t>(wrap(i, N))]).z;
  };
  // Sampled at double density: even samples are vertices, odd ones arc midpoints.
  std::vector<cplx> fine;
  for (int i = 0; i < N; ++i) {
    const GeneralizedDisk& d = cd[static_cast<std::size_t>(i)];
    if (d.type != GeneralizedDisk::Type::Disk) throw std::runtime_error("pleating_curves: chart disk unbounded");
    orthogonal_arc(d.center, d.radius, tpoint(i), tpoint(i + 1), 2 * samples_per_arc, fine);
  }
  const Mobius B_chart = phi * C.inverse() * phi_inv;
  const std::vector<cplx> fine_B = apply_batch(B_chart, fine);
  std::vector<cplx> mid_A, mid_B;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    (k % 2 == 0 ? pc.W_A_chart : mid_A).push_back(fine[k]);
    (k % 2 == 0 ? pc.W_B_chart : mid_B).push_back(fine_B[k]);
  }
  pc.W_A = to_points(apply_batch(phi_inv, pc.W_A_chart));
  pc.W_B = to_points(apply_batch(C.inverse(), [&] {
    std::vector<cplx> v;
    for (const Point& p : pc.W_A) v.push_back(p.inf ? cplx(HUGE_VAL, HUGE_VAL) : p.z);
    return v;
  }()));

  // (dagger) consistency: the chart image and the direct image agree.
  for (std::size_t k = 0; k < pc.W_B.size(); ++k) {
    Point direct = phi_inv.apply(Point(pc.W_B_chart[k]));
    if (direct.inf || pc.W_B[k].inf || std::abs(direct.z) > 1e6) continue;
    pc.dagger_residual = std::max(pc.dagger_residual, std::abs(direct.z - pc.W_B[k].z) / std::max(1.0, std::abs(direct.z)));
  }

  pc.simple_A = polygon_simple(pc.W_A_chart);
  pc.simple_B = polygon_simple(pc.W_B_chart);
  // fix K and the F orbit points must lie on the unbounded side of both curves in the chart.
  std::vector<cplx> probes{phi.apply(Point(c.fix_K.z + 2.0 * eps * away)).z};
  for (Point z = c.X.apply(c.fix_K); probes.size() < 3; z = c.X.apply(z)) {
    Point w = phi.apply(z);
    if (!w.inf) probes.push_back(w.z);
    if (c.n <= 2) break;
  }
  pc.side_ok = true;
  for (cplx z : probes)
    pc.side_ok = pc.side_ok && !inside_polygon(pc.W_A_chart, z) && !inside_polygon(pc.W_B_chart, z);

  // Interiors overlap when a sample of one curve lies inside the other polygon
  // deeper than the chord error of the sampling.
  const auto& A = pc.W_A_chart;
  const auto& B = pc.W_B_chart;
  auto polyline_distance = [](const std::vector<cplx>& poly, cplx z) {
    double d = HUGE_VAL;
    for (std::size_t k = 0; k < poly.size(); ++k) d = std::min(d, point_segment(z, poly[k], poly[(k + 1) % poly.size()]));
    return d;
  };
  double sagitta = 0.0;
  for (std::size_t k = 0; k < A.size(); ++k) {
    sagitta = std::max(sagitta, point_segment(mid_A[k], A[k], A[(k + 1) % A.size()]));
    sagitta = std::max(sagitta, point_segment(mid_B[k], B[k], B[(k + 1) % B.size()]));
  }
  const double slack = 4.0 * sagitta + 1e-12;
  pc.overlap_depth = 0.0;
  auto probe_inside = [&](const std::vector<cplx>& pts, const std::vector<cplx>& poly) {
    for (cplx z : pts)
      if (inside_polygon(poly, z)) pc.overlap_depth = std::max(pc.overlap_depth, polyline_distance(poly, z));
  };
  // Interior probes catch coincident curves, where every sample sits on the other boundary.
  auto interior_probes = [&](const std::vector<cplx>& poly) {
    double area = 0.0, diam = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      area += cross(poly[k], poly[(k + 1) % poly.size()]);
      diam = std::max(diam, std::abs(poly[k] - poly[0]));
    }
    const double step = 0.01 * diam;
    std::vector<cplx> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      cplx t = poly[(k + 1) % poly.size()] - poly[k];
      if (std::abs(t) == 0.0) continue;
      cplx z = 0.5 * (poly[k] + poly[(k + 1) % poly.size()]) + step * (area > 0 ? cplx(0, 1) : cplx(0, -1)) * t / std::abs(t);
      if (inside_polygon(poly, z) && polyline_distance(poly, z) > 0.5 * step) out.push_back(z);
    }
    return out;
  };
  probe_inside(A, B);
  probe_inside(mid_A, B);
  probe_inside(interior_probes(A), B);
  probe_inside(B, A);
  probe_inside(mid_B, A);
  probe_inside(interior_probes(B), A);
  pc.disjoint = pc.overlap_depth <= slack && pc.side_ok;
  double margin = HUGE_VAL;
  const auto& PA = pc.W_A;
  const auto& PB = pc.W_B;
  for (std::size_t i = 0; i < PA.size(); ++i) {
    if (PA[i].inf || !finite_small(PA[i].z)) continue;
    for (std::size_t j = 0; j < PB.size(); ++j) {
      const Point &b0 = PB[j], &b1 = PB[(j + 1) % PB.size()];
      if (b0.inf || b1.inf || !finite_small(b0.z) || !finite_small(b1.z)) continue;
      margin = std::min(margin, point_segment(PA[i].z, b0.z, b1.z));
    }
  }
  for (std::size_t j = 0; j < PB.size(); ++j) {
    if (PB[j].inf || !finite_small(PB[j].z)) continue;
    for (std::size_t i = 0; i < PA.size(); ++i) {
      const Point &a0 = PA[i], &a1 = PA[(i + 1) % PA.size()];
      if (a0.inf || a1.inf || !finite_small(a0.z) || !finite_small(a1.z)) continue;
      margin = std::min(margin, point_segment(PB[j].z, a0.z, a1.z));
    }
  }
  pc.margin = pc.disjoint ? margin : -pc.overlap_depth;
  return pc;
}

// ---------------------------------------------------------------------------

namespace {

bool window_passes(const Fraction& f, cplx mu) {
  Chain c = build_chain(f, mu, 0, static_cast<int>(f.q));
  const int end = c.first + c.size();
  for (int i = c.first; i + 1 < end; ++i)
    if (tangency_residual(c.disk_at(i), c.disk_at(i + 1)) > 10.0 * kTangencyTol) return false;
  for (int i = c.first; i < end; ++i)
    for (int j = i + 2; j < end; ++j) {
      const GeneralizedDisk &a = c.disk_at(i), &b = c.disk_at(j);
      if (disk_separation(a, b) <= 10.0 * kTangencyTol * std::max({disk_scale(a), disk_scale(b), 1.0})) return false;
    }
  return true;
}

}  // namespace

PerturbationResult perturbation_radius(const Fraction& f, int samples) {
  if (samples < 1) throw std::invalid_argument("perturbation_radius: samples must be >= 1");
  TraceFunction tf = TraceFunction::maskit(f);
  RayOptions opt;
  opt.t_end = 0.0;
  RayTrace rt = trace_ray(tf, opt);
  const SpecialPoint* cusp = rt.special(0);
  if (!cusp) throw std::runtime_error("perturbation_radius: cusp not reached");
  const cplx mu0 = cusp->param;
  const double sign = rt.sign;
  // the extension's smallest reachable |t|
  double t_min = 2.0;
  cplx at_min = mu0;
  for (const RaySample& s : rt.samples)
    if (std::abs(s.t) < t_min) t_min = std::abs(s.t), at_min = s.param;

  auto param_at = [&](double t, cplx seed) { return solve_trace(tf, sign * t, seed).param; };

  PerturbationResult out;
  double t_pass = 2.0;
  cplx mu_pass = mu0;
  for (int k = 1; k <= samples; ++k) {
    double t = 2.0 - (2.0 - t_min) * k / samples;
    cplx seed = mu_pass;
    // walk from the last passing point in small steps to stay on the branch
    for (int sub = 1; sub <= 20; ++sub) seed = param_at(t_pass + (t - t_pass) * sub / 20.0, seed);
    if (k == samples && std::abs(t - t_min) < 1e-15) seed = at_min;
    ++out.probes;
    if (window_passes(f, seed)) {
      t_pass = t;
      mu_pass = seed;
      continue;
    }
    if (samples > 1) {
      double lo = t_pass, hi = t;
      cplx mlo = mu_pass;
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        cplx m = param_at(mid, mlo);
        if (window_passes(f, m)) lo = mid, mlo = m;
        else hi = mid;
      }
      mu_pass = mlo;
    }
    out.eta = std::abs(mu_pass - mu0);
    out.last_pass = mu_pass;
    return out;
  }
  out.reached_end = true;
  out.eta = std::abs(mu_pass - mu0);
  out.last_pass = mu_pass;
  return out;
}

}  // namespace maskit
