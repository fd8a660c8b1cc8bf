#include "maskit/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace maskit {

namespace {

constexpr double kPole = 1e-14;

double max_abs4(cplx a, cplx b, cplx c, cplx d) {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

}  // namespace

bool near(const Point& a, const Point& b, double tol) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return std::abs(a.z - b.z) <= tol;
}

Mobius::Mobius(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
  cplx det = a * d - b * c;
  double scale = max_abs4(a, b, c, d);
  if (scale == 0.0 || std::abs(det) <= 1e-28 * scale * scale)
    throw std::invalid_argument("singular Mobius matrix");
  cplx s = std::sqrt(det);
  a /= s;
  b /= s;
  c /= s;
  d /= s;
}

Mobius Mobius::raw(cplx a_, cplx b_, cplx c_, cplx d_) {
  Mobius m;
  m.a = a_;
  m.b = b_;
  m.c = c_;
  m.d = d_;
  return m;
}

Mobius Mobius::operator*(const Mobius& o) const {
  return raw(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

Point Mobius::apply(const Point& p) const {
  if (p.inf) {
    if (std::abs(c) < kPole) return Point::infinity();
    return Point(a / c);
  }
  cplx den = c * p.z + d;
  if (std::abs(den) < kPole) return Point::infinity();
  return Point((a * p.z + b) / den);
}

cplx Mobius::derivative_at(cplx z) const {
  cplx den = c * z + d;
  return 1.0 / (den * den);
}

double Mobius::max_abs_diff(const Mobius& o) const {
  return max_abs4(a - o.a, b - o.b, c - o.c, d - o.d);
}

Mobius canonical(const Mobius& m) {
  const cplx e[4] = {m.a, m.b, m.c, m.d};
  double scale = max_abs4(m.a, m.b, m.c, m.d);
  double eps = 1e-14 * std::max(scale, 1.0);
  for (const cplx& v : e) {
    if (std::abs(v) <= eps) continue;
    bool flip = std::abs(v.real()) > eps ? v.real() < 0 : v.imag() < 0;
    return flip ? -m : m;
  }
  return m;
}

Mobius compose(const Mobius& x, const Mobius& y) {
  Mobius p = x * y;
  return canonical(Mobius(p.a, p.b, p.c, p.d));
}

Mobius power(const Mobius& m, long long k) {
  Mobius base = k < 0 ? m.inverse() : m;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  Mobius out;
  while (e) {
    if (e & 1ULL) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

double psl_distance(const Mobius& x, const Mobius& y) {
  return std::min(x.max_abs_diff(y), x.max_abs_diff(-y));
}

bool same_transformation(const Mobius& x, const Mobius& y, double tol) {
  return psl_distance(x, y) <= tol;
}

bool is_identity(const Mobius& m, double tol) { return psl_distance(m, Mobius::identity()) <= tol; }

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Identity: return "identity";
    case Kind::Parabolic: return "parabolic";
    case Kind::Elliptic: return "elliptic";
    case Kind::Loxodromic: return "loxodromic";
  }
  return "?";
}

std::optional<std::pair<long long, long long>> rational_approx(double x, long long max_den, double tol) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(r);
    long long ai = static_cast<long long>(fl);
    long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    if (std::abs(x - static_cast<double>(h2) / static_cast<double>(k2)) <= tol) return std::make_pair(h2, k2);
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

Classification classify(const Mobius& m, double tol) {
  Classification out;
  out.trace = m.trace();
  cplx t2 = out.trace * out.trace;
  if (std::abs(t2.imag()) > tol) {
    out.kind = Kind::Loxodromic;
    return out;
  }
  double r = t2.real();
  if (std::abs(r - 4.0) <= tol) {
    out.kind = is_identity(m, 1e-9) ? Kind::Identity : Kind::Parabolic;
    return out;
  }
  if (r >= -tol && r < 4.0) {
    out.kind = Kind::Elliptic;
    double half = std::clamp(std::sqrt(std::max(r, 0.0)) / 2.0, 0.0, 1.0);
    out.angle = 2.0 * std::acos(half);
    if (auto q = rational_approx(out.angle / (2.0 * M_PI), 1000, 1e-8)) out.order = static_cast<int>(q->second);
    return out;
  }
  out.kind = Kind::Loxodromic;
  return out;
}

std::vector<Point> fixed_points(const Mobius& m) {
  Classification cl = classify(m);
  if (cl.kind == Kind::Identity) throw std::invalid_argument("identity has no isolated fixed points");
  double scale = max_abs4(m.a, m.b, m.c, m.d);
  if (std::abs(m.c) <= 1e-14 * scale) {
    if (cl.kind == Kind::Parabolic || std::abs(m.d - m.a) <= 1e-14 * scale) return {Point::infinity()};
    Point fin(m.b / (m.d - m.a));
    // z -> (a/d) z + b/d: infinity attracts when |a/d| > 1.
    if (std::abs(m.a) > std::abs(m.d)) return {Point::infinity(), fin};
    return {fin, Point::infinity()};
  }
  if (cl.kind == Kind::Parabolic) return {Point((m.a - m.d) / (2.0 * m.c))};
  cplx disc = std::sqrt(m.trace() * m.trace() - 4.0);
  cplx z1 = (m.a - m.d + disc) / (2.0 * m.c);
  cplx z2 = (m.a - m.d - disc) / (2.0 * m.c);
  if (std::abs(m.c * z1 + m.d) < std::abs(m.c * z2 + m.d)) std::swap(z1, z2);
  return {Point(z1), Point(z2)};
}

namespace {

// M(z1) = 0, M(z2) = inf, M(z3) = 1.
Mobius to_standard(const Point& z1, const Point& z2, const Point& z3) {
  if (z1.inf) return Mobius(0.0, z3.z - z2.z, 1.0, -z2.z);
  if (z2.inf) return Mobius(1.0, -z1.z, 0.0, z3.z - z1.z);
  if (z3.inf) return Mobius(1.0, -z1.z, 1.0, -z2.z);
  cplx u = z3.z - z2.z, v = z3.z - z1.z;
  return Mobius(u, -z1.z * u, v, -z2.z * v);
}

void require_distinct(const Point& a, const Point& b, const Point& c) {
  const double tol = 1e-14;
  if (near(a, b, tol) || near(a, c, tol) || near(b, c, tol))
    throw std::invalid_argument("three_point_map: coincident points");
}

}  // namespace

Mobius three_point_map(const Point& z1, const Point& z2, const Point& z3, const Point& w1, const Point& w2,
                       const Point& w3) {
  require_distinct(z1, z2, z3);
  require_distinct(w1, w2, w3);
  return compose(to_standard(w1, w2, w3).inverse(), to_standard(z1, z2, z3));
}

// ---------------------------------------------------------------------------
// Generalized disks

GeneralizedDisk GeneralizedDisk::disk(cplx center, double radius) {
  GeneralizedDisk g;
  g.type = Type::Disk;
  g.center = center;
  g.radius = radius;
  g.witness = center;
  return g;
}

GeneralizedDisk GeneralizedDisk::exterior(cplx center, double radius) {
  GeneralizedDisk g;
  g.type = Type::Exterior;
  g.center = center;
  g.radius = radius;
  g.witness = center + 2.0 * radius;
  return g;
}

GeneralizedDisk GeneralizedDisk::half_plane(cplx p, cplx n) {
  GeneralizedDisk g;
  g.type = Type::HalfPlane;
  g.point = p;
  g.normal = n / std::abs(n);
  g.witness = p + g.normal;
  return g;
}

double GeneralizedDisk::signed_distance(cplx z) const {
  switch (type) {
    case Type::Disk: return radius - std::abs(z - center);
    case Type::Exterior: return std::abs(z - center) - radius;
    case Type::HalfPlane: return ((z - point) * std::conj(normal)).real();
  }
  return 0.0;
}

bool GeneralizedDisk::contains(const Point& p, double tol) const {
  if (p.inf) return contains_infinity();
  return signed_distance(p.z) >= -tol;
}

std::vector<Point> GeneralizedDisk::boundary_points() const {
  if (type == Type::HalfPlane) {
    cplx u = cplx(0, -1) * normal;
    return {Point(point - u), Point(point + u), Point::infinity()};
  }
  const cplx w = std::polar(1.0, 2.0 * M_PI / 3.0);
  return {Point(center + radius), Point(center + radius * w), Point(center + radius * w * w)};
}

bool GeneralizedDisk::on_boundary(const Point& p, double tol) const {
  if (p.inf) return type == Type::HalfPlane;
  return std::abs(signed_distance(p.z)) <= tol;
}

std::string describe(const GeneralizedDisk& d) {
  std::ostringstream os;
  os.precision(10);
  switch (d.type) {
    case GeneralizedDisk::Type::Disk: os << "disk(c=" << d.center << ", r=" << d.radius << ")"; break;
    case GeneralizedDisk::Type::Exterior: os << "exterior(c=" << d.center << ", r=" << d.radius << ")"; break;
    case GeneralizedDisk::Type::HalfPlane: os << "halfplane(p=" << d.point << ", n=" << d.normal << ")"; break;
  }
  return os.str();
}

namespace {

struct GenCircle {
  bool line = false;
  cplx center{};
  double radius = 0.0;
  cplx point{};
  cplx dir{1.0};
};

GenCircle through(const Point& p1, const Point& p2, const Point& p3) {
  const Point* pts[3] = {&p1, &p2, &p3};
  std::vector<cplx> fin;
  for (const Point* p : pts)
    if (!p->inf) fin.push_back(p->z);
  GenCircle g;
  if (fin.size() < 3) {
    if (fin.size() < 2) throw std::invalid_argument("generalized circle: too few finite points");
    g.line = true;
    g.point = fin[0];
    g.dir = (fin[1] - fin[0]) / std::abs(fin[1] - fin[0]);
    return g;
  }
  cplx a = fin[0], b = fin[1], c = fin[2];
  double L = std::max({std::abs(a - b), std::abs(b - c), std::abs(a - c)});
  double det = 2.0 * (a.real() * (b.imag() - c.imag()) + b.real() * (c.imag() - a.imag()) +
                      c.real() * (a.imag() - b.imag()));
  if (std::abs(det) <= 1e-13 * L * L) {
    g.line = true;
    // use the two points furthest apart for direction
    cplx s = a, e = b;
    if (std::abs(a - c) > std::abs(s - e)) e = c;
    if (std::abs(b - c) > std::abs(s - e)) s = b, e = c;
    g.point = s;
    g.dir = (e - s) / std::abs(e - s);
    return g;
  }
  double a2 = std::norm(a), b2 = std::norm(b), c2 = std::norm(c);
  double ux = (a2 * (b.imag() - c.imag()) + b2 * (c.imag() - a.imag()) + c2 * (a.imag() - b.imag())) / det;
  double uy = (a2 * (c.real() - b.real()) + b2 * (a.real() - c.real()) + c2 * (b.real() - a.real())) / det;
  g.center = cplx(ux, uy);
  g.radius = (std::abs(a - g.center) + std::abs(b - g.center) + std::abs(c - g.center)) / 3.0;
  return g;
}

// Decide the side from images of interior sample points; the most decisive sample wins.
GeneralizedDisk with_side(const GenCircle& g, const std::vector<Point>& interior) {
  if (g.line) {
    cplx n = cplx(0, 1) * g.dir;
    double best = 0.0;
    for (const Point& w : interior) {
      if (w.inf) continue;
      double s = ((w.z - g.point) * std::conj(n)).real();
      if (std::abs(s) > std::abs(best)) best = s;
    }
    if (best == 0.0) throw std::runtime_error("map_disk: side undetermined");
    return GeneralizedDisk::half_plane(g.point, best > 0 ? n : -n);
  }
  double best = 0.0;
  for (const Point& w : interior) {
    if (w.inf) return GeneralizedDisk::exterior(g.center, g.radius);
    double s = (g.radius - std::abs(w.z - g.center)) / g.radius;
    if (std::abs(s) > std::abs(best)) best = s;
  }
  if (best == 0.0) throw std::runtime_error("map_disk: side undetermined");
  return best > 0 ? GeneralizedDisk::disk(g.center, g.radius) : GeneralizedDisk::exterior(g.center, g.radius);
}

std::vector<Point> interior_samples(const GeneralizedDisk& d) {
  std::vector<Point> out{Point(d.witness)};
  switch (d.type) {
    case GeneralizedDisk::Type::Disk:
      for (int k = 0; k < 4; ++k) out.emplace_back(d.center + 0.5 * d.radius * std::polar(1.0, k * M_PI / 2));
      break;
    case GeneralizedDisk::Type::Exterior:
      out.push_back(Point::infinity());
      for (int k = 0; k < 4; ++k) out.emplace_back(d.center + 3.0 * d.radius * std::polar(1.0, k * M_PI / 2));
      break;
    case GeneralizedDisk::Type::HalfPlane: {
      cplx u = cplx(0, -1) * d.normal;
      for (double s : {-1.0, 1.0}) out.emplace_back(d.point + 2.0 * d.normal + s * u);
      out.emplace_back(d.point + 0.5 * d.normal);
      break;
    }
  }
  return out;
}

}  // namespace

GeneralizedDisk disk_through(const Point& p1, const Point& p2, const Point& p3, const Point& witness) {
  return with_side(through(p1, p2, p3), {witness});
}

namespace {

// Image circle by symmetric points: the reflection of the pole in the boundary maps to
// the image centre. Falls back to three mapped points when the pole is on (or very
// near) the boundary and the image is a line.
GenCircle image_boundary(const Mobius& m, const GeneralizedDisk& d) {
  if (std::abs(m.c) > 0.0) {
    const cplx pole = -m.d / m.c;
    cplx refl, foot;
    double gap, scale;
    bool at_centre = false;
    if (d.is_circle()) {
      cplx v = pole - d.center;
      gap = std::abs(std::abs(v) - d.radius);
      scale = std::max(1.0, d.radius);
      at_centre = std::abs(v) < 1e-300;
      refl = at_centre ? cplx() : d.center + d.radius * d.radius / std::conj(v);
      foot = d.center + d.radius * (at_centre ? cplx(1.0) : v / std::abs(v));
    } else {
      double sd = ((pole - d.point) * std::conj(d.normal)).real();
      gap = std::abs(sd);
      scale = std::max(1.0, std::abs(d.point));
      refl = pole - 2.0 * sd * d.normal;
      foot = pole - sd * d.normal;
    }
    if (gap > 1e-6 * scale) {
      GenCircle g;
      Point c = at_centre ? Point(m.a / m.c) : m.apply(Point(refl));
      Point q = m.apply(Point(foot));
      if (!c.inf && !q.inf) {
        g.center = c.z;
        g.radius = std::abs(q.z - c.z);
        return g;
      }
    } else {
      // The pole is on the boundary, so the image is a line. Map two boundary
      // points well away from the pole rather than fitting a huge circle.
      cplx u = d.is_circle() ? (at_centre ? cplx(1.0) : (pole - d.center) / std::abs(pole - d.center))
                             : cplx(0, -1) * d.normal;
      cplx p1, p2;
      if (d.is_circle()) {
        p1 = d.center + d.radius * cplx(0, 1) * u;
        p2 = d.center - d.radius * cplx(0, 1) * u;
      } else {
        p1 = foot + scale * u;
        p2 = foot - scale * u;
      }
      Point w1 = m.apply(Point(p1)), w2 = m.apply(Point(p2));
      if (!w1.inf && !w2.inf && std::abs(w2.z - w1.z) > 0.0) {
        GenCircle g;
        g.line = true;
        g.point = w1.z;
        g.dir = (w2.z - w1.z) / std::abs(w2.z - w1.z);
        return g;
      }
    }
  }
  std::vector<Point> bp = d.boundary_points();
  for (Point& p : bp) p = m.apply(p);
  return through(bp[0], bp[1], bp[2]);
}

}  // namespace

GeneralizedDisk map_disk(const Mobius& m_in, const GeneralizedDisk& d) {
  // Rounding noise in c would turn lines into enormous circles; treat such maps as affine.
  Mobius m = m_in;
  if (std::abs(m.c) <= 1e-13 * std::max({1.0, std::abs(m.a), std::abs(m.b), std::abs(m.d)})) m.c = 0.0;
  std::vector<Point> in = interior_samples(d);
  for (Point& p : in) p = m.apply(p);
  return with_side(image_boundary(m, d), in);
}

double disk_distance(const GeneralizedDisk& x, const GeneralizedDisk& y) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (x.type != y.type) return inf;
  if (x.is_circle()) {
    double s = std::max({1.0, x.radius, y.radius});
    return (std::abs(x.center - y.center) + std::abs(x.radius - y.radius)) / s;
  }
  return std::abs(x.normal - y.normal) + std::abs(x.signed_distance(y.point));
}

double disk_separation(const GeneralizedDisk& x, const GeneralizedDisk& y, double* finite_gap) {
  using T = GeneralizedDisk::Type;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (finite_gap) *finite_gap = 0.0;
  if (x.type == T::Disk && y.type == T::Disk) return std::abs(x.center - y.center) - x.radius - y.radius;
  if (x.type == T::Disk && y.type == T::HalfPlane) return -y.signed_distance(x.center) - x.radius;
  if (x.type == T::HalfPlane && y.type == T::Disk) return disk_separation(y, x, finite_gap);
  if (x.type == T::Disk && y.type == T::Exterior) return y.radius - std::abs(x.center - y.center) - x.radius;
  if (x.type == T::Exterior && y.type == T::Disk) return disk_separation(y, x, finite_gap);
  if (x.type == T::HalfPlane && y.type == T::HalfPlane) {
    if (std::abs(x.normal + y.normal) > 1e-9) return -inf;
    double gap = -x.signed_distance(y.point);
    if (gap < 0) return gap;
    if (finite_gap) *finite_gap = gap;
    return 0.0;
  }
  return -inf;  // both contain a neighbourhood of infinity
}

Point tangency_point(const GeneralizedDisk& x, const GeneralizedDisk& y) {
  using T = GeneralizedDisk::Type;
  if (x.type == T::Disk && y.type == T::Disk) {
    cplx u = (y.center - x.center) / std::abs(y.center - x.center);
    return Point(x.center + x.radius * u);
  }
  if (x.type == T::Disk && y.type == T::HalfPlane) return Point(x.center + x.radius * y.normal);
  if (x.type == T::HalfPlane && y.type == T::Disk) return tangency_point(y, x);
  if (x.type == T::Disk && y.type == T::Exterior) {
    cplx u = (x.center - y.center) / std::abs(x.center - y.center);
    return Point(y.center + y.radius * u);
  }
  if (x.type == T::Exterior && y.type == T::Disk) return tangency_point(y, x);
  return Point::infinity();
}

}  // namespace maskit
