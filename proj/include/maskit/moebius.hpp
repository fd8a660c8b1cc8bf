#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace maskit {

using cplx = std::complex<double>;

// A point of the extended plane. Infinity is explicit, never encoded as a huge value.
struct Point {
  cplx z{};
  bool inf = false;

  Point() = default;
  Point(cplx w) : z(w) {}  // NOLINT(google-explicit-constructor)
  Point(double x) : z(x) {}  // NOLINT(google-explicit-constructor)
  static Point infinity() {
    Point p;
    p.inf = true;
    return p;
  }
  bool is_inf() const { return inf; }
};

bool near(const Point& a, const Point& b, double tol);

// SL(2,C) representative of a Mobius transformation. Products keep the lift,
// so traces of words are well defined; use canonical() for PSL comparisons.
class Mobius {
 public:
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Mobius() = default;
  // Entries are rescaled so that ad - bc = 1. Throws on a singular matrix.
  Mobius(cplx a_, cplx b_, cplx c_, cplx d_);

  static Mobius identity() { return {}; }
  // Raw constructor: no normalization. Caller guarantees det = 1.
  static Mobius raw(cplx a_, cplx b_, cplx c_, cplx d_);

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
  Mobius inverse() const { return raw(d, -b, -c, a); }
  Mobius operator*(const Mobius& o) const;
  Mobius operator-() const { return raw(-a, -b, -c, -d); }

  Point apply(const Point& p) const;
  cplx derivative_at(cplx z) const;  // 1 / (cz + d)^2

  double max_abs_diff(const Mobius& o) const;
};

// First nonzero entry (a, b, c, d order) gets a nonnegative real part.
Mobius canonical(const Mobius& m);
// Product, normalized and sign canonicalized.
Mobius compose(const Mobius& x, const Mobius& y);
Mobius power(const Mobius& m, long long k);

// Entrywise distance in PSL(2,C): min over the sign of |x - (+-y)|_max.
double psl_distance(const Mobius& x, const Mobius& y);
bool same_transformation(const Mobius& x, const Mobius& y, double tol = 1e-9);
bool is_identity(const Mobius& m, double tol = 1e-9);

enum class Kind { Identity, Parabolic, Elliptic, Loxodromic };
std::string to_string(Kind k);

struct Classification {
  Kind kind = Kind::Identity;
  double angle = 0.0;   // rotation angle in (0, 2pi) for elliptics
  int order = 0;        // detected finite order, 0 when undetected
  cplx trace{};
};

Classification classify(const Mobius& m, double tol = 1e-10);

// Continued-fraction reconstruction of x as a/b with b <= max_den and
// |x - a/b| <= tol. Returns nullopt when no such fraction exists.
std::optional<std::pair<long long, long long>> rational_approx(double x, long long max_den,
                                                               double tol);

// Parabolic: one point. Otherwise two; the attracting point comes first for
// loxodromics. Throws std::invalid_argument for the identity.
std::vector<Point> fixed_points(const Mobius& m);

Mobius three_point_map(const Point& z1, const Point& z2, const Point& z3, const Point& w1,
                       const Point& w2, const Point& w3);

// Closed round disk in the extended plane: the inside or outside of a circle,
// or a half-plane. A witness point strictly inside resolves the side.
struct GeneralizedDisk {
  enum class Type { Disk, Exterior, HalfPlane };
  Type type = Type::Disk;
  cplx center{};
  double radius = 1.0;
  cplx point{};      // half-plane: a point on the boundary line
  cplx normal{0, 1}; // half-plane: unit normal pointing into the disk
  cplx witness{};

  static GeneralizedDisk disk(cplx center, double radius);
  static GeneralizedDisk exterior(cplx center, double radius);
  // {z : Re((z - p) * conj(n)) >= 0}
  static GeneralizedDisk half_plane(cplx p, cplx n);
  static GeneralizedDisk lower_half_plane() { return half_plane(0.0, cplx(0, -1)); }
  static GeneralizedDisk upper_half_plane(double h = 0.0) { return half_plane(cplx(0, h), cplx(0, 1)); }

  bool is_circle() const { return type != Type::HalfPlane; }
  bool contains_infinity() const { return type != Type::Disk; }
  // Signed distance: positive inside, negative outside (plane distance to the boundary).
  double signed_distance(cplx z) const;
  bool contains(const Point& p, double tol = 0.0) const;
  // Three boundary points, in boundary orientation. Half-planes include infinity.
  std::vector<Point> boundary_points() const;
  // True when p lies on the boundary circle/line (infinity is on every line).
  bool on_boundary(const Point& p, double tol) const;
};

std::string describe(const GeneralizedDisk& d);

GeneralizedDisk map_disk(const Mobius& m, const GeneralizedDisk& d);

// Generalized circle through three distinct points.
GeneralizedDisk disk_through(const Point& p1, const Point& p2, const Point& p3, const Point& witness);

// Distance between two disks as sets: zero when equal. Boundaries are compared at
// unit scale, and a side mismatch returns +infinity.
double disk_distance(const GeneralizedDisk& x, const GeneralizedDisk& y);

// Signed separation of the two closed disks: > 0 gap, 0 tangent, < 0 overlap depth.
// Half-planes with parallel, opposite boundaries touch at infinity and report 0
// (their finite gap is returned through finite_gap when requested).
double disk_separation(const GeneralizedDisk& x, const GeneralizedDisk& y, double* finite_gap = nullptr);

// The touching point of two tangent disks (infinity for parallel half-planes).
Point tangency_point(const GeneralizedDisk& x, const GeneralizedDisk& y);

}  // namespace maskit
