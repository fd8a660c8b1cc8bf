#pragma once

#include <string>
#include <vector>

#include "maskit/farey.hpp"
#include "maskit/moebius.hpp"

namespace maskit {

enum class JorgensenVerdict { Violating, Inconclusive, ElementarySuspect };
std::string to_string(JorgensenVerdict v);

struct JorgensenReport {
  double J = 0.0;  // |tr^2 f - 4| + |tr [f, g] - 2|
  JorgensenVerdict verdict = JorgensenVerdict::Inconclusive;
  std::string reason;  // why a pair was treated as elementary
};

// Only "violating" is a certificate (of non-discreteness). Elementary pairs and
// g elliptic of order 2, 3, 4 or 6 are reported as elementary-suspect.
JorgensenReport jorgensen(const Mobius& f, const Mobius& g);

struct ScanRegion {
  cplx center{};
  double radius_re = 0.1;
  double radius_im = 0.1;
};

struct ScanCell {
  int i = 0, j = 0;  // column (Re), row (Im)
  cplx mu{};
  JorgensenReport report;
};

struct ScanResult {
  int grid = 0;
  std::vector<ScanCell> cells;  // row-major, rows by Im
  const ScanCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * grid + i]; }
  int count(JorgensenVerdict v) const;
};

// Jorgensen test of the pair (K, W_{p/q}[mu]^n) on a grid x grid lattice spanning the
// region (nodes include the edges and, for odd grid, the center). grid = 1 probes the center.
ScanResult nondiscreteness_scan(const ScanRegion& region, const Fraction& f, int n, int grid);

enum class SignatureVerdict { Triangle, Parabolic, Loxodromic, NonDiscrete };
std::string to_string(SignatureVerdict v);

struct SignatureReport {
  SignatureVerdict verdict = SignatureVerdict::Loxodromic;
  int k = 0;  // for Triangle: signature (k, k, inf)
  cplx tr_W{}, tr_conj{}, tr_K{};
  double max_imag = 0.0;
  std::string str() const;
};

struct OffLocusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// F = <W_{p/q}, W_{r/s}^-1 W_{p/q}^-1 W_{r/s}> with r/s the upper neighbor.
// Throws OffLocusError when a trace has |Im| > 1e-6.
SignatureReport triangle_signature(cplx mu, const Fraction& f);

struct Circle {
  cplx center{};
  double radius = 0.0;
};

// |cz + d| = 1. Throws std::invalid_argument when m fixes infinity.
Circle isometric_circle(const Mobius& m);
// Isometric circles of the generators and their inverses (skipping those fixing infinity).
std::vector<Circle> ford_circles(const std::vector<Mobius>& gens);

}  // namespace maskit
