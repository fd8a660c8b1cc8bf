#pragma once

#include <string>
#include <vector>

#include "maskit/farey.hpp"
#include "maskit/moebius.hpp"

namespace maskit {

struct ChainDisk {
  int index = 0;
  std::string word;  // carrier over {x, X, Y, y} with X = S, Y = T[mu]
  Mobius carrier;
  GeneralizedDisk disk;
};

// Tangent -s/q chain delta_i = g_i(L), L the closed lower half-plane, for the pair
// X = W_{p/q}, Z = W_{r/s} (r/s the upper neighbor). Index convention:
//   delta_0 touches the F circle at fix K, K = X Z^-1 X^-1 Z;
//   X^-1 delta_j = delta_{j+q} for all j, Z delta_j = delta_{j-s} for j = 0..q;
//   L itself sits at index q - s.
struct Chain {
  Fraction fraction, upper;
  int n = 0;  // elliptic order, 0 at a cusp (open window)
  cplx mu{};
  std::string x_word, z_word;
  Mobius X, Z;
  std::vector<std::string> period;  // carrier words for raw indices 0..q-1
  GeneralizedDisk base = GeneralizedDisk::lower_half_plane();
  std::vector<ChainDisk> disks;  // indices first..first+size-1
  int first = 0;
  Point fix_K;

  bool closed() const { return n > 0; }
  int size() const { return static_cast<int>(disks.size()); }
  // Closed chains wrap mod size; open chains accept first..first+size-1.
  const GeneralizedDisk& disk_at(int i) const;
  bool has_index(int i) const;
  // Carrier word for any index, computed from the period.
  std::string carrier_word(int i) const;
};

std::string free_reduce(const std::string& letters);

// Carrier words re-evaluated at mu. n > 0 gives a closed chain of n q disks;
// n = 0 an open window delta_{-1} .. delta_{count-1}.
Chain build_chain(const Fraction& f, cplx mu, int n, int count);

// 0 < p/q < 1, at the cusp mu_{p/q}; window delta_{-1} .. delta_{window-1}
// (empty for window = 0).
Chain build_cusp_chain(const Fraction& f, int window);

// At mu_{p/q}(n); integral f gives the half-plane chain.
Chain build_elliptic_chain(const Fraction& f, int n);

struct ConditionResult {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  std::string detail;
};

struct ChainReport {
  std::vector<ConditionResult> conditions;
  bool proper = false;  // every adjacent pair overlaps
  bool all_pass() const;
  const ConditionResult* find(const std::string& prefix) const;
};

constexpr double kTangencyTol = 1e-8;
constexpr double kDiskTol = 1e-9;

// Tangency residual of two closed disks (0 when tangent), scaled per the spec:
// |sep| / max(r1, r2, 1). Overlaps and gaps are both positive.
double tangency_residual(const GeneralizedDisk& a, const GeneralizedDisk& b);

ChainReport verify_combinatorial(const Chain& c, const Mobius& X, const Mobius& Z);
inline ChainReport verify_combinatorial(const Chain& c) { return verify_combinatorial(c, c.X, c.Z); }

struct PleatingCurves {
  std::vector<Point> W_A, W_B;  // closed sample polylines in the plane
  std::vector<cplx> W_A_chart, W_B_chart;  // the same in the chart 1/(z - p0)
  cplx p0{};
  bool disjoint = false;
  double margin = 0.0;  // plane distance of the curves; minus the overlap depth when not disjoint
  double overlap_depth = 0.0;
  bool simple_A = false, simple_B = false;
  bool side_ok = false;  // fix K lies outside both D_A and D_B
  double dagger_residual = 0.0;  // W_B vs C^-1(W_A), sampled
};

// Closed tangent chains only. D_A, D_B are the sides of W_A, W_B = C^-1(W_A)
// away from fix K. Throws std::invalid_argument for open or non-tangent chains.
PleatingCurves pleating_curves(const Chain& c, const Mobius& C, int samples_per_arc = 32);

struct PerturbationResult {
  double eta = 0.0;
  cplx last_pass{};
  int probes = 0;
  bool reached_end = false;  // every probe passed
};

// Largest distance from the cusp along the extended ray at which the transported
// window delta_{-1} .. delta_{q-1} keeps tangency (10x tolerance) and (*).
PerturbationResult perturbation_radius(const Fraction& f, int samples);

}  // namespace maskit
