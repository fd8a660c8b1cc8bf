#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "maskit/farey.hpp"
#include "maskit/moebius.hpp"

namespace maskit {

enum class Family { Maskit, Koebe };
std::string to_string(Family f);

// mu -> tr W_{p/q}[S, T[mu]], or tau -> tr W_{p/q}[A_n, C_n[tau]].
class TraceFunction {
 public:
  static TraceFunction maskit(const Fraction& f);
  static TraceFunction koebe(int n, const Fraction& f);

  Family family() const { return family_; }
  int n() const { return n_; }
  const Fraction& fraction() const { return fraction_; }
  const std::string& letters() const { return letters_; }

  Mobius X() const;
  Mobius Y(cplx param) const;
  Mobius matrix(cplx param) const;
  cplx value(cplx param) const;
  // Exact derivative by the product rule on the word.
  cplx derivative(cplx param) const;
  void value_and_derivative(cplx param, cplx& value, cplx& deriv) const;

 private:
  Family family_ = Family::Maskit;
  int n_ = 0;
  Fraction fraction_;
  std::string letters_;
};

struct SolveError : std::runtime_error {
  enum class Reason { NoConvergence, FlatDerivative };
  Reason reason;
  cplx last;
  SolveError(Reason r, cplx at, const std::string& msg) : std::runtime_error(msg), reason(r), last(at) {}
};

struct SolveResult {
  cplx param{};
  double residual = 0.0;
  int iterations = 0;
};

// Newton on tr(param) = target. Residual tolerance 1e-11 (scaled by |target|/2 above 2),
// at most 100 iterations. Throws SolveError.
SolveResult solve_trace(const TraceFunction& tf, cplx target, cplx seed, int max_iter = 100);

enum class SampleFlag { InsideM, Cusp, Extended };
std::string to_string(SampleFlag f);

struct RaySample {
  double t = 0.0;  // real trace value at the sample (signed)
  cplx param{};
  SampleFlag flag = SampleFlag::InsideM;
  double residual = 0.0;
};

struct SpecialPoint {
  int order = 0;  // 0 for the cusp, otherwise the elliptic order n
  double target = 0.0;
  cplx param{};
  double residual = 0.0;
  std::string label() const;
};

struct RayTrace {
  Family family = Family::Maskit;
  int n = 0;
  Fraction fraction;
  int sign = 1;  // sign of the trace along the branch
  std::vector<RaySample> samples;
  std::vector<SpecialPoint> specials;
  bool complete = true;
  std::string note;  // reason for a partial trace
  // Koebe only: every sample inside the argument sector of tau^2.
  bool sector_ok = true;
  double max_sector_excess = 0.0;

  const SpecialPoint* special(int order) const;
};

struct RayOptions {
  double t_start = 0.0;  // |trace| to start recording from; 0 = the seed's trace
  double t_end = 0.0;    // |trace| to stop at
  double step = 0.05;    // relative step in |trace|
  std::vector<int> orders;  // elliptic orders to refine on the extension
  double seed_height = 8.0;  // Maskit: Im mu of the seed scan; Koebe: |tau|
};

struct RaySeed {
  cplx param{};
  double t = 0.0;
};

// The branch of the real-trace locus that is asymptotically vertical (Maskit, at
// Re mu = 2p/q) or radial with arg tau^2 = -2 pi p/(q n) (Koebe).
RaySeed seed_ray(const TraceFunction& tf, double height);

RayTrace trace_ray(const TraceFunction& tf, const RayOptions& opt = {});

// The p/q ray in M_n from its seed down to the boundary point, with the tau^2
// sector check for the integral part k of p/q.
RayTrace koebe_ray(int n, const Fraction& f, double step = 0.05);

// Refined special points. Throws std::runtime_error when the ray cannot reach them.
SpecialPoint find_cusp(const TraceFunction& tf);
SpecialPoint elliptic_point(const TraceFunction& tf, int order);

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace maskit
