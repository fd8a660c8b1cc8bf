#include "maskit/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maskit {

namespace {

const cplx I(0.0, 1.0);

void require_n(int n) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
}

void require_tau(cplx tau) {
  if (std::abs(tau) == 0.0) throw std::invalid_argument("tau must be nonzero");
}

}  // namespace

Mobius maskit_S() { return Mobius::raw(1.0, 2.0, 0.0, 1.0); }

Mobius maskit_T(cplx mu) { return Mobius::raw(-I * mu, -I, -I, 0.0); }

MaskitGroup maskit_group(cplx mu) {
  MaskitGroup g;
  g.mu = mu;
  g.S = maskit_S();
  g.T = maskit_T(mu);
  g.S_tilde = g.T.inverse() * g.S.inverse() * g.T;
  g.K = g.S * g.S_tilde;
  return g;
}

Mobius koebe_A(int n) {
  require_n(n);
  if (n == 2) return Mobius::raw(I, 0.0, 0.0, -I);
  return Mobius::raw(std::exp(-I * M_PI / double(n)), 0.0, 0.0, std::exp(I * M_PI / double(n)));
}

Mobius koebe_B(int n) {
  require_n(n);
  if (n == 2) return Mobius::raw(I, -2.0 * I, 0.0, -I);
  double s = std::sin(M_PI / n), ct = std::cos(M_PI / n) / s;
  return Mobius::raw(2.0 * I / s - std::exp(I * M_PI / double(n)), -2.0 * I * ct, 2.0 * I * ct,
                     -2.0 * I / s - std::exp(-I * M_PI / double(n)));
}

Mobius koebe_C(int n, cplx tau) {
  require_n(n);
  require_tau(tau);
  // n = 2: the inverse of the printed matrix; that one conjugates A_2 onto B_2 the wrong way round.
  if (n == 2) return Mobius::raw(0.0, -1.0 / tau, tau, -tau);
  double s = std::sin(M_PI / n), ct = std::cos(M_PI / n) / s;
  return Mobius::raw(tau * ct, -tau / s, 1.0 / (tau * s), -ct / tau);
}

Mobius koebe_C_derivative(int n, cplx tau) {
  require_n(n);
  require_tau(tau);
  if (n == 2) return Mobius::raw(0.0, 1.0 / (tau * tau), 1.0, -1.0);
  double s = std::sin(M_PI / n), ct = std::cos(M_PI / n) / s;
  return Mobius::raw(ct, -1.0 / s, -1.0 / (tau * tau * s), ct / (tau * tau));
}

Mobius koebe_B_hyperbolic_form(int n) {
  if (n < 3) throw std::invalid_argument("n must be >= 3");
  double s = std::sin(M_PI / n), c = std::cos(M_PI / n), d = d_n(n);
  return Mobius::raw(I * s * std::cosh(d) - c, -I * s * std::sinh(d), I * s * std::sinh(d), -I * s * std::cosh(d) - c);
}

Mobius koebe_C_hyperbolic_form(int n, cplx tau) {
  if (n < 3) throw std::invalid_argument("n must be >= 3");
  require_tau(tau);
  double h = d_n(n) / 2.0;
  return Mobius::raw(tau * std::sinh(h), -tau * std::cosh(h), std::cosh(h) / tau, -std::sinh(h) / tau);
}

KoebeGroup koebe_group(int n, cplx tau) {
  KoebeGroup g;
  g.n = n;
  g.tau = tau;
  g.A = koebe_A(n);
  g.B = koebe_B(n);
  g.C = koebe_C(n, tau);
  g.K = g.A * g.B;
  g.d = d_n(n);
  return g;
}

double d_n(int n) {
  require_n(n);
  return 2.0 * std::acosh(1.0 / std::sin(M_PI / n));
}

double koebe_discreteness_radius(int n) {
  require_n(n);
  if (n == 2) return 2.0;
  return (1.0 + std::sin(M_PI / n)) / std::cos(M_PI / n);
}

double tau_01(int n) {
  if (n < 3) throw std::invalid_argument("n must be >= 3");
  return (1.0 + std::sin(M_PI / n)) / std::cos(M_PI / n);
}

Mobius beta_conjugator(int n) {
  if (n < 3) throw std::invalid_argument("n must be >= 3");
  cplx e = std::exp(I * M_PI / double(n));
  return three_point_map(Point(I / e - 2.0), Point(I * e - 2.0), Point(-1.0), Point(0.0), Point::infinity(),
                         Point(1.0 / e));
}

double ConjugacyReport::max() const { return std::max({res_A, res_B, res_C}); }

ConjugacyReport check_conjugacy(int n) {
  ConjugacyReport r;
  r.n = n;
  Mobius b = beta_conjugator(n), bi = b.inverse();
  Mobius S = maskit_S(), T = maskit_T(cplx(0.0, 2.0 * std::cos(M_PI / n)));
  auto conj = [&](const Mobius& g) { return canonical(b * g * bi); };
  r.res_A = psl_distance(conj(S.inverse() * T.inverse() * S), canonical(koebe_A(n)));
  r.res_B = psl_distance(conj(T), canonical(koebe_B(n)));
  r.res_C = psl_distance(conj(S.inverse()), canonical(koebe_C(n, tau_01(n))));
  return r;
}

double quotient_area(int n) {
  require_n(n);
  if (n == 2) return 2.0 * M_PI;
  return 2.0 * M_PI * (1.0 - 2.0 / n) + 2.0 * M_PI;
}

Mobius mirror_conjugate(const Mobius& m) {
  return Mobius::raw(std::conj(m.a), -std::conj(m.b), -std::conj(m.c), std::conj(m.d));
}

cplx mirror_parameter(cplx mu) { return -std::conj(mu); }

}  // namespace maskit
