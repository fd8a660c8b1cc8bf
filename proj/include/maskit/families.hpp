#pragma once

#include "maskit/moebius.hpp"

namespace maskit {

Mobius maskit_S();
Mobius maskit_T(cplx mu);

struct MaskitGroup {
  cplx mu{};
  Mobius S, T, S_tilde, K;
};

MaskitGroup maskit_group(cplx mu);

struct KoebeGroup {
  int n = 0;
  cplx tau{};
  Mobius A, B, C, K;
  double d = 0.0;  // hyperbolic distance between fix A and fix B
};

// n >= 2, tau != 0. n = 2 uses the dihedral matrices.
KoebeGroup koebe_group(int n, cplx tau);
Mobius koebe_A(int n);
Mobius koebe_B(int n);
Mobius koebe_C(int n, cplx tau);
// dC/dtau as a raw matrix (a, b, c, d) packed in a Mobius without normalization.
Mobius koebe_C_derivative(int n, cplx tau);

// Printed alternative forms, kept for cross-checks.
Mobius koebe_B_hyperbolic_form(int n);
Mobius koebe_C_hyperbolic_form(int n, cplx tau);

double d_n(int n);
double koebe_discreteness_radius(int n);
// The 0/1 boundary point: tau with tr C = 2, tau^2 = (1 + sin)/(1 - sin).
double tau_01(int n);

// beta with beta(i e^{-i pi/n} - 2) = 0, beta(i e^{i pi/n} - 2) = inf, beta(-1) = e^{-i pi/n}.
Mobius beta_conjugator(int n);

struct ConjugacyReport {
  int n = 0;
  double res_A = 0.0;  // beta (S^-1 T^-1 S) beta^-1 vs A_n
  double res_B = 0.0;  // beta T beta^-1 vs B_n
  double res_C = 0.0;  // beta S^-1 beta^-1 vs C_n[tau_01]
  double max() const;
};

// Conjugates the Maskit generators at mu_0(n) = 2i cos(pi/n) into G_n[tau_01].
ConjugacyReport check_conjugacy(int n);

double quotient_area(int n);

// E(z) = -conj(z). E m E as a matrix, and the mirrored parameter -conj(mu).
Mobius mirror_conjugate(const Mobius& m);
cplx mirror_parameter(cplx mu);

}  // namespace maskit
