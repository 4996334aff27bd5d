#pragma once

#include <string>
#include <vector>

#include "dpsqkd/linalg.hpp"

// Exact eigenpairs of the weight-one blocks E_a - lambda Pi (a single
// excitation at position m), used to certify that the excitation next to an
// edge pulse maximizes the two-photon minus branch.
//
// Positions here are centred: j = i - (L+1)/2 for the 1-based basis index i,
// so j runs over -(L-1)/2 .. (L-1)/2 and is a half-integer when L is even.
// CentredIndex stores 2j to stay in integers.

namespace dpsqkd {

struct CentredIndex {
  int twice;

  double value() const { return 0.5 * twice; }
  std::string str() const;
};

CentredIndex centred_from_basis(int L, int i);
int basis_from_centred(int L, CentredIndex j);

// F(L, x, w, y); its largest root in x fixes the eigenvalue.
double characteristic(int L, double x, double w, double y);

// The x >= 0 solving cosh(2x) / (2 cosh x) = w, or 0 when w <= 1/2.
double x_w(double w);

// Largest root in x of F(L, x, w, y).
double x_max(int L, double w, double y);

double g_s(int L, double x, double w, CentredIndex m, int s);

// Unnormalized eigenvector for the excitation at m, |m| <= (L-3)/2.
Vector eigvec_v(int L, double lambda, CentredIndex m);

// (lambda/2)(cosh x_max - 1) with x_max = x_max(L, 1/lambda, 2m/(L-3)).
double excitation_eigenvalue(int L, double lambda, CentredIndex m);

// Tridiagonal block for the excitation at m, L >= 5, |m| <= (L-1)/2.
SymMatrix build_A_m(int L, double lambda, CentredIndex m);

struct CertificateCheck {
  std::string name;
  bool passed;
  double residual;
  double tolerance;
};

struct ExcitationCertificate {
  int L;
  double lambda;
  std::vector<CertificateCheck> checks;

  bool passed() const;
};

// Runs every sub-check; failures are recorded, not thrown.
ExcitationCertificate certify_edge_excitation(int L, double lambda);

}  // namespace dpsqkd
