#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dpsqkd {

struct VerifyConfig {
  int L_min = 3;
  int L_max = 16;
  std::vector<double> lambdas{0.1, 0.3, 1.0, 3.0, 10.0, 30.0};
  // Added to the diagonal of Pi inside the oracles. Nonzero values exist to
  // prove the suite can fail.
  double pi_perturbation = 0.0;
  int identity_points = 200;
  std::uint64_t seed = 20120917;
};

struct VerifyCheck {
  std::string suite;
  std::string name;
  int L;            // 0 when not applicable
  double lambda;    // 0 when not applicable
  double residual;
  double tolerance;
  bool passed;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool passed() const;
  std::size_t failures() const;
};

// Closed forms against the brute-force oracles, the single-excitation
// certificates and the identities of the characteristic function.
VerifyReport run_verification(const VerifyConfig& cfg);

// Sum of the magnitudes of the terms of F(L, x, w, y); the scale for
// relative residuals.
double characteristic_magnitude(int L, double x, double w, double y);

}  // namespace dpsqkd
