#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dpsqkd/linalg.hpp"
#include "dpsqkd/operators.hpp"

namespace dpsqkd {

enum class Branch { Plus, Minus };

const char* branch_name(Branch b);

// One leaked-information eigenvalue. value == max(plus, minus); branch names
// the side that attains it (plus wins ties). minus is absent for nu = 0.
struct OmegaValue {
  double lambda;
  int nu;
  double value;
  Branch branch;
  double plus;
  std::optional<double> minus;
};

// 3 + sqrt(5): where the one-photon plus branch reaches zero.
double lambda_zero();
// (10 - 3 sqrt(5)) / 22: end of the linear part of the one-photon boundary.
double eph1_threshold();

double omega0(double lambda);
// (3 - 2 lambda + sqrt(1 + 2 lambda^2)) / 4 for any lambda >= 0.
double omega1_plus(double lambda);
double omega1(double lambda);
// Largest root of the three-pulse cubic over 4. Matches the restricted
// (1,2,3) block for L >= 4; at L = 3 that block has two edge couplings.
double omega2_plus(double lambda);
// The two-photon plus branch for a given block length.
double omega2_plus(const BlockConfig& cfg, double lambda);
double omega2_minus(const BlockConfig& cfg, double lambda);
OmegaValue omega2(const BlockConfig& cfg, double lambda);

// Crossover of the two-photon branches.
double lambda_tilde(const BlockConfig& cfg);

// Closed forms for Complementarity, brute-force oracles for ShorPreskill.
// nu is limited to 0, 1, 2.
OmegaValue omega(const BlockConfig& cfg, int nu, double lambda,
                 PhaseErrorModel model = PhaseErrorModel::Complementarity);

// Search domain for lambda infima, log-scaled.
inline constexpr double kLambdaLo = 1e-4;
inline constexpr double kLambdaHi = 1e3;

double eph1_bound(double e_b);
// Same value from the stationarity condition of the lambda infimum; cheap
// enough for inner loops.
double eph1_bound_analytic(double e_b);

// inf over lambda of lambda e_b + Omega(lambda), clamped to [0, 1].
double eph_boundary(const BlockConfig& cfg, int nu, double e_b,
                    PhaseErrorModel model = PhaseErrorModel::Complementarity);

// Entropy with the cost capped at one bit once the phase error reaches 1/2.
double h_clamped(double p);

struct BoundaryOptions {
  double lambda_lo = kLambdaLo;
  double lambda_hi = kLambdaHi;
  int table_points = 16385;
};

// Tabulated supporting lines lambda_k e + Omega(lambda_k) on a log grid, plus
// one line at every kink of Omega found between grid points. envelope() is
// their lower envelope, which bounds the true curve from above and costs one
// binary search. exact() refines the best table slope with a
// golden search on the true Omega.
class PhaseErrorBoundary {
 public:
  PhaseErrorBoundary(const BlockConfig& cfg, int nu, PhaseErrorModel model, BoundaryOptions opts = {});

  double envelope(double e_b) const;
  double exact(double e_b) const;
  // Slope of the table line that is lowest at e_b.
  double envelope_slope(double e_b) const;

  int nu() const { return nu_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::vector<double>& omegas() const { return omegas_; }

 private:
  std::size_t lowest_line(double e_b) const;

  BlockConfig cfg_;
  int nu_;
  PhaseErrorModel model_;
  std::vector<double> lambdas_, omegas_;
  std::size_t n_points_ = 0;
  std::vector<std::size_t> hull_;     // table indices, slopes decreasing
  std::vector<double> breaks_;        // hull_[i] is lowest on [breaks_[i-1], breaks_[i])
};

struct EntropyCostOptions {
  int grid_points = 1025;
  double tol = 1e-12;
};

// Support function sup_{e in [0,1/2]} [h_clamped(B(e)) - gamma e] of a
// phase-error boundary B.
class EntropyCost {
 public:
  EntropyCost(std::function<double(double)> boundary, EntropyCostOptions opts = {});

  double operator()(double gamma) const;

 private:
  double H(double e) const;

  std::function<double(double)> boundary_;
  EntropyCostOptions opts_;
  std::vector<double> e_, h_;
};

// Entropy cost for (nu, model): the closed form for the one-photon
// Complementarity curve, a tabulated envelope otherwise.
std::shared_ptr<const EntropyCost> make_entropy_cost(const BlockConfig& cfg, int nu, PhaseErrorModel model,
                                                     BoundaryOptions bopts = {}, EntropyCostOptions eopts = {});

double omega_h(const BlockConfig& cfg, int nu, double gamma,
               PhaseErrorModel model = PhaseErrorModel::Complementarity);

enum class CurveKind { PhaseError, EntropyCost };

struct CurvePoint {
  double e_b;
  double bound;
};

struct BoundaryCurve {
  int nu;
  CurveKind kind;
  PhaseErrorModel model;
  std::vector<CurvePoint> points;
};

// eph_boundary on an even grid of n points over [0, 1/2].
BoundaryCurve phase_error_curve(const BlockConfig& cfg, int nu, PhaseErrorModel model, int n = 501);

double sp_omega(const BlockConfig& cfg, int nu, double lambda);
double sp_eph_boundary(const BlockConfig& cfg, int nu, double e_b);

// Probability weight of Alice's guess z given amplitude alpha.
double prediction_weight(double alpha, int z);

}  // namespace dpsqkd
