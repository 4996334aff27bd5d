#pragma once

#include <array>
#include <memory>
#include <vector>

#include "dpsqkd/bounds.hpp"
#include "dpsqkd/operators.hpp"

namespace dpsqkd {

// Transmittance including detector efficiency: 0.1 * 10^(-0.02 l).
double eta_from_distance(double distance_km);

struct ChannelPoint {
  double distance_km;
  double eta;
  double e_b;

  static ChannelPoint at_distance(double distance_km, double e_b);
};

struct ProtocolParams {
  BlockConfig cfg;
  double alpha_sq;
  PhaseErrorModel model;
};

// Detection probability per block.
double detection_rate(const BlockConfig& cfg, double eta, double alpha_sq);

double poisson_p(int nu, double mean);

// Pessimal split of the detection probability Q over photon numbers: the
// largest photon numbers are filled first.
struct QnuAllocation {
  int nu_min;
  std::array<double, 3> q;   // Q^(0), Q^(1), Q^(2)
  double q_higher;           // mass assigned to three or more photons
};

QnuAllocation allocate_qnu(double Q, const BlockConfig& cfg, double alpha_sq);

struct KeyRateResult {
  double G;            // floored at zero
  double G_raw;
  bool no_key;
  double alpha_sq_opt;
  double gamma_opt;
  double Q;
  std::array<double, 3> Qnu;
  int nu_min;
  double pa_cost;      // Q f_PA at gamma_opt
  double ec_cost;      // Q h(e_b)
};

struct KeyRateOptions {
  double gamma_lo = 1e-3;
  double gamma_hi = 1e2;
  int gamma_grid = 129;
  double alpha_sq_lo = 1e-6;
  double alpha_sq_hi = 1.0;
  int alpha_grid = 64;
  BoundaryOptions boundary;
  EntropyCostOptions entropy;
};

// Entropy costs for one (L, model) pair. Building the tables is the
// expensive step, so reuse one instance across channel points.
class KeyRateModel {
 public:
  KeyRateModel(const BlockConfig& cfg, PhaseErrorModel model, KeyRateOptions opts = {});

  const BlockConfig& cfg() const { return cfg_; }
  PhaseErrorModel model() const { return model_; }
  const KeyRateOptions& options() const { return opts_; }
  double omega_h(int nu, double gamma) const;

  // Q f_PA upper bound for a fixed gamma.
  double pa_cost(double gamma, double e_b, const QnuAllocation& alloc, double Q) const;
  KeyRateResult key_rate(const ChannelPoint& point, double alpha_sq) const;
  KeyRateResult optimize_alpha(const ChannelPoint& point) const;
  std::vector<KeyRateResult> distance_sweep(double e_b, const std::vector<double>& distances) const;

 private:
  BlockConfig cfg_;
  PhaseErrorModel model_;
  KeyRateOptions opts_;
  std::array<std::shared_ptr<const EntropyCost>, 3> cost_;
};

// One-shot wrappers. Each builds a fresh KeyRateModel.
double pa_cost(const BlockConfig& cfg, double gamma, double e_b, const QnuAllocation& alloc, double Q,
               PhaseErrorModel model);
KeyRateResult key_rate(const BlockConfig& cfg, const ChannelPoint& point, double alpha_sq, PhaseErrorModel model);
KeyRateResult optimize_alpha(const BlockConfig& cfg, const ChannelPoint& point, PhaseErrorModel model);
std::vector<KeyRateResult> distance_sweep(const BlockConfig& cfg, double e_b, const std::vector<double>& distances,
                                          PhaseErrorModel model);

}  // namespace dpsqkd
