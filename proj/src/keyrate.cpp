#include "dpsqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>

#include "dpsqkd/errors.hpp"

namespace dpsqkd {

double eta_from_distance(double distance_km) {
  if (!(distance_km >= 0.0) || !std::isfinite(distance_km)) throw DomainError("distance must be non-negative");
  return 0.1 * std::pow(10.0, -0.2 * distance_km / 10.0);
}

ChannelPoint ChannelPoint::at_distance(double distance_km, double e_b) {
  if (!(e_b >= 0.0 && e_b <= 0.5)) throw DomainError("bit error rate must lie in [0, 1/2]");
  return {distance_km, eta_from_distance(distance_km), e_b};
}

double detection_rate(const BlockConfig& cfg, double eta, double alpha_sq) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("detection_rate: eta must lie in (0, 1]");
  if (!(alpha_sq > 0.0) || !std::isfinite(alpha_sq)) throw DomainError("detection_rate: alpha^2 must be positive");
  const int L = cfg.L();
  double x = eta * alpha_sq;
  return (L - 1) * x * std::exp(-(L + 1) * x);
}

double poisson_p(int nu, double mean) {
  if (nu < 0) throw DomainError("poisson_p: photon number must be non-negative");
  if (!(mean > 0.0) || !std::isfinite(mean)) throw DomainError("poisson_p: mean must be positive");
  return std::exp(-mean + nu * std::log(mean) - std::lgamma(nu + 1.0));
}

QnuAllocation allocate_qnu(double Q, const BlockConfig& cfg, double alpha_sq) {
  if (!(Q > 0.0 && Q <= 1.0)) throw DomainError("allocate_qnu: Q must lie in (0, 1]");
  if (!(alpha_sq > 0.0)) throw DomainError("allocate_qnu: alpha^2 must be positive");
  const double mean = cfg.L() * alpha_sq;

  // Tails T(n) = sum_{k>n} p_k, summed from the far end so small tails keep
  // their relative accuracy.
  int kmax = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 60.0);
  std::vector<double> p(kmax + 1);
  for (int k = 0; k <= kmax; ++k) p[k] = poisson_p(k, mean);
  std::vector<double> tail(kmax + 1, 0.0);
  for (int k = kmax - 1; k >= 0; --k) tail[k] = tail[k + 1] + p[k + 1];

  int nu_min = 0;
  while (nu_min < kmax && !(tail[nu_min] < Q)) ++nu_min;

  QnuAllocation out{nu_min, {0.0, 0.0, 0.0}, 0.0};
  for (int nu = 0; nu <= 2; ++nu) {
    if (nu == nu_min) out.q[nu] = Q - tail[nu_min];
    else if (nu > nu_min) out.q[nu] = p[nu];
  }
  out.q_higher = nu_min <= 2 ? tail[2] : Q;
  return out;
}

KeyRateModel::KeyRateModel(const BlockConfig& cfg, PhaseErrorModel model, KeyRateOptions opts)
    : cfg_(cfg), model_(model), opts_(opts) {
  for (int nu = 0; nu <= 2; ++nu) cost_[nu] = make_entropy_cost(cfg, nu, model, opts.boundary, opts.entropy);
}

double KeyRateModel::omega_h(int nu, double gamma) const {
  if (nu < 0 || nu > 2) throw InvalidInput("omega_h: photon number must be 0, 1 or 2");
  return (*cost_[nu])(gamma);
}

double KeyRateModel::pa_cost(double gamma, double e_b, const QnuAllocation& alloc, double Q) const {
  if (!(gamma > 0.0)) throw DomainError("pa_cost: gamma must be positive");
  double v = gamma * e_b * Q + Q;
  for (int nu = 0; nu <= 2; ++nu)
    if (alloc.q[nu] > 0.0) v += alloc.q[nu] * (omega_h(nu, gamma) - 1.0);
  return v;
}

KeyRateResult KeyRateModel::key_rate(const ChannelPoint& point, double alpha_sq) const {
  if (!(point.e_b >= 0.0 && point.e_b <= 0.5)) throw DomainError("key_rate: bit error rate must lie in [0, 1/2]");
  const double Q = detection_rate(cfg_, point.eta, alpha_sq);
  const QnuAllocation alloc = allocate_qnu(Q, cfg_, alpha_sq);
  const double sum_q = alloc.q[0] + alloc.q[1] + alloc.q[2];

  auto linearized = [&](double gamma) {
    double v = gamma * point.e_b * Q;
    for (int nu = 0; nu <= 2; ++nu)
      if (alloc.q[nu] > 0.0) v += alloc.q[nu] * omega_h(nu, gamma);
    return v;
  };
  MinimizeOptions mo;
  mo.grid_points = opts_.gamma_grid;
  mo.log_scale = true;
  auto best = minimize_scalar(linearized, Interval(opts_.gamma_lo, opts_.gamma_hi), 1e-9, mo);

  KeyRateResult r{};
  r.Q = Q;
  r.Qnu = alloc.q;
  r.nu_min = alloc.nu_min;
  r.alpha_sq_opt = alpha_sq;
  r.gamma_opt = best.argmin;
  r.ec_cost = Q * binary_entropy(point.e_b);
  r.pa_cost = best.min + Q - sum_q;
  r.G_raw = (sum_q - r.ec_cost - best.min) / cfg_.L();
  r.no_key = !(r.G_raw > 0.0);
  r.G = r.no_key ? 0.0 : r.G_raw;
  return r;
}

KeyRateResult KeyRateModel::optimize_alpha(const ChannelPoint& point) const {
  MinimizeOptions mo;
  mo.grid_points = opts_.alpha_grid;
  mo.log_scale = true;
  auto best = minimize_scalar([&](double a) { return -key_rate(point, a).G_raw; },
                              Interval(opts_.alpha_sq_lo, opts_.alpha_sq_hi), 1e-12, mo);
  return key_rate(point, best.argmin);
}

std::vector<KeyRateResult> KeyRateModel::distance_sweep(double e_b, const std::vector<double>& distances) const {
  std::vector<KeyRateResult> out;
  out.reserve(distances.size());
  for (double d : distances) out.push_back(optimize_alpha(ChannelPoint::at_distance(d, e_b)));
  return out;
}

double pa_cost(const BlockConfig& cfg, double gamma, double e_b, const QnuAllocation& alloc, double Q,
               PhaseErrorModel model) {
  return KeyRateModel(cfg, model).pa_cost(gamma, e_b, alloc, Q);
}

KeyRateResult key_rate(const BlockConfig& cfg, const ChannelPoint& point, double alpha_sq, PhaseErrorModel model) {
  return KeyRateModel(cfg, model).key_rate(point, alpha_sq);
}

KeyRateResult optimize_alpha(const BlockConfig& cfg, const ChannelPoint& point, PhaseErrorModel model) {
  return KeyRateModel(cfg, model).optimize_alpha(point);
}

std::vector<KeyRateResult> distance_sweep(const BlockConfig& cfg, double e_b, const std::vector<double>& distances,
                                          PhaseErrorModel model) {
  return KeyRateModel(cfg, model).distance_sweep(e_b, distances);
}

}  // namespace dpsqkd
