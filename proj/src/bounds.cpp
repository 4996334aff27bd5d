#include "dpsqkd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "dpsqkd/errors.hpp"

namespace dpsqkd {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive and finite");
}

void check_eb(double e_b) {
  if (!(e_b >= 0.0 && e_b <= 0.5)) throw DomainError("bit error rate must lie in [0, 1/2]");
}

void check_nu(int nu) {
  if (nu < 0 || nu > 2) throw InvalidInput("photon number must be 0, 1 or 2");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

OracleOptions sp_options() {
  OracleOptions o;
  o.model = PhaseErrorModel::ShorPreskill;
  return o;
}

// One smooth piece of Omega: a branch together with the word whose block
// attains it. The closed-form model has a fixed word per branch.
struct Piece {
  Branch branch;
  std::optional<BitPattern> word;
  double value;

  bool same_as(const Piece& o) const { return branch == o.branch && word == o.word; }
};

double block_top(const BlockConfig& cfg, Branch branch, const BitPattern& a, double lambda, PhaseErrorModel model) {
  SymMatrix m = phase_error_operator_conjugated(cfg, a, model) - lambda * pi_matrix(cfg);
  if (branch == Branch::Minus) return eig_max(m);
  std::vector<std::size_t> idx;
  for (int i : a.ones()) idx.push_back(static_cast<std::size_t>(i - 1));
  return eig_max(m.principal(idx));
}

Piece active_piece(const BlockConfig& cfg, int nu, PhaseErrorModel model, double lambda) {
  if (model == PhaseErrorModel::ShorPreskill) {
    auto opts = sp_options();
    auto p = omega_plus_oracle(cfg, lambda, nu, opts);
    if (nu == 0) return {Branch::Plus, p.argmax, p.value};
    auto m = omega_minus_oracle(cfg, lambda, nu, opts);
    if (p.value >= m.value) return {Branch::Plus, p.argmax, p.value};
    return {Branch::Minus, m.argmax, m.value};
  }
  OmegaValue v = omega(cfg, nu, lambda, model);
  return {v.branch, std::nullopt, v.value};
}

double piece_value(const BlockConfig& cfg, int nu, PhaseErrorModel model, const Piece& p, double lambda) {
  if (p.word) return block_top(cfg, p.branch, *p.word, lambda, model);
  if (p.branch == Branch::Plus) return nu == 0 ? omega0(lambda) : nu == 1 ? omega1_plus(lambda) : omega2_plus(cfg, lambda);
  return nu == 1 ? 0.0 : omega2_minus(cfg, lambda);
}

}  // namespace

const char* branch_name(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

double lambda_zero() { return 3.0 + std::sqrt(5.0); }

double eph1_threshold() { return (10.0 - 3.0 * std::sqrt(5.0)) / 22.0; }

double omega0(double lambda) {
  check_lambda(lambda);
  return -0.5 * lambda;
}

double omega1_plus(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be non-negative and finite");
  return (3.0 - 2.0 * lambda + std::sqrt(1.0 + 2.0 * lambda * lambda)) / 4.0;
}

double omega1(double lambda) {
  check_lambda(lambda);
  // The minus branch is identically zero; the plus branch is negative past
  // lambda_zero().
  return lambda <= lambda_zero() ? std::max(omega1_plus(lambda), 0.0) : 0.0;
}

double omega2_plus(double lambda) {
  check_lambda(lambda);
  double l = lambda;
  double x = cubic_max_real_root(1.0, 6.0 * l - 10.0, 32.0 - 40.0 * l + 9.0 * l * l,
                                 -32.0 + 64.0 * l - 32.0 * l * l + 2.0 * l * l * l);
  return x / 4.0;
}

double omega2_plus(const BlockConfig& cfg, double lambda) {
  if (cfg.L() >= 4) return omega2_plus(lambda);
  check_lambda(lambda);
  SymMatrix m = pi_ph(cfg, BitPattern::parse("111"));
  m -= lambda * pi_matrix(cfg);
  return eig_max(m);
}

double omega2_minus(const BlockConfig& cfg, double lambda) {
  check_lambda(lambda);
  const SymMatrix pi = pi_matrix(cfg);
  auto value_at = [&](int pos) {
    SymMatrix m = pi_ph(cfg, BitPattern::with_ones(cfg.L(), {pos}));
    m -= lambda * pi;
    return eig_max(m);
  };
  double v = value_at(2);
  if (cfg.L() <= 4) {
    for (int pos = 1; pos <= cfg.L(); ++pos) {
      if (value_at(pos) > v + 1e-12)
        throw ComputationError("omega2_minus: position " + std::to_string(pos) + " beats position 2 at L=" +
                               std::to_string(cfg.L()));
    }
  }
  return v;
}

OmegaValue omega2(const BlockConfig& cfg, double lambda) {
  double p = omega2_plus(cfg, lambda), m = omega2_minus(cfg, lambda);
  return {lambda, 2, std::max(p, m), p >= m ? Branch::Plus : Branch::Minus, p, m};
}

double lambda_tilde(const BlockConfig& cfg) {
  auto diff = [&](double u) {
    double l = std::exp(u);
    return omega2_plus(cfg, l) - omega2_minus(cfg, l);
  };
  const int n = 601;
  const double ulo = std::log(1e-3), uhi = std::log(1e3);
  double prev_u = ulo, prev = diff(ulo);
  for (int k = 1; k < n; ++k) {
    double u = ulo + (uhi - ulo) * k / (n - 1);
    double d = diff(u);
    if (prev > 0.0 && d <= 0.0) return std::exp(find_root(diff, Interval(prev_u, u), 1e-14));
    prev_u = u;
    prev = d;
  }
  throw ComputationError("lambda_tilde: no plus/minus crossover in [1e-3, 1e3] for L=" + std::to_string(cfg.L()));
}

OmegaValue omega(const BlockConfig& cfg, int nu, double lambda, PhaseErrorModel model) {
  check_nu(nu);
  check_lambda(lambda);
  if (model == PhaseErrorModel::ShorPreskill) {
    auto opts = sp_options();
    double p = omega_plus_oracle(cfg, lambda, nu, opts).value;
    if (nu == 0) return {lambda, 0, p, Branch::Plus, p, std::nullopt};
    double m = omega_minus_oracle(cfg, lambda, nu, opts).value;
    return {lambda, nu, std::max(p, m), p >= m ? Branch::Plus : Branch::Minus, p, m};
  }
  switch (nu) {
    case 0:
      return {lambda, 0, omega0(lambda), Branch::Plus, omega0(lambda), std::nullopt};
    case 1: {
      double p = omega1_plus(lambda);
      return {lambda, 1, omega1(lambda), p >= 0.0 ? Branch::Plus : Branch::Minus, p, 0.0};
    }
    default:
      return omega2(cfg, lambda);
  }
}

double eph1_bound(double e_b) {
  check_eb(e_b);
  if (e_b <= eph1_threshold()) return lambda_zero() * e_b;
  auto r = minimize_scalar([&](double l) { return l * e_b + omega1_plus(l); }, Interval(0.0, lambda_zero()), 1e-10);
  return std::min(r.min, 1.0);
}

double eph1_bound_analytic(double e_b) {
  check_eb(e_b);
  if (e_b <= eph1_threshold()) return lambda_zero() * e_b;
  // d/dlambda [lambda e + omega1_plus] = 0  <=>  lambda / sqrt(1 + 2 lambda^2) = 1 - 2e.
  double r = 1.0 - 2.0 * e_b;
  double l = r / std::sqrt(1.0 - 2.0 * r * r);
  return std::min(l * e_b + omega1_plus(l), 1.0);
}

double eph_boundary(const BlockConfig& cfg, int nu, double e_b, PhaseErrorModel model) {
  check_nu(nu);
  check_eb(e_b);
  if (nu == 1 && model == PhaseErrorModel::Complementarity) return eph1_bound(e_b);
  MinimizeOptions mo;
  mo.log_scale = true;
  auto r = minimize_scalar([&](double l) { return l * e_b + omega(cfg, nu, l, model).value; },
                           Interval(kLambdaLo, kLambdaHi), 1e-9, mo);
  return clamp01(r.min);
}

double h_clamped(double p) { return p >= 0.5 ? 1.0 : binary_entropy(std::max(p, 0.0)); }

PhaseErrorBoundary::PhaseErrorBoundary(const BlockConfig& cfg, int nu, PhaseErrorModel model, BoundaryOptions opts)
    : cfg_(cfg), nu_(nu), model_(model) {
  check_nu(nu);
  if (opts.table_points < 2) throw InvalidInput("PhaseErrorBoundary: need at least two table points");
  Interval dom(opts.lambda_lo, opts.lambda_hi);
  if (!(dom.lo > 0.0)) throw InvalidInput("PhaseErrorBoundary: lambda range must be positive");

  const int n = opts.table_points;
  const double ulo = std::log(dom.lo), uhi = std::log(dom.hi);
  std::vector<double> grid(n);
  std::vector<Piece> pieces;
  pieces.reserve(n);
  for (int k = 0; k < n; ++k) {
    grid[k] = k == 0 ? dom.lo : k == n - 1 ? dom.hi : std::exp(ulo + (uhi - ulo) * k / (n - 1));
    pieces.push_back(active_piece(cfg, nu, model, grid[k]));
  }

  // Omega is a max of smooth pieces. Where the active piece changes between
  // two grid points, add the exact crossing so the kink gets its own line.
  for (int k = 0; k < n; ++k) {
    lambdas_.push_back(grid[k]);
    omegas_.push_back(pieces[k].value);
    if (k + 1 == n || pieces[k].same_as(pieces[k + 1])) continue;
    const Piece &a = pieces[k], &b = pieces[k + 1];
    auto diff = [&](double l) {
      return piece_value(cfg, nu, model, a, l) - piece_value(cfg, nu, model, b, l);
    };
    try {
      double lc = find_root(diff, Interval(grid[k], grid[k + 1]), 1e-15 * grid[k + 1]);
      if (lc > grid[k] && lc < grid[k + 1]) {
        lambdas_.push_back(lc);
        omegas_.push_back(omega(cfg, nu, lc, model).value);
      }
    } catch (const BracketError&) {
      // Pieces that tie on the whole interval (mirror words) need no kink.
    }
  }
  n_points_ = lambdas_.size();

  // Lower envelope of the lines, walked from steep to shallow.
  auto cross = [&](std::size_t a, std::size_t b) {
    return (omegas_[b] - omegas_[a]) / (lambdas_[a] - lambdas_[b]);
  };
  for (std::size_t k = n_points_; k-- > 0;) {
    while (hull_.size() >= 2 && cross(hull_[hull_.size() - 2], k) <= cross(hull_[hull_.size() - 2], hull_.back()))
      hull_.pop_back();
    hull_.push_back(k);
  }
  for (std::size_t i = 0; i + 1 < hull_.size(); ++i) breaks_.push_back(cross(hull_[i], hull_[i + 1]));
}

std::size_t PhaseErrorBoundary::lowest_line(double e_b) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), e_b);
  return hull_[static_cast<std::size_t>(it - breaks_.begin())];
}

double PhaseErrorBoundary::envelope(double e_b) const {
  check_eb(e_b);
  std::size_t k = lowest_line(e_b);
  return clamp01(lambdas_[k] * e_b + omegas_[k]);
}

double PhaseErrorBoundary::envelope_slope(double e_b) const {
  check_eb(e_b);
  return lambdas_[lowest_line(e_b)];
}

double PhaseErrorBoundary::exact(double e_b) const {
  check_eb(e_b);
  if (nu_ == 1 && model_ == PhaseErrorModel::Complementarity) return eph1_bound(e_b);
  std::size_t k = lowest_line(e_b);
  double best = lambdas_[k] * e_b + omegas_[k];
  std::size_t lo = k == 0 ? 0 : k - 1, hi = std::min(k + 1, lambdas_.size() - 1);
  if (lo < hi) {
    MinimizeOptions mo;
    mo.log_scale = true;
    mo.grid_points = 3;
    auto r = minimize_scalar([&](double l) { return l * e_b + omega(cfg_, nu_, l, model_).value; },
                             Interval(lambdas_[lo], lambdas_[hi]), 1e-12 * lambdas_[hi], mo);
    best = std::min(best, r.min);
  }
  return clamp01(best);
}

EntropyCost::EntropyCost(std::function<double(double)> boundary, EntropyCostOptions opts)
    : boundary_(std::move(boundary)), opts_(opts) {
  if (opts_.grid_points < 3) throw InvalidInput("EntropyCost: need at least three grid points");
  const int n = opts_.grid_points;
  e_.resize(n);
  h_.resize(n);
  for (int k = 0; k < n; ++k) {
    e_[k] = 0.5 * k / (n - 1);
    h_[k] = H(e_[k]);
  }
}

double EntropyCost::H(double e) const { return h_clamped(boundary_(e)); }

double EntropyCost::operator()(double gamma) const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("entropy cost: gamma must be non-negative");
  const int n = static_cast<int>(e_.size());
  int best = 0;
  double vbest = h_[0];
  for (int k = 1; k < n; ++k) {
    double v = h_[k] - gamma * e_[k];
    if (v > vbest) {
      vbest = v;
      best = k;
    }
  }
  double lo = e_[std::max(best - 1, 0)], hi = e_[std::min(best + 1, n - 1)];
  auto r = minimize_scalar([&](double e) { return gamma * e - H(e); }, Interval(lo, hi), opts_.tol,
                           MinimizeOptions{.grid_points = 3});
  return std::max(vbest, -r.min);
}

std::shared_ptr<const EntropyCost> make_entropy_cost(const BlockConfig& cfg, int nu, PhaseErrorModel model,
                                                     BoundaryOptions bopts, EntropyCostOptions eopts) {
  check_nu(nu);
  if (nu == 1 && model == PhaseErrorModel::Complementarity)
    return std::make_shared<const EntropyCost>(eph1_bound_analytic, eopts);
  auto b = std::make_shared<const PhaseErrorBoundary>(cfg, nu, model, bopts);
  return std::make_shared<const EntropyCost>([b](double e) { return b->envelope(e); }, eopts);
}

double omega_h(const BlockConfig& cfg, int nu, double gamma, PhaseErrorModel model) {
  if (!(gamma >= 0.0)) throw DomainError("omega_h: gamma must be non-negative");
  return (*make_entropy_cost(cfg, nu, model))(gamma);
}

BoundaryCurve phase_error_curve(const BlockConfig& cfg, int nu, PhaseErrorModel model, int n) {
  if (n < 2) throw InvalidInput("phase_error_curve: need at least two points");
  BoundaryCurve c{nu, CurveKind::PhaseError, model, {}};
  c.points.reserve(n);
  for (int k = 0; k < n; ++k) {
    double e = 0.5 * k / (n - 1);
    c.points.push_back({e, eph_boundary(cfg, nu, e, model)});
  }
  return c;
}

double sp_omega(const BlockConfig& cfg, int nu, double lambda) {
  return omega(cfg, nu, lambda, PhaseErrorModel::ShorPreskill).value;
}

double sp_eph_boundary(const BlockConfig& cfg, int nu, double e_b) {
  return eph_boundary(cfg, nu, e_b, PhaseErrorModel::ShorPreskill);
}

double prediction_weight(double alpha, int z) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("prediction_weight: alpha must be positive");
  if (z != 0 && z != 1) throw InvalidInput("prediction_weight: z must be 0 or 1");
  // With t = <-alpha|alpha> the numerator 1 + t(t +- 2) is (1 +- t)^2; the
  // factored form keeps 1 - t accurate for small alpha.
  double t = std::exp(-2.0 * alpha * alpha);
  double u = z == 0 ? 1.0 + t : -std::expm1(-2.0 * alpha * alpha);
  return u * u / (2.0 * (1.0 + t * t));
}

}  // namespace dpsqkd
