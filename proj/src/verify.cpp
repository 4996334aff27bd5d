#include "dpsqkd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dpsqkd/bounds.hpp"
#include "dpsqkd/errors.hpp"
#include "dpsqkd/operators.hpp"
#include "dpsqkd/single_excitation.hpp"

namespace dpsqkd {

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return !c.passed; }));
}

double characteristic_magnitude(int L, double x, double w, double y) {
  return 0.5 * std::cosh(L * x) + 2.0 * w * std::cosh((L - 1) * x) +
         std::abs(2.0 * w * w - 0.5) * std::cosh((L - 2) * x) + 2.0 * w * w * std::cosh((L - 4) * x) +
         2.0 * w * (2.0 * w * std::cosh(x) + std::cosh(2.0 * x)) * std::cosh((L - 3) * x * y);
}

namespace {

struct Recorder {
  VerifyReport& report;
  std::string suite;

  void add(std::string name, int L, double lambda, double residual, double tol) {
    report.checks.push_back({suite, std::move(name), L, lambda, residual, tol, std::isfinite(residual) && residual <= tol});
  }
  void flag(std::string name, int L, double lambda, bool ok) {
    report.checks.push_back({suite, std::move(name), L, lambda, ok ? 0.0 : 1.0, 0.0, ok});
  }
};

bool is_mirror_set(const std::vector<int>& ones, const std::vector<int>& expected, int L) {
  if (ones == expected) return true;
  std::vector<int> mirrored;
  for (auto it = expected.rbegin(); it != expected.rend(); ++it) mirrored.push_back(L + 1 - *it);
  return ones == mirrored;
}

void oracle_suite(const VerifyConfig& vc, VerifyReport& rep) {
  Recorder r0{rep, "omega0"}, r1{rep, "omega1"}, r2{rep, "omega2"};
  const double tol = 1e-9;
  for (int L = vc.L_min; L <= vc.L_max; ++L) {
    BlockConfig cfg(L);
    OracleOptions opts;
    if (vc.pi_perturbation != 0.0) opts.pi_override = pi_matrix(cfg) + vc.pi_perturbation * SymMatrix::identity(L);
    for (double lam : vc.lambdas) {
      r0.add("closed form vs plus oracle", L, lam, std::abs(omega0(lam) - omega_plus_oracle(cfg, lam, 0, opts).value), tol);

      auto p1 = omega_plus_oracle(cfg, lam, 1, opts);
      auto m1 = omega_minus_oracle(cfg, lam, 1, opts);
      r1.add("plus branch vs plus oracle", L, lam, std::abs(omega1_plus(lam) - p1.value), tol);
      r1.add("combined vs oracle max", L, lam, std::abs(omega1(lam) - std::max(p1.value, m1.value)), tol);
      r1.flag("plus argmax on the first pair", L, lam, is_mirror_set(p1.argmax.ones(), {1, 2}, L));

      auto p2 = omega_plus_oracle(cfg, lam, 2, opts);
      auto m2 = omega_minus_oracle(cfg, lam, 2, opts);
      r2.add("plus branch vs plus oracle", L, lam, std::abs(omega2_plus(cfg, lam) - p2.value), tol);
      r2.add("minus branch vs minus oracle", L, lam, std::abs(omega2_minus(cfg, lam) - m2.value), tol);
      r2.flag("plus argmax on the first triple", L, lam, is_mirror_set(p2.argmax.ones(), {1, 2, 3}, L));
      r2.flag("minus argmax next to an edge", L, lam, is_mirror_set(m2.argmax.ones(), {2}, L));
    }
  }
}

void excitation_suite(const VerifyConfig& vc, VerifyReport& rep) {
  Recorder rec{rep, "excitation"};
  for (int L = std::max(vc.L_min, 3); L <= vc.L_max; ++L) {
    for (double lam : vc.lambdas) {
      auto cert = certify_edge_excitation(L, lam);
      for (const auto& c : cert.checks) rep.checks.push_back({rec.suite, c.name, L, lam, c.residual, c.tolerance, c.passed});
    }
  }
}

void identity_suite(const VerifyConfig& vc, VerifyReport& rep) {
  Recorder rec{rep, "identities"};
  std::mt19937_64 rng(vc.seed);
  std::uniform_int_distribution<int> Ld(5, 15);
  std::uniform_real_distribution<double> xd(0.0, 3.0), yd(-1.0, 1.0), wlow(1e-3, 0.5), whigh(0.5, 5.0);
  const double tol = 1e-12;
  double worst1 = 0.0, worst2 = 0.0, worst3 = 0.0;
  for (int k = 0; k < vc.identity_points; ++k) {
    int L = Ld(rng);
    double x = xd(rng), y = yd(rng);
    double w = std::cosh(2.0 * x) / (2.0 * std::cosh(x));
    double rhs = -std::sinh(x) * std::sinh((L - 5) * x);
    worst1 = std::max(worst1, std::abs(characteristic(L, x, w, y) - rhs) / std::max(1.0, characteristic_magnitude(L, x, w, y)));

    double wl = wlow(rng);
    worst2 = std::max(worst2, std::abs(characteristic(L, 0.0, wl, y) - 4.0 * wl * (2.0 * wl - 1.0)));

    // Zero at x_w: either L = 5 with w >= 1/2, or w = 1/2 with any L.
    int L3 = k % 2 == 0 ? 5 : L;
    double w3 = k % 2 == 0 ? whigh(rng) : 0.5;
    double xw = x_w(w3);
    worst3 = std::max(worst3, std::abs(characteristic(L3, xw, w3, y)) / std::max(1.0, characteristic_magnitude(L3, xw, w3, y)));
  }
  rec.add("F on the x_w curve equals -sinh x sinh (L-5)x", 0, 0.0, worst1, tol);
  rec.add("F at x = 0 equals 4w(2w-1)", 0, 0.0, worst2, tol);
  rec.add("F vanishes at x_w", 0, 0.0, worst3, tol);
}

}  // namespace

VerifyReport run_verification(const VerifyConfig& vc) {
  if (vc.L_min < 3 || vc.L_max < vc.L_min) throw InvalidInput("verify: need 3 <= L_min <= L_max");
  if (vc.lambdas.empty()) throw InvalidInput("verify: empty lambda grid");
  VerifyReport rep;
  oracle_suite(vc, rep);
  excitation_suite(vc, rep);
  identity_suite(vc, rep);
  return rep;
}

}  // namespace dpsqkd
