#include "dpsqkd/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpsqkd/errors.hpp"

namespace dpsqkd {

BlockConfig::BlockConfig(int L) : L_(L) {
  if (L < 3) throw InvalidInput("BlockConfig: L must be at least 3, got " + std::to_string(L));
}

double BlockConfig::kappa(int i) const {
  if (i < 1 || i > L_) throw InvalidInput("BlockConfig: basis index out of range");
  return (i == 1 || i == L_) ? 1.0 : 0.5;
}

BitPattern::BitPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  weight_ = static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

BitPattern BitPattern::parse(std::string_view s) {
  if (s.empty()) throw InvalidInput("BitPattern: empty word");
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw InvalidInput("BitPattern: expected only '0' and '1'");
    bits.push_back(ch == '1');
  }
  return BitPattern(std::move(bits));
}

BitPattern BitPattern::with_ones(int L, const std::vector<int>& positions) {
  if (L < 1) throw InvalidInput("BitPattern: length must be positive");
  std::vector<std::uint8_t> bits(L, 0);
  for (int p : positions) {
    if (p < 1 || p > L) throw InvalidInput("BitPattern: position out of range");
    bits[p - 1] = 1;
  }
  return BitPattern(std::move(bits));
}

BitPattern BitPattern::zeros(int L) { return with_ones(L, {}); }

std::vector<int> BitPattern::ones() const {
  std::vector<int> out;
  for (int i = 0; i < length(); ++i)
    if (bits_[i]) out.push_back(i + 1);
  return out;
}

BitPattern BitPattern::reversed() const { return BitPattern(std::vector<std::uint8_t>(bits_.rbegin(), bits_.rend())); }

std::string BitPattern::str() const {
  std::string s;
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

bool BitPattern::precedes(const BitPattern& o) const {
  auto x = ones(), y = o.ones();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

const char* model_name(PhaseErrorModel m) { return m == PhaseErrorModel::Complementarity ? "comp" : "sp"; }

namespace {

void check_slot(const BlockConfig& cfg, int j) {
  if (j < 1 || j > cfg.L() - 1) throw InvalidInput("slot index j must lie in 1..L-1");
}

void check_length(const BlockConfig& cfg, const BitPattern& a) {
  if (a.length() != cfg.L()) throw InvalidInput("BitPattern length does not match L");
}

}  // namespace

SymMatrix bob_povm(const BlockConfig& cfg, int j, int s) {
  check_slot(cfg, j);
  if (s != 0 && s != 1) throw InvalidInput("bob_povm: bit must be 0 or 1");
  SymMatrix m(cfg.L());
  double u = std::sqrt(cfg.kappa(j) / 2.0);
  double v = (s == 0 ? 1.0 : -1.0) * std::sqrt(cfg.kappa(j + 1) / 2.0);
  m.set(j - 1, j - 1, u * u);
  m.set(j - 1, j, u * v);
  m.set(j, j, v * v);
  return m;
}

DenseMatrix filter(const BlockConfig& cfg, int j) {
  check_slot(cfg, j);
  DenseMatrix f(2, cfg.L());
  const double r = 1.0 / std::sqrt(2.0);
  double kj = std::sqrt(cfg.kappa(j)), kn = std::sqrt(cfg.kappa(j + 1));
  // sqrt(k_j)|-><j| + sqrt(k_{j+1})|+><j+1|
  f(0, j - 1) = kj * r;
  f(1, j - 1) = -kj * r;
  f(0, j) = kn * r;
  f(1, j) = kn * r;
  return f;
}

SymMatrix pi_matrix(const BlockConfig& cfg) {
  const int L = cfg.L();
  SymMatrix m(L);
  for (int i = 0; i < L; ++i) m.set(i, i, 0.5);
  const double edge = -1.0 / (2.0 * std::sqrt(2.0));
  for (int i = 1; i < L; ++i) {
    bool boundary = (i == 1 || i == L - 1);
    m.set(i - 1, i, boundary ? edge : -0.25);
  }
  return m;
}

SymMatrix pi_ph(const BlockConfig& cfg, const BitPattern& a) {
  check_length(cfg, a);
  const int L = cfg.L();
  SymMatrix m(L);
  for (int i = 1; i <= L; ++i) m.set(i - 1, i - 1, cfg.kappa(i) * (a.bit(i - 1) + a.bit(i + 1)));
  return m;
}

SymMatrix p_a(const BlockConfig& cfg, const BitPattern& a) {
  check_length(cfg, a);
  SymMatrix m(cfg.L());
  for (int i = 1; i <= cfg.L(); ++i) m.set(i - 1, i - 1, a.bit(i));
  return m;
}

SymMatrix phase_error_operator_conjugated(const BlockConfig& cfg, const BitPattern& a, PhaseErrorModel model) {
  if (model == PhaseErrorModel::Complementarity) return pi_ph(cfg, a);
  check_length(cfg, a);
  const int L = cfg.L();
  SymMatrix m(L);
  // Each slot touching i contributes half the number of ones in its pair.
  for (int i = 1; i <= L; ++i) {
    double w = 0.0;
    if (i <= L - 1) w += 0.5 * (a.bit(i) + a.bit(i + 1));
    if (i >= 2) w += 0.5 * (a.bit(i - 1) + a.bit(i));
    m.set(i - 1, i - 1, cfg.kappa(i) * w);
  }
  return m;
}

namespace {

// Error weight of a pre-CNOT pair state (x, y) on slot j, given that Bob
// clicked at the first (j) or second (j+1) position of the slot. z_{j+1} is
// the parity x^y; Bob's phase outcome tells Alice which guess to make when
// the parity is 1.
double slot_error_weight(int x, int y, bool first, PhaseErrorModel model) {
  if ((x ^ y) == 1) {
    // Bob at j predicts z_j = 1, Bob at j+1 predicts 0; here z_j = x.
    int predicted = first ? 1 : 0;
    return x != predicted ? 1.0 : 0.0;
  }
  if (model == PhaseErrorModel::Complementarity) return x == 1 ? 1.0 : 0.0;
  return 0.5;
}

}  // namespace

SymMatrix conjugated_phase_error_by_terms(const BlockConfig& cfg, const BitPattern& a, PhaseErrorModel model) {
  check_length(cfg, a);
  const int L = cfg.L();
  SymMatrix m(L);
  for (int j = 1; j <= L - 1; ++j) {
    for (int x = 0; x <= 1; ++x) {
      for (int y = 0; y <= 1; ++y) {
        for (bool first : {true, false}) {
          double w = slot_error_weight(x, y, first, model);
          if (w == 0.0) continue;
          int b = first ? j : j + 1;
          // Conjugation flips Alice's qubit at Bob's click position.
          int xc = first ? 1 - x : x;
          int yc = first ? y : 1 - y;
          if (a.bit(j) == xc && a.bit(j + 1) == yc) m.add(b - 1, b - 1, w * cfg.kappa(b));
        }
      }
    }
  }
  return m;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::vector<BitPattern> patterns_of_weight(int L, int k, std::size_t guard) {
  if (L < 1) throw InvalidInput("patterns_of_weight: L must be positive");
  if (k < 0 || k > L) return {};
  double count = binomial(L, k);
  if (count > static_cast<double>(guard))
    throw ResourceError("pattern enumeration of C(" + std::to_string(L) + "," + std::to_string(k) + ") exceeds guard");
  std::vector<BitPattern> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i + 1;
  while (true) {
    out.push_back(BitPattern::with_ones(L, pos));
    int i = k - 1;
    while (i >= 0 && pos[i] == L - k + i + 1) --i;
    if (i < 0) break;
    ++pos[i];
    for (int t = i + 1; t < k; ++t) pos[t] = pos[t - 1] + 1;
  }
  return out;
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive and finite");
}

SymMatrix resolve_pi(const BlockConfig& cfg, const OracleOptions& opts) {
  if (!opts.pi_override) return pi_matrix(cfg);
  if (static_cast<int>(opts.pi_override->dim()) != cfg.L()) throw InvalidInput("pi override has wrong dimension");
  return *opts.pi_override;
}

// Enumeration order already follows precedes(), so a later word only wins by
// a margin above the tie tolerance.
constexpr double kTieTol = 1e-12;

template <class Eval>
OracleResult argmax_over(const std::vector<BitPattern>& words, Eval eval) {
  if (words.empty()) throw InvalidInput("oracle: no words of the requested weight");
  OracleResult best{eval(words.front()), words.front()};
  for (std::size_t k = 1; k < words.size(); ++k) {
    double v = eval(words[k]);
    if (v > best.value + kTieTol) best = {v, words[k]};
  }
  return best;
}

}  // namespace

OracleResult omega_minus_oracle(const BlockConfig& cfg, double lambda, int nu, const OracleOptions& opts) {
  check_lambda(lambda);
  if (nu < 1) throw InvalidInput("omega_minus_oracle: nu must be at least 1");
  const SymMatrix pi = resolve_pi(cfg, opts);
  auto words = patterns_of_weight(cfg.L(), nu - 1, opts.pattern_guard);
  return argmax_over(words, [&](const BitPattern& a) {
    SymMatrix m = phase_error_operator_conjugated(cfg, a, opts.model);
    m -= lambda * pi;
    return eig_max(m);
  });
}

OracleResult omega_plus_oracle(const BlockConfig& cfg, double lambda, int nu, const OracleOptions& opts) {
  check_lambda(lambda);
  if (nu < 0) throw InvalidInput("omega_plus_oracle: nu must be non-negative");
  const SymMatrix pi = resolve_pi(cfg, opts);
  auto words = patterns_of_weight(cfg.L(), nu + 1, opts.pattern_guard);
  return argmax_over(words, [&](const BitPattern& a) {
    SymMatrix m = phase_error_operator_conjugated(cfg, a, opts.model);
    m -= lambda * pi;
    std::vector<std::size_t> idx;
    for (int i : a.ones()) idx.push_back(static_cast<std::size_t>(i - 1));
    return eig_max(m.principal(idx));
  });
}

std::vector<ConjugatedBlock> p_nu_conjugated_blocks(const BlockConfig& cfg, int nu, std::size_t pattern_guard) {
  if (nu < 0) throw InvalidInput("p_nu_conjugated_blocks: nu must be non-negative");
  std::vector<ConjugatedBlock> out;
  double total = 0.0;
  for (int w = nu - 1; w >= 0; w -= 2) total += binomial(cfg.L(), w);
  total += binomial(cfg.L(), nu + 1);
  if (total > static_cast<double>(pattern_guard)) throw ResourceError("p_nu_conjugated_blocks: block count exceeds guard");
  for (int w = nu - 1; w >= 0; w -= 2)
    for (auto& a : patterns_of_weight(cfg.L(), w, pattern_guard)) out.push_back({a, BlockKind::Full});
  for (auto& a : patterns_of_weight(cfg.L(), nu + 1, pattern_guard)) out.push_back({a, BlockKind::Restricted});
  return out;
}

}  // namespace dpsqkd
