#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpsqkd/linalg.hpp"

namespace dpsqkd {

// Pulses per block. Basis states of Bob's system are |1>..|L>; state |i>
// lives in matrix row i-1 throughout the library.
class BlockConfig {
 public:
  explicit BlockConfig(int L);

  int L() const { return L_; }
  // Edge pulses have weight 1, inner ones 1/2.
  double kappa(int i) const;

 private:
  int L_;
};

// Alice's Z-basis word a_1..a_L.
class BitPattern {
 public:
  // From a string of '0'/'1' characters.
  static BitPattern parse(std::string_view bits);
  // Length-L word with ones at the given 1-based positions.
  static BitPattern with_ones(int L, const std::vector<int>& positions);
  static BitPattern zeros(int L);

  int length() const { return static_cast<int>(bits_.size()); }
  int weight() const { return weight_; }
  // 1-based access; 0 outside 1..L, so neighbour lookups at the edges are safe.
  int bit(int i) const { return (i >= 1 && i <= length()) ? bits_[i - 1] : 0; }
  std::vector<int> ones() const;
  BitPattern reversed() const;
  std::string str() const;

  // Ordering by the increasing list of one-positions, compared
  // lexicographically. Used to break eigenvalue ties deterministically.
  bool precedes(const BitPattern& o) const;
  bool operator==(const BitPattern& o) const { return bits_ == o.bits_; }

 private:
  explicit BitPattern(std::vector<std::uint8_t> bits);
  std::vector<std::uint8_t> bits_;
  int weight_;
};

enum class PhaseErrorModel { Complementarity, ShorPreskill };

const char* model_name(PhaseErrorModel m);

// Projector for Bob's bit s at slot j (1 <= j <= L-1).
SymMatrix bob_povm(const BlockConfig& cfg, int j, int s);

// 2xL filter for slot j; rows are the qubit basis |0>, |1>.
DenseMatrix filter(const BlockConfig& cfg, int j);

// Sum over slots of Bob's bit-1 projectors: tridiagonal, diagonal 1/2.
SymMatrix pi_matrix(const BlockConfig& cfg);

// Diagonal phase-error block for Alice's word a (prediction strategy that
// always guesses 0 when the later pulse's Z value is 0).
SymMatrix pi_ph(const BlockConfig& cfg, const BitPattern& a);

// Diagonal projector onto the support of a.
SymMatrix p_a(const BlockConfig& cfg, const BitPattern& a);

// The phase-error block for word a after conjugation. For Complementarity this
// is pi_ph(a). For ShorPreskill the z_{j+1}=0 prediction is a fair coin, so
// both pre-CNOT states 00 and 11 carry error weight 1/2.
SymMatrix phase_error_operator_conjugated(const BlockConfig& cfg, const BitPattern& a, PhaseErrorModel model);

// Same block assembled term by term from per-slot error weights and the
// controlled flip of Alice's qubit at Bob's detected position. Kept separate
// from the closed form above so each can check the other.
SymMatrix conjugated_phase_error_by_terms(const BlockConfig& cfg, const BitPattern& a, PhaseErrorModel model);

struct OracleResult {
  double value;
  BitPattern argmax;
};

struct OracleOptions {
  PhaseErrorModel model = PhaseErrorModel::Complementarity;
  // Replaces pi_matrix(cfg) when set; used to build negative controls.
  std::optional<SymMatrix> pi_override;
  std::size_t pattern_guard = 1000000;
};

// Max over weight nu-1 words of eig_max(E_a - lambda Pi).
OracleResult omega_minus_oracle(const BlockConfig& cfg, double lambda, int nu, const OracleOptions& opts = {});

// Max over weight nu+1 words of eig_max of (E_a - lambda Pi) restricted to
// the support of a.
OracleResult omega_plus_oracle(const BlockConfig& cfg, double lambda, int nu, const OracleOptions& opts = {});

enum class BlockKind { Full, Restricted };

struct ConjugatedBlock {
  BitPattern pattern;
  BlockKind kind;
};

// Direct-sum decomposition of the conjugated nu-photon projector: full blocks
// for weights nu-1, nu-3, ... and support-restricted blocks for weight nu+1.
std::vector<ConjugatedBlock> p_nu_conjugated_blocks(const BlockConfig& cfg, int nu, std::size_t pattern_guard = 1000000);

// All length-L words of weight k in increasing order of their one-positions.
std::vector<BitPattern> patterns_of_weight(int L, int k, std::size_t guard = 1000000);

double binomial(int n, int k);

}  // namespace dpsqkd
