#pragma once

// Mixed-spin pairs (a_i, b_i): sign tables, the abstract normal-ordering
// evaluator, and the explicit Jordan-Wigner tensor-slot model.
//
// Both evaluators share one single-algebra convention: inside one index i
// the state of a word of length m is 0 for odd m and rho^(#a mod 2) for even
// m. This is what the tensor-slot model realizes; only pair blocks survive
// in the central limit, so the limit does not depend on it.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace typeb {

enum class Kind : std::uint8_t { a, b };

struct Letter {
  Kind kind = Kind::a;
  int index = 1;  ///< site index, >= 1

  friend bool operator==(const Letter&, const Letter&) = default;
};

using AbstractWord = std::vector<Letter>;

/// "a1 b2 a1"
std::string to_string(std::span<const Letter> word);

/// How r(i, j) relates to r(j, i). `symmetric` draws one r per unordered
/// pair, the convention under which the tensor-slot model satisfies the
/// commutation hypotheses. `ordered` draws r(i, j) and r(j, i) independently
/// and is kept as a negative control.
enum class RConvention { symmetric, ordered };

/// Deterministic +-1 commutation signs with mean q.
///
/// Each sign is a pure function of (seed, kind tag, indices):
///   h = mix(mix(mix(seed) ^ tag) ^ (i << 32 | j)),
/// where mix is the splitmix64 finalizer (constants 0x9e3779b97f4a7c15,
/// 0xbf58476d1ce4e5b9, 0x94d049bb133111eb), tag is 's' (0x73) or 'r' (0x72),
/// and (i, j) is (min, max) for symmetric signs. The sign is +1 iff
/// (h >> 11) * 2^-53 < (1 + q) / 2.
///
/// Individual signs can be pinned with set_s / set_r, which is how exhaustive
/// sign-space oracles are built.
class SignTable {
 public:
  SignTable(std::uint64_t seed, double q, RConvention convention = RConvention::symmetric);

  std::uint64_t seed() const noexcept { return seed_; }
  double q() const noexcept { return q_; }
  RConvention convention() const noexcept { return convention_; }

  /// s(i, j) = s(j, i); i != j.
  int s(int i, int j) const;
  /// Coefficient in a_i b_j = r(i, j) b_j a_i; i != j.
  int r(int i, int j) const;

  void set_s(int i, int j, int value);
  void set_r(int i, int j, int value);

 private:
  int draw(std::uint64_t tag, int i, int j) const;
  std::uint64_t pinned_key(std::uint64_t tag, int i, int j) const;

  std::uint64_t seed_;
  double q_;
  double threshold_;
  RConvention convention_;
  std::unordered_map<std::uint64_t, int> pinned_;
};

std::uint64_t splitmix64(std::uint64_t z);

/// sign * rho^rho_power, kept exact. sign == 0 means the word vanishes.
struct WordTerm {
  int sign = 0;
  int rho_power = 0;

  double value(double rho) const;
};

/// Normal-orders the word by a stable adjacent-transposition sort on site
/// indices, collecting one commutation sign per swap of distinct sites, then
/// factorizes over sites.
WordTerm eval_term(std::span<const Letter> word, const SignTable& signs);

double eval_abstract(std::span<const Letter> word, const SignTable& signs, double rho);

// ---------------------------------------------------------------------------
// Tensor-slot (Jordan-Wigner) model

using Mat2 = Eigen::Matrix2d;

Mat2 sigma_matrix(int x);
Mat2 gamma_matrix();
Mat2 tau_matrix(double rho);

/// Three legs, each a row of 2x2 matrices for slots 1..horizon. Slots beyond
/// the horizon are diagonal +-1 matrices (or the identity); `diagonal_tail`
/// records that for each leg.
struct SlotOperator {
  int horizon = 0;
  std::array<std::vector<Mat2>, 3> legs;
  std::array<bool, 3> diagonal_tail{true, true, true};
};

struct JwOptions {
  /// Replaces tau in a_i's third leg; used to build deliberately broken
  /// models for negative controls.
  std::optional<Mat2> tau_override;
};

/// a_i = zeta_i (x) alpha_i (x) eta_i, b_i = zeta_i (x) beta_i (x) theta_i.
/// Throws InputError unless 1 <= i <= horizon and |rho| < 1.
SlotOperator jw_element(Kind kind, int i, const SignTable& signs, double rho, int horizon,
                        const JwOptions& options = {});

/// Vector state of v (x) v (x) v, v = (1, 0) in every slot: the product over
/// legs and slots of the (1,1) entry of the slot-wise product. Throws
/// InputError when horizons differ.
double eval_jw(std::span<const SlotOperator> word);

/// Builds the slot operators for a letter word and evaluates it.
double eval_jw_word(std::span<const Letter> word, const SignTable& signs, double rho, int horizon,
                    const JwOptions& options = {});

struct HypothesisResult {
  std::string name;  ///< "H1" .. "H5"
  bool pass = true;
  std::string witness;  ///< first failing word or relation, empty on pass
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisResult> results;
  bool all_pass() const;
};

/// Checks H1-H5 for the tensor-slot model on sites 1..nmax (nmax <= 4):
/// H1 vanishing means, H2 second moments, H3 |phi(word)| <= 1 over all words
/// of length <= 4, H4 factorization over naturally ordered products of random
/// site words, H5 slot-wise commutation coefficients against s and r.
HypothesisReport check_hypotheses(const SignTable& signs, double rho, int nmax,
                                  const JwOptions& options = {});

}  // namespace typeb
