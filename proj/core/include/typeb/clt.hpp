#pragma once

// Finite-N moments of S_N = N^(-1/2) sum_i (a_i + b_i) / sqrt(2) for the
// mixed-spin model: fixed-sign evaluation (two independent methods), exact
// expectation over the sign distribution, and convergence tables.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typeb/polynomial.hpp"
#include "typeb/spins.hpp"

namespace typeb {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double.
Rational to_rational(double x);

enum class Method { automatic, full_enumeration, class_enumeration };

std::string to_string(Method m);
/// Accepts "auto", "full", "class" and the long names. Throws InputError.
Method parse_method(std::string_view name);

inline constexpr double kFullEnumerationCapacity = 1e8;
inline constexpr double kClassEnumerationCapacity = 1e10;
inline constexpr int kExpectationOrderCap = 12;

/// (2N)^k letter/index tuples.
double full_enumeration_cost(int N, int k);
/// N^floor(k/2) * (number of even-block set partitions of [k]) * 4^floor(k/2).
double class_enumeration_cost(int N, int k);

struct CltConfig {
  int N = 1;
  int k = 2;
  double q = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 1;
  Method method = Method::automatic;
  /// Forces b_i = a_i (and hence r = s): the |rho| = 1 boundary.
  bool coupled = false;

  /// Throws InputError on N < 1, k < 0 or q, rho outside (-1, 1).
  void validate() const;
};

/// Picks the concrete method: `automatic` prefers class-enumeration. Throws
/// CapacityError naming the limit when the chosen method is over capacity.
Method resolve_method(const CltConfig& cfg);

/// phi(S_N^k) for fixed signs, kept exact: (2N)^(-k/2) * sum_p c_p rho^p.
struct FixedSignMoment {
  int N = 1;
  int k = 0;
  std::vector<std::int64_t> rho_coefficients;

  double value(double rho) const;
  Rational exact(const Rational& rho) const;
  friend bool operator==(const FixedSignMoment&, const FixedSignMoment&) = default;
};

/// Evaluates with the given sign table; cfg.seed and cfg.q are ignored.
/// The table must use the symmetric r convention.
FixedSignMoment moment_fixed_signs_exact(const CltConfig& cfg, const SignTable& signs);
/// Uses SignTable(cfg.seed, cfg.q).
FixedSignMoment moment_fixed_signs_exact(const CltConfig& cfg);
double moment_fixed_signs(const CltConfig& cfg);

/// Expectation of phi(S_N^k) over the signs, as integer polynomials in
/// (q, rho) per block count b:
///   E = sum_b N(N-1)...(N-b+1) * by_blocks[b](q, rho) / (2^(k/2) N^(k/2)).
/// `pairings` is the part of by_blocks[k/2] coming from pair partitions.
struct ExpectationPolynomials {
  int k = 0;
  bool coupled = false;
  std::vector<BivariatePoly> by_blocks;
  BivariatePoly pairings;

  Rational exact(int N, const Rational& q, const Rational& rho) const;
  double value(int N, double q, double rho) const;
};

/// Cached per (k, coupled). Throws CapacityError for k > 12.
const ExpectationPolynomials& expectation_polynomials(int k, bool coupled = false);

Rational expected_moment_exact(int N, int k, double q, double rho, bool coupled = false);
double expected_moment(int N, int k, double q, double rho, bool coupled = false);

/// Coefficients c_0..c_{k/2} with E_N = sum_j c_j N^(-j), exact in N since
/// the class weights are falling factorials over N^(k/2).
std::vector<double> inverse_n_expansion(int k, double q, double rho, bool coupled = false);

struct PairingIdentity {
  Rational lhs;
  Rational rhs;
  bool match = false;
};

/// Pair-partition part of the expectation against
/// N(N-1)...(N-n+1)/N^n * typeB_moment_scalar(2n). Requires 2n <= 10.
PairingIdentity pairing_class_identity(int N, int n, double q, double rho);

struct ConvergenceRow {
  std::uint64_t seed = 0;
  int N = 0;
  std::optional<double> moment;
  double limit = 0.0;
  std::optional<double> abs_error;
  std::optional<double> expected;
  /// Binding capacity limit when the row was refused, empty otherwise.
  std::string skipped;
};

struct ConvergenceOptions {
  Method method = Method::automatic;
  bool exact_expectation = false;
  int threads = 1;
};

/// Rows are seed major, N minor. Capacity refusals mark the row and the
/// remaining rows still run.
std::vector<ConvergenceRow> convergence_report(int k, double q, double rho,
                                               std::span<const int> Ns,
                                               std::span<const std::uint64_t> seeds,
                                               const ConvergenceOptions& options = {});

/// typeB_moment_scalar(k)(q, rho) for even k, 0 for odd k.
double limit_moment(int k, double q, double rho);

/// Limit-side mixed moment phi(G(e_{i1}) ... G(e_{ik})) with orthonormal
/// e_1..e_d and diagonal Pi0 = diag(pi0_diagonal). Labels are 1-based.
/// Throws InputError unless every diagonal entry is +1 or -1.
double process_limit_moment(std::span<const int> labels, double alpha, double q,
                            std::span<const double> pi0_diagonal);

}  // namespace typeb
