#pragma once

// The hyperoctahedral group Sigma(n) (Coxeter type B_n): signed permutations,
// Cayley-graph enumeration with the (l0, l) generator-type statistics, and
// the representation U_sigma on the n-fold tensor power of R^d.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace typeb {

/// sigma(1), ..., sigma(n) as signed integers; sigma(-k) = -sigma(k).
class SignedPermutation {
 public:
  SignedPermutation() = default;
  /// Throws InputError unless |images| is a permutation of 1..n.
  explicit SignedPermutation(std::vector<int> images);

  static SignedPermutation identity(int n);

  int degree() const noexcept { return static_cast<int>(images_.size()); }
  const std::vector<int>& images() const noexcept { return images_; }

  /// Image of k in [n]_+- = {+-1, ..., +-n}.
  int operator()(int k) const;

  /// (a * b)(k) = a(b(k)).
  friend SignedPermutation operator*(const SignedPermutation& a, const SignedPermutation& b);
  SignedPermutation inverse() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

  std::uint64_t key() const;

 private:
  std::vector<int> images_;
};

/// Counts of pi_0 letters (l0) and pi_i, i >= 1, letters (l) in a minimal word.
struct LengthStats {
  int l0 = 0;
  int l = 0;

  int length() const noexcept { return l0 + l; }
  friend bool operator==(const LengthStats&, const LengthStats&) = default;
};

/// pi_0 = (-1, 1); pi_i = (i, i+1)(-i, -i-1). Throws InputError for i outside
/// 0..n-1.
SignedPermutation generator(int n, int i);

/// The all-positive signed permutation lifting lambda (a permutation of 1..n).
SignedPermutation embed_symmetric(std::span<const int> lambda);

/// Sigma(n) enumerated by breadth-first search over the Cayley graph with
/// right multiplication by generators, starting at the identity.
class CoxeterGroupB {
 public:
  struct Element {
    SignedPermutation perm;
    LengthStats stats;
    std::vector<int> word;  ///< first minimal word found (generator indices)
    int parent = -1;        ///< BFS tree parent; perm = parent.perm * pi_{word.back()}
  };

  /// 1 <= n <= 5. Throws InputError otherwise.
  explicit CoxeterGroupB(int n);

  int degree() const noexcept { return n_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<Element>& elements() const noexcept { return elements_; }

  /// Index of `perm`, or -1 when it is not an element of this group.
  int find(const SignedPermutation& perm) const;
  const Element& element(const SignedPermutation& perm) const;

  /// True when every geodesic predecessor of every element proposes the same
  /// (l0, l) as the recorded minimal word.
  bool stats_consistent() const noexcept { return inconsistencies_ == 0; }
  int inconsistencies() const noexcept { return inconsistencies_; }

 private:
  int n_ = 0;
  std::vector<Element> elements_;
  std::unordered_map<std::uint64_t, int> index_;
  int inconsistencies_ = 0;
};

inline CoxeterGroupB enumerate_group(int n) { return CoxeterGroupB(n); }

/// A <- A * U(pi_i) on (R^d)^{tensor n}, where U(pi_0) = Pi0 on the first
/// tensor factor and U(pi_i) swaps factors i and i+1. Factor 1 is the most
/// significant digit of the flat index.
void apply_generator_right(Eigen::MatrixXd& a, int i, int n, int d, const Eigen::MatrixXd& pi0);

/// U(pi_{w1}) * ... * U(pi_{wk}).
Eigen::MatrixXd action_matrix_from_word(std::span<const int> word, int n, int d,
                                        const Eigen::MatrixXd& pi0);

/// U_sigma along the minimal word recorded by the BFS. Throws InputError when
/// pi0 is not a symmetric involution.
Eigen::MatrixXd action_matrix(const SignedPermutation& sigma, int d, const Eigen::MatrixXd& pi0);

/// sum over Sigma(n) of alpha^l0 q^l U_sigma, by direct group summation
/// (n <= 5, d^n <= 1024).
Eigen::MatrixXd symmetrizer(int n, int d, const Eigen::MatrixXd& pi0, double alpha, double q);

/// The same operator via the coset factorization
/// P(n+1) = (P(n) (x) I) * sum_w alpha^l0(w) q^l(w) U_w over the 2(n+1)
/// minimal coset representatives w = pi_n ... pi_k and
/// w = pi_n ... pi_1 pi_0 pi_1 ... pi_k. Works for any n with d^n <= 4096.
Eigen::MatrixXd symmetrizer_factorized(int n, int d, const Eigen::MatrixXd& pi0, double alpha,
                                       double q);

/// One step of the factorization: P(n+1) from P(n).
Eigen::MatrixXd symmetrizer_step(const Eigen::MatrixXd& previous, int n, int d,
                                 const Eigen::MatrixXd& pi0, double alpha, double q);

struct PsdResult {
  double min_eigenvalue = 0.0;
  bool pass = false;
};

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kStrictTolerance = 1e-12;

/// Minimum eigenvalue of a symmetric matrix; pass iff >= -1e-10, or > 1e-12
/// when `strict`. Throws InputError on a non-symmetric matrix.
PsdResult psd_check(const Eigen::MatrixXd& p, bool strict = false);

}  // namespace typeb
