#pragma once

// Truncated (alpha, q)-Fock space over R^d: levels 0..M of the tensor algebra
// with the inner product <u, v> = u^T P(n) v on level n, right creation
// operators, their adjoints, and the Gaussian operators G(x) = b(x) + b*(x).

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace typeb {

struct FockSpaceConfig {
  int d = 1;
  int max_level = 1;  ///< truncation level M
  double alpha = 0.0;
  double q = 0.0;
  Eigen::MatrixXd pi0 = Eigen::MatrixXd::Identity(1, 1);

  /// |alpha|, |q| < 1; 1 <= M <= 8; 1 <= d <= 3; d^M <= 1024; pi0 a d x d
  /// symmetric involution. Throws InputError / CapacityError.
  void validate() const;
};

/// Level-graded coefficient vector; level n has length d^n, with the first
/// tensor factor as the most significant index digit.
class FockState {
 public:
  FockState() = default;
  FockState(int d, int max_level);

  static FockState vacuum(int d, int max_level);
  static FockState basis(int d, int max_level, int level, Eigen::Index index);

  int d() const noexcept { return d_; }
  int max_level() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  Eigen::VectorXd& level(int n) { return levels_.at(static_cast<std::size_t>(n)); }
  const Eigen::VectorXd& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }

  FockState& operator+=(const FockState& other);
  FockState& operator*=(double s);
  friend FockState operator-(FockState a, const FockState& b);

  double max_abs() const;

 private:
  int d_ = 1;
  std::vector<Eigen::VectorXd> levels_;
};

/// Per-level Gram matrices P(0)..P(M) with inverses and condition numbers.
struct GramLadder {
  std::vector<Eigen::MatrixXd> gram;
  std::vector<Eigen::MatrixXd> inverse;
  std::vector<double> min_eigenvalue;
  std::vector<double> condition;
  std::vector<std::string> warnings;  ///< condition numbers above 1e8
};

inline constexpr double kConditionWarning = 1e8;

/// Throws NumericalError if some P(n) is not positive definite.
GramLadder build_gram_ladder(const FockSpaceConfig& cfg);

class FockSpace {
 public:
  explicit FockSpace(FockSpaceConfig cfg);

  const FockSpaceConfig& config() const noexcept { return cfg_; }
  const GramLadder& ladder() const noexcept { return ladder_; }

  FockState vacuum() const { return FockState::vacuum(cfg_.d, cfg_.max_level); }

  /// xi_n -> xi_n (x) x. The component pushed beyond level M is dropped.
  FockState creation(const Eigen::VectorXd& x, const FockState& s) const;

  /// Adjoint of creation for the deformed inner product:
  /// level n+1 -> n by P(n)^{-1} C(x)^T P(n+1).
  FockState annihilation(const Eigen::VectorXd& x, const FockState& s) const;

  FockState gaussian(const Eigen::VectorXd& x, const FockState& s) const;

  double inner(const FockState& u, const FockState& v) const;

  /// <Omega, G(x_k) ... G(x_1) Omega> with G(x_1) applied first. Requires
  /// k <= M: every G moves one level, so a k-letter word never leaves levels
  /// 0..k and the truncation is exact. Throws CapacityError otherwise.
  double gaussian_moment(std::span<const Eigen::VectorXd> xs) const;

  /// Max-abs entry of b(x)b*(y) - q b*(y)b(x) - <x,y> I - alpha <x,Pi0 y> q^{2N}
  /// over all standard basis states of levels 0..M-2. Requires M >= 2.
  double commutation_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Standard-coordinate matrices of b*(x) from level n and b(x) into level n.
  Eigen::MatrixXd creation_matrix(const Eigen::VectorXd& x, int n) const;
  Eigen::MatrixXd annihilation_matrix(const Eigen::VectorXd& x, int n) const;

 private:
  void check_vector(const Eigen::VectorXd& x) const;

  FockSpaceConfig cfg_;
  GramLadder ladder_;
};

/// Multiplies level n by q^{2n}.
FockState q2N(const FockState& s, double q);

double gaussian_moment(std::span<const Eigen::VectorXd> xs, const FockSpaceConfig& cfg);
double commutation_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const FockSpaceConfig& cfg);

}  // namespace typeb
