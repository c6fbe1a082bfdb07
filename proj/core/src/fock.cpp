#include "typeb/fock.hpp"

#include <cmath>
#include <sstream>

#include "typeb/coxeter.hpp"
#include "typeb/errors.hpp"
#include "typeb/wick.hpp"

namespace typeb {

namespace {

Eigen::Index level_dim(int d, int n) {
  Eigen::Index r = 1;
  for (int i = 0; i < n; ++i) r *= d;
  return r;
}

}  // namespace

void FockSpaceConfig::validate() const {
  if (!(std::abs(alpha) < 1.0) || !(std::abs(q) < 1.0)) {
    throw InputError("Fock space needs |alpha| < 1 and |q| < 1");
  }
  if (max_level < 1 || max_level > 8) throw InputError("truncation level M must lie in 1..8");
  if (d < 1 || d > 3) throw InputError("base dimension d must lie in 1..3");
  if (level_dim(d, max_level) > 1024) {
    throw CapacityError("d^M <= 1024", "top Fock level too large for dense Gram matrices");
  }
  if (pi0.rows() != d) throw InputError("Pi0 must be d x d");
  require_involution(pi0);
}

FockState::FockState(int d, int max_level) : d_(d) {
  levels_.reserve(static_cast<std::size_t>(max_level) + 1);
  for (int n = 0; n <= max_level; ++n) levels_.push_back(Eigen::VectorXd::Zero(level_dim(d, n)));
}

FockState FockState::vacuum(int d, int max_level) {
  FockState s(d, max_level);
  s.level(0)(0) = 1.0;
  return s;
}

FockState FockState::basis(int d, int max_level, int level, Eigen::Index index) {
  FockState s(d, max_level);
  s.level(level)(index) = 1.0;
  return s;
}

FockState& FockState::operator+=(const FockState& other) {
  for (std::size_t n = 0; n < levels_.size(); ++n) levels_[n] += other.levels_.at(n);
  return *this;
}

FockState& FockState::operator*=(double s) {
  for (auto& v : levels_) v *= s;
  return *this;
}

FockState operator-(FockState a, const FockState& b) {
  for (std::size_t n = 0; n < a.levels_.size(); ++n) a.levels_[n] -= b.levels_.at(n);
  return a;
}

double FockState::max_abs() const {
  double m = 0.0;
  for (const auto& v : levels_) {
    if (v.size() > 0) m = std::max(m, v.cwiseAbs().maxCoeff());
  }
  return m;
}

GramLadder build_gram_ladder(const FockSpaceConfig& cfg) {
  cfg.validate();
  GramLadder ladder;
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(1, 1);
  for (int n = 0; n <= cfg.max_level; ++n) {
    if (n > 0) p = symmetrizer_step(p, n - 1, cfg.d, cfg.pi0, cfg.alpha, cfg.q);
    // Symmetrize away round-off before the eigensolve.
    const Eigen::MatrixXd sym = 0.5 * (p + p.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const auto& evals = es.eigenvalues();
    const double lo = evals.minCoeff();
    const double hi = evals.maxCoeff();
    if (!(lo > kStrictTolerance * std::max(1.0, hi))) {
      std::ostringstream os;
      os << "Gram matrix P(" << n << ") is not positive definite (min eigenvalue " << lo << ")";
      throw NumericalError(os.str());
    }
    ladder.gram.push_back(sym);
    ladder.inverse.push_back(es.eigenvectors() * evals.cwiseInverse().asDiagonal() *
                             es.eigenvectors().transpose());
    ladder.min_eigenvalue.push_back(lo);
    ladder.condition.push_back(hi / lo);
    if (hi / lo > kConditionWarning) {
      std::ostringstream os;
      os << "P(" << n << ") condition number " << hi / lo << " exceeds " << kConditionWarning;
      ladder.warnings.push_back(os.str());
    }
  }
  return ladder;
}

FockSpace::FockSpace(FockSpaceConfig cfg) : cfg_(std::move(cfg)), ladder_(build_gram_ladder(cfg_)) {}

void FockSpace::check_vector(const Eigen::VectorXd& x) const {
  if (x.size() != cfg_.d) throw InputError("test vector dimension does not match d");
}

FockState FockSpace::creation(const Eigen::VectorXd& x, const FockState& s) const {
  check_vector(x);
  FockState out(cfg_.d, cfg_.max_level);
  for (int n = 0; n < cfg_.max_level; ++n) {
    const auto& src = s.level(n);
    auto& dst = out.level(n + 1);
    for (Eigen::Index i = 0; i < src.size(); ++i) dst.segment(i * cfg_.d, cfg_.d) = src(i) * x;
  }
  return out;
}

FockState FockSpace::annihilation(const Eigen::VectorXd& x, const FockState& s) const {
  check_vector(x);
  FockState out(cfg_.d, cfg_.max_level);
  for (int n = 0; n < cfg_.max_level; ++n) {
    const Eigen::VectorXd weighted = ladder_.gram[n + 1] * s.level(n + 1);
    // C(x)^T contracts the last tensor factor against x.
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        blocks(weighted.data(), level_dim(cfg_.d, n), cfg_.d);
    out.level(n) = ladder_.inverse[n] * (blocks * x);
  }
  return out;
}

FockState FockSpace::gaussian(const Eigen::VectorXd& x, const FockState& s) const {
  FockState out = creation(x, s);
  out += annihilation(x, s);
  return out;
}

double FockSpace::inner(const FockState& u, const FockState& v) const {
  double total = 0.0;
  for (int n = 0; n <= cfg_.max_level; ++n) total += u.level(n).dot(ladder_.gram[n] * v.level(n));
  return total;
}

double FockSpace::gaussian_moment(std::span<const Eigen::VectorXd> xs) const {
  if (static_cast<int>(xs.size()) > cfg_.max_level) {
    throw CapacityError("word length <= M", "gaussian_moment word longer than the truncation level");
  }
  FockState s = vacuum();
  for (const auto& x : xs) s = gaussian(x, s);
  return s.level(0)(0);
}

Eigen::MatrixXd FockSpace::creation_matrix(const Eigen::VectorXd& x, int n) const {
  check_vector(x);
  if (n < 0 || n >= cfg_.max_level) throw InputError("creation level outside 0..M-1");
  const Eigen::Index rows = level_dim(cfg_.d, n + 1);
  const Eigen::Index cols = level_dim(cfg_.d, n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index i = 0; i < cols; ++i) c.col(i).segment(i * cfg_.d, cfg_.d) = x;
  return c;
}

Eigen::MatrixXd FockSpace::annihilation_matrix(const Eigen::VectorXd& x, int n) const {
  return ladder_.inverse.at(n) * creation_matrix(x, n).transpose() * ladder_.gram.at(n + 1);
}

double FockSpace::commutation_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  check_vector(x);
  check_vector(y);
  if (cfg_.max_level < 2) throw InputError("commutation check needs M >= 2");
  const double xy = x.dot(y);
  const double x_pi_y = x.dot(cfg_.pi0 * y);
  double residual = 0.0;
  for (int n = 0; n <= cfg_.max_level - 2; ++n) {
    const Eigen::Index dim = level_dim(cfg_.d, n);
    Eigen::MatrixXd op = annihilation_matrix(x, n) * creation_matrix(y, n);
    if (n > 0) op -= cfg_.q * creation_matrix(y, n - 1) * annihilation_matrix(x, n - 1);
    op -= (xy + cfg_.alpha * x_pi_y * std::pow(cfg_.q, 2 * n)) *
          Eigen::MatrixXd::Identity(dim, dim);
    residual = std::max(residual, op.cwiseAbs().maxCoeff());
  }
  return residual;
}

FockState q2N(const FockState& s, double q) {
  FockState out = s;
  for (int n = 0; n <= out.max_level(); ++n) out.level(n) *= std::pow(q, 2 * n);
  return out;
}

double gaussian_moment(std::span<const Eigen::VectorXd> xs, const FockSpaceConfig& cfg) {
  return FockSpace(cfg).gaussian_moment(xs);
}

double commutation_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const FockSpaceConfig& cfg) {
  return FockSpace(cfg).commutation_residual(x, y);
}

}  // namespace typeb
