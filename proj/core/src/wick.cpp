#include "typeb/wick.hpp"

#include <cmath>
#include <unordered_map>

#include "typeb/errors.hpp"
#include "typeb/partitions.hpp"

namespace typeb {

namespace {

// Returns the block count n for an even order, -1 for an odd one.
int blocks_for_order(int order, int cap) {
  if (order < 0) throw InputError("moment order must be non-negative");
  if (order > cap) {
    throw CapacityError("order cap " + std::to_string(cap),
                        "moment order " + std::to_string(order) + " exceeds cap " +
                            std::to_string(cap));
  }
  return order % 2 == 0 ? order / 2 : -1;
}

// Packs (Cr, histogram of cover counts) into one key. With n <= 8 blocks,
// Cr <= 28 and every histogram entry is <= 8, so 7 + 8 * 4 bits suffice.
std::uint64_t crossing_cover_key(const Pairing& p) {
  std::uint64_t key = static_cast<std::uint64_t>(crossings(p));
  for (int c : cover_counts(p)) key += std::uint64_t{1} << (7 + 4 * c);
  return key;
}

}  // namespace

BivariatePoly typeB_moment_scalar(int order, int cap) {
  BivariatePoly total("q", "rho");
  const int n = blocks_for_order(order, cap);
  if (n < 0) return total;
  if (n > 8) throw CapacityError("order cap 16", "typeB_moment_scalar supports order <= 16");

  // The coloring sum factorizes: a block covered by c others contributes
  // 1 (positive) or rho q^(2c) (negative), so each pairing gives
  // q^Cr * prod_j (1 + rho q^(2 c_j)). Pairings are bucketed by
  // (Cr, cover-count histogram) and each bucket expanded once.
  std::unordered_map<std::uint64_t, std::int64_t> buckets;
  for_each_pairing(n, [&buckets](const Pairing& p) { ++buckets[crossing_cover_key(p)]; });

  for (const auto& [key, multiplicity] : buckets) {
    const int cr = static_cast<int>(key & 0x7f);
    BivariatePoly term = BivariatePoly::monomial(multiplicity, cr, 0);
    for (int c = 0; c < 8; ++c) {
      const int count = static_cast<int>((key >> (7 + 4 * c)) & 0xf);
      BivariatePoly factor = BivariatePoly::constant(1);
      factor.add_term(1, 2 * c, 1);
      for (int t = 0; t < count; ++t) term = term * factor;
    }
    total += term;
  }
  return total;
}

BivariatePoly q_moment(int order, int cap) {
  BivariatePoly total("q", "");
  const int n = blocks_for_order(order, cap);
  if (n < 0) return total;
  std::vector<std::int64_t> histogram(static_cast<std::size_t>(n * (n - 1) / 2 + 1), 0);
  for_each_pairing(n, [&histogram](const Pairing& p) { ++histogram[crossings(p)]; });
  for (std::size_t e = 0; e < histogram.size(); ++e) total.add_term(histogram[e], static_cast<int>(e));
  return total;
}

BivariatePoly qt_moment(int order, int cap) {
  BivariatePoly total("q", "t");
  const int n = blocks_for_order(order, cap);
  if (n < 0) return total;
  for_each_pairing(n, [&total](const Pairing& p) { total.add_term(1, crossings(p), nestings(p)); });
  return total;
}

void require_involution(const Eigen::MatrixXd& pi0, double tol) {
  if (pi0.rows() != pi0.cols() || pi0.rows() == 0) throw InputError("Pi0 must be a nonempty square matrix");
  if ((pi0 - pi0.transpose()).cwiseAbs().maxCoeff() > tol) throw InputError("Pi0 must be symmetric");
  const Eigen::MatrixXd sq = pi0 * pi0;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(pi0.rows(), pi0.cols());
  if ((sq - id).cwiseAbs().maxCoeff() > tol) throw InputError("Pi0 must square to the identity");
}

CovarianceData::CovarianceData(Eigen::MatrixXd gram, Eigen::MatrixXd twisted, double alpha, double q)
    : gram_(std::move(gram)), twisted_(std::move(twisted)), alpha_(alpha), q_(q) {
  if (!(std::abs(alpha_) <= 1.0)) throw InputError("alpha must lie in [-1, 1]");
  if (!(std::abs(q_) < 1.0)) throw InputError("q must lie in (-1, 1)");
}

CovarianceData CovarianceData::from_vectors(const Eigen::MatrixXd& vectors,
                                            const Eigen::MatrixXd& pi0, double alpha, double q) {
  require_involution(pi0);
  if (vectors.rows() != pi0.rows()) throw InputError("test vectors and Pi0 have different dimension");
  return CovarianceData(vectors.transpose() * vectors, vectors.transpose() * pi0 * vectors, alpha, q);
}

CovarianceData CovarianceData::from_gram(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& twisted,
                                         double alpha, double q) {
  if (gram.rows() != gram.cols() || twisted.rows() != gram.rows() || twisted.cols() != gram.cols()) {
    throw InputError("Gram matrices must be square and of equal size");
  }
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InputError("Gram matrix must be symmetric");
  if (gram.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw InputError("Gram matrix must be positive semidefinite");
  }
  return CovarianceData(gram, twisted, alpha, q);
}

double typeB_moment_vector(std::span<const int> positions, const CovarianceData& cov) {
  const int len = static_cast<int>(positions.size());
  for (int p : positions) {
    if (p < 0 || p >= cov.count()) throw InputError("vector index outside covariance data");
  }
  if (len % 2 == 1) return 0.0;
  if (len > kDefaultOrderCap) throw CapacityError("order cap 16", "vector moment longer than 16");

  const double alpha = cov.alpha();
  const double q = cov.q();
  const auto& g = cov.gram();
  const auto& t = cov.twisted();
  double total = 0.0;
  // Per pairing the coloring sum factorizes block by block:
  // positive block -> <x_w, x_z>, negative block -> alpha q^(2c) <x_w, Pi0 x_z>.
  for_each_pairing(len / 2, [&](const Pairing& pairing) {
    const auto covers = cover_counts(pairing);
    double term = std::pow(q, crossings(pairing));
    for (int j = 0; j < pairing.size() && term != 0.0; ++j) {
      const Arc& arc = pairing.arc(j);
      const int w = positions[arc.open - 1];
      const int z = positions[arc.close - 1];
      term *= g(w, z) + alpha * std::pow(q, 2 * covers[j]) * t(w, z);
    }
    total += term;
  });
  return total;
}

double boundary_moment(int order, double q, int which) {
  if (which != 1 && which != -1) throw InputError("boundary side must be +1 or -1");
  if (order % 2 == 1 || which == -1) return 0.0;
  return std::ldexp(q_moment(order).evaluate(q), order / 2);
}

}  // namespace typeb
