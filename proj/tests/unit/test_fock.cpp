#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "typeb/errors.hpp"
#include "typeb/fock.hpp"
#include "typeb/wick.hpp"

using namespace typeb;

namespace {

FockSpaceConfig config(int d, int M, double alpha, double q, Eigen::MatrixXd pi0) {
  FockSpaceConfig c;
  c.d = d;
  c.max_level = M;
  c.alpha = alpha;
  c.q = q;
  c.pi0 = std::move(pi0);
  return c;
}

Eigen::MatrixXd diag2() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(2, 2);
  p(1, 1) = -1;
  return p;
}

Eigen::MatrixXd swap2() {
  Eigen::MatrixXd p(2, 2);
  p << 0, 1, 1, 0;
  return p;
}

Eigen::VectorXd e(int d, int i) { return Eigen::VectorXd::Unit(d, i); }

FockState random_state(int d, int M, int top, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  FockState s(d, M);
  for (int n = 0; n <= top; ++n) {
    for (Eigen::Index i = 0; i < s.level(n).size(); ++i) s.level(n)(i) = normal(rng);
  }
  return s;
}

}  // namespace

TEST(Config, Validation) {
  EXPECT_NO_THROW(config(2, 4, 0.5, 0.5, diag2()).validate());
  EXPECT_THROW(config(2, 4, 1.0, 0.5, diag2()).validate(), InputError);
  EXPECT_THROW(config(2, 4, 0.5, -1.0, diag2()).validate(), InputError);
  EXPECT_THROW(config(2, 9, 0.5, 0.5, diag2()).validate(), InputError);
  EXPECT_THROW(config(4, 2, 0.5, 0.5, Eigen::MatrixXd::Identity(4, 4)).validate(), InputError);
  EXPECT_THROW(config(3, 7, 0.5, 0.5, Eigen::MatrixXd::Identity(3, 3)).validate(), CapacityError);
  EXPECT_THROW(config(2, 3, 0.5, 0.5, Eigen::MatrixXd::Identity(3, 3)).validate(), InputError);
}

TEST(Creation, RightTensoring) {
  const FockSpace fs(config(2, 3, 0.3, 0.2, diag2()));
  const FockState one = fs.creation(e(2, 0), fs.vacuum());
  EXPECT_EQ(one.level(1), e(2, 0));
  EXPECT_EQ(one.level(0)(0), 0.0);
  const FockState two = fs.creation(e(2, 1), one);
  // e1 (x) e2 sits at index 0 * d + 1.
  EXPECT_EQ(two.level(2), e(4, 1));
  EXPECT_EQ(fs.creation(Eigen::VectorXd::Zero(2), two).max_abs(), 0.0);
  EXPECT_THROW(fs.creation(Eigen::VectorXd::Zero(3), two), InputError);
}

TEST(Annihilation, Examples) {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  for (double alpha : {-0.4, 0.6}) {
    const FockSpace fs(config(1, 3, alpha, 0.3, one));
    EXPECT_EQ(fs.annihilation(e(1, 0), fs.vacuum()).max_abs(), 0.0);
    const FockState s = fs.annihilation(e(1, 0), FockState::basis(1, 3, 1, 0));
    EXPECT_NEAR(s.level(0)(0), 1 + alpha, 1e-14);
  }
}

TEST(Annihilation, AlphaZeroMatchesQFockFormula) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  for (double q : {-0.6, 0.0, 0.45}) {
    for (int d : {2, 3}) {
      const Eigen::MatrixXd pi0 = Eigen::MatrixXd::Identity(d, d);
      const FockSpace fs(config(d, 4, 0.0, q, pi0));
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd x(d);
        for (int i = 0; i < d; ++i) x(i) = normal(rng);
        const FockState s = random_state(d, 4, 4, rng);
        const FockState a = fs.annihilation(x, s);
        for (int n = 1; n <= 3; ++n) {
          const Eigen::VectorXd expected = oracle::qfock_annihilation(x, s.level(n), d, n, q);
          EXPECT_LE((a.level(n - 1) - expected).cwiseAbs().maxCoeff(), 1e-11)
              << "q=" << q << " d=" << d << " n=" << n;
        }
      }
    }
  }
}

TEST(Annihilation, IsTheDeformedAdjoint) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal;
  for (const Eigen::MatrixXd& pi0 : {diag2(), swap2()}) {
    const FockSpace fs(config(2, 5, 0.6, -0.4, pi0));
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd x(2);
      x << normal(rng), normal(rng);
      const FockState u = random_state(2, 5, 4, rng);
      const FockState v = random_state(2, 5, 5, rng);
      EXPECT_NEAR(fs.inner(fs.creation(x, u), v), fs.inner(u, fs.annihilation(x, v)), 1e-10);
    }
  }
}

TEST(GramLadder, Examples) {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  const GramLadder l = build_gram_ladder(config(1, 1, 0.35, 0.2, one));
  ASSERT_EQ(l.gram.size(), 2u);
  EXPECT_NEAR(l.gram[0](0, 0), 1.0, 1e-15);
  EXPECT_NEAR(l.gram[1](0, 0), 1.35, 1e-15);
  const GramLadder z = build_gram_ladder(config(2, 4, 0.0, 0.0, swap2()));
  for (const auto& g : z.gram) EXPECT_TRUE(g.isIdentity());
  const GramLadder h = build_gram_ladder(config(2, 3, 0.5, 0.5, diag2()));
  for (std::size_t n = 0; n < h.gram.size(); ++n) {
    EXPECT_GT(h.min_eigenvalue[n], 0.0);
    EXPECT_TRUE((h.gram[n] * h.inverse[n]).isIdentity(1e-10));
  }
  EXPECT_TRUE(h.warnings.empty());
}

TEST(GaussianMoment, Examples) {
  for (double alpha : {-0.5, 0.0, 0.7}) {
    for (double q : {-0.5, 0.3}) {
      const FockSpaceConfig cfg = config(2, 4, alpha, q, swap2());
      const std::vector<Eigen::VectorXd> xs{e(2, 0), e(2, 1)};
      EXPECT_NEAR(gaussian_moment(xs, cfg), alpha, 1e-12);
      const std::vector<Eigen::VectorXd> odd{e(2, 0), e(2, 1), e(2, 0)};
      EXPECT_EQ(gaussian_moment(odd, cfg), 0.0);
      const std::vector<Eigen::VectorXd> too_long(5, e(2, 0));
      EXPECT_THROW(gaussian_moment(too_long, cfg), CapacityError);
    }
  }
}

TEST(GaussianMoment, MatchesWickFormulaOnRandomData) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(-0.9, 0.9);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = trial % 2 == 0 ? 2 : 3;
    Eigen::VectorXd u(d);
    for (int i = 0; i < d; ++i) u(i) = normal(rng);
    u.normalize();
    const Eigen::MatrixXd pi0 = Eigen::MatrixXd::Identity(d, d) - 2 * u * u.transpose();
    const int len = 2 * std::uniform_int_distribution<int>(1, d == 2 ? 3 : 2)(rng);
    const FockSpaceConfig cfg = config(d, len, unif(rng), unif(rng), pi0);
    const FockSpace fs(cfg);
    Eigen::MatrixXd vectors(d, len);
    std::vector<Eigen::VectorXd> xs;
    std::vector<int> pos;
    for (int j = 0; j < len; ++j) {
      for (int i = 0; i < d; ++i) vectors(i, j) = normal(rng);
      xs.push_back(vectors.col(j));
      pos.push_back(j);
    }
    const auto cov = CovarianceData::from_vectors(vectors, pi0, cfg.alpha, cfg.q);
    const double wick = typeB_moment_vector(pos, cov);
    EXPECT_NEAR(fs.gaussian_moment(xs), wick, 1e-10 * (1 + std::abs(wick)));
    // Reversal symmetry for real data.
    std::vector<Eigen::VectorXd> rev(xs.rbegin(), xs.rend());
    EXPECT_NEAR(fs.gaussian_moment(rev), fs.gaussian_moment(xs), 1e-10 * (1 + std::abs(wick)));
  }
}

TEST(GaussianMoment, AlphaZeroGivesQGaussianMoments) {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  for (double q : {-0.7, 0.2, 0.8}) {
    const FockSpace fs(config(1, 8, 0.0, q, one));
    for (int n = 0; n <= 4; ++n) {
      const std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(2 * n), e(1, 0));
      EXPECT_NEAR(fs.gaussian_moment(xs), q_moment(2 * n).evaluate(q), 1e-10);
    }
  }
}

TEST(LevelScaling, Examples) {
  const FockState s = FockState::basis(2, 3, 2, 3);
  EXPECT_NEAR(q2N(s, 0.5).level(2)(3), 0.0625, 1e-15);
  std::mt19937_64 rng(2);
  const FockState r = random_state(2, 3, 3, rng);
  EXPECT_EQ((q2N(r, 1.0) - r).max_abs(), 0.0);
  const FockState vac = FockState::vacuum(2, 3);
  EXPECT_EQ(q2N(vac, 0.3).level(0)(0), 1.0);
  // Level supports are preserved.
  const FockState scaled = q2N(s, 0.7);
  for (int n = 0; n <= 3; ++n) {
    if (n != 2) {
      EXPECT_EQ(scaled.level(n).cwiseAbs().sum(), 0.0);
    }
  }
}

TEST(Commutation, ResidualVanishes) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> normal;
  // Free case.
  const FockSpaceConfig free = config(2, 4, 0.0, 0.0, diag2());
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd x(2), y(2);
    x << normal(rng), normal(rng);
    y << normal(rng), normal(rng);
    EXPECT_LE(commutation_residual(x, y, free), 1e-12);
  }
  for (const Eigen::MatrixXd& pi0 : {diag2(), swap2()}) {
    const FockSpace fs(config(2, 5, 0.6, 0.3, pi0));
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd x(2), y(2);
      x << normal(rng), normal(rng);
      y << normal(rng), normal(rng);
      EXPECT_LE(fs.commutation_residual(x, y), 1e-10);
    }
  }
}

TEST(Commutation, OrthogonalVectorsKillVacuumTerm) {
  // x = e1, y = e2 with Pi0 = diag: <x,y> = <x, Pi0 y> = 0, so
  // b(x) b*(y) Omega = q b*(y) b(x) Omega = 0.
  const FockSpace fs(config(2, 3, 0.6, 0.3, diag2()));
  const FockState lhs = fs.annihilation(e(2, 0), fs.creation(e(2, 1), fs.vacuum()));
  EXPECT_LE(lhs.max_abs(), 1e-14);
}

TEST(Matrices, CreationAndAnnihilationAreAdjointBlocks) {
  const FockSpace fs(config(2, 4, 0.4, -0.3, swap2()));
  Eigen::VectorXd x(2);
  x << 0.3, -1.2;
  for (int n = 0; n < 4; ++n) {
    const Eigen::MatrixXd c = fs.creation_matrix(x, n);
    const Eigen::MatrixXd a = fs.annihilation_matrix(x, n);
    const Eigen::MatrixXd& pn = fs.ladder().gram[static_cast<std::size_t>(n + 1)];
    const Eigen::MatrixXd& pm = fs.ladder().gram[static_cast<std::size_t>(n)];
    EXPECT_TRUE((pm * a).isApprox((pn * c).transpose(), 1e-10));
  }
}
