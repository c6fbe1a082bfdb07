#include "typeb/coxeter.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>

#include "typeb/errors.hpp"
#include "typeb/wick.hpp"

namespace typeb {

SignedPermutation::SignedPermutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = degree();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : images_) {
    const int a = std::abs(v);
    if (a < 1 || a > n || seen[a]) throw InputError("not a signed permutation");
    seen[a] = true;
  }
}

SignedPermutation SignedPermutation::identity(int n) {
  std::vector<int> im(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) im[k] = k + 1;
  return SignedPermutation(std::move(im));
}

int SignedPermutation::operator()(int k) const {
  if (k == 0 || std::abs(k) > degree()) throw InputError("point outside [n]_+-");
  return k > 0 ? images_[k - 1] : -images_[-k - 1];
}

SignedPermutation operator*(const SignedPermutation& a, const SignedPermutation& b) {
  if (a.degree() != b.degree()) throw InputError("composing signed permutations of different degree");
  SignedPermutation out;
  out.images_.resize(a.images_.size());
  for (int k = 1; k <= a.degree(); ++k) out.images_[k - 1] = a(b(k));
  return out;
}

SignedPermutation SignedPermutation::inverse() const {
  SignedPermutation out;
  out.images_.resize(images_.size());
  for (int k = 1; k <= degree(); ++k) {
    const int v = images_[k - 1];
    out.images_[std::abs(v) - 1] = v > 0 ? k : -k;
  }
  return out;
}

std::uint64_t SignedPermutation::key() const {
  // 5 bits per image (offset by 16); enough for degree <= 12.
  std::uint64_t k = 0;
  for (int v : images_) k = (k << 5) | static_cast<std::uint64_t>(v + 16);
  return k;
}

SignedPermutation generator(int n, int i) {
  if (n < 1 || i < 0 || i >= n) throw InputError("generator index outside 0..n-1");
  auto im = SignedPermutation::identity(n).images();
  if (i == 0) {
    im[0] = -1;
  } else {
    std::swap(im[i - 1], im[i]);
  }
  return SignedPermutation(std::move(im));
}

SignedPermutation embed_symmetric(std::span<const int> lambda) {
  return SignedPermutation(std::vector<int>(lambda.begin(), lambda.end()));
}

CoxeterGroupB::CoxeterGroupB(int n) : n_(n) {
  if (n < 1 || n > 5) throw InputError("enumerate_group supports 1 <= n <= 5");
  std::vector<SignedPermutation> gens;
  for (int i = 0; i < n; ++i) gens.push_back(generator(n, i));

  elements_.push_back({SignedPermutation::identity(n), {}, {}, -1});
  index_.emplace(elements_.front().perm.key(), 0);
  for (std::size_t head = 0; head < elements_.size(); ++head) {
    for (int i = 0; i < n; ++i) {
      SignedPermutation next = elements_[head].perm * gens[i];
      const auto key = next.key();
      if (index_.contains(key)) continue;
      Element e{std::move(next), elements_[head].stats, elements_[head].word, static_cast<int>(head)};
      (i == 0 ? e.stats.l0 : e.stats.l) += 1;
      e.word.push_back(i);
      index_.emplace(key, static_cast<int>(elements_.size()));
      elements_.push_back(std::move(e));
    }
  }

  // Every neighbour one step closer to the identity is a geodesic
  // predecessor; each must induce the same statistics.
  for (const Element& e : elements_) {
    const int k = e.stats.length();
    if (k == 0) continue;
    for (int i = 0; i < n; ++i) {
      const Element& prev = elements_[index_.at((e.perm * gens[i]).key())];
      if (prev.stats.length() != k - 1) continue;
      LengthStats proposed = prev.stats;
      (i == 0 ? proposed.l0 : proposed.l) += 1;
      if (!(proposed == e.stats)) ++inconsistencies_;
    }
  }
}

int CoxeterGroupB::find(const SignedPermutation& perm) const {
  if (perm.degree() != n_) return -1;
  auto it = index_.find(perm.key());
  return it == index_.end() ? -1 : it->second;
}

const CoxeterGroupB::Element& CoxeterGroupB::element(const SignedPermutation& perm) const {
  const int idx = find(perm);
  if (idx < 0) throw InputError("signed permutation is not in the group");
  return elements_[idx];
}

namespace {

int int_pow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// A (x) I_d with the new factor least significant.
Eigen::MatrixXd kron_identity(const Eigen::MatrixXd& a, int d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() * d, a.cols() * d);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (v == 0.0) continue;
      for (int t = 0; t < d; ++t) out(i * d + t, j * d + t) = v;
    }
  }
  return out;
}

void check_parameters(double alpha, double q) {
  if (!(std::abs(alpha) <= 1.0) || !(std::abs(q) <= 1.0)) {
    throw InputError("symmetrizer parameters must satisfy |alpha| <= 1 and |q| <= 1");
  }
}

}  // namespace

void apply_generator_right(Eigen::MatrixXd& a, int i, int n, int d, const Eigen::MatrixXd& pi0) {
  const int dim = int_pow(d, n);
  if (a.cols() != dim) throw InputError("matrix width does not match d^n");
  if (i < 0 || i >= n) throw InputError("generator index outside 0..n-1");
  if (i == 0) {
    // Columns (a, rest) mix as sum_b Pi0[b, a] * col(b, rest).
    const int stride = dim / d;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (int rest = 0; rest < stride; ++rest) {
      for (int col = 0; col < d; ++col) {
        for (int b = 0; b < d; ++b) {
          const double w = pi0(b, col);
          if (w != 0.0) out.col(col * stride + rest) += w * a.col(b * stride + rest);
        }
      }
    }
    a = std::move(out);
    return;
  }
  // Swap of factors i and i+1: digit positions (from the most significant)
  // i-1 and i, with place values hi = d^(n-i) and lo = d^(n-i-1).
  const int lo = int_pow(d, n - i - 1);
  const int hi = lo * d;
  for (int c = 0; c < dim; ++c) {
    const int di = (c / hi) % d;
    const int dj = (c / lo) % d;
    if (di >= dj) continue;
    const int swapped = c + (dj - di) * hi + (di - dj) * lo;
    a.col(c).swap(a.col(swapped));
  }
}

Eigen::MatrixXd action_matrix_from_word(std::span<const int> word, int n, int d,
                                        const Eigen::MatrixXd& pi0) {
  require_involution(pi0);
  if (pi0.rows() != d) throw InputError("Pi0 dimension does not match d");
  const int dim = int_pow(d, n);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(dim, dim);
  for (int g : word) apply_generator_right(u, g, n, d, pi0);
  return u;
}

Eigen::MatrixXd action_matrix(const SignedPermutation& sigma, int d, const Eigen::MatrixXd& pi0) {
  const CoxeterGroupB group(sigma.degree());
  return action_matrix_from_word(group.element(sigma).word, sigma.degree(), d, pi0);
}

Eigen::MatrixXd symmetrizer(int n, int d, const Eigen::MatrixXd& pi0, double alpha, double q) {
  check_parameters(alpha, q);
  require_involution(pi0);
  if (pi0.rows() != d) throw InputError("Pi0 dimension does not match d");
  if (n == 0) return Eigen::MatrixXd::Identity(1, 1);
  const int dim = int_pow(d, n);
  if (dim > 1024) throw CapacityError("d^n <= 1024", "symmetrizer group sum limited to d^n <= 1024");
  const CoxeterGroupB group(n);
  const auto& els = group.elements();

  // Walk the BFS tree depth first so only one matrix per tree level is live.
  std::vector<std::vector<int>> children(els.size());
  for (std::size_t k = 1; k < els.size(); ++k) children[els[k].parent].push_back(static_cast<int>(k));

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<std::pair<int, Eigen::MatrixXd>> stack;
  stack.emplace_back(0, Eigen::MatrixXd::Identity(dim, dim));
  while (!stack.empty()) {
    auto [idx, u] = std::move(stack.back());
    stack.pop_back();
    const LengthStats& s = els[idx].stats;
    total += std::pow(alpha, s.l0) * std::pow(q, s.l) * u;
    for (int child : children[idx]) {
      Eigen::MatrixXd next = u;
      apply_generator_right(next, els[child].word.back(), n, d, pi0);
      stack.emplace_back(child, std::move(next));
    }
  }
  return total;
}

Eigen::MatrixXd symmetrizer_step(const Eigen::MatrixXd& previous, int n, int d,
                                 const Eigen::MatrixXd& pi0, double alpha, double q) {
  const int m = n + 1;  // degree of the new level
  const int dim = int_pow(d, m);
  Eigen::MatrixXd coset_sum = Eigen::MatrixXd::Zero(dim, dim);
  // w = pi_n pi_{n-1} ... pi_{n-j+1}, length j, no pi_0.
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(dim, dim);
  coset_sum += w;
  for (int j = 1; j <= n; ++j) {
    apply_generator_right(w, n - j + 1, m, d, pi0);
    coset_sum += std::pow(q, j) * w;
  }
  // w = pi_n ... pi_1 pi_0 pi_1 ... pi_k: one pi_0 and n + k others.
  apply_generator_right(w, 0, m, d, pi0);
  coset_sum += alpha * std::pow(q, n) * w;
  for (int k = 1; k <= n; ++k) {
    apply_generator_right(w, k, m, d, pi0);
    coset_sum += alpha * std::pow(q, n + k) * w;
  }
  return kron_identity(previous, d) * coset_sum;
}

Eigen::MatrixXd symmetrizer_factorized(int n, int d, const Eigen::MatrixXd& pi0, double alpha,
                                       double q) {
  check_parameters(alpha, q);
  require_involution(pi0);
  if (pi0.rows() != d) throw InputError("Pi0 dimension does not match d");
  if (n < 0) throw InputError("tensor degree must be non-negative");
  if (int_pow(d, n) > 4096) throw CapacityError("d^n <= 4096", "symmetrizer limited to d^n <= 4096");
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(1, 1);
  for (int k = 0; k < n; ++k) p = symmetrizer_step(p, k, d, pi0, alpha, q);
  return p;
}

PsdResult psd_check(const Eigen::MatrixXd& p, bool strict) {
  if (p.rows() != p.cols()) throw InputError("psd_check needs a square matrix");
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InputError("psd_check needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p, Eigen::EigenvaluesOnly);
  PsdResult r;
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.pass = strict ? r.min_eigenvalue > kStrictTolerance : r.min_eigenvalue >= -kPsdTolerance;
  return r;
}

}  // namespace typeb
