#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

std::vector<Matching> matchings(int n) {
  std::vector<Matching> out;
  std::vector<int> free;
  for (int i = 1; i <= 2 * n; ++i) free.push_back(i);
  Matching cur;
  std::function<void(std::vector<int>)> rec = [&](std::vector<int> rest) {
    if (rest.empty()) {
      Matching m = cur;
      std::sort(m.begin(), m.end());
      out.push_back(m);
      return;
    }
    const int last = rest.back();
    rest.pop_back();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      std::vector<int> next = rest;
      const int partner = next[i];
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
      cur.emplace_back(partner, last);
      rec(next);
      cur.pop_back();
    }
  };
  rec(free);
  return out;
}

namespace {

bool inside(int x, int a, int b) { return a < x && x < b; }

}  // namespace

int crossing_count(const Matching& m) {
  int c = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const auto [a, b] = m[i];
      const auto [x, y] = m[j];
      if (inside(x, a, b) != inside(y, a, b)) ++c;
    }
  }
  return c;
}

int nesting_count(const Matching& m) {
  int c = 0;
  for (const auto& outer : m) {
    for (const auto& inner : m) {
      if (inside(inner.first, outer.first, outer.second) &&
          inside(inner.second, outer.first, outer.second)) {
        ++c;
      }
    }
  }
  return c;
}

typeb::BivariatePoly typeB_brute(int n) {
  typeb::BivariatePoly total("q", "rho");
  for (const auto& m : matchings(n)) {
    const int cr = crossing_count(m);
    for (std::uint32_t f = 0; f < (1u << n); ++f) {
      int nb = 0;
      int cnb = 0;
      for (int j = 0; j < n; ++j) {
        if (!((f >> j) & 1u)) continue;
        ++nb;
        for (int i = 0; i < n; ++i) {
          if (inside(m[j].first, m[i].first, m[i].second) &&
              inside(m[j].second, m[i].first, m[i].second)) {
            ++cnb;
          }
        }
      }
      total.add_term(1, cr + 2 * cnb, nb);
    }
  }
  return total;
}

typeb::BivariatePoly touchard_riordan(int n) {
  auto binom = [](int a, int b) -> std::int64_t {
    if (b < 0 || b > a) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  const int top = n * (n + 1) / 2;
  std::vector<std::int64_t> num(static_cast<std::size_t>(top) + 1, 0);
  for (int k = 0; k <= n; ++k) {
    const std::int64_t c = binom(2 * n, n - k) - binom(2 * n, n - k - 1);
    num[static_cast<std::size_t>(k * (k + 1) / 2)] += (k % 2 == 0 ? c : -c);
  }
  // Divide n times by (1 - q): the quotient coefficients are prefix sums.
  for (int r = 0; r < n; ++r) {
    std::vector<std::int64_t> quot;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i + 1 < num.size(); ++i) {
      acc += num[i];
      quot.push_back(acc);
    }
    num = quot;
  }
  typeb::BivariatePoly p("q", "");
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (num[i] != 0) p.add_term(num[i], static_cast<int>(i), 0);
  }
  return p;
}

std::vector<std::vector<std::vector<int>>> set_partitions(int k) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int pos, int maxv) {
    if (pos == k) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(maxv + 1));
      for (int i = 0; i < k; ++i) blocks[a[i]].push_back(i + 1);
      if (k == 0) blocks.clear();
      out.push_back(blocks);
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      if (pos == 0 && v > 0) break;
      a[pos] = v;
      rec(pos + 1, std::max(maxv, v));
    }
  };
  if (k == 0) {
    out.push_back({});
    return out;
  }
  rec(0, -1);
  return out;
}

double vector_moment_brute(std::span<const int> positions, const Eigen::MatrixXd& gram,
                           const Eigen::MatrixXd& twisted, double alpha, double q) {
  const int len = static_cast<int>(positions.size());
  if (len % 2 == 1) return 0.0;
  const int n = len / 2;
  double total = 0.0;
  for (const auto& m : matchings(n)) {
    const int cr = crossing_count(m);
    for (std::uint32_t f = 0; f < (1u << n); ++f) {
      double term = std::pow(q, cr);
      for (int j = 0; j < n; ++j) {
        const int w = positions[m[j].first - 1];
        const int z = positions[m[j].second - 1];
        if ((f >> j) & 1u) {
          int covers = 0;
          for (int i = 0; i < n; ++i) {
            if (inside(m[j].first, m[i].first, m[i].second) &&
                inside(m[j].second, m[i].first, m[i].second)) {
              ++covers;
            }
          }
          term *= alpha * std::pow(q, 2 * covers) * twisted(w, z);
        } else {
          term *= gram(w, z);
        }
      }
      total += term;
    }
  }
  return total;
}

Eigen::VectorXd qfock_annihilation(const Eigen::VectorXd& x, const Eigen::VectorXd& level, int d,
                                   int n, double q) {
  Eigen::Index lower = 1;
  for (int i = 0; i < n - 1; ++i) lower *= d;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lower);
  for (Eigen::Index idx = 0; idx < level.size(); ++idx) {
    if (level(idx) == 0.0) continue;
    std::vector<int> digits(static_cast<std::size_t>(n));
    Eigen::Index rem = idx;
    for (int p = n - 1; p >= 0; --p) {
      digits[p] = static_cast<int>(rem % d);
      rem /= d;
    }
    for (int k = 0; k < n; ++k) {
      Eigen::Index target = 0;
      for (int p = 0; p < n; ++p) {
        if (p != k) target = target * d + digits[p];
      }
      out(target) += level(idx) * std::pow(q, n - 1 - k) * x(digits[k]);
    }
  }
  return out;
}

int negative_count(const std::vector<int>& images) {
  return static_cast<int>(std::count_if(images.begin(), images.end(), [](int v) { return v < 0; }));
}

int typeB_length(const std::vector<int>& images) {
  int inv = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if (images[i] > images[j]) ++inv;
    }
  }
  int neg = 0;
  for (int v : images) {
    if (v < 0) neg -= v;
  }
  return inv + neg;
}

double eval_random_path(std::span<const typeb::Letter> word, const typeb::SignTable& signs,
                        double rho, std::mt19937_64& rng) {
  std::vector<typeb::Letter> w(word.begin(), word.end());
  int sign = 1;
  while (true) {
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
      if (w[j].index > w[j + 1].index) candidates.push_back(j);
    }
    if (candidates.empty()) break;
    const std::size_t j =
        candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    const auto& l = w[j];
    const auto& r = w[j + 1];
    if (l.kind == r.kind) {
      sign *= signs.s(l.index, r.index);
    } else if (l.kind == typeb::Kind::a) {
      sign *= signs.r(l.index, r.index);
    } else {
      sign *= signs.r(r.index, l.index);
    }
    std::swap(w[j], w[j + 1]);
  }
  double value = sign;
  std::size_t start = 0;
  while (start < w.size()) {
    std::size_t end = start;
    int as = 0;
    while (end < w.size() && w[end].index == w[start].index) {
      as += w[end].kind == typeb::Kind::a;
      ++end;
    }
    if ((end - start) % 2 == 1) return 0.0;
    if (as % 2 == 1) value *= rho;
    start = end;
  }
  return value;
}

typeb::Rational exhaustive_expectation(int N, int k, double q, double rho) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) pairs.emplace_back(i, j);
  }
  const int vars = 2 * static_cast<int>(pairs.size());
  const typeb::Rational qr = typeb::to_rational(q);
  const typeb::Rational rr = typeb::to_rational(rho);
  const typeb::Rational plus = (1 + qr) / 2;
  const typeb::Rational minus = (1 - qr) / 2;
  typeb::Rational total(0);
  typeb::CltConfig cfg;
  cfg.N = N;
  cfg.k = k;
  cfg.q = q;
  cfg.rho = rho;
  cfg.method = typeb::Method::full_enumeration;
  for (std::uint32_t config = 0; config < (1u << vars); ++config) {
    typeb::SignTable signs(0, q);
    typeb::Rational weight(1);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const bool s_neg = (config >> (2 * p)) & 1u;
      const bool r_neg = (config >> (2 * p + 1)) & 1u;
      signs.set_s(pairs[p].first, pairs[p].second, s_neg ? -1 : 1);
      signs.set_r(pairs[p].first, pairs[p].second, r_neg ? -1 : 1);
      weight *= s_neg ? minus : plus;
      weight *= r_neg ? minus : plus;
    }
    total += weight * typeb::moment_fixed_signs_exact(cfg, signs).exact(rr);
  }
  return total;
}

}  // namespace oracle
