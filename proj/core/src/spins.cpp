#include "typeb/spins.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "typeb/errors.hpp"

namespace typeb {

std::string to_string(std::span<const Letter> word) {
  std::ostringstream os;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k > 0) os << ' ';
    os << (word[k].kind == Kind::a ? 'a' : 'b') << word[k].index;
  }
  return os.str();
}

double WordTerm::value(double rho) const {
  if (sign == 0) return 0.0;
  return sign * std::pow(rho, rho_power);
}

WordTerm eval_term(std::span<const Letter> word, const SignTable& signs) {
  std::vector<Letter> w(word.begin(), word.end());
  int sign = 1;
  // Insertion sort = sequence of adjacent transpositions; stable, so letters
  // of one site keep their relative order.
  for (std::size_t p = 1; p < w.size(); ++p) {
    for (std::size_t j = p; j > 0 && w[j - 1].index > w[j].index; --j) {
      const Letter& left = w[j - 1];
      const Letter& right = w[j];
      if (left.kind == right.kind) {
        sign *= signs.s(left.index, right.index);
      } else if (left.kind == Kind::a) {
        sign *= signs.r(left.index, right.index);
      } else {
        sign *= signs.r(right.index, left.index);
      }
      std::swap(w[j - 1], w[j]);
    }
  }
  WordTerm term{sign, 0};
  std::size_t start = 0;
  while (start < w.size()) {
    std::size_t end = start;
    int a_count = 0;
    while (end < w.size() && w[end].index == w[start].index) {
      a_count += w[end].kind == Kind::a ? 1 : 0;
      ++end;
    }
    if ((end - start) % 2 == 1) return {0, 0};
    term.rho_power += a_count % 2;
    start = end;
  }
  return term;
}

double eval_abstract(std::span<const Letter> word, const SignTable& signs, double rho) {
  return eval_term(word, signs).value(rho);
}

Mat2 sigma_matrix(int x) {
  Mat2 m;
  m << 1.0, 0.0, 0.0, static_cast<double>(x);
  return m;
}

Mat2 gamma_matrix() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat2 tau_matrix(double rho) {
  const double c = std::sqrt(1.0 - rho * rho);
  Mat2 m;
  m << rho, c, c, -rho;
  return m;
}

SlotOperator jw_element(Kind kind, int i, const SignTable& signs, double rho, int horizon,
                        const JwOptions& options) {
  if (!(std::abs(rho) < 1.0)) throw InputError("rho must lie in (-1, 1)");
  if (i < 1 || i > horizon) throw InputError("site index outside 1..horizon");
  SlotOperator op;
  op.horizon = horizon;
  const Mat2 id = Mat2::Identity();
  for (auto& leg : op.legs) leg.assign(static_cast<std::size_t>(horizon), id);

  // Leg 1 (zeta_i): sigma_{s(k,i)} for k < i, gamma at i, identity after.
  for (int k = 1; k < i; ++k) op.legs[0][k - 1] = sigma_matrix(signs.s(k, i));
  op.legs[0][i - 1] = gamma_matrix();

  if (kind == Kind::a) {
    // alpha_i: gamma at i; eta_i: tau at i.
    op.legs[1][i - 1] = gamma_matrix();
    op.legs[2][i - 1] = options.tau_override.value_or(tau_matrix(rho));
  } else {
    // beta_i: sigma_{s(k,i) r(k,i)} at every k != i, gamma at i; theta_i = I.
    for (int k = 1; k <= horizon; ++k) {
      op.legs[1][k - 1] = k == i ? gamma_matrix() : sigma_matrix(signs.s(k, i) * signs.r(k, i));
    }
  }
  return op;
}

double eval_jw(std::span<const SlotOperator> word) {
  if (word.empty()) return 1.0;
  const int horizon = word.front().horizon;
  for (const auto& op : word) {
    if (op.horizon != horizon) throw InputError("slot operators with different horizons");
  }
  double value = 1.0;
  for (int leg = 0; leg < 3; ++leg) {
    for (int slot = 0; slot < horizon; ++slot) {
      Mat2 prod = Mat2::Identity();
      for (const auto& op : word) prod = prod * op.legs[leg][slot];
      value *= prod(0, 0);
      if (value == 0.0) return 0.0;
    }
  }
  // Tail slots hold diagonal +-1 matrices; their (1,1) entries are all 1.
  return value;
}

double eval_jw_word(std::span<const Letter> word, const SignTable& signs, double rho, int horizon,
                    const JwOptions& options) {
  std::vector<SlotOperator> ops;
  ops.reserve(word.size());
  for (const Letter& l : word) ops.push_back(jw_element(l.kind, l.index, signs, rho, horizon, options));
  return eval_jw(ops);
}

bool HypothesisReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

namespace {

constexpr double kHypothesisTol = 1e-12;

// c with a * b = c * b * a, or 0 when the two neither commute nor anticommute.
int slot_commutation(const Mat2& a, const Mat2& b) {
  const Mat2 ab = a * b;
  const Mat2 ba = b * a;
  if ((ab - ba).cwiseAbs().maxCoeff() <= kHypothesisTol) return 1;
  if ((ab + ba).cwiseAbs().maxCoeff() <= kHypothesisTol) return -1;
  return 0;
}

// Overall commutation coefficient of two slot operators, or 0 if some slot
// pair fails to commute up to sign.
int operator_commutation(const SlotOperator& x, const SlotOperator& y) {
  int c = 1;
  for (int leg = 0; leg < 3; ++leg) {
    // Beyond the horizon both tails are diagonal, hence commute.
    if (!x.diagonal_tail[leg] || !y.diagonal_tail[leg]) return 0;
    for (int slot = 0; slot < x.horizon; ++slot) {
      const int cs = slot_commutation(x.legs[leg][slot], y.legs[leg][slot]);
      if (cs == 0) return 0;
      c *= cs;
    }
  }
  return c;
}

void fail(HypothesisResult& r, std::string witness, std::string detail) {
  if (!r.pass) return;
  r.pass = false;
  r.witness = std::move(witness);
  r.detail = std::move(detail);
}

std::string fmt_value(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

}  // namespace

HypothesisReport check_hypotheses(const SignTable& signs, double rho, int nmax,
                                  const JwOptions& options) {
  if (nmax < 1 || nmax > 4) throw InputError("hypothesis check supports 1 <= nmax <= 4");
  const int horizon = nmax;
  auto phi = [&](const AbstractWord& w) { return eval_jw_word(w, signs, rho, horizon, options); };

  HypothesisReport report;
  auto named = [](const char* name) {
    HypothesisResult r;
    r.name = name;
    return r;
  };
  HypothesisResult h1 = named("H1"), h2 = named("H2"), h3 = named("H3"), h4 = named("H4"),
                   h5 = named("H5");

  for (int i = 1; i <= nmax; ++i) {
    for (Kind k : {Kind::a, Kind::b}) {
      const AbstractWord w{{k, i}};
      const double v = phi(w);
      if (std::abs(v) > kHypothesisTol) fail(h1, to_string(w), "phi = " + fmt_value(v));
    }
    const AbstractWord aa{{Kind::a, i}, {Kind::a, i}};
    const AbstractWord bb{{Kind::b, i}, {Kind::b, i}};
    const AbstractWord ab{{Kind::a, i}, {Kind::b, i}};
    const AbstractWord ba{{Kind::b, i}, {Kind::a, i}};
    for (const auto& [w, expected] : {std::pair{aa, 1.0}, {bb, 1.0}, {ab, rho}, {ba, rho}}) {
      const double v = phi(w);
      if (std::abs(v - expected) > kHypothesisTol) {
        fail(h2, to_string(w), "phi = " + fmt_value(v) + ", expected " + fmt_value(expected));
      }
    }
  }

  // H3: all words of length <= 4.
  const int alphabet = 2 * nmax;
  for (int len = 1; len <= 4 && h3.pass; ++len) {
    std::vector<int> digits(static_cast<std::size_t>(len), 0);
    while (true) {
      AbstractWord w;
      for (int dgt : digits) w.push_back({dgt % 2 == 0 ? Kind::a : Kind::b, dgt / 2 + 1});
      const double v = phi(w);
      if (std::abs(v) > 1.0 + kHypothesisTol) {
        fail(h3, to_string(w), "|phi| = " + fmt_value(std::abs(v)) + " > 1");
        break;
      }
      int pos = 0;
      while (pos < len && ++digits[pos] == alphabet) digits[pos++] = 0;
      if (pos == len) break;
    }
  }

  // H4: naturally ordered products of random single-site words.
  std::mt19937_64 rng(signs.seed() ^ 0x4834ULL);
  for (int trial = 0; trial < 200 && h4.pass; ++trial) {
    AbstractWord whole;
    double product = 1.0;
    for (int i = 1; i <= nmax; ++i) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
      const int len = std::uniform_int_distribution<int>(0, 4)(rng);
      AbstractWord g;
      for (int t = 0; t < len; ++t) {
        g.push_back({std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? Kind::a : Kind::b, i});
      }
      product *= phi(g);
      whole.insert(whole.end(), g.begin(), g.end());
    }
    const double v = phi(whole);
    if (std::abs(v - product) > kHypothesisTol) {
      fail(h4, to_string(whole),
           "phi = " + fmt_value(v) + ", product of factors = " + fmt_value(product));
    }
  }

  // H5: a_i a_j = s a_j a_i, b_i b_j = s b_j b_i, a_i b_j = r(i,j) b_j a_i.
  for (int i = 1; i <= nmax; ++i) {
    for (int j = 1; j <= nmax; ++j) {
      if (i == j) continue;
      for (Kind ki : {Kind::a, Kind::b}) {
        for (Kind kj : {Kind::a, Kind::b}) {
          const auto x = jw_element(ki, i, signs, rho, horizon, options);
          const auto y = jw_element(kj, j, signs, rho, horizon, options);
          const int realized = operator_commutation(x, y);
          int expected = 0;
          if (ki == kj) {
            expected = signs.s(i, j);
          } else if (ki == Kind::a) {
            expected = signs.r(i, j);
          } else {
            expected = signs.r(j, i);
          }
          if (realized != expected) {
            const AbstractWord w{{ki, i}, {kj, j}};
            fail(h5, to_string(w),
                 "realized coefficient " + std::to_string(realized) + ", required " +
                     std::to_string(expected));
          }
        }
      }
    }
  }

  report.results = {h1, h2, h3, h4, h5};
  return report;
}

}  // namespace typeb
