#include "typeb/clt.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "typeb/errors.hpp"
#include "typeb/partitions.hpp"
#include "typeb/wick.hpp"

namespace typeb {

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw InputError("cannot convert a non-finite value to a rational");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r(scaled);
  exponent -= 53;
  const Rational two(2);
  if (exponent > 0) {
    for (int i = 0; i < exponent; ++i) r *= two;
  } else {
    boost::multiprecision::cpp_int denom = 1;
    denom <<= -exponent;
    r /= Rational(denom);
  }
  return r;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::automatic: return "auto";
    case Method::full_enumeration: return "full";
    case Method::class_enumeration: return "class";
  }
  return "auto";
}

Method parse_method(std::string_view name) {
  if (name == "auto" || name == "automatic") return Method::automatic;
  if (name == "full" || name == "full-enumeration") return Method::full_enumeration;
  if (name == "class" || name == "class-enumeration") return Method::class_enumeration;
  throw InputError("unknown method '" + std::string(name) + "' (expected auto, full or class)");
}

namespace {

// Number of set partitions of [k] into blocks of even size.
double even_partition_count(int k) {
  if (k % 2 == 1) return 0.0;
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (int n = 2; n <= k; n += 2) {
    // The block of element 1 has 2j elements: C(n-1, 2j-1) companions.
    double binom = 1.0;  // C(n-1, m)
    for (int m = 1; m <= n - 1; ++m) {
      binom = binom * (n - m) / m;
      if (m % 2 == 1) e[n] += binom * e[n - m - 1];
    }
  }
  return e[k];
}

Rational falling_factorial_exact(int N, int b) {
  Rational f(1);
  for (int i = 0; i < b; ++i) f *= N - i;
  return f;
}

Rational power(const Rational& x, int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

double full_enumeration_cost(int N, int k) { return std::pow(2.0 * N, k); }

double class_enumeration_cost(int N, int k) {
  return std::pow(static_cast<double>(N), k / 2) * even_partition_count(k) * std::pow(4.0, k / 2);
}

void CltConfig::validate() const {
  if (N < 1) throw InputError("N must be at least 1");
  if (k < 0) throw InputError("moment order k must be non-negative");
  if (!(std::abs(q) < 1.0)) throw InputError("q must lie in (-1, 1)");
  if (!(std::abs(rho) < 1.0)) throw InputError("rho must lie in (-1, 1)");
}

Method resolve_method(const CltConfig& cfg) {
  cfg.validate();
  const double full = full_enumeration_cost(cfg.N, cfg.k);
  const double cls = class_enumeration_cost(cfg.N, cfg.k);
  auto refuse = [&](const char* limit, double cost) {
    throw CapacityError(limit, std::string(limit) + " exceeded (N=" + std::to_string(cfg.N) +
                                   ", k=" + std::to_string(cfg.k) +
                                   ", cost=" + std::to_string(cost) + ")");
  };
  switch (cfg.method) {
    case Method::full_enumeration:
      if (full > kFullEnumerationCapacity) refuse("full-enumeration (2N)^k<=1e8", full);
      return Method::full_enumeration;
    case Method::class_enumeration:
      if (cls > kClassEnumerationCapacity) refuse("class-enumeration cost<=1e10", cls);
      return Method::class_enumeration;
    case Method::automatic:
      if (cls <= kClassEnumerationCapacity) return Method::class_enumeration;
      if (full <= kFullEnumerationCapacity) return Method::full_enumeration;
      refuse("class-enumeration cost<=1e10", cls);
  }
  return Method::class_enumeration;
}

double FixedSignMoment::value(double rho) const {
  if (k % 2 == 1) return 0.0;
  double total = 0.0;
  for (std::size_t p = rho_coefficients.size(); p-- > 0;) {
    total = total * rho + static_cast<double>(rho_coefficients[p]);
  }
  return total / std::pow(2.0 * N, k / 2);
}

Rational FixedSignMoment::exact(const Rational& rho) const {
  if (k % 2 == 1) return Rational(0);
  Rational total(0);
  for (std::size_t p = rho_coefficients.size(); p-- > 0;) {
    total = total * rho + Rational(rho_coefficients[p]);
  }
  return total / power(Rational(2 * N), k / 2);
}

namespace {

using Mask = std::uint32_t;

struct BlockPair {
  int first;
  int second;
};

// Inversion data of the letter pairs between two blocks once their indices
// are ordered: the letters of the block carrying the larger index that sit
// to the left of letters of the other block are swapped past them.
struct Inversions {
  bool odd = false;    // parity of the number of inverted letter pairs
  Mask degree = 0;     // letters meeting an odd number of inverted pairs
};

Inversions inversions(const std::vector<int>& larger, const std::vector<int>& smaller) {
  Inversions inv;
  for (int t : larger) {
    for (int u : smaller) {
      if (t < u) {
        inv.odd = !inv.odd;
        inv.degree ^= Mask{1} << (t - 1);
        inv.degree ^= Mask{1} << (u - 1);
      }
    }
  }
  return inv;
}

std::vector<BlockPair> block_pairs(int b) {
  std::vector<BlockPair> pairs;
  for (int x = 0; x < b; ++x) {
    for (int y = x + 1; y < b; ++y) pairs.push_back({x, y});
  }
  return pairs;
}

std::vector<Mask> block_masks(const SetPartition& v) {
  std::vector<Mask> masks;
  for (const auto& block : v.blocks) {
    Mask m = 0;
    for (int t : block) m |= Mask{1} << (t - 1);
    masks.push_back(m);
  }
  return masks;
}

// Letter bit t of a pattern c is set when letter t is an `a`. For a fixed
// index assignment the word's sign is
//   prod_pairs s^(#inversions) * (s r)^(#inversions between different kinds),
// and the second parity is <c, degree>. The rho power is the number of
// blocks holding an odd number of a's.
class ClassPlan {
 public:
  ClassPlan(const SetPartition& v, bool coupled) : b_(v.block_count()), pairs_(block_pairs(b_)) {
    const int k = v.ground;
    const auto masks = block_masks(v);
    std::vector<int> rank(static_cast<std::size_t>(b_));
    std::iota(rank.begin(), rank.end(), 0);
    const int npairs = static_cast<int>(pairs_.size());
    const std::size_t table_size = (std::size_t{1} << npairs) * static_cast<std::size_t>(b_ + 1);
    do {
      Orientation o;
      o.rank = rank;
      std::vector<Mask> degree;
      for (int p = 0; p < npairs; ++p) {
        const auto [x, y] = pairs_[p];
        const Inversions inv = rank[x] > rank[y] ? inversions(v.blocks[x], v.blocks[y])
                                                 : inversions(v.blocks[y], v.blocks[x]);
        if (inv.odd) o.odd_pairs |= Mask{1} << p;
        degree.push_back(inv.degree);
      }
      o.table.assign(table_size, 0);
      const std::uint64_t patterns = coupled ? 1 : std::uint64_t{1} << k;
      const std::int64_t weight = coupled ? std::int64_t{1} << k : 1;
      for (std::uint64_t c = 0; c < patterns; ++c) {
        Mask parity = 0;
        for (int p = 0; p < npairs; ++p) {
          if (std::popcount(static_cast<Mask>(c) & degree[p]) % 2 == 1) parity |= Mask{1} << p;
        }
        int e = 0;
        for (Mask m : masks) e += std::popcount(static_cast<Mask>(c) & m) % 2;
        for (Mask u = 0; u < (Mask{1} << npairs); ++u) {
          const std::int64_t s = std::popcount(parity & u) % 2 == 1 ? -weight : weight;
          o.table[u * static_cast<std::size_t>(b_ + 1) + e] += s;
        }
      }
      o.counts.assign(std::size_t{2} << npairs, 0);
      orientations_.push_back(std::move(o));
    } while (std::next_permutation(rank.begin(), rank.end()));
  }

  int blocks() const noexcept { return b_; }

  // Records one sorted index subset. `sr_negative[i][j]` and `s_negative`
  // are indexed by sorted positions i < j.
  void record(const std::vector<std::vector<std::uint8_t>>& sr_negative,
              const std::vector<std::vector<std::uint8_t>>& s_negative) {
    for (auto& o : orientations_) {
      Mask u = 0;
      Mask sneg = 0;
      for (std::size_t p = 0; p < pairs_.size(); ++p) {
        int i = o.rank[pairs_[p].first];
        int j = o.rank[pairs_[p].second];
        if (i > j) std::swap(i, j);
        if (sr_negative[i][j]) u |= Mask{1} << p;
        if (s_negative[i][j] && ((o.odd_pairs >> p) & 1u)) sneg ^= 1u;
      }
      ++o.counts[(static_cast<std::size_t>(u) << 1) | sneg];
    }
  }

  void accumulate(std::vector<std::int64_t>& coefficients) const {
    const std::size_t width = static_cast<std::size_t>(b_ + 1);
    for (const auto& o : orientations_) {
      for (std::size_t idx = 0; idx < o.counts.size(); ++idx) {
        const std::int64_t n = o.counts[idx];
        if (n == 0) continue;
        const std::int64_t sign = (idx & 1u) ? -1 : 1;
        const std::size_t u = idx >> 1;
        for (std::size_t e = 0; e < width; ++e) {
          coefficients[e] += sign * n * o.table[u * width + e];
        }
      }
    }
  }

 private:
  struct Orientation {
    std::vector<int> rank;
    Mask odd_pairs = 0;
    std::vector<std::int64_t> table;   // [U][e]
    std::vector<std::int64_t> counts;  // [U][sign bit]
  };

  int b_;
  std::vector<BlockPair> pairs_;
  std::vector<Orientation> orientations_;
};

void require_symmetric(const SignTable& signs) {
  if (signs.convention() != RConvention::symmetric) {
    throw InputError("clt requires the symmetric r convention");
  }
}

FixedSignMoment by_full_enumeration(const CltConfig& cfg, const SignTable& signs) {
  FixedSignMoment out{cfg.N, cfg.k, std::vector<std::int64_t>(cfg.k / 2 + 1, 0)};
  const int alphabet = 2 * cfg.N;
  std::vector<int> digits(static_cast<std::size_t>(cfg.k), 0);
  AbstractWord word(static_cast<std::size_t>(cfg.k));
  while (true) {
    for (int t = 0; t < cfg.k; ++t) {
      const int d = digits[t];
      word[t] = {cfg.coupled || d % 2 == 0 ? Kind::a : Kind::b, d / 2 + 1};
    }
    const WordTerm term = eval_term(word, signs);
    if (term.sign != 0) out.rho_coefficients[term.rho_power] += term.sign;
    int pos = cfg.k - 1;
    while (pos >= 0 && ++digits[pos] == alphabet) digits[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

FixedSignMoment by_class_enumeration(const CltConfig& cfg, const SignTable& signs) {
  FixedSignMoment out{cfg.N, cfg.k, std::vector<std::int64_t>(cfg.k / 2 + 1, 0)};
  if (cfg.k % 2 == 1) return out;
  for (const SetPartition& v : enumerate_set_partitions_even(cfg.k)) {
    const int b = v.block_count();
    if (b > cfg.N) continue;
    ClassPlan plan(v, cfg.coupled);
    std::vector<int> y(static_cast<std::size_t>(b));
    std::iota(y.begin(), y.end(), 1);
    std::vector<std::vector<std::uint8_t>> sr(static_cast<std::size_t>(b),
                                              std::vector<std::uint8_t>(b, 0));
    auto sn = sr;
    while (true) {
      for (int i = 0; i < b; ++i) {
        for (int j = i + 1; j < b; ++j) {
          const int s = signs.s(y[i], y[j]);
          const int r = cfg.coupled ? s : signs.r(y[i], y[j]);
          sn[i][j] = s < 0;
          sr[i][j] = s * r < 0;
        }
      }
      plan.record(sr, sn);
      int pos = b - 1;
      while (pos >= 0 && y[pos] == cfg.N - (b - 1 - pos)) --pos;
      if (pos < 0) break;
      ++y[pos];
      for (int i = pos + 1; i < b; ++i) y[i] = y[i - 1] + 1;
    }
    std::vector<std::int64_t> coefficients(static_cast<std::size_t>(b) + 1, 0);
    plan.accumulate(coefficients);
    for (int e = 0; e <= b; ++e) out.rho_coefficients[e] += coefficients[e];
  }
  return out;
}

}  // namespace

FixedSignMoment moment_fixed_signs_exact(const CltConfig& cfg, const SignTable& signs) {
  require_symmetric(signs);
  const Method m = resolve_method(cfg);
  if (cfg.k == 0) return {cfg.N, 0, {1}};
  return m == Method::full_enumeration ? by_full_enumeration(cfg, signs)
                                       : by_class_enumeration(cfg, signs);
}

FixedSignMoment moment_fixed_signs_exact(const CltConfig& cfg) {
  cfg.validate();
  return moment_fixed_signs_exact(cfg, SignTable(cfg.seed, cfg.q));
}

double moment_fixed_signs(const CltConfig& cfg) {
  return moment_fixed_signs_exact(cfg).value(cfg.rho);
}

// ---------------------------------------------------------------------------
// Expectation over the signs

Rational ExpectationPolynomials::exact(int N, const Rational& q, const Rational& rho) const {
  if (N < 1) throw InputError("N must be at least 1");
  if (k % 2 == 1) return Rational(0);
  Rational total(0);
  for (int b = 0; b < static_cast<int>(by_blocks.size()) && b <= N; ++b) {
    if (by_blocks[b].is_zero()) continue;
    total += falling_factorial_exact(N, b) * by_blocks[b].evaluate<Rational>(q, rho);
  }
  return total / (power(Rational(2), k / 2) * power(Rational(N), k / 2));
}

double ExpectationPolynomials::value(int N, double q, double rho) const {
  if (N < 1) throw InputError("N must be at least 1");
  if (k % 2 == 1) return 0.0;
  double total = 0.0;
  for (int b = 0; b < static_cast<int>(by_blocks.size()) && b <= N; ++b) {
    if (by_blocks[b].is_zero()) continue;
    // Divide the falling factorial by N^b early to stay in range.
    double weight = 1.0;
    for (int i = 0; i < b; ++i) weight *= static_cast<double>(N - i) / N;
    total += weight * std::pow(static_cast<double>(N), b - k / 2) * by_blocks[b].evaluate(q, rho);
  }
  return total / std::pow(2.0, k / 2);
}

namespace {

ExpectationPolynomials build_expectation(int k, bool coupled) {
  ExpectationPolynomials out;
  out.k = k;
  out.coupled = coupled;
  out.by_blocks.assign(static_cast<std::size_t>(k / 2) + 1, BivariatePoly("q", "rho"));
  out.pairings = BivariatePoly("q", "rho");
  if (k % 2 == 1) return out;

  // Canonical representative: block j carries index j + 1, so the block
  // with the larger index is always the later one. For one pair of sites the
  // expectation of s^m r^n is q^(m mod 2 + n mod 2); with m + n fixed, an odd
  // total gives q, an even total gives q^(2 <c, degree>).
  for (const SetPartition& v : enumerate_set_partitions_even(k)) {
    const int b = v.block_count();
    const auto pairs = block_pairs(b);
    const auto masks = block_masks(v);
    const int npairs = static_cast<int>(pairs.size());
    int base = 0;
    Mask even_pairs = 0;
    std::vector<Mask> toggles(static_cast<std::size_t>(k), 0);  // pair bits touched by letter t
    std::vector<Mask> letter_block(static_cast<std::size_t>(k), 0);
    for (int p = 0; p < npairs; ++p) {
      const Inversions inv = inversions(v.blocks[pairs[p].second], v.blocks[pairs[p].first]);
      if (inv.odd) {
        ++base;
      } else {
        even_pairs |= Mask{1} << p;
      }
      for (int t = 0; t < k; ++t) {
        if ((inv.degree >> t) & 1u) toggles[t] |= Mask{1} << p;
      }
    }
    for (int j = 0; j < b; ++j) {
      for (int t = 0; t < k; ++t) {
        if ((masks[j] >> t) & 1u) letter_block[t] = Mask{1} << j;
      }
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>((base + 2 * npairs + 1) * (b + 1)), 0);
    const int width = b + 1;
    if (coupled) {
      counts[static_cast<std::size_t>(base * width)] += std::int64_t{1} << k;
    } else {
      // Gray-code walk over letter patterns.
      Mask parity = 0;
      Mask odd_blocks = 0;
      const std::uint64_t patterns = std::uint64_t{1} << k;
      for (std::uint64_t g = 0; g < patterns; ++g) {
        if (g > 0) {
          const int t = std::countr_zero(g);
          parity ^= toggles[t];
          odd_blocks ^= letter_block[t];
        }
        const int qe = base + 2 * std::popcount(parity & even_pairs);
        ++counts[static_cast<std::size_t>(qe * width + std::popcount(odd_blocks))];
      }
    }

    BivariatePoly poly("q", "rho");
    for (int qe = 0; qe <= base + 2 * npairs; ++qe) {
      for (int e = 0; e <= b; ++e) {
        const std::int64_t c = counts[static_cast<std::size_t>(qe * width + e)];
        if (c != 0) poly.add_term(c, qe, e);
      }
    }
    out.by_blocks[b] += poly;
    if (2 * b == k) out.pairings += poly;
  }
  return out;
}

}  // namespace

const ExpectationPolynomials& expectation_polynomials(int k, bool coupled) {
  if (k < 0) throw InputError("moment order k must be non-negative");
  if (k > kExpectationOrderCap) {
    throw CapacityError("expectation order k<=12",
                        "expected_moment_exact supports k <= 12, got " + std::to_string(k));
  }
  static std::mutex mutex;
  static std::map<std::pair<int, bool>, std::unique_ptr<ExpectationPolynomials>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{k, coupled}];
  if (!slot) slot = std::make_unique<ExpectationPolynomials>(build_expectation(k, coupled));
  return *slot;
}

namespace {

void require_parameters(int N, double q, double rho) {
  CltConfig cfg;
  cfg.N = N;
  cfg.q = q;
  cfg.rho = rho;
  cfg.validate();
}

}  // namespace

Rational expected_moment_exact(int N, int k, double q, double rho, bool coupled) {
  require_parameters(N, q, rho);
  return expectation_polynomials(k, coupled).exact(N, to_rational(q), to_rational(rho));
}

double expected_moment(int N, int k, double q, double rho, bool coupled) {
  require_parameters(N, q, rho);
  return expectation_polynomials(k, coupled).value(N, q, rho);
}

std::vector<double> inverse_n_expansion(int k, double q, double rho, bool coupled) {
  require_parameters(1, q, rho);
  const int h = k / 2;
  std::vector<double> c(static_cast<std::size_t>(h) + 1, 0.0);
  if (k % 2 == 1) return c;
  const auto& polys = expectation_polynomials(k, coupled);
  // N(N-1)...(N-b+1) = sum_j s(b, j) N^j with signed Stirling numbers.
  std::vector<double> stirling{1.0};
  for (int b = 0; b <= h; ++b) {
    if (b > 0) {
      std::vector<double> next(static_cast<std::size_t>(b) + 1, 0.0);
      for (int j = 0; j < b; ++j) {
        next[j + 1] += stirling[j];
        next[j] -= (b - 1) * stirling[j];
      }
      stirling = std::move(next);
    }
    const double value = polys.by_blocks[b].evaluate(q, rho) / std::pow(2.0, h);
    for (int j = 0; j <= b; ++j) c[h - j] += stirling[j] * value;
  }
  return c;
}

PairingIdentity pairing_class_identity(int N, int n, double q, double rho) {
  require_parameters(N, q, rho);
  if (n < 0 || 2 * n > 10) throw InputError("pairing_class_identity requires 0 <= 2n <= 10");
  PairingIdentity out;
  if (N < n) {
    out.match = true;
    return out;
  }
  const Rational qr = to_rational(q);
  const Rational rr = to_rational(rho);
  const Rational scale = falling_factorial_exact(N, n) / power(Rational(N), n);
  out.lhs = scale * expectation_polynomials(2 * n).pairings.evaluate<Rational>(qr, rr) /
            power(Rational(2), n);
  out.rhs = scale * typeB_moment_scalar(2 * n).evaluate<Rational>(qr, rr);
  out.match = out.lhs == out.rhs;
  return out;
}

double limit_moment(int k, double q, double rho) {
  if (k % 2 == 1) return 0.0;
  return typeB_moment_scalar(k).evaluate(q, rho);
}

std::vector<ConvergenceRow> convergence_report(int k, double q, double rho,
                                               std::span<const int> Ns,
                                               std::span<const std::uint64_t> seeds,
                                               const ConvergenceOptions& options) {
  const double limit = limit_moment(k, q, rho);
  std::vector<ConvergenceRow> rows;
  for (std::uint64_t seed : seeds) {
    for (int N : Ns) {
      ConvergenceRow row;
      row.seed = seed;
      row.N = N;
      row.limit = limit;
      rows.push_back(row);
    }
  }
  std::optional<std::string> expectation_refused;
  if (options.exact_expectation) {
    try {
      expectation_polynomials(k);
    } catch (const CapacityError& e) {
      expectation_refused = e.limit();
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      ConvergenceRow& row = rows[i];
      CltConfig cfg;
      cfg.N = row.N;
      cfg.k = k;
      cfg.q = q;
      cfg.rho = rho;
      cfg.seed = row.seed;
      cfg.method = options.method;
      try {
        row.moment = moment_fixed_signs(cfg);
        row.abs_error = std::abs(*row.moment - row.limit);
      } catch (const CapacityError& e) {
        row.skipped = e.limit();
      }
      if (options.exact_expectation && !expectation_refused) {
        row.expected = expected_moment(row.N, k, q, rho);
      }
    }
  };
  // Validate once up front so bad parameters surface as exceptions here
  // rather than inside a worker.
  for (int N : Ns) {
    CltConfig cfg;
    cfg.N = N;
    cfg.k = k;
    cfg.q = q;
    cfg.rho = rho;
    cfg.validate();
  }
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

double process_limit_moment(std::span<const int> labels, double alpha, double q,
                            std::span<const double> pi0_diagonal) {
  const int d = static_cast<int>(pi0_diagonal.size());
  if (d == 0) throw InputError("Pi0 diagonal must be non-empty");
  Eigen::MatrixXd twisted = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double c = pi0_diagonal[i];
    if (c != 1.0 && c != -1.0) throw InputError("Pi0 diagonal entries must be +1 or -1");
    twisted(i, i) = c;
  }
  std::vector<int> positions;
  positions.reserve(labels.size());
  for (int label : labels) {
    if (label < 1 || label > d) throw InputError("component label outside 1..d");
    positions.push_back(label - 1);
  }
  const auto cov = CovarianceData::from_gram(Eigen::MatrixXd::Identity(d, d), twisted, alpha, q);
  return typeB_moment_vector(positions, cov);
}

}  // namespace typeb
