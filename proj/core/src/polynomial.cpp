#include "typeb/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace typeb {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("polynomial coefficient overflow");
  return r;
}

}  // namespace

BivariatePoly BivariatePoly::constant(std::int64_t c, std::string first, std::string second) {
  return monomial(c, 0, 0, std::move(first), std::move(second));
}

BivariatePoly BivariatePoly::monomial(std::int64_t c, int e1, int e2, std::string first,
                                      std::string second) {
  BivariatePoly p(std::move(first), std::move(second));
  p.add_term(c, e1, e2);
  return p;
}

std::int64_t BivariatePoly::coefficient(int e1, int e2) const {
  auto it = terms_.find({e1, e2});
  return it == terms_.end() ? 0 : it->second;
}

void BivariatePoly::add_term(std::int64_t c, int e1, int e2) {
  if (c == 0) return;
  if (e1 < 0 || e2 < 0) throw std::invalid_argument("negative exponent");
  auto [it, inserted] = terms_.try_emplace({e1, e2}, c);
  if (!inserted) {
    it->second = checked_add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(c, e.first, e.second);
  return *this;
}

BivariatePoly& BivariatePoly::operator*=(std::int64_t scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c = checked_mul(c, scalar);
  return *this;
}

BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
  BivariatePoly out(a.first_, a.second_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      out.add_term(checked_mul(ca, cb), ea.first + eb.first, ea.second + eb.second);
    }
  }
  return out;
}

BivariatePoly BivariatePoly::second_at_zero() const {
  BivariatePoly out(first_, "");
  for (const auto& [e, c] : terms_) {
    if (e.second == 0) out.add_term(c, e.first, 0);
  }
  return out;
}

BivariatePoly BivariatePoly::second_at_one() const {
  BivariatePoly out(first_, "");
  for (const auto& [e, c] : terms_) out.add_term(c, e.first, 0);
  return out;
}

BivariatePoly BivariatePoly::swapped() const {
  BivariatePoly out(second_, first_);
  for (const auto& [e, c] : terms_) out.add_term(c, e.second, e.first);
  return out;
}

bool BivariatePoly::has_nonnegative_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

int BivariatePoly::max_first_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int BivariatePoly::max_second_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

std::string BivariatePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first_term = true;
  // Ascending in the second variable, then the first.
  std::vector<std::pair<Exponents, std::int64_t>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
    return std::pair(x.first.second, x.first.first) < std::pair(y.first.second, y.first.first);
  });
  for (const auto& [e, c] : ordered) {
    std::int64_t mag = c;
    if (first_term) {
      if (c < 0) {
        os << "-";
        mag = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      mag = c < 0 ? -c : c;
    }
    first_term = false;
    std::ostringstream mono;
    auto power = [&mono](const std::string& v, int k) {
      if (k == 0) return;
      if (!mono.str().empty()) mono << "*";
      mono << v;
      if (k > 1) mono << "^" << k;
    };
    power(second_, e.second);
    power(first_, e.first);
    if (mono.str().empty()) {
      os << mag;
    } else if (mag == 1) {
      os << mono.str();
    } else {
      os << mag << "*" << mono.str();
    }
  }
  return os.str();
}

}  // namespace typeb
