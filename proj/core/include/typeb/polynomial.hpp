#pragma once

// Exact integer polynomials in two commuting variables.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace typeb {

/// Sparse polynomial sum c * x^e1 * y^e2 with int64 coefficients. Zero
/// coefficients are never stored, so structural equality is polynomial
/// equality. Arithmetic throws std::overflow_error instead of wrapping.
///
/// A univariate polynomial is a BivariatePoly whose second label is empty and
/// whose terms all have e2 = 0.
class BivariatePoly {
 public:
  using Exponents = std::pair<int, int>;
  using Terms = std::map<Exponents, std::int64_t>;

  BivariatePoly() = default;
  BivariatePoly(std::string first, std::string second)
      : first_(std::move(first)), second_(std::move(second)) {}

  static BivariatePoly constant(std::int64_t c, std::string first = "q",
                                std::string second = "rho");
  static BivariatePoly monomial(std::int64_t c, int e1, int e2, std::string first = "q",
                                std::string second = "rho");

  const std::string& first_label() const noexcept { return first_; }
  const std::string& second_label() const noexcept { return second_; }
  bool univariate() const noexcept { return second_.empty(); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::int64_t coefficient(int e1, int e2 = 0) const;

  void add_term(std::int64_t c, int e1, int e2 = 0);

  BivariatePoly& operator+=(const BivariatePoly& other);
  BivariatePoly& operator*=(std::int64_t scalar);
  friend BivariatePoly operator+(BivariatePoly a, const BivariatePoly& b) { return a += b; }
  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b);
  friend BivariatePoly operator*(BivariatePoly a, std::int64_t s) { return a *= s; }

  /// Equality of the coefficient maps; labels are not compared.
  friend bool operator==(const BivariatePoly& a, const BivariatePoly& b) {
    return a.terms_ == b.terms_;
  }

  /// Sets the second variable to 0 (keeps e2 = 0 terms) / to 1 (sums over e2).
  /// The result is univariate in the first variable.
  BivariatePoly second_at_zero() const;
  BivariatePoly second_at_one() const;

  /// Swaps the roles of the two variables (relabels too).
  BivariatePoly swapped() const;

  bool has_nonnegative_coefficients() const;
  int max_first_degree() const;
  int max_second_degree() const;

  /// Horner-free direct evaluation; T is double or an exact rational type.
  template <class T>
  T evaluate(const T& x, const T& y) const {
    T total = T(0);
    for (const auto& [e, c] : terms_) {
      T term = T(c);
      for (int i = 0; i < e.first; ++i) term *= x;
      for (int i = 0; i < e.second; ++i) term *= y;
      total += term;
    }
    return total;
  }
  double evaluate(double x, double y = 0.0) const { return evaluate<double>(x, y); }

  /// Human-readable form, e.g. "2 + q + rho*q^2".
  std::string to_string() const;

 private:
  std::string first_ = "q";
  std::string second_ = "rho";
  Terms terms_;
};

}  // namespace typeb
