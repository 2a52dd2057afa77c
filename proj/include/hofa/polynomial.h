#ifndef HOFA_POLYNOMIAL_H_
#define HOFA_POLYNOMIAL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hofa/field.h"
#include "hofa/mode.h"

namespace hofa {

// Per-variable exponents of a monomial; each entry is < p.
using Exponents = std::vector<uint8_t>;

int total_degree(const Exponents& e);

// A polynomial over F_p in n variables, stored in the monomial basis
// x_1^{e_1}...x_n^{e_n} with 0 <= e_i < p. Zero coefficients are never stored,
// so distinct polynomials are distinct functions F_p^n -> F_p.
class Polynomial {
 public:
  Polynomial(uint32_t p, int n);
  // Throws InvalidArgument on bad exponents or shape.
  Polynomial(uint32_t p, int n, const std::map<Exponents, Residue>& terms);

  static Polynomial constant(uint32_t p, int n, Residue c);
  // sum_i a(i) x_i
  static Polynomial linear(uint32_t p, int n, const FpVector& a);
  static Polynomial monomial(uint32_t p, int n, const Exponents& e, Residue coeff = 1);

  uint32_t p() const { return p_; }
  int n() const { return n_; }
  const std::map<Exponents, Residue>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Maximum total degree of a stored term; -1 for the zero polynomial.
  int degree() const;

  Residue coefficient(const Exponents& e) const;
  void add_term(const Exponents& e, Residue coeff);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial scaled(Residue c) const;

  bool operator==(const Polynomial& o) const = default;

 private:
  void check_compatible(const Polynomial& o) const;

  uint32_t p_;
  int n_;
  std::map<Exponents, Residue> terms_;
};

Residue evaluate(const Polynomial& poly, const FpVector& x);
// Values at every point of F_p^n, in enumeration order.
std::vector<Residue> evaluate_table(const Polynomial& poly, uint64_t budget = kDefaultBudget);

// Delta_y P(x) = P(x + y) - P(x), computed symbolically.
Polynomial additive_derivative(const Polynomial& poly, const FpVector& y);

bool is_homogeneous(const Polynomial& poly);

// bias(P) = |E_x e_p(P(x))|. The exact mode counts points per residue class
// and takes one complex magnitude at the end.
Estimate bias(const Polynomial& poly, const Mode& mode = Exact{});

// Monomials with exponents < p and total degree <= d (== d if exact_degree),
// in a fixed order (by total degree, then lexicographically).
std::vector<Exponents> monomial_basis(uint32_t p, int n, int d, bool exact_degree = false);

// Uniform coefficients over the degree <= d basis (exactly-d basis when
// homogeneous), resampled until the degree is exactly d. Requires
// d <= n(p - 1), the largest degree a reduced polynomial can have.
Polynomial random_polynomial(uint32_t p, int n, int d, bool homogeneous, uint64_t seed);

// The unique reduced polynomial agreeing with a table of values on F_p^n.
Polynomial interpolate(uint32_t p, int n, const std::vector<Residue>& values);

// Text form "c*x1^a1*x2^a2 + ..."; variables are 1-based. Exponent 1 is
// written without "^1", and the zero polynomial is "0".
std::string to_text(const Polynomial& poly);
// Accepts '+' and '-' between terms and any order of factors in a term.
Polynomial parse_polynomial(const std::string& text, uint32_t p, int n);

}  // namespace hofa

#endif  // HOFA_POLYNOMIAL_H_
