#ifndef HOFA_COMPLEXITY_H_
#define HOFA_COMPLEXITY_H_

#include <optional>
#include <vector>

#include "hofa/linear_system.h"

namespace hofa {

// Above this many forms the partition search is skipped and only the m - 2
// upper bound is reported.
inline constexpr int kCsSearchMaxForms = 12;

struct CsComplexity {
  int s = 0;
  bool bound_only = false;
  // partitions[i] splits the forms other than i into parts whose spans avoid
  // form i. Empty when bound_only.
  std::vector<Partition> partitions;
};

// Throws InvalidArgument if two forms are linearly dependent (this includes a
// zero form) or the system has repeated forms.
CsComplexity cs_complexity(const LinearSystem& system);

// Entries prod_j form[i_j] over multi-indices (i_1..i_d), i_1 most significant.
FpRow tensor_power(const FpRow& form, int d, uint32_t p);
// The same information indexed by multisets {i_1 <= ... <= i_d} (the
// monomials of degree d); the linear relations among these vectors are exactly
// those among the full tensor powers.
FpRow symmetric_power(const FpRow& form, int d, uint32_t p);

struct TrueComplexity {
  int d = 0;
  // Coefficients c with sum_i c_i L_i^d = 0, when d >= 1.
  std::optional<FpRow> dependency;
};

// Smallest d with the (d+1)-th tensor powers linearly independent. Throws
// HypothesisViolation when the Cauchy-Schwarz complexity exceeds p (or cannot
// be shown not to).
TrueComplexity true_complexity(const LinearSystem& system);

struct ComplexityReport {
  CsComplexity cs;
  // Empty when the Cauchy-Schwarz complexity exceeds p.
  std::optional<TrueComplexity> true_complexity;
  bool hypothesis_holds = true;
};

ComplexityReport complexity_report(const LinearSystem& system);

}  // namespace hofa

#endif  // HOFA_COMPLEXITY_H_
