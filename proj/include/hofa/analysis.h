#ifndef HOFA_ANALYSIS_H_
#define HOFA_ANALYSIS_H_

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "hofa/function_table.h"
#include "hofa/linear_system.h"
#include "hofa/mode.h"
#include "hofa/polynomial.h"

namespace hofa {

// <f, g> = E f(X) conj(g(X)).
std::complex<double> inner_product(const FunctionTable& f, const FunctionTable& g);
// E |f(X)|^2.
double squared_norm(const FunctionTable& f);
std::complex<double> mean(const FunctionTable& f);

SpectrumTable fourier_transform(const FunctionTable& f, uint64_t budget = kDefaultBudget);
// max_alpha |f^(alpha)|, the correlation with linear phases.
double linear_bias(const SpectrumTable& spectrum);

struct GowersResult {
  double norm = 0;
  // E prod_S C^{k-|S|} f(X + sum_{i in S} Y_i), i.e. norm^{2^k}.
  std::complex<double> power;
  bool exact = true;
  double std_error = 0;  // of `power`, Monte Carlo only
  uint64_t samples = 0;
};

// ||f||_{U^k}. Exact mode needs p^{n(k+1)} within the mode's budget.
GowersResult gowers_norm(const FunctionTable& f, int k, const Mode& mode = Exact{});
// E prod_S C^{k-|S|} f_S(X + sum_{i in S} Y_i) for a family indexed by the
// bits of S (family.size() == 2^k).
std::complex<double> gowers_inner_product(const std::vector<FunctionTable>& family, int k,
                                          uint64_t budget = kDefaultBudget);

// Polynomials of degree <= d (homogeneous ones only when requested). Constant
// terms are left out since they do not change |<f, e_p(Q)>|.
struct PolynomialFamily {
  int degree = 1;
  bool homogeneous = false;
};
using Family = std::variant<PolynomialFamily, std::vector<FunctionTable>>;

struct Correlation {
  double value = 0;
  // True when only sampled members were examined.
  bool lower_bound = false;
  std::optional<Polynomial> witness_polynomial;
  int witness_index = -1;  // explicit-list families
  uint64_t members = 0;
};

// sup over the family of |<f, e_p(g)>| (|<f, g>| for complex members). A
// MonteCarlo mode samples `samples` random members and labels the result a
// lower bound. Exact mode throws BudgetExceeded when the family times the
// domain exceeds the budget.
Correlation correlation_with_family(const FunctionTable& f, const Family& family, const Mode& mode = Exact{});
uint64_t polynomial_family_size(uint32_t p, int n, const PolynomialFamily& family);

// Payloads of a linear-form average.
struct Plain {
  FunctionTable f;
};
// Conjugate the i-th factor when alpha[i] = 1.
struct Conjugated {
  FunctionTable f;
  std::vector<int> alpha;
};
// E e_p(sum_i beta_i f(L_i(X))) for field-valued f.
struct Coefficients {
  FunctionTable f;
  std::vector<Residue> beta;
};
struct PerForm {
  std::vector<FunctionTable> f;
};
using Payload = std::variant<Plain, Conjugated, Coefficients, PerForm>;

// t_L and its variants, as an expectation over X in (F_p^n)^k. Exact mode
// needs p^{nk} within budget.
Estimate linear_form_average(const LinearSystem& system, const Payload& payload, const Mode& mode = Exact{});

// x -> E[prod_L f(L(X)) | M(X) = x].
FunctionTable flagged_average(const FunctionTable& f, const FlaggedSystem& flagged, uint64_t budget = kDefaultBudget);
// x -> E[prod_i f_i(L_i(X)) | M(X) = x] for any nonzero M; the forms may be
// empty (the average is then 1).
std::vector<std::complex<double>> conditional_average(const std::vector<FunctionTable>& f,
                                                      const std::vector<FpRow>& forms, const FpRow& condition,
                                                      uint32_t p, int n, int k, uint64_t budget = kDefaultBudget);

// f^{dL}(x) = sum_i E[prod_{j != i} f(L_j(X)) | L_i(X) = x]. Forms must be
// nonzero. Values are returned as complex numbers (real for real f).
std::vector<std::complex<double>> boundary_function(const FunctionTable& f, const LinearSystem& system,
                                                    uint64_t budget = kDefaultBudget);

// Pointwise product of tables (disk-valued result), and f(x) g(y) on
// F_p^{n+m}.
FunctionTable pointwise_product(const FunctionTable& a, const FunctionTable& b);
FunctionTable tensor_product(const FunctionTable& a, const FunctionTable& b);

}  // namespace hofa

#endif  // HOFA_ANALYSIS_H_
