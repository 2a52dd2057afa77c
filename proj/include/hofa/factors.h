#ifndef HOFA_FACTORS_H_
#define HOFA_FACTORS_H_

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "hofa/function_table.h"
#include "hofa/polynomial.h"
#include "hofa/rank.h"

namespace hofa {

// The partition of F_p^n into level sets of (P_1, ..., P_C). Only nonempty
// atoms are stored; atom ids follow the order of first appearance in the
// enumeration of F_p^n.
class PolynomialFactor {
 public:
  // The trivial factor with one atom.
  PolynomialFactor(uint32_t p, int n, uint64_t budget = kDefaultBudget);
  PolynomialFactor(uint32_t p, int n, std::vector<Polynomial> polys, uint64_t budget = kDefaultBudget);

  uint32_t p() const { return p_; }
  int n() const { return n_; }
  int complexity() const { return static_cast<int>(polys_.size()); }
  // Largest degree of a defining polynomial, 0 for the trivial factor.
  int degree() const;
  const std::vector<Polynomial>& polynomials() const { return polys_; }

  int atom_count() const { return static_cast<int>(labels_.size()); }
  int atom_of(Point x) const { return atom_[x]; }
  const std::vector<int>& atoms() const { return atom_; }
  // (P_1(x), ..., P_C(x)) shared by the points of the atom.
  const std::vector<Residue>& label(int atom) const { return labels_[atom]; }
  // Atom id with this label, or -1 when no point has it.
  int find_atom(const std::vector<Residue>& label) const;
  uint64_t atom_size(int atom) const { return sizes_[atom]; }

  PolynomialFactor refined(const Polynomial& poly) const;

 private:
  void build();

  uint32_t p_;
  int n_;
  uint64_t budget_;
  std::vector<Polynomial> polys_;
  std::vector<int> atom_;
  std::vector<std::vector<Residue>> labels_;
  std::vector<uint64_t> sizes_;
};

// Average over the atom of each point. Field-valued input is lifted first;
// real input stays real.
FunctionTable conditional_expectation(const FunctionTable& f, const PolynomialFactor& factor);
std::vector<std::complex<double>> conditional_expectation(const std::vector<std::complex<double>>& f,
                                                          const PolynomialFactor& factor);

// Constant on every atom up to `tolerance`.
bool is_measurable(const FunctionTable& g, const PolynomialFactor& factor, double tolerance = 1e-12);

struct DecomposeOptions {
  bool homogeneous = false;
  int max_rounds = 64;
  uint64_t budget = kDefaultBudget;
  // Required rank as a function of complexity; reported, never enforced.
  std::function<int(int)> rank_floor;
};

struct Decomposition {
  PolynomialFactor factor;
  FunctionTable h;  // E(f | factor)
  // f - h. It can leave the unit disk, so it is kept as raw values.
  std::vector<std::complex<double>> residual;
  int rounds = 0;
  double achieved_norm = 0;  // ||f - h||_{U^{d+1}}
  bool target_missed = false;
  std::vector<double> norm_history;  // residual norm before each round and at the end
  std::optional<int> rank_floor;
  // Rank of the defining set (only computed for quadratic factors).
  std::optional<RankReport> rank;
};

// Energy increment: while ||f - E(f|B)||_{U^{d+1}} > delta, add the degree <= d
// polynomial that correlates best with the residual. Stops with
// target_missed set when the round cap is hit or no polynomial correlates.
Decomposition decompose(const FunctionTable& f, int d, double delta, const DecomposeOptions& options = {});

// ||v||_{U^k} for a table that may leave the unit disk, exactly.
double gowers_norm_of_values(const std::vector<std::complex<double>>& v, uint32_t p, int n, int k,
                             uint64_t budget = kDefaultBudget);

// Rewrites g = Gamma(P_1..P_C) as Gamma(Q_1..Q_C). Labels of `to` that never
// occur under `from` map to 0.
FunctionTable hybrid_substitute(const FunctionTable& g, const PolynomialFactor& from, const PolynomialFactor& to);

// F^(gamma) for gamma in F_p^C (indexed base p, gamma_1 most significant) with
// h(x) = sum_gamma F^(gamma) e_p(sum_i gamma_i P_i(x)). Labels that never
// occur are given the value 0.
std::vector<std::complex<double>> factor_fourier(const FunctionTable& h, const PolynomialFactor& factor,
                                                 uint64_t budget = kDefaultBudget);
std::vector<std::complex<double>> factor_fourier_reconstruct(const std::vector<std::complex<double>>& coefficients,
                                                             const PolynomialFactor& factor);

}  // namespace hofa

#endif  // HOFA_FACTORS_H_
