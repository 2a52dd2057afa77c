#ifndef HOFA_TESTERS_H_
#define HOFA_TESTERS_H_

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hofa/analysis.h"
#include "hofa/function_table.h"
#include "hofa/linear_system.h"
#include "hofa/mode.h"
#include "hofa/random.h"

namespace hofa {

// --- the U^{d+1} test --------------------------------------------------------

struct UniformityResult {
  Estimate estimate;  // of ||e_p(f)||_{U^{d+1}}^{2^{d+1}}
  double threshold = 0;
  bool accept = false;
  uint64_t queries = 0;  // table reads, 2^{d+1} per sample
};

// Averages e_p(sum_I (-1)^{d+1-|I|} f(X + sum_{i in I} Y_i)) over sampled
// (X, Y_1..Y_{d+1}); accepts when the real part reaches `threshold`.
UniformityResult uniformity_test(const FunctionTable& f, int d, uint64_t samples, uint64_t seed,
                                 double threshold = 0.5);

// --- generic testers ---------------------------------------------------------

// A query tuple with its probability.
struct SupportPoint {
  std::vector<FpVector> points;
  double prob = 0;
};
// Finite distribution over query tuples (fixed n).
struct ExplicitSupport {
  std::vector<SupportPoint> support;
};
// Queries L_1(X), ..., L_q(X) for X uniform in (F_p^n)^k; works for every n.
struct FormPattern {
  LinearSystem system;
};
// Arbitrary sampler: returns q points of F_p^n.
struct BlackBox {
  std::function<std::vector<FpVector>(Rng&, int n)> sample;
};
using QuerySampler = std::variant<ExplicitSupport, FormPattern, BlackBox>;

struct TesterSpec {
  uint32_t p = 2;
  int q = 1;
  QuerySampler sampler = ExplicitSupport{};
  // Indexed by (z_1..z_q) in base p, z_1 most significant; entries 0 or 1.
  std::vector<uint8_t> decision;
  double theta_minus = 0.0;
  double theta_plus = 1.0;
  double epsilon = 0.5;
  double delta = 0.25;
  // Number of independent uniform affine maps composed with every query
  // tuple (0 = the base sampler).
  int symmetrizations = 0;
};

// Throws InvalidArgument on inconsistent fields.
void validate(const TesterSpec& spec);

// The U^{d+1} test as a spec: the 2^{d+1} cube pattern and the decision
// "sum_I (-1)^{d+1-|I|} z_I == 0".
TesterSpec uniformity_tester(uint32_t p, int d);

struct TesterRun {
  Estimate acceptance;
  bool accept = false;  // acceptance >= theta_plus
  bool reject = false;  // acceptance <= theta_minus
};

// Empirical acceptance over `trials` sampled query tuples. Each trial uses its
// own generator derived from (seed, trial).
TesterRun run_tester(const TesterSpec& spec, const FunctionTable& f, uint64_t trials, uint64_t seed);
// Exact acceptance: explicit supports (with or without symmetrization) and
// form patterns are enumerated within the budget.
double exact_acceptance(const TesterSpec& spec, const FunctionTable& f, uint64_t budget = kDefaultBudget);

TesterSpec symmetrize_tester(const TesterSpec& spec);

// One support tuple rewritten as a homogeneous system in (Y_0, Y_1..Y_r),
// together with the decision map's Fourier weights.
struct ProfileEntry {
  LinearSystem system;
  double weight = 0;
  int rank = 0;
};
struct DecisionWeight {
  std::vector<Residue> beta;
  std::complex<double> weight;  // Gamma^(beta)
};
struct LinearFormProfile {
  std::vector<ProfileEntry> entries;
  std::vector<DecisionWeight> decision_weights;  // nonzero ones only
  // Total variation between the symmetrized queries and independent uniform
  // (Y_0..Y_r); bounds the reconstruction error.
  double correction = 0;
};
// Every emitted form has coefficient 1 on the first variable. Explicit
// supports describe the symmetrized tester; a form pattern is kept (up to a
// change of variables) when homogeneous and otherwise gains a shared shift.
LinearFormProfile extract_linear_form_profile(const TesterSpec& spec, int n);
// sum_entries weight * sum_beta Gamma^(beta) t*_{L, beta}(f).
double profile_acceptance(const LinearFormProfile& profile, const FunctionTable& f, uint64_t budget = kDefaultBudget);

// --- dual families -----------------------------------------------------------

struct DualFamily {
  std::string name;
  // Members at (p, n); field-valued tables.
  std::function<std::vector<FunctionTable>(uint32_t p, int n)> members;
  std::function<FunctionTable(uint32_t p, int n, uint64_t seed)> sample;
  std::function<bool(const FunctionTable&)> contains;
  bool consistent = false;      // closed under extending coordinates
  bool affine_invariant = false;
  std::function<double(uint32_t p, int n)> log_size;  // log_p of the member count
};

// Polynomials of degree <= d (constant terms included).
DualFamily polynomial_dual_family(int d);
// Spot check: f o A is a member for sampled members f and random affine A.
bool check_affine_closure(const DualFamily& family, uint32_t p, int n, int checks, uint64_t seed);

struct DegreeScan {
  std::vector<double> member_acceptance;  // index d - 1
  std::vector<double> random_acceptance;
  int degree = 0;
  bool heuristic = true;
};
// For d in 1..q-1, compares acceptance on random degree-d polynomials with
// acceptance on uniformly random functions; picks the largest d with the best
// separation. A heuristic: nothing here proves the tester's degree.
DegreeScan find_testing_degree(const TesterSpec& spec, int n, int functions, uint64_t trials, uint64_t seed);

// --- distributional functions -------------------------------------------------

class DistributionalFunction {
 public:
  // probs[x * p + z] = Pr[Gamma(x) = z].
  DistributionalFunction(uint32_t p, int n, std::vector<double> probs);

  static DistributionalFunction dirac(const FunctionTable& f);
  static DistributionalFunction uniform(uint32_t p, int n);
  // Pr[0] = F + (1 - F)/p, Pr[z] = (1 - F)/p otherwise.
  static DistributionalFunction lift(const FunctionTable& F);

  uint32_t p() const { return p_; }
  int n() const { return n_; }
  Point size() const { return static_cast<Point>(probs_.size() / p_); }
  double prob(Point x, Residue z) const { return probs_[static_cast<size_t>(x) * p_ + z]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  uint32_t p_;
  int n_;
  std::vector<double> probs_;
};

// x -> E_{z ~ Gamma(x)} e_p(c z).
FunctionTable a_c_compose(const DistributionalFunction& gamma, Residue c);
FunctionTable sample_function(const DistributionalFunction& gamma, uint64_t seed);
// E prod_i (a_{beta_i} o Gamma)(L_i(X)).
Estimate t_star(const DistributionalFunction& gamma, const LinearSystem& system, const std::vector<Residue>& beta,
                const Mode& mode = Exact{});

struct ConcentrationResult {
  std::complex<double> expected;  // t*(Gamma)
  std::vector<double> deviations;  // |t*(f) - t*(Gamma)| per seed
  int failures = 0;
  double failure_rate = 0;
};
// Samples f ~ Gamma for seeds first_seed..first_seed+seeds-1 and counts
// deviations above `threshold`.
ConcentrationResult concentration_check(const DistributionalFunction& gamma, const LinearSystem& system,
                                        const std::vector<Residue>& beta, int seeds, uint64_t first_seed,
                                        double threshold = 0.1, uint64_t budget = kDefaultBudget);

// --- interior experiment ------------------------------------------------------

struct InteriorOptions {
  bool require_connected = true;
  double threshold = 1e-6;
  uint64_t budget = kDefaultBudget;
};

struct InteriorResult {
  std::vector<std::vector<double>> gram;  // for the witness
  double min_singular_value = 0;
  bool independent = false;
  std::optional<FunctionTable> witness;
  int first_success = -1;  // trial index, -1 if none
  int trials = 0;
  std::vector<std::string> notes;  // undecided hypothesis checks
};

// Samples f: F_p^n -> (0,1), builds the Gram matrix of the boundary functions
// and keeps the trial with the largest minimum singular value. Throws
// HypothesisViolation for isomorphic pairs and (by default) disconnected
// systems.
InteriorResult interior_experiment(const std::vector<LinearSystem>& systems, uint32_t p, int n, int trials,
                                   uint64_t seed, const InteriorOptions& options = {});

// Gram matrix E[g_i g_j] of real parts and its smallest singular value.
std::vector<std::vector<double>> gram_matrix(const std::vector<std::vector<std::complex<double>>>& functions);
double min_singular_value(const std::vector<std::vector<double>>& matrix);

}  // namespace hofa

#endif  // HOFA_TESTERS_H_
