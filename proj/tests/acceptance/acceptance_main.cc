// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hofa/analysis.h"
#include "hofa/complexity.h"
#include "hofa/factors.h"
#include "hofa/linear_system.h"
#include "hofa/polynomial.h"
#include "hofa/random.h"
#include "hofa/structure.h"
#include "hofa/testers.h"

namespace {

using namespace hofa;

constexpr double kTol = 1e-9;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Smallest d such that the (d+1)-fold tensor powers of the forms are linearly
// independent, by plain Gaussian elimination on the full tensors.
int tensor_rank_complexity(const LinearSystem& s) {
  const uint32_t p = s.p();
  const int k = s.k(), m = s.m();
  for (int d = 1; d <= 8; ++d) {
    size_t len = 1;
    for (int i = 0; i <= d; ++i) len *= k;
    std::vector<std::vector<int64_t>> rows;
    for (const auto& form : s.forms()) {
      std::vector<int64_t> t(len);
      for (size_t idx = 0; idx < len; ++idx) {
        size_t rest = idx;
        int64_t v = 1;
        for (int i = 0; i <= d; ++i) {
          v = v * form[rest % k] % p;
          rest /= k;
        }
        t[idx] = v;
      }
      rows.push_back(t);
    }
    int rank = 0;
    for (size_t col = 0; col < len && rank < m; ++col) {
      int piv = -1;
      for (int r = rank; r < m; ++r) {
        if (rows[r][col] % p != 0) {
          piv = r;
          break;
        }
      }
      if (piv < 0) continue;
      std::swap(rows[piv], rows[rank]);
      int64_t inv = 1;
      for (uint32_t e = 0; e < p - 2; ++e) inv = inv * rows[rank][col] % p;
      for (auto& v : rows[rank]) v = v * inv % p;
      for (int r = 0; r < m; ++r) {
        if (r == rank || rows[r][col] == 0) continue;
        const int64_t c = rows[r][col];
        for (size_t j = 0; j < len; ++j) rows[r][j] = ((rows[r][j] - c * rows[rank][j]) % int64_t(p) + p) % p;
      }
      ++rank;
    }
    if (rank == m) return d;
  }
  return -1;
}

Verdict direct_inequality() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = -1e9;
  int checks = 0, bad = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const FunctionTable f = random_disk_table(2, 4, 1000 + seed);
    for (int d = 1; d <= 2; ++d) {
      const double corr = correlation_with_family(f, PolynomialFamily{d, false}).value;
      const double norm = gowers_norm(f, d + 1).norm;
      worst = std::max(worst, corr - norm);
      bad += corr > norm + kTol;
      ++checks;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 60, std::to_string(checks) + " checks, max(corr - norm) = " + fmt("%.4f", worst) + ", " +
                                     fmt("%.1f s", secs)};
}

Verdict polynomial_phase_norm() {
  double worst = 0;
  Rng rng = make_rng(2024);
  for (int i = 0; i < 50; ++i) {
    const uint32_t p = i % 2 ? 3 : 2;
    const int d = 1 + (i / 2) % 2;
    const int n_min = (d + static_cast<int>(p) - 2) / static_cast<int>(p - 1);
    const int n = n_min + static_cast<int>(uniform_below(rng, 4 - n_min + 1));
    const Polynomial poly = random_polynomial(p, n, d, false, 500 + i);
    const double norm = gowers_norm(polynomial_table(poly), d + 1, Exact{uint64_t{1} << 26}).norm;
    worst = std::max(worst, std::abs(norm - 1));
  }
  return {worst <= kTol, "50 polynomials, max |norm - 1| = " + fmt("%.2e", worst)};
}

Verdict u2_inverse() {
  int bad = 0;
  double slack = 1e9, route_gap = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const FunctionTable f = random_disk_table(2, 4, 3000 + seed);
    const double eps = gowers_norm(f, 2).norm;
    const double corr = correlation_with_family(f, PolynomialFamily{1, false}).value;
    const double bias = linear_bias(fourier_transform(f));
    route_gap = std::max(route_gap, std::abs(corr - bias));
    slack = std::min(slack, corr - eps * eps);
    bad += corr < eps * eps - kTol;
  }
  return {bad == 0 && route_gap <= kTol, "100 functions, min(corr - eps^2) = " + fmt("%.4f", slack) +
                                             ", correlation vs spectrum gap " + fmt("%.1e", route_gap)};
}

Verdict gowers_cauchy_schwarz() {
  int bad = 0, checks = 0;
  double worst = -1e9;
  for (int k = 2; k <= 3; ++k) {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      std::vector<FunctionTable> family;
      double bound = 1;
      for (int s = 0; s < (1 << k); ++s) {
        family.push_back(random_disk_table(2, 3, 7000 + 100 * seed + s + 50 * k));
        bound *= gowers_norm(family.back(), k).norm;
      }
      const double lhs = std::abs(gowers_inner_product(family, k));
      worst = std::max(worst, lhs - bound);
      bad += lhs > bound + kTol;
      ++checks;
    }
  }
  return {bad == 0, std::to_string(checks) + " families, max(lhs - bound) = " + fmt("%.4f", worst)};
}

Verdict cs_complexity_bound() {
  struct Case {
    LinearSystem system;
    int n;
  };
  const std::vector<Case> cases = {{arithmetic_progression(3, 3), 3},
                                   {LinearSystem(2, 2, {{1, 0}, {0, 1}, {1, 1}}), 4}};
  int bad = 0, checks = 0;
  double worst = -1e9;
  for (const auto& c : cases) {
    const int s = cs_complexity(c.system).s;
    if (s != 1) return {false, "unexpected Cauchy-Schwarz complexity " + std::to_string(s)};
    for (uint64_t seed = 0; seed < 100; ++seed) {
      std::vector<FunctionTable> f;
      double bound = 1e9;
      for (int i = 0; i < c.system.m(); ++i) {
        f.push_back(random_disk_table(c.system.p(), c.n, 9000 + 10 * seed + i));
        bound = std::min(bound, gowers_norm(f.back(), s + 1).norm);
      }
      const double t = std::abs(linear_form_average(c.system, PerForm{f}).value);
      worst = std::max(worst, t - bound);
      bad += t > bound + kTol;
      ++checks;
    }
  }
  return {bad == 0, std::to_string(checks) + " families, max(|t| - min norm) = " + fmt("%.4f", worst)};
}

Verdict true_complexity_values() {
  struct Golden {
    const char* name;
    LinearSystem system;
    int value;
  };
  const std::vector<Golden> goldens = {{"3-AP/F_3", arithmetic_progression(3, 3), 1},
                                       {"4-AP/F_5", arithmetic_progression(5, 4), 2},
                                       {"{x,y,x+y}/F_2", LinearSystem(2, 2, {{1, 0}, {0, 1}, {1, 1}}), 1}};
  std::string detail;
  bool ok = true;
  for (const auto& g : goldens) {
    const int lib = true_complexity(g.system).d;
    const int oracle = tensor_rank_complexity(g.system);
    ok = ok && lib == g.value && oracle == g.value;
    detail += std::string(detail.empty() ? "" : ", ") + g.name + " -> " + std::to_string(lib) + " (oracle " +
              std::to_string(oracle) + ")";
  }
  return {ok, detail};
}

Verdict derivative_identity() {
  struct Case {
    LinearSystem system;
    int n;
  };
  const std::vector<Case> cases = {{arithmetic_progression(3, 3), 2},
                                   {LinearSystem(2, 2, {{1, 0}, {0, 1}, {1, 1}}), 3},
                                   {arithmetic_progression(5, 4), 2}};
  constexpr double t = 1e-4;
  double worst = 0;
  for (size_t c = 0; c < cases.size(); ++c) {
    const auto& sys = cases[c].system;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const FunctionTable f = random_real_table(sys.p(), cases[c].n, 11000 + 100 * c + seed, -0.5, 0.5);
      const FunctionTable g = random_real_table(sys.p(), cases[c].n, 12000 + 100 * c + seed, -0.5, 0.5);
      std::vector<double> moved(f.size());
      for (Point x = 0; x < f.size(); ++x) moved[x] = f[x].real() + t * g[x].real();
      const FunctionTable ft = FunctionTable::real_valued(sys.p(), cases[c].n, moved);
      const double slope =
          (linear_form_average(sys, Plain{ft}).value.real() - linear_form_average(sys, Plain{f}).value.real()) / t;
      const auto boundary = boundary_function(f, sys);
      double inner = 0;
      for (Point x = 0; x < f.size(); ++x) inner += g[x].real() * boundary[x].real();
      inner /= f.size();
      worst = std::max(worst, std::abs(slope - inner));
    }
  }
  return {worst <= 1e-3, "60 pairs over 3 systems, max |slope - E[g f^dL]| = " + fmt("%.2e", worst)};
}

Verdict flagged_product_identity() {
  const std::vector<std::pair<FlaggedSystem, FlaggedSystem>> pairs = {
      {FlaggedSystem(arithmetic_progression(3, 3), {0, 1}), FlaggedSystem(arithmetic_progression(3, 3), {1, 1})},
      {FlaggedSystem(LinearSystem(2, 2, {{1, 0}, {0, 1}}), {1, 1}),
       FlaggedSystem(LinearSystem(2, 2, {{1, 0}, {0, 1}, {1, 1}}), {1, 0})},
      {FlaggedSystem(LinearSystem(3, 2, {{1, 0}, {1, 1}}), {0, 1}),
       FlaggedSystem(LinearSystem(3, 3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 1}}), {0, 0, 1})}};
  double worst = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto& [a, b] = pairs[seed % pairs.size()];
    const FunctionTable f = random_disk_table(a.p(), 2, 13000 + seed);
    const FlaggedProduct prod = flagged_product(a, b, seed % 3);
    const FunctionTable lhs = flagged_average(f, prod.product);
    const FunctionTable fa = flagged_average(f, a), fb = flagged_average(f, b);
    for (Point x = 0; x < f.size(); ++x) worst = std::max(worst, std::abs(lhs[x] - fa[x] * fb[x]));
  }
  return {worst <= kTol, "20 functions, max pointwise gap = " + fmt("%.2e", worst)};
}

Verdict factorization_and_tensor() {
  double worst = 0;
  // {x1, x2, x1+x2} and {x3, x3+x4} share no variables.
  const LinearSystem joint(2, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}});
  const LinearSystem left(2, 2, {{1, 0}, {0, 1}, {1, 1}});
  const LinearSystem right(2, 2, {{1, 0}, {1, 1}});
  const LinearSystem ap = arithmetic_progression(3, 3);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const FunctionTable f = random_disk_table(2, 2, 14000 + seed);
    const auto whole = linear_form_average(joint, Plain{f}).value;
    const auto parts = linear_form_average(left, Plain{f}).value * linear_form_average(right, Plain{f}).value;
    worst = std::max(worst, std::abs(whole - parts));
    const FunctionTable a = random_disk_table(3, 1, 15000 + seed), b = random_disk_table(3, 2, 16000 + seed);
    const auto tensor = linear_form_average(ap, Plain{tensor_product(a, b)}).value;
    const auto product = linear_form_average(ap, Plain{a}).value * linear_form_average(ap, Plain{b}).value;
    worst = std::max(worst, std::abs(tensor - product));
  }
  return {worst <= kTol, "50 + 50 instances, max gap = " + fmt("%.2e", worst)};
}

Verdict projection() {
  double worst = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const uint32_t p = seed % 2 ? 3 : 2;
    const int n = 3;
    std::vector<Polynomial> polys;
    for (int i = 0; i <= static_cast<int>(seed % 3); ++i) {
      polys.push_back(random_polynomial(p, n, 1 + i % 2, false, 17000 + 10 * seed + i));
    }
    const PolynomialFactor factor(p, n, polys);
    const FunctionTable f = random_disk_table(p, n, 18000 + seed);
    Rng rng = make_rng(19000 + seed);
    std::vector<std::complex<double>> per_atom(factor.atom_count());
    for (auto& z : per_atom) z = {uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5};
    std::vector<std::complex<double>> gv(f.size());
    for (Point x = 0; x < f.size(); ++x) gv[x] = per_atom[factor.atom_of(x)];
    const FunctionTable g = FunctionTable::disk_valued(p, n, gv);
    const FunctionTable h = conditional_expectation(f, factor);
    worst = std::max(worst, std::abs(inner_product(f, g) - inner_product(h, g)));
  }
  return {worst <= kTol, "50 triples, max |<f,g> - <E(f|B),g>| = " + fmt("%.2e", worst)};
}

Verdict decomposition_contract() {
  const auto t0 = std::chrono::steady_clock::now();
  int met = 0, flagged = 0, unflagged_miss = 0;
  double recheck = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const FunctionTable f = random_disk_table(2, 4, 20000 + seed);
    const Decomposition d = decompose(f, 2, 0.25);
    std::vector<std::complex<double>> residual(f.size());
    for (Point x = 0; x < f.size(); ++x) residual[x] = f[x] - d.h[x];
    recheck = std::max(recheck, std::abs(gowers_norm_of_values(residual, 2, 4, 3) - d.achieved_norm));
    if (d.target_missed) {
      ++flagged;
    } else if (d.achieved_norm <= 0.25) {
      ++met;
    } else {
      ++unflagged_miss;
    }
  }
  const double secs = seconds_since(t0);
  return {unflagged_miss == 0 && recheck <= kTol && secs < 300,
          std::to_string(met) + " met, " + std::to_string(flagged) + " flagged, " + std::to_string(unflagged_miss) +
              " unflagged misses, " + fmt("%.1f s", secs)};
}

Verdict concentration() {
  const DistributionalFunction gamma = DistributionalFunction::lift(random_real_table(2, 8, 21000, 0, 1));
  const LinearSystem schur(2, 2, {{1, 0}, {0, 1}, {1, 1}});
  const ConcentrationResult r = concentration_check(gamma, schur, {1, 1, 1}, 200, 22000, 0.1);
  double biggest = 0;
  for (double d : r.deviations) biggest = std::max(biggest, d);
  return {r.failure_rate <= 0.05, "200 seeds, failure rate " + fmt("%.3f", r.failure_rate) +
                                      ", largest deviation " + fmt("%.4f", biggest)};
}

Verdict interior() {
  // Frozen from the first run: trial of the first witness and the smallest
  // singular value of its Gram matrix.
  constexpr int kGoldenFirstSuccess = 0;
  constexpr double kGoldenSigma = 4.7867915655e-03;
  InteriorOptions options;
  options.require_connected = false;  // {x, x+y} splits into two components
  const InteriorResult r = interior_experiment({arithmetic_progression(3, 3), LinearSystem(3, 2, {{1, 0}, {1, 1}})},
                                               3, 3, 50, 23000, options);
  const bool ok = r.first_success >= 0 && r.first_success < 50 && r.min_singular_value > 1e-6 &&
                  r.first_success == kGoldenFirstSuccess && std::abs(r.min_singular_value - kGoldenSigma) <= 1e-9;
  return {ok, "first witness at trial " + std::to_string(r.first_success) + ", min singular value " +
                  fmt("%.10e", r.min_singular_value)};
}

Verdict monte_carlo_calibration() {
  const FunctionTable f = random_disk_table(3, 2, 24000);
  const LinearSystem ap = arithmetic_progression(3, 3);
  constexpr uint64_t kSamples = 4000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(kSamples));
  const std::complex<double> exact_power = gowers_norm(f, 2).power;
  const std::complex<double> exact_avg = linear_form_average(ap, Plain{f}).value;
  int gowers_in = 0, avg_in = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    gowers_in += std::abs(gowers_norm(f, 2, MonteCarlo{kSamples, seed}).power - exact_power) <= tol;
    avg_in += std::abs(linear_form_average(ap, Plain{f}, MonteCarlo{kSamples, seed}).value - exact_avg) <= tol;
  }
  return {gowers_in >= 95 && avg_in >= 95, "within 4/sqrt(N): gowers " + std::to_string(gowers_in) +
                                               "/100, average " + std::to_string(avg_in) + "/100"};
}

Verdict tester_separation() {
  const TesterSpec spec = uniformity_tester(2, 1);
  double min_gap = 1e9;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const FunctionTable linear = polynomial_table(random_polynomial(2, 8, 1, false, 25000 + seed));
    const FunctionTable noise = random_field_table(2, 8, 26000 + seed);
    const double a = run_tester(spec, linear, 10000, seed).acceptance.value.real();
    const double b = run_tester(spec, noise, 10000, seed).acceptance.value.real();
    min_gap = std::min(min_gap, a - b);
  }
  return {min_gap >= 0.3, "5 seeds, smallest acceptance gap " + fmt("%.4f", min_gap)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"direct inequality u(Poly_d) <= U^{d+1}", direct_inequality},
      {"polynomial phases have U^{d+1} norm 1", polynomial_phase_norm},
      {"U^2 inverse: linear correlation >= eps^2", u2_inverse},
      {"Gowers-Cauchy-Schwarz", gowers_cauchy_schwarz},
      {"Cauchy-Schwarz complexity bound", cs_complexity_bound},
      {"true complexity goldens", true_complexity_values},
      {"derivative identity", derivative_identity},
      {"flagged product identity", flagged_product_identity},
      {"disconnected factorization and tensor multiplicativity", factorization_and_tensor},
      {"projection onto measurable functions", projection},
      {"decomposition contract", decomposition_contract},
      {"distributional concentration", concentration},
      {"interior experiment", interior},
      {"Monte Carlo calibration", monte_carlo_calibration},
      {"tester separation", tester_separation},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
