#include "hofa/factors.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "hofa/analysis.h"
#include "hofa/errors.h"
#include "hofa/parallel.h"

namespace hofa {
namespace {

using Values = std::vector<std::complex<double>>;

// Correlations below this are treated as no progress.
constexpr double kNoProgress = 1e-12;

FunctionTable values_table(const FunctionTable& like, Values v) {
  if (like.codomain() == Codomain::kReal) {
    std::vector<double> re(v.size());
    for (size_t i = 0; i < v.size(); ++i) re[i] = std::clamp(v[i].real(), -1.0, 1.0);
    return FunctionTable::real_valued(like.p(), like.n(), std::move(re));
  }
  for (auto& z : v) {
    const double r = std::abs(z);
    if (r > 1.0) z /= r;
  }
  return FunctionTable::disk_valued(like.p(), like.n(), std::move(v));
}

void require_factor_shape(const FunctionTable& f, const PolynomialFactor& factor) {
  if (f.p() != factor.p() || f.n() != factor.n()) throw InvalidArgument("table and factor have different shapes");
}

}  // namespace

PolynomialFactor::PolynomialFactor(uint32_t p, int n, uint64_t budget) : p_(p), n_(n), budget_(budget) { build(); }

PolynomialFactor::PolynomialFactor(uint32_t p, int n, std::vector<Polynomial> polys, uint64_t budget)
    : p_(p), n_(n), budget_(budget), polys_(std::move(polys)) {
  for (const auto& q : polys_) {
    if (q.p() != p || q.n() != n) throw InvalidArgument("factor polynomial has the wrong shape");
  }
  build();
}

void PolynomialFactor::build() {
  const uint64_t size = checked_power(p_, static_cast<uint64_t>(n_), budget_);
  std::vector<std::vector<Residue>> tables;
  for (const auto& q : polys_) tables.push_back(evaluate_table(q, budget_));
  std::map<std::vector<Residue>, int> ids;
  atom_.assign(size, 0);
  std::vector<Residue> label(polys_.size());
  for (uint64_t x = 0; x < size; ++x) {
    for (size_t i = 0; i < tables.size(); ++i) label[i] = tables[i][x];
    auto [it, inserted] = ids.try_emplace(label, static_cast<int>(labels_.size()));
    if (inserted) {
      labels_.push_back(label);
      sizes_.push_back(0);
    }
    atom_[x] = it->second;
    ++sizes_[it->second];
  }
}

int PolynomialFactor::degree() const {
  int d = 0;
  for (const auto& q : polys_) d = std::max(d, q.degree());
  return d;
}

int PolynomialFactor::find_atom(const std::vector<Residue>& label) const {
  for (int a = 0; a < atom_count(); ++a) {
    if (labels_[a] == label) return a;
  }
  return -1;
}

PolynomialFactor PolynomialFactor::refined(const Polynomial& poly) const {
  std::vector<Polynomial> polys = polys_;
  polys.push_back(poly);
  return PolynomialFactor(p_, n_, std::move(polys), budget_);
}

Values conditional_expectation(const Values& f, const PolynomialFactor& factor) {
  if (f.size() != factor.atoms().size()) throw InvalidArgument("table and factor have different sizes");
  std::vector<ComplexSum> sums(factor.atom_count());
  for (size_t x = 0; x < f.size(); ++x) sums[factor.atom_of(static_cast<Point>(x))].add(f[x]);
  Values avg(factor.atom_count());
  for (int a = 0; a < factor.atom_count(); ++a) avg[a] = sums[a].value() / static_cast<double>(factor.atom_size(a));
  Values out(f.size());
  for (size_t x = 0; x < f.size(); ++x) out[x] = avg[factor.atom_of(static_cast<Point>(x))];
  return out;
}

FunctionTable conditional_expectation(const FunctionTable& f, const PolynomialFactor& factor) {
  require_factor_shape(f, factor);
  return values_table(f, conditional_expectation(f.values(), factor));
}

bool is_measurable(const FunctionTable& g, const PolynomialFactor& factor, double tolerance) {
  require_factor_shape(g, factor);
  std::vector<int> first(factor.atom_count(), -1);
  for (Point x = 0; x < g.size(); ++x) {
    int& rep = first[factor.atom_of(x)];
    if (rep < 0) {
      rep = static_cast<int>(x);
    } else if (std::abs(g[x] - g[rep]) > tolerance) {
      return false;
    }
  }
  return true;
}

double gowers_norm_of_values(const Values& v, uint32_t p, int n, int k, uint64_t budget) {
  double top = 0;
  for (const auto& z : v) top = std::max(top, std::abs(z));
  if (top == 0) return 0;
  Values scaled(v.size());
  for (size_t i = 0; i < v.size(); ++i) scaled[i] = v[i] / top;
  return top * gowers_norm(FunctionTable::disk_valued(p, n, std::move(scaled)), k, Exact{budget}).norm;
}

Decomposition decompose(const FunctionTable& f, int d, double delta, const DecomposeOptions& options) {
  const uint32_t p = f.p();
  const int n = f.n();
  if (d < 1 || d > n * static_cast<int>(p - 1)) {
    throw InvalidArgument("decomposition degree must satisfy 1 <= d <= n(p - 1)");
  }
  if (!(delta >= 0)) throw InvalidArgument("delta must be nonnegative");
  if (options.max_rounds < 0) throw InvalidArgument("round cap must be nonnegative");
  const PolynomialFamily family{d, options.homogeneous};
  const uint64_t members = polynomial_family_size(p, n, family);
  if (members > options.budget / f.size()) throw BudgetExceeded(members * f.size(), options.budget);

  PolynomialFactor factor(p, n, options.budget);
  const Values& fv = f.values();
  Values residual;
  double norm = 0;
  std::vector<double> history;
  int rounds = 0;
  bool missed = false;
  while (true) {
    const Values h = conditional_expectation(fv, factor);
    residual.assign(fv.size(), 0);
    for (size_t x = 0; x < fv.size(); ++x) residual[x] = fv[x] - h[x];
    norm = gowers_norm_of_values(residual, p, n, d + 1, options.budget);
    history.push_back(norm);
    if (norm <= delta) break;
    if (rounds >= options.max_rounds) {
      missed = true;
      break;
    }
    // |f - h| <= 2, so halve it to get a disk-valued table.
    Values half(residual.size());
    for (size_t x = 0; x < half.size(); ++x) half[x] = residual[x] / 2.0;
    const Correlation best = correlation_with_family(FunctionTable::disk_valued(p, n, std::move(half)), family,
                                                     Exact{options.budget});
    if (best.value <= kNoProgress || !best.witness_polynomial) {
      missed = true;
      break;
    }
    PolynomialFactor next = factor.refined(*best.witness_polynomial);
    if (next.atom_count() == factor.atom_count()) {
      missed = true;
      break;
    }
    factor = std::move(next);
    ++rounds;
  }

  Decomposition out{factor, conditional_expectation(f, factor), residual, rounds, norm, missed, std::move(history),
                    std::nullopt, std::nullopt};
  if (options.rank_floor) out.rank_floor = options.rank_floor(factor.complexity());
  constexpr uint64_t kRankCombinations = 4096;
  if (factor.complexity() > 0 && factor.degree() <= 2 &&
      std::pow(static_cast<double>(p), factor.complexity()) <= kRankCombinations) {
    const int r_max = out.rank_floor ? std::max(*out.rank_floor, 1) : 1;
    out.rank = rank(factor.polynomials(), r_max);
  }
  return out;
}

FunctionTable hybrid_substitute(const FunctionTable& g, const PolynomialFactor& from, const PolynomialFactor& to) {
  require_factor_shape(g, from);
  if (from.p() != to.p() || from.n() != to.n()) throw InvalidArgument("factors have different shapes");
  if (from.complexity() != to.complexity()) throw InvalidArgument("factors have different complexities");
  for (int i = 0; i < from.complexity(); ++i) {
    if (from.polynomials()[i].degree() != to.polynomials()[i].degree()) {
      throw InvalidArgument("defining polynomial " + std::to_string(i + 1) + " has a different degree");
    }
  }
  if (!is_measurable(g, from)) throw InvalidArgument("function is not measurable with respect to the factor");
  std::vector<std::complex<double>> gamma(from.atom_count());
  for (Point x = 0; x < g.size(); ++x) gamma[from.atom_of(x)] = g[x];
  std::vector<int> remap(to.atom_count());
  for (int a = 0; a < to.atom_count(); ++a) remap[a] = from.find_atom(to.label(a));
  Values out(g.size());
  for (Point x = 0; x < g.size(); ++x) {
    const int a = remap[to.atom_of(x)];
    out[x] = a < 0 ? 0.0 : gamma[a];
  }
  return values_table(g, std::move(out));
}

Values factor_fourier(const FunctionTable& h, const PolynomialFactor& factor, uint64_t budget) {
  require_factor_shape(h, factor);
  if (!is_measurable(h, factor, 1e-9)) throw InvalidArgument("function is not measurable with respect to the factor");
  const uint32_t p = factor.p();
  const int c = factor.complexity();
  const uint64_t labels = checked_power(p, static_cast<uint64_t>(c), budget);
  const uint64_t work = labels * static_cast<uint64_t>(factor.atom_count());
  if (work > budget) throw BudgetExceeded(work, budget);
  const PrimeField field(p);
  Values gamma_of_atom(factor.atom_count());
  for (Point x = 0; x < h.size(); ++x) gamma_of_atom[factor.atom_of(x)] = h[x];
  Values out(labels);
  for (uint64_t g = 0; g < labels; ++g) {
    std::vector<Residue> gamma(c);
    uint64_t rest = g;
    for (int i = c - 1; i >= 0; --i) {
      gamma[i] = static_cast<Residue>(rest % p);
      rest /= p;
    }
    ComplexSum s;
    for (int a = 0; a < factor.atom_count(); ++a) {
      Residue dot = 0;
      for (int i = 0; i < c; ++i) dot = field.add(dot, field.mul(gamma[i], factor.label(a)[i]));
      s.add(gamma_of_atom[a] * std::conj(field.character(dot)));
    }
    out[g] = s.value() / static_cast<double>(labels);
  }
  return out;
}

Values factor_fourier_reconstruct(const Values& coefficients, const PolynomialFactor& factor) {
  const uint32_t p = factor.p();
  const int c = factor.complexity();
  if (coefficients.size() != checked_power(p, static_cast<uint64_t>(c), UINT64_MAX / 2)) {
    throw InvalidArgument("need p^C coefficients");
  }
  const PrimeField field(p);
  Values per_atom(factor.atom_count());
  for (int a = 0; a < factor.atom_count(); ++a) {
    ComplexSum s;
    for (uint64_t g = 0; g < coefficients.size(); ++g) {
      uint64_t rest = g;
      Residue dot = 0;
      for (int i = c - 1; i >= 0; --i) {
        dot = field.add(dot, field.mul(static_cast<Residue>(rest % p), factor.label(a)[i]));
        rest /= p;
      }
      s.add(coefficients[g] * field.character(dot));
    }
    per_atom[a] = s.value();
  }
  Values out(factor.atoms().size());
  for (size_t x = 0; x < out.size(); ++x) out[x] = per_atom[factor.atom_of(static_cast<Point>(x))];
  return out;
}

}  // namespace hofa
