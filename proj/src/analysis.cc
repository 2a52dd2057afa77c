#include "hofa/analysis.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "hofa/errors.h"
#include "hofa/parallel.h"
#include "hofa/random.h"
#include "hofa/stats.h"

namespace hofa {
namespace {

constexpr uint64_t kStreamGowers = 0x60;
constexpr uint64_t kStreamAverage = 0x70;
constexpr uint64_t kStreamFamily = 0x80;
constexpr uint64_t kTargetWork = 4096;
// Tolerance for the realness and sign of a Gowers power.
constexpr double kPowerSlack = 1e-12;

using Values = std::vector<std::complex<double>>;

uint64_t grain(uint64_t work_per_item) {
  return work_per_item >= kTargetWork ? 1 : kTargetWork / std::max<uint64_t>(work_per_item, 1);
}

uint64_t exact_budget(const Mode& mode) { return std::get<Exact>(mode).budget; }

void require_samples(const MonteCarlo& mc) {
  if (mc.samples == 0) throw InvalidArgument("Monte Carlo mode needs at least one sample");
}

// One factor per form, as a residue table with a multiplier (the factor is
// e_p(c * r(x))) when every input is field-valued, else as complex values.
struct Factors {
  uint32_t p = 2;
  bool residue = false;
  std::vector<std::vector<Residue>> residues;
  std::vector<Values> values;

  size_t size() const { return residue ? residues.size() : values.size(); }
};

enum class Kind { kPlain, kConjugate, kCoefficient };

struct Term {
  const FunctionTable* table;
  Kind kind;
  Residue coefficient;
};

Factors make_factors(uint32_t p, const std::vector<Term>& terms) {
  Factors out;
  out.p = p;
  const PrimeField field(p);
  out.residue = std::all_of(terms.begin(), terms.end(),
                            [](const Term& t) { return t.table->codomain() == Codomain::kField; });
  for (const Term& t : terms) {
    if (out.residue) {
      Residue c = 1;
      if (t.kind == Kind::kConjugate) c = p - 1;
      if (t.kind == Kind::kCoefficient) c = t.coefficient;
      std::vector<Residue> r = t.table->residues();
      for (auto& v : r) v = field.mul(c, v);
      out.residues.push_back(std::move(r));
      continue;
    }
    Values v = t.table->values();
    if (t.kind == Kind::kConjugate) {
      for (auto& z : v) z = std::conj(z);
    } else if (t.kind == Kind::kCoefficient) {
      const auto& r = t.table->residues();
      for (size_t i = 0; i < v.size(); ++i) v[i] = field.character(field.mul(t.coefficient, r[i]));
    }
    out.values.push_back(std::move(v));
  }
  return out;
}

// Sum over free variables Z in (F_p^n)^v of prod_i factor_i(offset_i + C_i Z),
// accumulated either as residue counts or as a compensated complex sum.
class FormSum {
 public:
  FormSum(const PointSpace& space, const std::vector<FpRow>& coefficients, const Factors& factors)
      : space_(space), coef_(coefficients), factors_(factors), m_(static_cast<int>(coefficients.size())) {
    v_ = coefficients.empty() ? 0 : static_cast<int>(coefficients[0].size());
    partial_.assign(v_ + 1, std::vector<Point>(m_));
  }

  void run(const std::vector<Point>& offsets, std::vector<uint64_t>& counts, ComplexSum& sum) {
    partial_[0] = offsets;
    counts_ = &counts;
    sum_ = &sum;
    recurse(0);
  }

 private:
  void recurse(int level) {
    if (level == v_) {
      leaf(partial_[level]);
      return;
    }
    const auto& cur = partial_[level];
    auto& next = partial_[level + 1];
    for (Point z = 0; z < space_.size(); ++z) {
      for (int i = 0; i < m_; ++i) {
        const Residue c = coef_[i][level];
        next[i] = c == 0 ? cur[i] : space_.add(cur[i], space_.scale(c, z));
      }
      recurse(level + 1);
    }
  }

  void leaf(const std::vector<Point>& pts) {
    if (factors_.residue) {
      const PrimeField& f = space_.field();
      Residue s = 0;
      for (int i = 0; i < m_; ++i) s = f.add(s, factors_.residues[i][pts[i]]);
      ++(*counts_)[s];
    } else {
      std::complex<double> prod = 1.0;
      for (int i = 0; i < m_; ++i) prod *= factors_.values[i][pts[i]];
      sum_->add(prod);
    }
  }

  const PointSpace& space_;
  const std::vector<FpRow>& coef_;
  const Factors& factors_;
  int m_;
  int v_ = 0;
  std::vector<std::vector<Point>> partial_;
  std::vector<uint64_t>* counts_ = nullptr;
  ComplexSum* sum_ = nullptr;
};

std::complex<double> counts_value(const PrimeField& field, const std::vector<uint64_t>& counts) {
  ComplexSum s;
  for (Residue r = 0; r < counts.size(); ++r) {
    if (counts[r] != 0) s.add(static_cast<double>(counts[r]) * field.character(r));
  }
  return s.value();
}

// Point of sum_l c_l X_l.
Point combine(const PointSpace& space, const FpRow& c, const std::vector<Point>& x) {
  Point acc = 0;
  for (size_t l = 0; l < x.size(); ++l) {
    if (c[l] != 0) acc = space.add(acc, space.scale(c[l], x[l]));
  }
  return acc;
}

std::complex<double> factor_product(const Factors& f, const PrimeField& field, const std::vector<Point>& pts) {
  if (f.residue) {
    Residue s = 0;
    for (size_t i = 0; i < pts.size(); ++i) s = field.add(s, f.residues[i][pts[i]]);
    return field.character(s);
  }
  std::complex<double> prod = 1.0;
  for (size_t i = 0; i < pts.size(); ++i) prod *= f.values[i][pts[i]];
  return prod;
}

std::vector<Term> payload_terms(const LinearSystem& system, const Payload& payload) {
  const int m = system.m();
  std::vector<Term> terms;
  auto check = [&](const FunctionTable& f) {
    if (f.p() != system.p()) throw InvalidArgument("function table and system use different primes");
  };
  if (const auto* plain = std::get_if<Plain>(&payload)) {
    check(plain->f);
    for (int i = 0; i < m; ++i) terms.push_back({&plain->f, Kind::kPlain, 1});
  } else if (const auto* conj = std::get_if<Conjugated>(&payload)) {
    check(conj->f);
    if (static_cast<int>(conj->alpha.size()) != m) throw InvalidArgument("alpha must have one entry per form");
    for (int i = 0; i < m; ++i) {
      if (conj->alpha[i] != 0 && conj->alpha[i] != 1) throw InvalidArgument("alpha entries must be 0 or 1");
      terms.push_back({&conj->f, conj->alpha[i] ? Kind::kConjugate : Kind::kPlain, 1});
    }
  } else if (const auto* coef = std::get_if<Coefficients>(&payload)) {
    check(coef->f);
    if (coef->f.codomain() != Codomain::kField) throw InvalidArgument("coefficient averages need a field-valued f");
    if (static_cast<int>(coef->beta.size()) != m) throw InvalidArgument("beta must have one entry per form");
    for (int i = 0; i < m; ++i) {
      if (coef->beta[i] >= system.p()) throw InvalidArgument("beta entries must lie in F_p");
      terms.push_back({&coef->f, Kind::kCoefficient, coef->beta[i]});
    }
  } else {
    const auto& per = std::get<PerForm>(payload);
    if (static_cast<int>(per.f.size()) != m) throw InvalidArgument("need one function per form");
    for (int i = 0; i < m; ++i) {
      check(per.f[i]);
      require_same_shape(per.f[i], per.f[0]);
      terms.push_back({&per.f[i], Kind::kPlain, 1});
    }
  }
  return terms;
}

// --- Gowers norms -----------------------------------------------------------

// Sum over y_1..y_{r-1} of |sum_x Delta g(x)|^2 for residue tables.
class ResidueGowers {
 public:
  ResidueGowers(const PointSpace& space, int depth) : space_(space), scratch_(depth, std::vector<Residue>(space.size())) {}

  // g lives in scratch level `level` unless level == 0 (then in `top`).
  double run(const std::vector<Residue>& g, int remaining) {
    const PrimeField& field = space_.field();
    if (remaining == 1) {
      std::vector<uint64_t> counts(field.p(), 0);
      for (Residue r : g) ++counts[r];
      return std::norm(counts_value(field, counts));
    }
    auto& d = scratch_[remaining - 2];
    double total = 0;
    for (Point y = 0; y < space_.size(); ++y) {
      derive(g, y, d);
      total += run(d, remaining - 1);
    }
    return total;
  }

  void derive(const std::vector<Residue>& g, Point y, std::vector<Residue>& out) const {
    const PrimeField& field = space_.field();
    for (Point x = 0; x < space_.size(); ++x) out[x] = field.sub(g[space_.add(x, y)], g[x]);
  }

 private:
  const PointSpace& space_;
  std::vector<std::vector<Residue>> scratch_;
};

class ComplexGowers {
 public:
  ComplexGowers(const PointSpace& space, int depth) : space_(space), scratch_(depth, Values(space.size())) {}

  double run(const Values& g, int remaining) {
    if (remaining == 1) {
      ComplexSum s;
      for (const auto& z : g) s.add(z);
      return std::norm(s.value());
    }
    auto& d = scratch_[remaining - 2];
    double total = 0;
    for (Point y = 0; y < space_.size(); ++y) {
      derive(g, y, d);
      total += run(d, remaining - 1);
    }
    return total;
  }

  void derive(const Values& g, Point y, Values& out) const {
    for (Point x = 0; x < space_.size(); ++x) out[x] = g[space_.add(x, y)] * std::conj(g[x]);
  }

 private:
  const PointSpace& space_;
  std::vector<Values> scratch_;
};

double exact_gowers_sum(const FunctionTable& f, int k, const PointSpace& space) {
  const uint64_t size = space.size();
  if (k == 1) {
    if (f.codomain() == Codomain::kField) return ResidueGowers(space, 0).run(f.residues(), 1);
    return ComplexGowers(space, 0).run(f.values(), 1);
  }
  uint64_t inner = 1;
  for (int i = 0; i < k; ++i) inner *= size;
  std::vector<double> partial(chunk_count(size, grain(inner)), 0.0);
  for_each_chunk(size, grain(inner), [&](uint64_t b, uint64_t e, int c) {
    // Sums of squared magnitudes; per-chunk partials combined in chunk order.
    double acc = 0;
    if (f.codomain() == Codomain::kField) {
      ResidueGowers g(space, k - 1);
      std::vector<Residue> d(size);
      for (uint64_t y = b; y < e; ++y) {
        g.derive(f.residues(), static_cast<Point>(y), d);
        acc += g.run(d, k - 1);
      }
    } else {
      ComplexGowers g(space, k - 1);
      Values d(size);
      for (uint64_t y = b; y < e; ++y) {
        g.derive(f.values(), static_cast<Point>(y), d);
        acc += g.run(d, k - 1);
      }
    }
    partial[c] = acc;
  });
  double total = 0;
  for (double v : partial) total += v;
  return total;
}

std::complex<double> family_sum(const PointSpace& space, std::vector<Values> family, int r) {
  if (r == 0) {
    ComplexSum s;
    for (const auto& z : family[0]) s.add(z);
    return s.value();
  }
  const size_t half = size_t{1} << (r - 1);
  std::vector<Values> next(half, Values(space.size()));
  ComplexSum total;
  for (Point y = 0; y < space.size(); ++y) {
    for (size_t t = 0; t < half; ++t) {
      const Values& lo = family[t];
      const Values& hi = family[t | half];
      for (Point x = 0; x < space.size(); ++x) next[t][x] = hi[space.add(x, y)] * std::conj(lo[x]);
    }
    total.add(family_sum(space, next, r - 1));
  }
  return total.value();
}

// --- correlation with polynomial families -----------------------------------

// A run of consecutive family members: all coefficient vectors over `basis`
// (minus the zero vector when skip_zero).
struct Segment {
  std::vector<Exponents> basis;
  std::vector<std::vector<Residue>> tables;
  bool skip_zero = false;
  uint64_t count = 0;
};

std::vector<Segment> polynomial_segments(uint32_t p, int n, const PolynomialFamily& family, uint64_t limit,
                                         bool build_tables) {
  if (family.degree < 1) throw InvalidArgument("family degree must be at least 1");
  std::vector<Segment> out;
  auto add = [&](std::vector<Exponents> basis, bool skip_zero) {
    Segment s;
    s.skip_zero = skip_zero;
    const uint64_t all = checked_power(p, basis.size(), limit);
    s.count = all - (skip_zero ? 1 : 0);
    if (build_tables) {
      for (const auto& e : basis) s.tables.push_back(evaluate_table(Polynomial::monomial(p, n, e)));
    }
    s.basis = std::move(basis);
    out.push_back(std::move(s));
  };
  if (!family.homogeneous) {
    std::vector<Exponents> basis;
    for (auto& e : monomial_basis(p, n, family.degree)) {
      if (total_degree(e) > 0) basis.push_back(e);
    }
    add(std::move(basis), false);
  } else {
    for (int t = 1; t <= family.degree; ++t) add(monomial_basis(p, n, t, true), t > 1);
  }
  return out;
}

std::vector<Residue> member_digits(const Segment& s, uint64_t index, uint32_t p) {
  if (s.skip_zero) ++index;
  std::vector<Residue> digits(s.basis.size());
  for (size_t j = digits.size(); j-- > 0;) {
    digits[j] = static_cast<Residue>(index % p);
    index /= p;
  }
  return digits;
}

Polynomial member_polynomial(const Segment& s, const std::vector<Residue>& digits, uint32_t p, int n) {
  std::map<Exponents, Residue> terms;
  for (size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] != 0) terms[s.basis[j]] = digits[j];
  }
  return Polynomial(p, n, terms);
}

// |<f, e_p(Q)>| * p^n given Q's value table.
double correlation_sum(const FunctionTable& f, const std::vector<Residue>& q, const PrimeField& field,
                       std::vector<uint64_t>& counts) {
  if (f.codomain() == Codomain::kField) {
    std::fill(counts.begin(), counts.end(), 0);
    const auto& r = f.residues();
    for (size_t x = 0; x < q.size(); ++x) ++counts[field.sub(r[x], q[x])];
    return std::abs(counts_value(field, counts));
  }
  ComplexSum s;
  const auto& v = f.values();
  for (size_t x = 0; x < q.size(); ++x) s.add(v[x] * std::conj(field.character(q[x])));
  return std::abs(s.value());
}

struct Best {
  double value = -1;
  size_t segment = 0;
  uint64_t index = 0;
};

}  // namespace

std::complex<double> inner_product(const FunctionTable& f, const FunctionTable& g) {
  require_same_shape(f, g);
  if (f.codomain() == Codomain::kField && g.codomain() == Codomain::kField) {
    const PrimeField field(f.p());
    std::vector<uint64_t> counts(f.p(), 0);
    for (Point x = 0; x < f.size(); ++x) ++counts[field.sub(f.residues()[x], g.residues()[x])];
    return counts_value(field, counts) / static_cast<double>(f.size());
  }
  ComplexSum s;
  for (Point x = 0; x < f.size(); ++x) s.add(f[x] * std::conj(g[x]));
  return s.value() / static_cast<double>(f.size());
}

double squared_norm(const FunctionTable& f) {
  ComplexSum s;
  for (const auto& z : f.values()) s.add(std::norm(z));
  return s.value().real() / f.size();
}

std::complex<double> mean(const FunctionTable& f) {
  if (f.codomain() == Codomain::kField) {
    const PrimeField field(f.p());
    std::vector<uint64_t> counts(f.p(), 0);
    for (Residue r : f.residues()) ++counts[r];
    return counts_value(field, counts) / static_cast<double>(f.size());
  }
  ComplexSum s;
  for (const auto& z : f.values()) s.add(z);
  return s.value() / static_cast<double>(f.size());
}

SpectrumTable fourier_transform(const FunctionTable& f, uint64_t budget) {
  const uint32_t p = f.p();
  const int n = f.n();
  checked_power(p, static_cast<uint64_t>(n), budget);
  const PrimeField field(p);
  Values cur = f.values();
  Values next(cur.size());
  // Transform one axis at a time; axis j has stride p^(n-1-j).
  uint64_t stride = cur.size();
  for (int j = 0; j < n; ++j) {
    stride /= p;
    for (uint64_t base = 0; base < cur.size(); ++base) {
      const Residue a = static_cast<Residue>((base / stride) % p);
      const uint64_t origin = base - a * stride;
      ComplexSum s;
      for (Residue x = 0; x < p; ++x) s.add(cur[origin + x * stride] * field.character(field.neg(field.mul(a, x))));
      next[base] = s.value();
    }
    std::swap(cur, next);
  }
  for (auto& z : cur) z /= static_cast<double>(cur.size());
  return SpectrumTable{p, n, std::move(cur)};
}

double linear_bias(const SpectrumTable& spectrum) {
  double best = 0;
  for (const auto& z : spectrum.coefficients) best = std::max(best, std::abs(z));
  return best;
}

GowersResult gowers_norm(const FunctionTable& f, int k, const Mode& mode) {
  if (k < 1) throw InvalidArgument("Gowers norm order must be at least 1");
  const double root = 1.0 / static_cast<double>(uint64_t{1} << k);
  GowersResult out;
  if (is_exact(mode)) {
    checked_power(f.p(), static_cast<uint64_t>(f.n()) * (k + 1), exact_budget(mode));
    const PointSpace space(PrimeField(f.p()), f.n());
    const double total = exact_gowers_sum(f, k, space);
    const double power = total / std::pow(static_cast<double>(space.size()), k + 1);
    if (power < -kPowerSlack || !std::isfinite(power)) {
      throw InternalError("Gowers power is negative: " + std::to_string(power));
    }
    out.power = power;
    out.norm = std::pow(std::max(power, 0.0), root);
    out.samples = 0;
    return out;
  }
  const auto& mc = std::get<MonteCarlo>(mode);
  require_samples(mc);
  const PointSpace space(PrimeField(f.p()), f.n());
  Rng rng = make_rng(mc.seed, kStreamGowers);
  SampleStats stats;
  std::vector<Point> pts(size_t{1} << k);
  std::vector<Point> y(k);
  const bool residue = f.codomain() == Codomain::kField;
  const PrimeField& field = space.field();
  for (uint64_t s = 0; s < mc.samples; ++s) {
    const Point x = uniform_below(rng, space.size());
    for (auto& yi : y) yi = uniform_below(rng, space.size());
    std::complex<double> prod = 1.0;
    Residue phase = 0;
    for (uint32_t set = 0; set < pts.size(); ++set) {
      Point pt = x;
      for (int i = 0; i < k; ++i) {
        if (set >> i & 1) pt = space.add(pt, y[i]);
      }
      const bool conj = (k - std::popcount(set)) % 2 == 1;
      if (residue) {
        const Residue r = f.residues()[pt];
        phase = conj ? field.sub(phase, r) : field.add(phase, r);
      } else {
        prod *= conj ? std::conj(f[pt]) : f[pt];
      }
    }
    stats.add(residue ? field.character(phase) : prod);
  }
  const Estimate e = stats.estimate();
  out.power = e.value;
  out.exact = false;
  out.std_error = e.std_error;
  out.samples = e.samples;
  out.norm = std::pow(std::max(e.value.real(), 0.0), root);
  return out;
}

std::complex<double> gowers_inner_product(const std::vector<FunctionTable>& family, int k, uint64_t budget) {
  if (k < 0) throw InvalidArgument("order must be nonnegative");
  if (family.size() != (size_t{1} << k)) throw InvalidArgument("family must have 2^k members");
  for (const auto& f : family) require_same_shape(f, family[0]);
  const FunctionTable& f0 = family[0];
  checked_power(f0.p(), static_cast<uint64_t>(f0.n()) * (k + 1), budget);
  const PointSpace space(PrimeField(f0.p()), f0.n());
  std::vector<Values> values;
  for (const auto& f : family) values.push_back(f.values());
  const std::complex<double> total = family_sum(space, std::move(values), k);
  return total / std::pow(static_cast<double>(space.size()), k + 1);
}

uint64_t polynomial_family_size(uint32_t p, int n, const PolynomialFamily& family) {
  uint64_t total = 0;
  for (const auto& s : polynomial_segments(p, n, family, UINT64_MAX / 2, false)) {
    total += s.count;
  }
  return total;
}

Correlation correlation_with_family(const FunctionTable& f, const Family& family, const Mode& mode) {
  const PrimeField field(f.p());
  Correlation out;
  if (const auto* list = std::get_if<std::vector<FunctionTable>>(&family)) {
    for (const auto& g : *list) require_same_shape(f, g);
    out.members = list->size();
    if (list->empty()) return out;
    if (is_exact(mode)) {
      const uint64_t need = static_cast<uint64_t>(list->size()) * f.size();
      if (need > exact_budget(mode)) throw BudgetExceeded(need, exact_budget(mode));
      out.value = -1;
      for (size_t i = 0; i < list->size(); ++i) {
        const double v = std::abs(inner_product(f, (*list)[i]));
        if (v > out.value) {
          out.value = v;
          out.witness_index = static_cast<int>(i);
        }
      }
      return out;
    }
    const auto& mc = std::get<MonteCarlo>(mode);
    require_samples(mc);
    Rng rng = make_rng(mc.seed, kStreamFamily);
    out.value = -1;
    out.lower_bound = true;
    for (uint64_t s = 0; s < mc.samples; ++s) {
      const uint32_t i = uniform_below(rng, static_cast<uint32_t>(list->size()));
      const double v = std::abs(inner_product(f, (*list)[i]));
      if (v > out.value) {
        out.value = v;
        out.witness_index = static_cast<int>(i);
      }
    }
    return out;
  }

  const auto& poly_family = std::get<PolynomialFamily>(family);
  const uint32_t p = f.p();
  const int n = f.n();
  const double scale = static_cast<double>(f.size());
  if (!is_exact(mode)) {
    const auto& mc = std::get<MonteCarlo>(mode);
    require_samples(mc);
    auto segments = polynomial_segments(p, n, poly_family, UINT64_MAX / 2, false);
    Rng rng = make_rng(mc.seed, kStreamFamily);
    std::vector<uint64_t> counts(p);
    out.value = -1;
    out.lower_bound = true;
    std::vector<double> weights;
    for (const auto& s : segments) {
      out.members += s.count;
      weights.push_back(static_cast<double>(s.count));
    }
    // Uniform member: pick the segment by size, then uniform digits.
    std::discrete_distribution<size_t> pick(weights.begin(), weights.end());
    for (uint64_t t = 0; t < mc.samples; ++t) {
      const size_t si = pick(rng);
      const Segment& s = segments[si];
      std::vector<Residue> digits(s.basis.size());
      do {
        for (auto& d : digits) d = uniform_below(rng, p);
      } while (s.skip_zero && std::all_of(digits.begin(), digits.end(), [](Residue d) { return d == 0; }));
      const Polynomial q = member_polynomial(s, digits, p, n);
      const double v = correlation_sum(f, evaluate_table(q), field, counts) / scale;
      if (v > out.value) {
        out.value = v;
        out.witness_polynomial = q;
      }
    }
    return out;
  }

  const uint64_t budget = exact_budget(mode);
  auto segments = polynomial_segments(p, n, poly_family, budget, false);
  uint64_t members = 0;
  for (const auto& s : segments) members += s.count;
  out.members = members;
  if (members > budget / f.size()) {
    throw BudgetExceeded(members > UINT64_MAX / f.size() ? UINT64_MAX : members * f.size(), budget);
  }
  segments = polynomial_segments(p, n, poly_family, budget, true);

  Best best;
  for (size_t si = 0; si < segments.size(); ++si) {
    const Segment& s = segments[si];
    std::vector<Best> partial(chunk_count(s.count, grain(f.size())));
    for_each_chunk(s.count, grain(f.size()), [&](uint64_t b, uint64_t e, int c) {
      std::vector<Residue> digits = member_digits(s, b, p);
      std::vector<Residue> q(f.size(), 0);
      for (size_t j = 0; j < digits.size(); ++j) {
        for (Residue d = 0; d < digits[j]; ++d) {
          for (size_t x = 0; x < q.size(); ++x) q[x] = field.add(q[x], s.tables[j][x]);
        }
      }
      std::vector<uint64_t> counts(p);
      Best local;
      for (uint64_t i = b; i < e; ++i) {
        const double v = correlation_sum(f, q, field, counts);
        if (v > local.value) local = {v, si, i};
        // Odometer step: every digit change is +1 mod p, i.e. one more copy
        // of that monomial.
        for (size_t j = digits.size(); j-- > 0;) {
          for (size_t x = 0; x < q.size(); ++x) q[x] = field.add(q[x], s.tables[j][x]);
          if (++digits[j] < p) break;
          digits[j] = 0;
        }
      }
      partial[c] = local;
    });
    for (const auto& l : partial) {
      if (l.value > best.value) best = l;
    }
  }
  out.value = best.value / scale;
  const Segment& s = segments[best.segment];
  out.witness_polynomial = member_polynomial(s, member_digits(s, best.index, p), p, n);
  return out;
}

Estimate linear_form_average(const LinearSystem& system, const Payload& payload, const Mode& mode) {
  const std::vector<Term> terms = payload_terms(system, payload);
  const int m = system.m();
  const int k = system.k();
  int n = 0;
  if (m > 0) n = terms[0].table->n();
  if (m == 0) {
    Estimate e;
    e.value = 1.0;
    e.exact = is_exact(mode);
    return e;
  }
  const uint32_t p = system.p();
  const Factors factors = make_factors(p, terms);
  const PointSpace space(PrimeField(p), n);
  const PrimeField& field = space.field();

  if (!is_exact(mode)) {
    const auto& mc = std::get<MonteCarlo>(mode);
    require_samples(mc);
    Rng rng = make_rng(mc.seed, kStreamAverage);
    SampleStats stats;
    std::vector<Point> x(k), pts(m);
    for (uint64_t s = 0; s < mc.samples; ++s) {
      for (auto& xi : x) xi = uniform_below(rng, space.size());
      for (int i = 0; i < m; ++i) pts[i] = combine(space, system.form(i), x);
      stats.add(factor_product(factors, field, pts));
    }
    return stats.estimate();
  }

  const uint64_t total = checked_power(p, static_cast<uint64_t>(n) * k, exact_budget(mode));
  // Fix the leading `outer` variables per parallel item, enumerate the rest.
  int outer = 0;
  uint64_t outer_count = 1;
  while (outer < k && outer_count < 64) {
    outer_count *= space.size();
    ++outer;
  }
  std::vector<FpRow> inner_coef(m);
  for (int i = 0; i < m; ++i) inner_coef[i].assign(system.form(i).begin() + outer, system.form(i).end());
  const uint64_t inner = total / outer_count;

  struct Partial {
    std::vector<uint64_t> counts;
    ComplexSum sum;
  };
  std::vector<Partial> partial(chunk_count(outer_count, grain(inner)));
  for_each_chunk(outer_count, grain(inner), [&](uint64_t b, uint64_t e, int c) {
    Partial local;
    local.counts.assign(p, 0);
    FormSum sum(space, inner_coef, factors);
    std::vector<Point> fixed(outer), offsets(m);
    for (uint64_t t = b; t < e; ++t) {
      uint64_t rest = t;
      for (int l = outer; l-- > 0;) {
        fixed[l] = static_cast<Point>(rest % space.size());
        rest /= space.size();
      }
      for (int i = 0; i < m; ++i) {
        FpRow head(system.form(i).begin(), system.form(i).begin() + outer);
        offsets[i] = combine(space, head, fixed);
      }
      sum.run(offsets, local.counts, local.sum);
    }
    partial[c] = std::move(local);
  });
  std::vector<uint64_t> counts(p, 0);
  ComplexSum sum;
  for (const auto& part : partial) {
    for (uint32_t r = 0; r < p; ++r) counts[r] += part.counts[r];
    sum.merge(part.sum);
  }
  Estimate e;
  e.value = (factors.residue ? counts_value(field, counts) : sum.value()) / static_cast<double>(total);
  return e;
}

std::vector<std::complex<double>> conditional_average(const std::vector<FunctionTable>& f,
                                                      const std::vector<FpRow>& forms, const FpRow& condition,
                                                      uint32_t p, int n, int k, uint64_t budget) {
  if (f.size() != forms.size()) throw InvalidArgument("need one function per form");
  const PrimeField field(p);
  if (static_cast<int>(condition.size()) != k) throw InvalidArgument("condition has the wrong number of variables");
  for (const auto& form : forms) {
    if (static_cast<int>(form.size()) != k) throw InvalidArgument("form has the wrong number of variables");
  }
  for (const auto& t : f) {
    if (t.p() != p || t.n() != n) throw InvalidArgument("function table has the wrong shape");
  }
  int pivot = -1;
  for (int j = 0; j < k; ++j) {
    if (condition[j] % p != 0) {
      pivot = j;
      break;
    }
  }
  if (pivot < 0) throw InvalidArgument("cannot condition on the zero form");
  const uint64_t total = checked_power(p, static_cast<uint64_t>(n) * k, budget);
  const PointSpace space(field, n);
  if (forms.empty()) return Values(space.size(), 1.0);

  // Solve M(X) = x for X_pivot; each form becomes a_i x + (form in the rest).
  const Residue inv = field.inv(condition[pivot] % p);
  const int m = static_cast<int>(forms.size());
  std::vector<FpRow> free_coef(m);
  std::vector<Residue> lead(m);
  for (int i = 0; i < m; ++i) {
    const Residue ci = field.reduce(forms[i][pivot]);
    lead[i] = field.mul(ci, inv);
    for (int l = 0; l < k; ++l) {
      if (l == pivot) continue;
      free_coef[i].push_back(field.sub(field.reduce(forms[i][l]), field.mul(lead[i], field.reduce(condition[l]))));
    }
  }
  std::vector<Term> terms;
  for (const auto& t : f) terms.push_back({&t, Kind::kPlain, 1});
  const Factors factors = make_factors(p, terms);
  const uint64_t inner = total / space.size();

  Values out(space.size());
  for_each_chunk(space.size(), grain(inner), [&](uint64_t b, uint64_t e, int) {
    FormSum sum(space, free_coef, factors);
    std::vector<Point> offsets(m);
    std::vector<uint64_t> counts(p);
    for (uint64_t x = b; x < e; ++x) {
      for (int i = 0; i < m; ++i) offsets[i] = space.scale(lead[i], static_cast<Point>(x));
      std::fill(counts.begin(), counts.end(), 0);
      ComplexSum s;
      sum.run(offsets, counts, s);
      out[x] = (factors.residue ? counts_value(field, counts) : s.value()) / static_cast<double>(inner);
    }
  });
  return out;
}

FunctionTable flagged_average(const FunctionTable& f, const FlaggedSystem& flagged, uint64_t budget) {
  const LinearSystem& system = flagged.system();
  if (f.p() != system.p()) throw InvalidArgument("function table and system use different primes");
  std::vector<FunctionTable> tables(system.m(), f);
  Values v = conditional_average(tables, system.forms(), flagged.flag(), f.p(), f.n(), system.k(), budget);
  for (auto& z : v) {
    // Rounding can push a unit-modulus product a hair past the disk.
    const double r = std::abs(z);
    if (r > 1.0) z /= r;
  }
  return FunctionTable::disk_valued(f.p(), f.n(), std::move(v));
}

std::vector<std::complex<double>> boundary_function(const FunctionTable& f, const LinearSystem& system,
                                                    uint64_t budget) {
  if (f.p() != system.p()) throw InvalidArgument("function table and system use different primes");
  Values total(f.size(), 0.0);
  for (int i = 0; i < system.m(); ++i) {
    const auto rest = system.without_form(i);
    std::vector<FunctionTable> tables(rest.size(), f);
    const Values part = conditional_average(tables, rest, system.form(i), f.p(), f.n(), system.k(), budget);
    for (size_t x = 0; x < total.size(); ++x) total[x] += part[x];
  }
  return total;
}

FunctionTable pointwise_product(const FunctionTable& a, const FunctionTable& b) {
  require_same_shape(a, b);
  if (a.codomain() == Codomain::kField && b.codomain() == Codomain::kField) {
    const PrimeField field(a.p());
    std::vector<Residue> r(a.size());
    for (Point x = 0; x < a.size(); ++x) r[x] = field.add(a.residues()[x], b.residues()[x]);
    return FunctionTable::field_valued(a.p(), a.n(), std::move(r));
  }
  Values v(a.size());
  for (Point x = 0; x < a.size(); ++x) v[x] = a[x] * b[x];
  if (a.codomain() == Codomain::kReal && b.codomain() == Codomain::kReal) {
    std::vector<double> re(v.size());
    for (size_t x = 0; x < v.size(); ++x) re[x] = v[x].real();
    return FunctionTable::real_valued(a.p(), a.n(), std::move(re));
  }
  return FunctionTable::disk_valued(a.p(), a.n(), std::move(v));
}

FunctionTable tensor_product(const FunctionTable& a, const FunctionTable& b) {
  if (a.p() != b.p()) throw InvalidArgument("tensor factors use different primes");
  const uint64_t size = static_cast<uint64_t>(a.size()) * b.size();
  checked_power(a.p(), static_cast<uint64_t>(a.n()) + b.n(), UINT32_MAX);
  if (a.codomain() == Codomain::kField && b.codomain() == Codomain::kField) {
    const PrimeField field(a.p());
    std::vector<Residue> r(size);
    for (Point x = 0; x < a.size(); ++x) {
      for (Point y = 0; y < b.size(); ++y) r[uint64_t{x} * b.size() + y] = field.add(a.residues()[x], b.residues()[y]);
    }
    return FunctionTable::field_valued(a.p(), a.n() + b.n(), std::move(r));
  }
  Values v(size);
  for (Point x = 0; x < a.size(); ++x) {
    for (Point y = 0; y < b.size(); ++y) v[uint64_t{x} * b.size() + y] = a[x] * b[y];
  }
  return FunctionTable::disk_valued(a.p(), a.n() + b.n(), std::move(v));
}

}  // namespace hofa
