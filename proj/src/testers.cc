#include "hofa/testers.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "hofa/errors.h"
#include "hofa/linalg.h"
#include "hofa/parallel.h"
#include "hofa/stats.h"
#include "hofa/structure.h"

namespace hofa {
namespace {

constexpr uint64_t kStreamUniformity = 0x90;
constexpr uint64_t kStreamSample = 0xa0;
constexpr uint64_t kMaxDecisionTable = uint64_t{1} << 20;

void require_field(const FunctionTable& f) {
  if (f.codomain() != Codomain::kField) throw InvalidArgument("testers read field-valued functions");
}

std::vector<Residue> decision_digits(uint64_t index, uint32_t p, int q) {
  std::vector<Residue> z(q);
  for (int i = q - 1; i >= 0; --i) {
    z[i] = static_cast<Residue>(index % p);
    index /= p;
  }
  return z;
}

FpRow as_row(const FpVector& v) { return v.coords; }

// A query tuple drawn by the tester's sampler, then symmetrized.
std::vector<Point> draw_queries(const TesterSpec& spec, const PointSpace& space, Rng& rng,
                                const std::vector<double>& cumulative) {
  const int n = space.n();
  std::vector<FpVector> pts;
  if (const auto* ex = std::get_if<ExplicitSupport>(&spec.sampler)) {
    const double u = uniform_unit(rng) * cumulative.back();
    size_t i = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    i = std::min(i, ex->support.size() - 1);
    pts = ex->support[i].points;
  } else if (const auto* form = std::get_if<FormPattern>(&spec.sampler)) {
    const LinearSystem& sys = form->system;
    std::vector<Point> x(sys.k());
    for (auto& xi : x) xi = uniform_below(rng, space.size());
    for (int i = 0; i < sys.m(); ++i) {
      Point acc = 0;
      for (int j = 0; j < sys.k(); ++j) {
        if (sys.form(i)[j] != 0) acc = space.add(acc, space.scale(sys.form(i)[j], x[j]));
      }
      pts.push_back(space.decode(acc));
    }
  } else {
    pts = std::get<BlackBox>(spec.sampler).sample(rng, n);
  }
  if (static_cast<int>(pts.size()) != spec.q) {
    throw InvalidArgument("query sampler returned " + std::to_string(pts.size()) + " points, expected " +
                          std::to_string(spec.q));
  }
  for (const auto& v : pts) {
    if (static_cast<int>(v.size()) != n) throw InvalidArgument("query point has the wrong dimension");
    for (Residue c : v.coords) {
      if (c >= spec.p) throw InvalidArgument("query coordinate outside F_p");
    }
  }
  for (int s = 0; s < spec.symmetrizations; ++s) {
    const AffineMap a = random_affine(spec.p, n, rng());
    for (auto& v : pts) v = apply_map(a, v);
  }
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& v : pts) out.push_back(space.encode(v));
  return out;
}

double decide(const TesterSpec& spec, const FunctionTable& f, const std::vector<Point>& pts) {
  uint64_t index = 0;
  for (Point x : pts) index = index * spec.p + f.residues()[x];
  return spec.decision[index];
}

std::vector<double> support_cumulative(const TesterSpec& spec) {
  std::vector<double> c;
  if (const auto* ex = std::get_if<ExplicitSupport>(&spec.sampler)) {
    double acc = 0;
    for (const auto& s : ex->support) {
      acc += s.prob;
      c.push_back(acc);
    }
  }
  return c;
}

// Basis of the linear span of the tuple and the coordinates of each point.
struct TupleBasis {
  int rank = 0;
  std::vector<FpRow> basis;
  std::vector<FpRow> coords;
};

TupleBasis tuple_basis(const std::vector<FpVector>& pts, uint32_t p, int n) {
  const PrimeField field(p);
  SpanBasis span(field, n);
  for (const auto& v : pts) span.insert(as_row(v));
  TupleBasis out;
  out.rank = span.dimension();
  out.basis = span.generators();
  for (const auto& v : pts) out.coords.push_back(*span.coordinates(as_row(v)));
  return out;
}

// Pr[r uniform vectors of F_p^n are dependent].
double dependence_probability(uint32_t p, int n, int r) {
  double independent = 1;
  for (int j = 0; j < r; ++j) independent *= 1.0 - std::pow(static_cast<double>(p), j - n);
  return 1.0 - independent;
}

}  // namespace

UniformityResult uniformity_test(const FunctionTable& f, int d, uint64_t samples, uint64_t seed, double threshold) {
  require_field(f);
  if (d < 0) throw InvalidArgument("degree must be nonnegative");
  if (samples < 1) throw InvalidArgument("need at least one sample");
  const int k = d + 1;
  const PointSpace space(PrimeField(f.p()), f.n());
  const PrimeField& field = space.field();
  const auto& r = f.residues();
  Rng rng = make_rng(seed, kStreamUniformity);
  SampleStats stats;
  uint64_t reads = 0;
  std::vector<Point> y(k);
  for (uint64_t s = 0; s < samples; ++s) {
    const Point x = uniform_below(rng, space.size());
    for (auto& yi : y) yi = uniform_below(rng, space.size());
    Residue phase = 0;
    for (uint32_t set = 0; set < (1u << k); ++set) {
      Point pt = x;
      for (int i = 0; i < k; ++i) {
        if (set >> i & 1) pt = space.add(pt, y[i]);
      }
      const Residue v = r[pt];
      ++reads;
      phase = (k - std::popcount(set)) % 2 ? field.sub(phase, v) : field.add(phase, v);
    }
    stats.add(field.character(phase));
  }
  UniformityResult out;
  out.estimate = stats.estimate();
  out.threshold = threshold;
  out.accept = out.estimate.value.real() >= threshold;
  out.queries = reads;
  return out;
}

void validate(const TesterSpec& spec) {
  PrimeField field(spec.p);
  if (spec.q < 1) throw InvalidArgument("a tester needs at least one query");
  const uint64_t size = checked_power(spec.p, static_cast<uint64_t>(spec.q), kMaxDecisionTable);
  if (spec.decision.size() != size) {
    throw InvalidArgument("decision table must have p^q = " + std::to_string(size) + " entries");
  }
  for (uint8_t v : spec.decision) {
    if (v > 1) throw InvalidArgument("decision table entries must be 0 or 1");
  }
  if (!(spec.theta_minus >= 0 && spec.theta_minus < spec.theta_plus && spec.theta_plus <= 1)) {
    throw InvalidArgument("thresholds must satisfy 0 <= theta- < theta+ <= 1");
  }
  if (!(spec.delta > 0 && spec.delta < spec.epsilon)) throw InvalidArgument("parameters must satisfy 0 < delta < epsilon");
  if (spec.symmetrizations < 0) throw InvalidArgument("symmetrization count must be nonnegative");
  if (const auto* ex = std::get_if<ExplicitSupport>(&spec.sampler)) {
    if (ex->support.empty()) throw InvalidArgument("explicit support is empty");
    double total = 0;
    for (const auto& s : ex->support) {
      if (!(s.prob >= 0)) throw InvalidArgument("support probabilities must be nonnegative");
      if (static_cast<int>(s.points.size()) != spec.q) throw InvalidArgument("support tuple has the wrong arity");
      for (const auto& v : s.points) {
        if (v.size() != s.points[0].size()) throw InvalidArgument("support tuple mixes dimensions");
      }
      total += s.prob;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("support probabilities must sum to 1");
  } else if (const auto* form = std::get_if<FormPattern>(&spec.sampler)) {
    if (form->system.m() != spec.q) throw InvalidArgument("form pattern must have q forms");
    if (form->system.p() != spec.p) throw InvalidArgument("form pattern uses a different prime");
  } else if (!std::get<BlackBox>(spec.sampler).sample) {
    throw InvalidArgument("black-box sampler is empty");
  }
}

TesterSpec uniformity_tester(uint32_t p, int d) {
  if (d < 0) throw InvalidArgument("degree must be nonnegative");
  const int k = d + 1;
  TesterSpec spec;
  spec.p = p;
  spec.q = 1 << k;
  spec.sampler = FormPattern{gowers_cube(p, k)};
  const uint64_t size = checked_power(p, static_cast<uint64_t>(spec.q), kMaxDecisionTable);
  const PrimeField field(p);
  spec.decision.resize(size);
  for (uint64_t idx = 0; idx < size; ++idx) {
    const auto z = decision_digits(idx, p, spec.q);
    Residue s = 0;
    for (int set = 0; set < spec.q; ++set) {
      s = (k - std::popcount(static_cast<unsigned>(set))) % 2 ? field.sub(s, z[set]) : field.add(s, z[set]);
    }
    spec.decision[idx] = s == 0;
  }
  // Degree-d phases pass with probability 1; a random function passes with
  // probability about 1/p.
  spec.theta_plus = 0.9;
  spec.theta_minus = std::min(0.85, 1.0 / p + 0.1);
  spec.epsilon = 0.5;
  spec.delta = 0.25;
  return spec;
}

TesterRun run_tester(const TesterSpec& spec, const FunctionTable& f, uint64_t trials, uint64_t seed) {
  validate(spec);
  require_field(f);
  if (f.p() != spec.p) throw InvalidArgument("function and tester use different primes");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  const PointSpace space(PrimeField(spec.p), f.n());
  const std::vector<double> cumulative = support_cumulative(spec);
  std::vector<SampleStats> partial(chunk_count(trials, 64));
  for_each_chunk(trials, 64, [&](uint64_t b, uint64_t e, int c) {
    SampleStats local;
    for (uint64_t t = b; t < e; ++t) {
      Rng rng = make_rng(seed, t);
      local.add(decide(spec, f, draw_queries(spec, space, rng, cumulative)));
    }
    partial[c] = local;
  });
  SampleStats stats;
  for (const auto& s : partial) stats.merge(s);
  TesterRun run;
  run.acceptance = stats.estimate();
  const double a = run.acceptance.value.real();
  run.accept = a >= spec.theta_plus;
  run.reject = a <= spec.theta_minus;
  return run;
}

double exact_acceptance(const TesterSpec& spec, const FunctionTable& f, uint64_t budget) {
  validate(spec);
  require_field(f);
  if (f.p() != spec.p) throw InvalidArgument("function and tester use different primes");
  const uint32_t p = spec.p;
  const int n = f.n();
  const PointSpace space(PrimeField(p), n);
  const Point size = space.size();

  if (const auto* ex = std::get_if<ExplicitSupport>(&spec.sampler)) {
    ComplexSum total;
    for (const auto& s : ex->support) {
      if (s.prob == 0) continue;
      for (const auto& v : s.points) {
        if (static_cast<int>(v.size()) != n) throw InvalidArgument("support dimension differs from the function's");
      }
      if (spec.symmetrizations == 0) {
        std::vector<Point> pts;
        for (const auto& v : s.points) pts.push_back(space.encode(v));
        total.add(s.prob * decide(spec, f, pts));
        continue;
      }
      // A uniform affine map sends the tuple to b + sum_j lambda_ij w_j with
      // b uniform and (w_j) uniform among independent tuples.
      const TupleBasis tb = tuple_basis(s.points, p, n);
      const uint64_t count = checked_power(p, static_cast<uint64_t>(n) * (tb.rank + 1), budget);
      uint64_t good = 0;
      uint64_t accepted = 0;
      std::vector<Point> w(tb.rank + 1);
      std::vector<Point> pts(spec.q);
      for (uint64_t t = 0; t < count; ++t) {
        uint64_t rest = t;
        for (auto& wi : w) {
          wi = static_cast<Point>(rest % size);
          rest /= size;
        }
        SpanBasis check(space.field(), n);
        bool independent = true;
        for (int j = 1; j <= tb.rank && independent; ++j) independent = check.insert(as_row(space.decode(w[j])));
        if (!independent) continue;
        ++good;
        for (int i = 0; i < spec.q; ++i) {
          Point acc = w[0];
          for (int j = 0; j < tb.rank; ++j) {
            if (tb.coords[i][j] != 0) acc = space.add(acc, space.scale(tb.coords[i][j], w[j + 1]));
          }
          pts[i] = acc;
        }
        accepted += static_cast<uint64_t>(decide(spec, f, pts));
      }
      total.add(s.prob * static_cast<double>(accepted) / static_cast<double>(good));
    }
    return total.value().real();
  }
  if (const auto* form = std::get_if<FormPattern>(&spec.sampler)) {
    const LinearSystem& sys = form->system;
    // Symmetrizing adds a uniform shift shared by every query.
    const bool shift = spec.symmetrizations > 0;
    const int k = sys.k() + (shift ? 1 : 0);
    const uint64_t count = checked_power(p, static_cast<uint64_t>(n) * k, budget);
    uint64_t accepted = 0;
    std::vector<Point> x(k), pts(spec.q);
    for (uint64_t t = 0; t < count; ++t) {
      uint64_t rest = t;
      for (auto& xi : x) {
        xi = static_cast<Point>(rest % size);
        rest /= size;
      }
      for (int i = 0; i < spec.q; ++i) {
        Point acc = shift ? x[sys.k()] : 0;
        for (int j = 0; j < sys.k(); ++j) {
          if (sys.form(i)[j] != 0) acc = space.add(acc, space.scale(sys.form(i)[j], x[j]));
        }
        pts[i] = acc;
      }
      accepted += static_cast<uint64_t>(decide(spec, f, pts));
    }
    return static_cast<double>(accepted) / static_cast<double>(count);
  }
  throw InvalidArgument("black-box testers have no exact acceptance");
}

TesterSpec symmetrize_tester(const TesterSpec& spec) {
  TesterSpec out = spec;
  ++out.symmetrizations;
  return out;
}

LinearFormProfile extract_linear_form_profile(const TesterSpec& spec, int n) {
  validate(spec);
  const uint32_t p = spec.p;
  const PrimeField field(p);
  LinearFormProfile profile;
  if (const auto* ex = std::get_if<ExplicitSupport>(&spec.sampler)) {
    for (const auto& s : ex->support) {
      if (s.prob == 0) continue;
      if (static_cast<int>(s.points[0].size()) != n) throw InvalidArgument("support dimension differs from n");
      const TupleBasis tb = tuple_basis(s.points, p, n);
      std::vector<FpRow> forms;
      for (const auto& c : tb.coords) {
        FpRow row = {1};
        row.insert(row.end(), c.begin(), c.end());
        forms.push_back(row);
      }
      profile.entries.push_back({LinearSystem::multiset(p, tb.rank + 1, forms), s.prob, tb.rank});
      profile.correction += s.prob * dependence_probability(p, n, tb.rank);
    }
  } else if (const auto* form = std::get_if<FormPattern>(&spec.sampler)) {
    const LinearSystem& sys = form->system;
    if (is_homogeneous_system(sys)) {
      // An invertible change of variables leaves every average unchanged.
      profile.entries.push_back({canonicalize_homogeneous(sys).system, 1.0, sys.span_dimension() - 1});
    } else {
      std::vector<FpRow> forms;
      for (const auto& f : sys.forms()) {
        FpRow row = {1};
        row.insert(row.end(), f.begin(), f.end());
        forms.push_back(row);
      }
      profile.entries.push_back({LinearSystem::multiset(p, sys.k() + 1, forms), 1.0, sys.span_dimension()});
    }
  } else {
    throw InvalidArgument("cannot extract linear forms from a black-box sampler");
  }

  const uint64_t size = spec.decision.size();
  const double scale = 1.0 / static_cast<double>(size);
  for (uint64_t b = 0; b < size; ++b) {
    const auto beta = decision_digits(b, p, spec.q);
    ComplexSum s;
    for (uint64_t z = 0; z < size; ++z) {
      if (!spec.decision[z]) continue;
      const auto zd = decision_digits(z, p, spec.q);
      Residue dot = 0;
      for (int i = 0; i < spec.q; ++i) dot = field.add(dot, field.mul(beta[i], zd[i]));
      s.add(std::conj(field.character(dot)));
    }
    const std::complex<double> w = s.value() * scale;
    if (std::abs(w) > 1e-12) profile.decision_weights.push_back({beta, w});
  }
  return profile;
}

double profile_acceptance(const LinearFormProfile& profile, const FunctionTable& f, uint64_t budget) {
  require_field(f);
  ComplexSum total;
  for (const auto& entry : profile.entries) {
    for (const auto& dw : profile.decision_weights) {
      const Estimate t = linear_form_average(entry.system, Coefficients{f, dw.beta}, Exact{budget});
      total.add(entry.weight * dw.weight * t.value);
    }
  }
  return total.value().real();
}

DualFamily polynomial_dual_family(int d) {
  if (d < 0) throw InvalidArgument("degree must be nonnegative");
  DualFamily family;
  family.name = "Poly_" + std::to_string(d);
  family.consistent = true;
  family.affine_invariant = true;
  family.members = [d](uint32_t p, int n) {
    const auto basis = monomial_basis(p, n, d);
    const uint64_t count = checked_power(p, basis.size(), kDefaultBudget);
    std::vector<FunctionTable> out;
    for (uint64_t idx = 0; idx < count; ++idx) {
      std::map<Exponents, Residue> terms;
      uint64_t rest = idx;
      for (size_t j = basis.size(); j-- > 0;) {
        if (rest % p) terms[basis[j]] = static_cast<Residue>(rest % p);
        rest /= p;
      }
      out.push_back(polynomial_table(Polynomial(p, n, terms)));
    }
    return out;
  };
  family.sample = [d](uint32_t p, int n, uint64_t seed) {
    Rng rng = make_rng(seed, kStreamSample);
    std::map<Exponents, Residue> terms;
    for (const auto& e : monomial_basis(p, n, d)) {
      const Residue c = uniform_below(rng, p);
      if (c) terms[e] = c;
    }
    return polynomial_table(Polynomial(p, n, terms));
  };
  family.contains = [d](const FunctionTable& f) {
    return f.codomain() == Codomain::kField && interpolate(f.p(), f.n(), f.residues()).degree() <= d;
  };
  family.log_size = [d](uint32_t p, int n) { return static_cast<double>(monomial_basis(p, n, d).size()); };
  return family;
}

bool check_affine_closure(const DualFamily& family, uint32_t p, int n, int checks, uint64_t seed) {
  if (!family.sample || !family.contains) throw InvalidArgument("family cannot be sampled or tested");
  const PointSpace space(PrimeField(p), n);
  for (int c = 0; c < checks; ++c) {
    const FunctionTable f = family.sample(p, n, seed + c);
    const AffineMap a = random_affine(p, n, seed * 7919 + c);
    const std::vector<Point> perm = point_permutation(a, space);
    std::vector<Residue> moved(f.size());
    for (Point x = 0; x < f.size(); ++x) moved[x] = f.residues()[perm[x]];
    if (!family.contains(FunctionTable::field_valued(p, n, moved))) return false;
  }
  return true;
}

DegreeScan find_testing_degree(const TesterSpec& spec, int n, int functions, uint64_t trials, uint64_t seed) {
  validate(spec);
  if (functions < 1) throw InvalidArgument("need at least one function per degree");
  DegreeScan scan;
  const uint32_t p = spec.p;
  double random_total = 0;
  for (int j = 0; j < functions; ++j) {
    random_total += run_tester(spec, random_field_table(p, n, seed + j), trials, seed + j).acceptance.value.real();
  }
  const double random_mean = random_total / functions;
  double best = -2;
  for (int d = 1; d < spec.q && d <= n * static_cast<int>(p - 1); ++d) {
    double total = 0;
    for (int j = 0; j < functions; ++j) {
      const FunctionTable f = polynomial_table(random_polynomial(p, n, d, false, seed + 1000 * d + j));
      total += run_tester(spec, f, trials, seed + 1000 * d + j).acceptance.value.real();
    }
    scan.member_acceptance.push_back(total / functions);
    scan.random_acceptance.push_back(random_mean);
    best = std::max(best, total / functions - random_mean);
  }
  // Largest degree whose separation is within sampling noise of the best.
  const double slack = 3.0 / std::sqrt(static_cast<double>(trials) * functions);
  for (size_t i = 0; i < scan.member_acceptance.size(); ++i) {
    if (scan.member_acceptance[i] - random_mean >= best - slack) scan.degree = static_cast<int>(i) + 1;
  }
  return scan;
}

DistributionalFunction::DistributionalFunction(uint32_t p, int n, std::vector<double> probs)
    : p_(p), n_(n), probs_(std::move(probs)) {
  PrimeField field(p);
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  if (probs_.size() != size * p) throw InvalidArgument("need p probabilities per point");
  for (uint64_t x = 0; x < size; ++x) {
    double total = 0;
    for (Residue z = 0; z < p; ++z) {
      const double v = probs_[x * p + z];
      if (!(v >= 0)) throw InvalidArgument("probabilities must be nonnegative (point " + std::to_string(x) + ")");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw InvalidArgument("probabilities at point " + std::to_string(x) + " sum to " + std::to_string(total));
    }
  }
}

DistributionalFunction DistributionalFunction::dirac(const FunctionTable& f) {
  require_field(f);
  std::vector<double> probs(static_cast<size_t>(f.size()) * f.p(), 0.0);
  for (Point x = 0; x < f.size(); ++x) probs[static_cast<size_t>(x) * f.p() + f.residues()[x]] = 1.0;
  return DistributionalFunction(f.p(), f.n(), std::move(probs));
}

DistributionalFunction DistributionalFunction::uniform(uint32_t p, int n) {
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  return DistributionalFunction(p, n, std::vector<double>(size * p, 1.0 / p));
}

DistributionalFunction DistributionalFunction::lift(const FunctionTable& F) {
  if (F.codomain() != Codomain::kReal) throw InvalidArgument("lift needs a real-valued table");
  const uint32_t p = F.p();
  std::vector<double> probs(static_cast<size_t>(F.size()) * p);
  for (Point x = 0; x < F.size(); ++x) {
    const double v = F[x].real();
    if (!(v >= 0 && v <= 1)) throw InvalidArgument("lift needs values in [0, 1] (point " + std::to_string(x) + ")");
    const double rest = (1 - v) / p;
    for (Residue z = 0; z < p; ++z) probs[static_cast<size_t>(x) * p + z] = rest;
    probs[static_cast<size_t>(x) * p] += v;
  }
  return DistributionalFunction(p, F.n(), std::move(probs));
}

FunctionTable a_c_compose(const DistributionalFunction& gamma, Residue c) {
  const uint32_t p = gamma.p();
  if (c >= p) throw InvalidArgument("c must lie in F_p");
  const PrimeField field(p);
  std::vector<std::complex<double>> v(gamma.size());
  for (Point x = 0; x < gamma.size(); ++x) {
    ComplexSum s;
    for (Residue z = 0; z < p; ++z) s.add(gamma.prob(x, z) * field.character(field.mul(c, z)));
    v[x] = s.value();
    const double r = std::abs(v[x]);
    if (r > 1.0) v[x] /= r;
  }
  return FunctionTable::disk_valued(p, gamma.n(), std::move(v));
}

FunctionTable sample_function(const DistributionalFunction& gamma, uint64_t seed) {
  const uint32_t p = gamma.p();
  Rng rng = make_rng(seed, kStreamSample);
  std::vector<Residue> values(gamma.size());
  for (Point x = 0; x < gamma.size(); ++x) {
    const double u = uniform_unit(rng);
    double acc = 0;
    Residue z = p - 1;
    for (Residue c = 0; c < p; ++c) {
      acc += gamma.prob(x, c);
      if (u < acc) {
        z = c;
        break;
      }
    }
    // Skip zero-probability tail values that rounding could select.
    while (gamma.prob(x, z) == 0 && z > 0) --z;
    values[x] = z;
  }
  return FunctionTable::field_valued(p, gamma.n(), std::move(values));
}

Estimate t_star(const DistributionalFunction& gamma, const LinearSystem& system, const std::vector<Residue>& beta,
                const Mode& mode) {
  if (system.p() != gamma.p()) throw InvalidArgument("system and function use different primes");
  if (static_cast<int>(beta.size()) != system.m()) throw InvalidArgument("beta must have one entry per form");
  std::vector<FunctionTable> tables;
  for (Residue b : beta) tables.push_back(a_c_compose(gamma, b));
  return linear_form_average(system, PerForm{tables}, mode);
}

ConcentrationResult concentration_check(const DistributionalFunction& gamma, const LinearSystem& system,
                                        const std::vector<Residue>& beta, int seeds, uint64_t first_seed,
                                        double threshold, uint64_t budget) {
  if (seeds < 1) throw InvalidArgument("need at least one seed");
  ConcentrationResult out;
  out.expected = t_star(gamma, system, beta, Exact{budget}).value;
  for (int s = 0; s < seeds; ++s) {
    const FunctionTable f = sample_function(gamma, first_seed + s);
    const std::complex<double> t = linear_form_average(system, Coefficients{f, beta}, Exact{budget}).value;
    const double dev = std::abs(t - out.expected);
    out.deviations.push_back(dev);
    if (dev > threshold) ++out.failures;
  }
  out.failure_rate = static_cast<double>(out.failures) / seeds;
  return out;
}

std::vector<std::vector<double>> gram_matrix(const std::vector<std::vector<std::complex<double>>>& functions) {
  const size_t k = functions.size();
  std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i; j < k; ++j) {
      if (functions[i].size() != functions[j].size()) throw InvalidArgument("functions have different sizes");
      ComplexSum s;
      for (size_t x = 0; x < functions[i].size(); ++x) s.add(functions[i][x].real() * functions[j][x].real());
      g[i][j] = g[j][i] = s.value().real() / static_cast<double>(functions[i].size());
    }
  }
  return g;
}

double min_singular_value(const std::vector<std::vector<double>>& matrix) {
  const Eigen::Index k = static_cast<Eigen::Index>(matrix.size());
  if (k == 0) return 0;
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = matrix[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().minCoeff();
}

InteriorResult interior_experiment(const std::vector<LinearSystem>& systems, uint32_t p, int n, int trials,
                                   uint64_t seed, const InteriorOptions& options) {
  if (systems.empty()) throw InvalidArgument("need at least one system");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  InteriorResult out;
  for (size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].p() != p) throw InvalidArgument("system " + std::to_string(i + 1) + " uses a different prime");
    if (!is_connected(systems[i])) {
      std::ostringstream msg;
      msg << "system " << i + 1 << " is disconnected; components:";
      for (const auto& part : connected_components(systems[i])) {
        msg << " {";
        for (size_t j = 0; j < part.size(); ++j) msg << (j ? "," : "") << part[j] + 1;
        msg << "}";
      }
      if (options.require_connected) throw HypothesisViolation(msg.str());
      out.notes.push_back(msg.str());
    }
  }
  for (size_t i = 0; i < systems.size(); ++i) {
    for (size_t j = i + 1; j < systems.size(); ++j) {
      const IsomorphismResult iso = are_isomorphic(systems[i], systems[j]);
      if (iso.decision == Decision::kYes) {
        std::ostringstream msg;
        msg << "systems " << i + 1 << " and " << j + 1 << " are isomorphic; form map:";
        for (size_t a = 0; a < iso.bijection.size(); ++a) msg << " " << a + 1 << "->" << iso.bijection[a] + 1;
        throw HypothesisViolation(msg.str());
      }
      if (iso.decision == Decision::kUndecided) {
        out.notes.push_back("isomorphism of systems " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                            " undecided");
      }
    }
  }
  out.min_singular_value = -1;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<uint64_t>(t));
    const FunctionTable f = random_real_table(p, n, rng(), 0.0, 1.0);
    std::vector<std::vector<std::complex<double>>> boundaries;
    for (const auto& s : systems) boundaries.push_back(boundary_function(f, s, options.budget));
    const auto gram = gram_matrix(boundaries);
    const double sigma = min_singular_value(gram);
    if (sigma > options.threshold && out.first_success < 0) out.first_success = t;
    if (sigma > out.min_singular_value) {
      out.min_singular_value = sigma;
      out.gram = gram;
      out.witness = f;
    }
    ++out.trials;
  }
  out.independent = out.min_singular_value > options.threshold;
  return out;
}

}  // namespace hofa
