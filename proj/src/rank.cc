#include "hofa/rank.h"

#include <algorithm>
#include <climits>

#include "hofa/errors.h"
#include "hofa/linalg.h"

namespace hofa {
namespace {

constexpr uint64_t kExhaustiveDomain = 64;
constexpr int kExhaustiveMaxR = 2;
constexpr uint64_t kMaxCombinations = uint64_t{1} << 16;
constexpr uint64_t kMaxGammaTable = uint64_t{1} << 16;

// Matrix S of the bilinear form P(x + y) - P(x) - P(y) + P(0).
FpMatrix polarization(const Polynomial& poly) {
  const int n = poly.n();
  const PrimeField field(poly.p());
  FpMatrix s(n, n);
  for (const auto& [e, c] : poly.terms()) {
    std::vector<int> vars;
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < e[i]; ++t) vars.push_back(i);
    }
    if (vars.size() != 2) continue;
    s.at(vars[0], vars[1]) = field.add(s.at(vars[0], vars[1]), c);
    s.at(vars[1], vars[0]) = field.add(s.at(vars[1], vars[0]), c);
  }
  return s;
}

// What was established about a single combination P_alpha.
struct Boundary {
  int refuted = -1;          // no decomposition with <= refuted polynomials
  std::optional<int> found;  // size of an exhibited decomposition
  std::optional<RankCertificate> cert;
  bool closed_form = false;
};

std::vector<Residue> gamma_from_tables(const std::vector<std::vector<Residue>>& q_tables,
                                       const std::vector<Residue>& values, uint32_t p, bool* ok) {
  const size_t r = q_tables.size();
  uint64_t size = 1;
  for (size_t i = 0; i < r; ++i) size *= p;
  std::vector<int> gamma(size, -1);
  *ok = true;
  for (size_t x = 0; x < values.size(); ++x) {
    uint64_t key = 0;
    for (size_t i = 0; i < r; ++i) key = key * p + q_tables[i][x];
    if (gamma[key] < 0) {
      gamma[key] = static_cast<int>(values[x]);
    } else if (gamma[key] != static_cast<int>(values[x])) {
      *ok = false;
      return {};
    }
  }
  std::vector<Residue> out(size);
  for (uint64_t i = 0; i < size; ++i) out[i] = gamma[i] < 0 ? 0 : static_cast<Residue>(gamma[i]);
  return out;
}

// Handles the cases that need no search. Returns nullopt when a search is needed.
std::optional<Boundary> trivial_boundary(const Polynomial& poly, int d, int r_max) {
  const int deg = poly.degree();
  Boundary b;
  if (deg <= 0) {
    b.found = 0;
    b.cert = RankCertificate{{}, {}, {poly.coefficient(Exponents(poly.n(), 0))}};
    return b;
  }
  if (deg < d) {
    // P itself has degree <= d - 1.
    b.refuted = 0;
    b.found = 1;
    std::vector<Residue> identity(poly.p());
    for (Residue a = 0; a < poly.p(); ++a) identity[a] = a;
    b.cert = RankCertificate{{}, {poly}, identity};
    return b;
  }
  if (d == 1) {
    // Functions of constants are constant.
    b.refuted = std::max(r_max, 0);
    return b;
  }
  return std::nullopt;
}

Boundary quadratic_boundary(const Polynomial& poly) {
  const uint32_t p = poly.p();
  const int n = poly.n();
  const PrimeField field(p);
  const int size = quadratic_decomposition_size(poly);
  Boundary b;
  b.closed_form = true;
  b.refuted = size - 1;
  b.found = size;

  // Linear forms spanning the annihilator of the invariance space, then Gamma
  // read off at one preimage of every tuple.
  const FpMatrix s = polarization(poly);
  const auto kernel = nullspace(field, s);
  const Residue p0 = evaluate(poly, FpVector::zero(n));
  std::vector<FpRow> invariant;
  std::optional<FpRow> pivot_vec;
  Residue pivot_val = 0;
  for (const auto& u : kernel) {
    const Residue q = field.sub(evaluate(poly, FpVector(u)), p0);
    if (q == 0) {
      invariant.push_back(u);
    } else if (!pivot_vec) {
      pivot_vec = u;
      pivot_val = q;
    } else {
      // u - (q / pivot_val) * pivot_vec lies in the invariance space.
      const Residue t = field.mul(q, field.inv(pivot_val));
      FpRow w(n);
      for (int i = 0; i < n; ++i) w[i] = field.sub(u[i], field.mul(t, (*pivot_vec)[i]));
      invariant.push_back(w);
    }
  }
  std::vector<FpRow> forms;
  if (invariant.empty()) {
    for (int i = 0; i < n; ++i) forms.push_back(FpVector::standard(n, i).coords);
  } else {
    forms = nullspace(field, FpMatrix::from_rows(invariant, n));
  }
  if (static_cast<int>(forms.size()) != size) throw InternalError("quadratic rank: inconsistent invariance space");

  uint64_t table = 1;
  for (int i = 0; i < size && table <= kMaxGammaTable; ++i) table *= p;
  if (table > kMaxGammaTable) return b;
  RankCertificate cert;
  for (const auto& f : forms) cert.q.push_back(Polynomial::linear(p, n, FpVector(f)));
  cert.gamma.assign(table, 0);
  const FpMatrix lmat = FpMatrix::from_rows(forms, n);
  FpRow a(size, 0);
  for (uint64_t key = 0; key < table; ++key) {
    uint64_t rest = key;
    for (int i = size - 1; i >= 0; --i) {
      a[i] = static_cast<Residue>(rest % p);
      rest /= p;
    }
    const auto x = solve(field, lmat, a);
    if (!x) throw InternalError("quadratic rank: linear forms are not independent");
    cert.gamma[key] = evaluate(poly, FpVector(*x));
  }
  b.cert = std::move(cert);
  return b;
}

Boundary exhaustive_boundary(const Polynomial& poly, int d, int r_limit) {
  const uint32_t p = poly.p();
  const int n = poly.n();
  Boundary b;
  b.refuted = 0;  // nonconstant, so no decomposition with zero polynomials
  auto basis = monomial_basis(p, n, d - 1);
  basis.erase(basis.begin());  // constants never help Gamma
  uint64_t candidates = 1;
  for (size_t i = 0; i < basis.size() && candidates <= kRankSearchCap; ++i) candidates *= p;
  if (candidates > kRankSearchCap) return b;
  --candidates;  // skip the zero polynomial

  const auto values = evaluate_table(poly);
  std::vector<Polynomial> qs;
  std::vector<std::vector<Residue>> tables;
  qs.reserve(candidates);
  tables.reserve(candidates);
  for (uint64_t c = 1; c <= candidates; ++c) {
    uint64_t rest = c;
    Polynomial q(p, n);
    for (size_t i = 0; i < basis.size(); ++i) {
      q.add_term(basis[i], static_cast<Residue>(rest % p));
      rest /= p;
    }
    tables.push_back(evaluate_table(q));
    qs.push_back(std::move(q));
  }

  auto accept = [&](std::vector<size_t> idx) {
    std::vector<std::vector<Residue>> chosen;
    for (size_t i : idx) chosen.push_back(tables[i]);
    bool ok = false;
    auto gamma = gamma_from_tables(chosen, values, p, &ok);
    if (!ok) return false;
    RankCertificate cert;
    for (size_t i : idx) cert.q.push_back(qs[i]);
    cert.gamma = std::move(gamma);
    b.found = static_cast<int>(idx.size());
    b.cert = std::move(cert);
    return true;
  };

  const int limit = std::min(r_limit, kExhaustiveMaxR);
  if (limit >= 1) {
    for (size_t i = 0; i < qs.size(); ++i) {
      if (accept({i})) return b;
    }
    b.refuted = 1;
  }
  if (limit >= 2) {
    if (candidates * (candidates - 1) / 2 > kRankSearchCap) return b;
    for (size_t i = 0; i < qs.size(); ++i) {
      for (size_t j = i + 1; j < qs.size(); ++j) {
        if (accept({i, j})) return b;
      }
    }
    b.refuted = 2;
  }
  return b;
}

}  // namespace

std::string rank_kind_name(RankKind kind) {
  switch (kind) {
    case RankKind::kExactExhaustive:
      return "exact-exhaustive";
    case RankKind::kQuadraticClosedForm:
      return "quadratic-closed-form";
    case RankKind::kLowerBoundOnly:
      return "lower-bound-only";
  }
  return "unknown";
}

int quadratic_decomposition_size(const Polynomial& poly) {
  if (poly.degree() > 2) throw InvalidArgument("quadratic_decomposition_size: degree exceeds 2");
  const uint32_t p = poly.p();
  const int n = poly.n();
  const PrimeField field(p);
  if (poly.degree() <= 0) return 0;
  // Delta_u P == 0 iff S u = 0 (S the symmetric matrix of the quadratic part)
  // and P(u) = P(0); on ker S the second condition is linear in u.
  const FpMatrix s = polarization(poly);
  const auto kernel = nullspace(field, s);
  const Residue p0 = evaluate(poly, FpVector::zero(n));
  bool shifts = false;
  for (const auto& u : kernel) {
    if (evaluate(poly, FpVector(u)) != p0) shifts = true;
  }
  const int invariant_dim = static_cast<int>(kernel.size()) - (shifts ? 1 : 0);
  return n - invariant_dim;
}

RankReport rank(const Polynomial& poly, int r_max, RankMethod method) {
  return rank(std::vector<Polynomial>{poly}, r_max, method);
}

RankReport rank(const std::vector<Polynomial>& polys, int r_max, RankMethod method) {
  if (polys.empty()) throw InvalidArgument("rank: empty polynomial set");
  if (r_max < 0) throw InvalidArgument("rank: r_max must be nonnegative");
  const uint32_t p = polys.front().p();
  const int n = polys.front().n();
  for (const auto& q : polys) {
    if (q.p() != p || q.n() != n) throw InvalidArgument("rank: polynomials over different spaces");
  }
  const PrimeField field(p);
  const uint64_t combos = checked_power(p, polys.size(), kMaxCombinations);
  const uint64_t domain = checked_power(p, static_cast<uint64_t>(n), UINT64_MAX);

  int max_degree = 0;
  for (const auto& q : polys) max_degree = std::max(max_degree, q.degree());
  if (method == RankMethod::kClosedForm && max_degree != 2) {
    throw InvalidArgument("rank: closed form applies to quadratics only");
  }
  const bool closed_form_ok = method != RankMethod::kExhaustive && max_degree == 2;
  const bool exhaustive_ok =
      method != RankMethod::kClosedForm && domain <= kExhaustiveDomain && !(closed_form_ok);

  RankReport report;
  report.r_max = r_max;
  int lower = INT_MAX;
  std::optional<int> upper;
  bool used_closed_form = false;
  bool all_decided = true;
  std::vector<Residue> alpha(polys.size(), 0);
  for (uint64_t a = 1; a < combos; ++a) {
    uint64_t rest = a;
    for (size_t j = polys.size(); j-- > 0;) {
      alpha[j] = static_cast<Residue>(rest % p);
      rest /= p;
    }
    Polynomial combo(p, n);
    int d = 0;
    for (size_t j = 0; j < polys.size(); ++j) {
      if (alpha[j] == 0) continue;
      combo = combo + polys[j].scaled(alpha[j]);
      d = std::max(d, polys[j].degree());
    }
    Boundary b;
    if (auto t = trivial_boundary(combo, d, r_max)) {
      b = *t;
    } else if (closed_form_ok && d == 2) {
      b = quadratic_boundary(combo);
    } else if (exhaustive_ok) {
      b = exhaustive_boundary(combo, d, r_max);
    } else {
      b.refuted = 0;
    }
    const int refuted = std::min(b.refuted, r_max);
    const bool decided = refuted == r_max || (b.found && *b.found == b.refuted + 1);
    if (!decided) all_decided = false;
    used_closed_form = used_closed_form || b.closed_form;
    lower = std::min(lower, refuted);
    if (b.found && (!upper || *b.found < *upper)) {
      upper = *b.found;
      if (b.cert) {
        b.cert->alpha = alpha;
        report.certificate = std::move(b.cert);
      } else {
        report.certificate.reset();
      }
    }
  }
  if (upper) lower = std::min(lower, *upper - 1);
  report.lower = lower;
  report.upper = upper;
  const bool decided = all_decided || (upper && lower == *upper - 1) || lower == r_max;
  if (!decided) {
    report.kind = RankKind::kLowerBoundOnly;
  } else {
    report.kind = used_closed_form ? RankKind::kQuadraticClosedForm : RankKind::kExactExhaustive;
  }
  return report;
}

Residue evaluate_certificate(const RankCertificate& cert, const FpVector& x) {
  if (cert.q.empty()) return cert.gamma.at(0);
  const uint32_t p = cert.q.front().p();
  uint64_t key = 0;
  for (const auto& q : cert.q) key = key * p + evaluate(q, x);
  return cert.gamma.at(key);
}

}  // namespace hofa
