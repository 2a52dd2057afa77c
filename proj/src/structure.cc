#include "hofa/structure.h"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "hofa/errors.h"
#include "hofa/random.h"

namespace hofa {
namespace {

// Components of systems up to this size are re-verified against the definition.
constexpr int kCsVerifyMaxForms = 12;

int first_nonzero(const FpRow& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

int last_nonzero(const FpRow& v) {
  for (size_t i = v.size(); i-- > 0;) {
    if (v[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

// Invertible matrix with `first` as its first row (column = false) or first
// column (column = true); the other rows/columns are standard vectors.
FpMatrix completion(const FpRow& first, bool column) {
  const int k = static_cast<int>(first.size());
  const int pivot = first_nonzero(first);
  FpMatrix g(k, k);
  int slot = 1;
  for (int i = 0; i < k; ++i) {
    if (column) {
      g.at(i, 0) = first[i];
    } else {
      g.at(0, i) = first[i];
    }
  }
  for (int i = 0; i < k; ++i) {
    if (i == pivot) continue;
    if (column) {
      g.at(i, slot++) = 1;
    } else {
      g.at(slot++, i) = 1;
    }
  }
  return g;
}

struct Graded {
  const LinearSystem* system;
  std::vector<int> color;  // forms of different colors never map to each other
  std::vector<int> degree;
};

Graded grade(const LinearSystem& system, int flag_index) {
  Graded g{&system, std::vector<int>(system.m(), 0), {}};
  if (flag_index >= 0) g.color[flag_index] = 1;
  for (const auto& f : system.forms()) g.degree.push_back(form_degree(system, f));
  return g;
}

IsomorphismResult isomorphism_search(const Graded& ga, const Graded& gb) {
  const LinearSystem& a = *ga.system;
  const LinearSystem& b = *gb.system;
  IsomorphismResult result;
  result.decision = Decision::kNo;
  if (a.p() != b.p() || a.m() != b.m() || a.span_dimension() != b.span_dimension()) return result;
  auto signature = [](const Graded& g) {
    std::vector<std::pair<int, int>> s;
    for (size_t i = 0; i < g.color.size(); ++i) s.emplace_back(g.color[i], g.degree[i]);
    std::sort(s.begin(), s.end());
    return s;
  };
  if (signature(ga) != signature(gb)) return result;
  if (a.m() > kIsomorphismMaxForms) {
    result.decision = Decision::kUndecided;
    return result;
  }

  const PrimeField field = a.field();
  const int m = a.m();
  SpanBasis span_a(field, a.k());
  std::vector<int> basis;
  for (int i = 0; i < m; ++i) {
    if (span_a.insert(a.form(i))) basis.push_back(i);
  }
  std::vector<FpRow> coords;
  for (int i = 0; i < m; ++i) coords.push_back(*span_a.coordinates(a.form(i)));

  const int r = static_cast<int>(basis.size());
  std::vector<int> image(r, -1);
  std::vector<bool> used(m, false);

  auto complete = [&]() -> bool {
    std::vector<int> bijection(m, -1);
    std::vector<bool> taken(m, false);
    for (int j = 0; j < r; ++j) {
      bijection[basis[j]] = image[j];
      taken[image[j]] = true;
    }
    for (int i = 0; i < m; ++i) {
      if (bijection[i] >= 0) continue;
      FpRow target(b.k(), 0);
      for (int j = 0; j < r; ++j) {
        if (coords[i][j] == 0) continue;
        const FpRow& img = b.form(image[j]);
        for (int c = 0; c < b.k(); ++c) target[c] = field.add(target[c], field.mul(coords[i][j], img[c]));
      }
      int match = -1;
      for (int t = 0; t < m; ++t) {
        if (!taken[t] && gb.color[t] == ga.color[i] && b.form(t) == target) {
          match = t;
          break;
        }
      }
      if (match < 0) return false;
      bijection[i] = match;
      taken[match] = true;
    }
    result.bijection = std::move(bijection);
    return true;
  };

  std::function<bool(int, SpanBasis&)> assign = [&](int j, SpanBasis& span_b) -> bool {
    if (j == r) return complete();
    const int src = basis[j];
    for (int t = 0; t < m; ++t) {
      if (used[t] || gb.color[t] != ga.color[src] || gb.degree[t] != ga.degree[src]) continue;
      SpanBasis next = span_b;
      if (!next.insert(b.form(t))) continue;
      used[t] = true;
      image[j] = t;
      if (assign(j + 1, next)) return true;
      used[t] = false;
    }
    return false;
  };
  SpanBasis span_b(field, b.k());
  if (!assign(0, span_b)) return result;

  // Linear map: basis forms go to their images, completing standard rows to 0.
  FpMatrix full(a.k(), a.k());
  FpMatrix target(a.k(), b.k());
  SpanBasis extended(field, a.k());
  int row = 0;
  for (int j = 0; j < r; ++j) {
    extended.insert(a.form(basis[j]));
    for (int c = 0; c < a.k(); ++c) full.at(row, c) = a.form(basis[j])[c];
    for (int c = 0; c < b.k(); ++c) target.at(row, c) = b.form(image[j])[c];
    ++row;
  }
  for (int i = 0; i < a.k() && row < a.k(); ++i) {
    FpRow e(a.k(), 0);
    e[i] = 1;
    if (extended.insert(e)) full.at(row++, i) = 1;
  }
  result.map = multiply(field, *inverse(field, full), target);
  result.decision = Decision::kYes;
  return result;
}

int subset_dimension(const LinearSystem& system, const std::vector<int>& idx) {
  std::vector<FpRow> rows;
  for (int i : idx) rows.push_back(system.form(i));
  return rows.empty() ? 0 : rank_of_rows(system.field(), rows, system.k());
}

bool part_connected(const LinearSystem& system, const std::vector<int>& part) {
  const int size = static_cast<int>(part.size());
  if (size <= 1) return true;
  const int total = subset_dimension(system, part);
  // Subsets containing the first element cover every split once.
  for (uint32_t mask = 1; mask < (1u << size) - 1; mask += 2) {
    std::vector<int> in, out;
    for (int t = 0; t < size; ++t) ((mask >> t) & 1 ? in : out).push_back(part[t]);
    if (subset_dimension(system, in) + subset_dimension(system, out) == total) return false;
  }
  return true;
}

// Maps forms through z -> T(z) S where T eliminates coordinate c along w.
FpRow eliminate(const PrimeField& field, const FpRow& z, const FpRow& w, int c) {
  const Residue t = field.mul(z[c], field.inv(w[c]));
  FpRow out;
  for (size_t i = 0; i < z.size(); ++i) {
    if (static_cast<int>(i) == c) continue;
    out.push_back(field.sub(z[i], field.mul(t, w[i])));
  }
  return out;
}

}  // namespace

std::optional<FpRow> homogeneity_witness(const LinearSystem& system) {
  const FpMatrix a = FpMatrix::from_rows(system.forms(), system.k());
  return solve(system.field(), a, FpRow(system.m(), 1));
}

bool is_homogeneous_system(const LinearSystem& system) { return homogeneity_witness(system).has_value(); }

CanonicalForm canonicalize_homogeneous(const LinearSystem& system) {
  const auto u = homogeneity_witness(system);
  if (!u) throw InvalidArgument("system is not homogeneous");
  const PrimeField field = system.field();
  FpMatrix g = completion(*u, true);
  std::vector<FpRow> forms;
  for (const auto& f : system.forms()) forms.push_back(row_times(field, f, g));
  return {LinearSystem::multiset(system.p(), system.k(), std::move(forms)), std::move(g)};
}

std::vector<std::vector<Point>> value_tuples(const LinearSystem& system, int n, uint64_t budget) {
  const PrimeField field = system.field();
  const PointSpace space(field, n, budget);
  const uint64_t total = checked_power(space.size(), system.k(), budget);
  std::vector<std::vector<Point>> out;
  out.reserve(total);
  std::vector<Point> x(system.k(), 0);
  for (uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Point> values;
    for (const auto& f : system.forms()) {
      Point v = 0;
      for (int j = 0; j < system.k(); ++j) {
        if (f[j]) v = space.add(v, space.scale(f[j], x[j]));
      }
      values.push_back(v);
    }
    out.push_back(std::move(values));
    for (int j = system.k() - 1; j >= 0; --j) {
      if (++x[j] < space.size()) break;
      x[j] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

IsomorphismResult are_isomorphic(const LinearSystem& a, const LinearSystem& b) {
  return isomorphism_search(grade(a, -1), grade(b, -1));
}

IsomorphismResult are_isomorphic(const FlaggedSystem& a, const FlaggedSystem& b) {
  const LinearSystem wa = a.with_flag();
  const LinearSystem wb = b.with_flag();
  IsomorphismResult r = isomorphism_search(grade(wa, wa.m() - 1), grade(wb, wb.m() - 1));
  if (r.decision == Decision::kYes) r.bijection.pop_back();
  return r;
}

Partition connected_components(const LinearSystem& system) {
  const int m = system.m();
  const PrimeField field = system.field();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };

  // Two forms share a component iff they lie on a common circuit; the
  // fundamental circuits of one basis generate that relation.
  SpanBasis span(field, system.k());
  std::vector<int> basis;
  for (int i = 0; i < m; ++i) {
    if (span.insert(system.form(i))) basis.push_back(i);
  }
  for (int i = 0; i < m; ++i) {
    const FpRow c = *span.coordinates(system.form(i));
    if (std::find(basis.begin(), basis.end(), i) != basis.end()) continue;
    for (size_t j = 0; j < basis.size(); ++j) {
      if (c[j] != 0) parent[find(i)] = find(basis[j]);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < m; ++i) groups[find(i)].push_back(i);
  Partition parts;
  for (auto& [root, part] : groups) parts.push_back(std::move(part));
  std::sort(parts.begin(), parts.end());

  if (m <= kCsVerifyMaxForms) {
    int dim_sum = 0;
    for (const auto& part : parts) {
      dim_sum += subset_dimension(system, part);
      if (!part_connected(system, part)) throw InternalError("component is not connected");
    }
    if (dim_sum != system.span_dimension()) throw InternalError("components do not form a direct sum");
  }
  return parts;
}

bool is_connected(const LinearSystem& system) { return connected_components(system).size() == 1; }

bool is_connected_exhaustive(const LinearSystem& system) {
  if (system.m() > 20) throw SearchLimitExceeded("exhaustive connectivity check limited to 20 forms");
  std::vector<int> all(system.m());
  std::iota(all.begin(), all.end(), 0);
  return part_connected(system, all);
}

int form_degree(const LinearSystem& system, const FpRow& target) {
  const PrimeField field = system.field();
  int count = 0;
  for (const auto& x : system.forms()) {
    for (const auto& y : system.forms()) {
      bool match = true;
      for (int c = 0; c < system.k() && match; ++c) match = field.add(x[c], y[c]) == target[c];
      count += match;
    }
  }
  return count;
}

FlaggedProduct flagged_product(const FlaggedSystem& a, const FlaggedSystem& b, uint64_t variant) {
  if (a.p() != b.p()) throw InvalidArgument("flagged product over different fields");
  const uint32_t p = a.p();
  const PrimeField field(p);
  const int k0 = a.k(), k1 = b.k();

  // Kernel of the identification is spanned by w = (M_0, -M_1).
  FpRow w(k0 + k1, 0);
  for (int i = 0; i < k0; ++i) w[i] = a.flag()[i];
  for (int i = 0; i < k1; ++i) w[k0 + i] = field.neg(b.flag()[i]);
  const int c = k0 + (variant == 0 ? first_nonzero(b.flag()) : last_nonzero(b.flag()));

  auto pad = [&](const FpRow& f, bool first) {
    FpRow z(k0 + k1, 0);
    for (size_t i = 0; i < f.size(); ++i) z[(first ? 0 : k0) + i] = f[i];
    return eliminate(field, z, w, c);
  };
  const FpRow flag = pad(a.flag(), true);

  // Change of variables sending the glued flag to e_1.
  FpMatrix s = *inverse(field, completion(flag, false));
  if (variant != 0) {
    Rng rng = make_rng(variant, 0x70);
    const int k = k0 + k1 - 1;
    while (true) {
      FpMatrix r(k, k);
      r.at(0, 0) = 1;
      for (int i = 1; i < k; ++i) {
        for (int j = 0; j < k; ++j) r.at(i, j) = uniform_below(rng, p);
      }
      if (inverse(field, r)) {
        s = multiply(field, s, r);
        break;
      }
    }
  }

  std::vector<FpRow> forms;
  std::vector<int> from_first, from_second;
  for (const auto& f : a.system().forms()) {
    from_first.push_back(static_cast<int>(forms.size()));
    forms.push_back(row_times(field, pad(f, true), s));
  }
  for (const auto& f : b.system().forms()) {
    from_second.push_back(static_cast<int>(forms.size()));
    forms.push_back(row_times(field, pad(f, false), s));
  }
  const int k = k0 + k1 - 1;
  FlaggedSystem product(LinearSystem::multiset(p, k, std::move(forms)), row_times(field, flag, s));
  return {std::move(product), std::move(from_first), std::move(from_second)};
}

FlaggedSystem flagged_power(const FlaggedSystem& base, int times) {
  if (times < 1) throw InvalidArgument("flagged power needs at least one factor");
  FlaggedSystem out = base;
  for (int t = 1; t < times; ++t) out = flagged_product(out, base).product;
  return out;
}

FlaggedSystem build_high_rank_flag(uint32_t p, int d) {
  if (p > 3 || d > 4) throw InvalidArgument("high-rank flag construction is capped at p <= 3, d <= 4");
  if (d < 3) {
    throw InvalidArgument("high-rank flag construction needs d >= 3; at d = 2 the form set is disconnected");
  }
  PrimeField field(p);
  std::vector<FpRow> forms;
  for (const auto& v : enumerate_vectors(p, d)) {
    bool keep = v[0] == 0;
    if (v[0] == 1) {
      keep = true;
      for (int i = 1; i < d; ++i) keep = keep && v[i] <= 1;
    }
    bool zero_or_e1 = true;
    for (int i = 1; i < d; ++i) zero_or_e1 = zero_or_e1 && v[i] == 0;
    if (keep && !(zero_or_e1 && v[0] <= 1)) forms.push_back(v.coords);
  }
  LinearSystem m(p, d, std::move(forms));
  FpRow e1(d, 0);
  e1[0] = 1;

  if (!is_connected(m)) throw InternalError("high-rank flag base is not connected");
  const int lo = 1 << (d - 1);
  const int hi = 4 * static_cast<int>(checked_power(p, d - 1, UINT64_MAX));
  for (const auto& f : m.forms()) {
    const int deg = form_degree(m, f);
    if (deg < lo || deg > hi) throw InternalError("high-rank flag base violates the degree bounds");
  }
  for (Residue lambda = 2; lambda < p; ++lambda) {
    FpRow t(d, 0);
    t[0] = lambda;
    if (form_degree(m, t) != 0) throw InternalError("high-rank flag base has a multiple of e_1 as a sum");
  }
  return FlaggedSystem(std::move(m), std::move(e1));
}

}  // namespace hofa
