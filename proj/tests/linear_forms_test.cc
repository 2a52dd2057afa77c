#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "hofa/complexity.h"
#include "hofa/errors.h"
#include "hofa/random.h"
#include "hofa/structure.h"

namespace hofa {
namespace {

LinearSystem xy_sum(uint32_t p) { return LinearSystem(p, 2, {{1, 0}, {0, 1}, {1, 1}}); }

// Random system with pairwise independent forms.
LinearSystem random_system(uint32_t p, int k, int m, uint64_t seed) {
  Rng rng = make_rng(seed, 11);
  PrimeField f(p);
  while (true) {
    std::vector<FpRow> forms;
    for (int i = 0; i < m; ++i) {
      FpRow r(k);
      for (auto& c : r) c = uniform_below(rng, p);
      forms.push_back(r);
    }
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      for (int j = i + 1; j < m && ok; ++j) ok = rank_of_rows(f, {forms[i], forms[j]}, k) == 2;
    }
    if (ok) return LinearSystem(p, k, forms);
  }
}

LinearSystem random_image(const LinearSystem& sys, uint64_t seed) {
  // Forms L_i G under a random invertible G, in shuffled order.
  const PrimeField f = sys.field();
  Rng rng = make_rng(seed, 12);
  FpMatrix g;
  while (true) {
    g = FpMatrix(sys.k(), sys.k());
    for (int i = 0; i < sys.k(); ++i) {
      for (int j = 0; j < sys.k(); ++j) g.at(i, j) = uniform_below(rng, sys.p());
    }
    if (inverse(f, g)) break;
  }
  std::vector<FpRow> forms;
  for (const auto& r : sys.forms()) forms.push_back(row_times(f, r, g));
  std::shuffle(forms.begin(), forms.end(), rng);
  return LinearSystem::multiset(sys.p(), sys.k(), forms);
}

// Brute-force Cauchy-Schwarz complexity over all set partitions.
int cs_oracle(const LinearSystem& sys) {
  const int m = sys.m();
  if (m == 1) return 0;
  const PrimeField f = sys.field();
  int s = 0;
  for (int i = 0; i < m; ++i) {
    std::vector<int> others;
    for (int j = 0; j < m; ++j) {
      if (j != i) others.push_back(j);
    }
    int best = m;
    std::vector<int> label(others.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t pos, int used) {
      if (pos == others.size()) {
        for (int g = 0; g < used; ++g) {
          std::vector<FpRow> part;
          for (size_t t = 0; t < others.size(); ++t) {
            if (label[t] == g) part.push_back(sys.form(others[t]));
          }
          const int r = rank_of_rows(f, part, sys.k());
          part.push_back(sys.form(i));
          if (rank_of_rows(f, part, sys.k()) == r) return;
        }
        best = std::min(best, used);
        return;
      }
      for (int g = 0; g <= used; ++g) {
        label[pos] = g;
        rec(pos + 1, std::max(used, g + 1));
      }
    };
    rec(0, 0);
    s = std::max(s, best - 1);
  }
  return s;
}

TEST(CsComplexityTest, Examples) {
  EXPECT_EQ(cs_complexity(arithmetic_progression(3, 3)).s, 1);
  EXPECT_EQ(cs_complexity(xy_sum(2)).s, 1);
  EXPECT_EQ(cs_complexity(LinearSystem(5, 2, {{1, 0}, {0, 1}})).s, 0);
  EXPECT_EQ(cs_complexity(LinearSystem(5, 1, {{1}})).s, 0);
  EXPECT_EQ(cs_complexity(arithmetic_progression(5, 4)).s, 2);
}

TEST(CsComplexityTest, RejectsDependentPairs) {
  EXPECT_THROW(cs_complexity(LinearSystem(3, 2, {{1, 0}, {2, 0}})), InvalidArgument);
  EXPECT_THROW(cs_complexity(LinearSystem(3, 2, {{1, 0}, {0, 0}})), InvalidArgument);
}

TEST(CsComplexityTest, CertificatesAndBruteForce) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const uint32_t p = seed % 2 ? 3 : 5;
    const int m = 2 + static_cast<int>(seed % 5);
    LinearSystem sys = random_system(p, 3, m, seed);
    CsComplexity cs = cs_complexity(sys);
    EXPECT_EQ(cs.s, cs_oracle(sys)) << "seed " << seed;
    EXPECT_LE(cs.s, std::max(0, m - 2));
    ASSERT_EQ(static_cast<int>(cs.partitions.size()), m);
    for (int i = 0; i < m; ++i) {
      EXPECT_LE(static_cast<int>(cs.partitions[i].size()), cs.s + 1);
      int covered = 0;
      for (const auto& part : cs.partitions[i]) {
        SpanBasis span(sys.field(), sys.k());
        for (int j : part) {
          EXPECT_NE(j, i);
          span.insert(sys.form(j));
        }
        EXPECT_FALSE(span.contains(sys.form(i)));
        covered += static_cast<int>(part.size());
      }
      EXPECT_EQ(covered, m - 1);
    }
  }
}

TEST(CsComplexityTest, LargeSystemsReportBound) {
  std::vector<FpRow> forms;
  for (Residue a = 0; a < 13; ++a) forms.push_back({1, a});
  CsComplexity cs = cs_complexity(LinearSystem(13, 2, forms));
  EXPECT_TRUE(cs.bound_only);
  EXPECT_EQ(cs.s, 11);
}

TEST(TensorPowerTest, Examples) {
  EXPECT_EQ(tensor_power({1, 0}, 2, 7), (FpRow{1, 0, 0, 0}));
  EXPECT_EQ(tensor_power({1, 1}, 2, 7), (FpRow{1, 1, 1, 1}));
  EXPECT_EQ(tensor_power({1, 2}, 2, 5), (FpRow{1, 2, 2, 4}));
  EXPECT_EQ(tensor_power({1, 2}, 3, 5).size(), 8u);
}

TEST(TensorPowerTest, SymmetricAndFullPowersHaveSameRank) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const uint32_t p = seed % 2 ? 2 : 3;
    LinearSystem sys = random_system(p, 3, 2 + seed % 4, seed);
    for (int d = 1; d <= 3; ++d) {
      std::vector<FpRow> full, sym;
      for (const auto& f : sys.forms()) {
        full.push_back(tensor_power(f, d, p));
        sym.push_back(symmetric_power(f, d, p));
      }
      EXPECT_EQ(rank_of_rows(sys.field(), full, static_cast<int>(full[0].size())),
                rank_of_rows(sys.field(), sym, static_cast<int>(sym[0].size())));
    }
  }
}

TEST(TrueComplexityTest, Goldens) {
  EXPECT_EQ(true_complexity(arithmetic_progression(3, 3)).d, 1);
  EXPECT_EQ(true_complexity(arithmetic_progression(5, 4)).d, 2);
  EXPECT_EQ(true_complexity(xy_sum(2)).d, 1);
}

TEST(TrueComplexityTest, DependencyCertificate) {
  LinearSystem sys = arithmetic_progression(5, 4);
  TrueComplexity tc = true_complexity(sys);
  ASSERT_TRUE(tc.dependency.has_value());
  FpRow sum(4, 0);
  PrimeField f(5);
  for (int i = 0; i < sys.m(); ++i) {
    FpRow t = tensor_power(sys.form(i), tc.d, 5);
    for (size_t c = 0; c < t.size(); ++c) sum[c] = f.add(sum[c], f.mul((*tc.dependency)[i], t[c]));
  }
  EXPECT_TRUE(is_zero(sum));
  EXPECT_FALSE(is_zero(*tc.dependency));
}

TEST(TrueComplexityTest, NeverExceedsCsComplexity) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const uint32_t p = seed % 2 ? 3 : 5;
    LinearSystem sys = random_system(p, 3, 2 + seed % 5, seed);
    ComplexityReport report = complexity_report(sys);
    if (!report.hypothesis_holds) continue;
    EXPECT_LE(report.true_complexity->d, report.cs.s);
  }
}

TEST(TrueComplexityTest, RejectsWhenCsExceedsP) {
  // Five pairwise independent forms in F_2^3 with Cauchy-Schwarz complexity 3 > 2.
  LinearSystem sys(2, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  ComplexityReport report = complexity_report(sys);
  if (report.cs.s > 2) {
    EXPECT_FALSE(report.hypothesis_holds);
    EXPECT_THROW(true_complexity(sys), HypothesisViolation);
  } else {
    EXPECT_TRUE(report.true_complexity.has_value());
  }
}

TEST(HomogeneityTest, Examples) {
  auto u = homogeneity_witness(arithmetic_progression(3, 3));
  ASSERT_TRUE(u.has_value());
  EXPECT_FALSE(is_homogeneous_system(LinearSystem(3, 2, {{1, 0}, {2, 0}})));
  EXPECT_THROW(canonicalize_homogeneous(LinearSystem(3, 2, {{1, 0}, {2, 0}})), InvalidArgument);
}

// Shifting every value by c leaves the joint distribution unchanged for all c
// exactly when the algebraic criterion holds.
TEST(HomogeneityTest, AlgebraicCriterionMatchesDistribution) {
  int homogeneous = 0, total = 0;
  for (uint32_t p : {2u, 3u}) {
    const int n = p == 2 ? 2 : 1;
    PrimeField f(p);
    PointSpace space(f, n);
    for (uint64_t seed = 0; seed < 40; ++seed) {
      Rng rng = make_rng(seed, p);
      const int k = 2, m = 2 + static_cast<int>(seed % 2);
      std::set<FpRow> forms;
      while (static_cast<int>(forms.size()) < m) forms.insert({uniform_below(rng, p), uniform_below(rng, p)});
      LinearSystem sys(p, k, std::vector<FpRow>(forms.begin(), forms.end()));
      const auto base = value_tuples(sys, n);
      bool invariant = true;
      for (Point c = 0; c < space.size(); ++c) {
        auto shifted = base;
        for (auto& t : shifted) {
          for (auto& v : t) v = space.add(v, c);
        }
        std::sort(shifted.begin(), shifted.end());
        invariant = invariant && shifted == base;
      }
      EXPECT_EQ(invariant, is_homogeneous_system(sys));
      homogeneous += invariant;
      ++total;
    }
  }
  EXPECT_GT(homogeneous, 0);
  EXPECT_LT(homogeneous, total);
}

TEST(HomogeneityTest, CanonicalFormHasUnitFirstVariable) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    LinearSystem sys = random_system(2, 3, 3, seed);
    if (!is_homogeneous_system(sys)) continue;
    CanonicalForm canon = canonicalize_homogeneous(sys);
    for (const auto& f : canon.system.forms()) EXPECT_EQ(f[0], 1u);
    EXPECT_EQ(value_tuples(canon.system, 2), value_tuples(sys, 2));
    EXPECT_TRUE(are_isomorphic(sys, canon.system).isomorphic());
  }
  CanonicalForm ap = canonicalize_homogeneous(arithmetic_progression(3, 3));
  for (const auto& f : ap.system.forms()) EXPECT_EQ(f[0], 1u);
}

TEST(IsomorphismTest, Examples) {
  LinearSystem a(2, 2, {{1, 0}, {0, 1}});
  LinearSystem b(2, 2, {{1, 0}, {1, 1}});
  IsomorphismResult r = are_isomorphic(a, b);
  EXPECT_TRUE(r.isomorphic());
  EXPECT_EQ(are_isomorphic(LinearSystem(5, 2, {{1, 0}, {2, 0}}), LinearSystem(5, 2, {{1, 0}, {0, 1}})).decision,
            Decision::kNo);
  LinearSystem ap = arithmetic_progression(5, 4);
  IsomorphismResult self = are_isomorphic(ap, ap);
  EXPECT_TRUE(self.isomorphic());
  EXPECT_EQ(self.bijection, (std::vector<int>{0, 1, 2, 3}));
}

void expect_witness(const LinearSystem& a, const LinearSystem& b, const IsomorphismResult& r) {
  ASSERT_TRUE(r.isomorphic());
  ASSERT_TRUE(r.map.has_value());
  std::set<int> image(r.bijection.begin(), r.bijection.end());
  EXPECT_EQ(static_cast<int>(image.size()), a.m());
  for (int i = 0; i < a.m(); ++i) EXPECT_EQ(row_times(a.field(), a.form(i), *r.map), b.form(r.bijection[i]));
}

TEST(IsomorphismTest, EquivalenceRelationAndInvariants) {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const uint32_t p = seed % 2 ? 3 : 5;
    LinearSystem a = random_system(p, 3, 3 + seed % 4, seed);
    LinearSystem b = random_image(a, seed + 100);
    LinearSystem c = random_image(b, seed + 200);
    IsomorphismResult ab = are_isomorphic(a, b), ba = are_isomorphic(b, a), bc = are_isomorphic(b, c);
    expect_witness(a, b, ab);
    expect_witness(b, a, ba);
    expect_witness(b, c, bc);
    // Composition of witnesses witnesses a ~ c.
    std::vector<int> composed(a.m());
    for (int i = 0; i < a.m(); ++i) composed[i] = bc.bijection[ab.bijection[i]];
    FpMatrix map = multiply(a.field(), *ab.map, *bc.map);
    for (int i = 0; i < a.m(); ++i) EXPECT_EQ(row_times(a.field(), a.form(i), map), c.form(composed[i]));
    EXPECT_TRUE(are_isomorphic(a, c).isomorphic());

    std::multiset<int> da, db;
    for (const auto& f : a.forms()) da.insert(form_degree(a, f));
    for (const auto& f : b.forms()) db.insert(form_degree(b, f));
    EXPECT_EQ(da, db);
    LinearSystem b_distinct(p, b.k(), b.forms());
    ComplexityReport ra = complexity_report(a), rb = complexity_report(b_distinct);
    EXPECT_EQ(ra.cs.s, rb.cs.s);
    EXPECT_EQ(ra.hypothesis_holds, rb.hypothesis_holds);
    if (ra.true_complexity) EXPECT_EQ(ra.true_complexity->d, rb.true_complexity->d);
  }
}

TEST(IsomorphismTest, DetectsNonIsomorphicSameSizeSystems) {
  // Three forms spanning F_3^2 are isomorphic to the 3-term progression only
  // when their unique linear relation has all coefficients equal.
  LinearSystem a(3, 2, {{1, 0}, {0, 1}, {2, 2}});
  LinearSystem b(3, 2, {{1, 0}, {0, 1}, {1, 2}});
  EXPECT_TRUE(are_isomorphic(a, arithmetic_progression(3, 3)).isomorphic());
  EXPECT_EQ(are_isomorphic(b, arithmetic_progression(3, 3)).decision, Decision::kNo);
  // Relations (1, 1, -1) and (1, 2, -1) over F_5 are not permutations of
  // scalar multiples of each other.
  LinearSystem c(5, 2, {{1, 0}, {0, 1}, {1, 1}});
  LinearSystem d(5, 2, {{1, 0}, {0, 1}, {1, 2}});
  EXPECT_EQ(are_isomorphic(c, d).decision, Decision::kNo);
  EXPECT_TRUE(are_isomorphic(c, LinearSystem(5, 2, {{2, 0}, {0, 3}, {2, 3}})).isomorphic());
  LinearSystem e(5, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
  LinearSystem g(5, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(are_isomorphic(e, g).decision, Decision::kNo);
}

TEST(ComponentsTest, Examples) {
  EXPECT_EQ(connected_components(LinearSystem(5, 2, {{1, 0}, {0, 1}})).size(), 2u);
  EXPECT_EQ(connected_components(arithmetic_progression(3, 3)).size(), 1u);
  LinearSystem joined(3, 3, {{1, 0, 0}, {1, 1, 0}, {1, 2, 0}, {0, 0, 1}});
  EXPECT_EQ(connected_components(joined), (Partition{{0, 1, 2}, {3}}));
}

TEST(ComponentsTest, AgreesWithDefinition) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = make_rng(seed, 5);
    const int m = 2 + static_cast<int>(seed % 6);
    std::set<FpRow> rows;
    while (static_cast<int>(rows.size()) < m) {
      FpRow r(4, 0);
      // Sparse rows so that disconnected systems are common.
      for (auto& c : r) c = uniform_below(rng, 3) == 0 ? uniform_below(rng, 3) : 0;
      rows.insert(r);
    }
    LinearSystem sys(3, 4, std::vector<FpRow>(rows.begin(), rows.end()));
    Partition parts = connected_components(sys);
    EXPECT_EQ(parts.size() == 1, is_connected_exhaustive(sys));
    for (const auto& part : parts) {
      std::vector<FpRow> forms;
      for (int i : part) forms.push_back(sys.form(i));
      LinearSystem sub = LinearSystem::multiset(3, 4, forms);
      EXPECT_TRUE(is_connected_exhaustive(sub));
      EXPECT_EQ(connected_components(sub).size(), 1u);
    }
  }
}

TEST(FormDegreeTest, Examples) {
  EXPECT_EQ(form_degree(xy_sum(2), {1, 1}), 2);
  EXPECT_EQ(form_degree(xy_sum(2), {0, 0}), 3);  // x + x = 0 over F_2
  EXPECT_EQ(form_degree(xy_sum(3), {2, 2}), 1);
  EXPECT_EQ(form_degree(LinearSystem(3, 2, {{1, 0}}), {0, 1}), 0);
}

TEST(HighRankFlagTest, SmallCase) {
  FlaggedSystem m = build_high_rank_flag(2, 3);
  std::set<FpRow> got(m.system().forms().begin(), m.system().forms().end());
  std::set<FpRow> want{{0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}};
  EXPECT_EQ(got, want);
  EXPECT_TRUE(is_connected(m.system()));
  EXPECT_EQ(form_degree(m.system(), {1, 0, 0}), 6);
  EXPECT_EQ(m.flag(), (FpRow{1, 0, 0}));
}

TEST(HighRankFlagTest, DegreeOfE1AndCaps) {
  for (uint32_t p : {2u, 3u}) {
    for (int d : {3, 4}) {
      FlaggedSystem m = build_high_rank_flag(p, d);
      EXPECT_EQ(form_degree(m.system(), m.flag()), 2 * ((1 << (d - 1)) - 1));
    }
  }
  EXPECT_THROW(build_high_rank_flag(2, 2), InvalidArgument);
  EXPECT_THROW(build_high_rank_flag(5, 3), InvalidArgument);
  EXPECT_THROW(build_high_rank_flag(2, 5), InvalidArgument);
}

std::vector<FlaggedSystem> flagged_catalogue() {
  std::vector<FlaggedSystem> out;
  out.emplace_back(LinearSystem(3, 1, {{1}}), FpRow{1});
  out.emplace_back(arithmetic_progression(3, 3), FpRow{1, 0});
  out.emplace_back(arithmetic_progression(3, 3), FpRow{0, 1});
  out.emplace_back(LinearSystem(3, 2, {{1, 0}, {0, 1}, {1, 1}}), FpRow{1, 2});
  out.emplace_back(LinearSystem(3, 2, {{1, 0}, {0, 1}}), FpRow{1, 1});
  out.emplace_back(LinearSystem(3, 3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 1}, {0, 0, 1}}), FpRow{1, 1, 0});
  return out;
}

TEST(FlaggedProductTest, SingleFormSquare) {
  FlaggedSystem x(LinearSystem(3, 1, {{1}}), FpRow{1});
  FlaggedProduct sq = flagged_product(x, x);
  EXPECT_EQ(sq.product.k(), 1);
  EXPECT_EQ(sq.product.system().forms(), (std::vector<FpRow>{{1}, {1}}));
  EXPECT_EQ(sq.product.flag(), FpRow{1});
}

TEST(FlaggedProductTest, ConnectivityDegreesAndVariants) {
  const auto cat = flagged_catalogue();
  for (const auto& a : cat) {
    for (const auto& b : cat) {
      FlaggedProduct prod = flagged_product(a, b);
      const LinearSystem& l = prod.product.system();
      EXPECT_EQ(l.m(), a.system().m() + b.system().m());
      EXPECT_EQ(prod.product.k(), a.k() + b.k() - 1);
      FpRow e1(prod.product.k(), 0);
      e1[0] = 1;
      EXPECT_EQ(prod.product.flag(), e1);
      if (is_connected(a.with_flag()) && is_connected(b.with_flag())) {
        EXPECT_TRUE(is_connected(prod.product.with_flag()));
      }
      // Degree superadditivity on multiples of the flag.
      PrimeField f(3);
      for (Residue lambda = 0; lambda < 3; ++lambda) {
        FpRow la(a.k()), lb(b.k()), lp(prod.product.k());
        for (int i = 0; i < a.k(); ++i) la[i] = f.mul(lambda, a.flag()[i]);
        for (int i = 0; i < b.k(); ++i) lb[i] = f.mul(lambda, b.flag()[i]);
        for (int i = 0; i < prod.product.k(); ++i) lp[i] = f.mul(lambda, prod.product.flag()[i]);
        EXPECT_LE(form_degree(a.system(), la) + form_degree(b.system(), lb), form_degree(l, lp));
      }
      if (l.m() <= kIsomorphismMaxForms) {
        for (uint64_t v : {1u, 7u}) {
          FlaggedProduct alt = flagged_product(a, b, v);
          EXPECT_TRUE(are_isomorphic(prod.product, alt.product).isomorphic());
        }
      }
    }
  }
}

}  // namespace
}  // namespace hofa
