#include <gtest/gtest.h>

#include "hofa/errors.h"
#include "hofa/polynomial.h"
#include "hofa/random.h"

namespace hofa {
namespace {

Polynomial x1x2(uint32_t p, int n = 2) {
  Exponents e(n, 0);
  e[0] = e[1] = 1;
  return Polynomial::monomial(p, n, e);
}

// Term-by-term evaluation with plain integer powers.
Residue naive_evaluate(const Polynomial& poly, const FpVector& x) {
  uint64_t sum = 0;
  for (const auto& [e, c] : poly.terms()) {
    uint64_t term = c;
    for (int i = 0; i < poly.n(); ++i) {
      for (int t = 0; t < e[i]; ++t) term = term * x[i] % poly.p();
    }
    sum += term;
  }
  return static_cast<Residue>(sum % poly.p());
}

TEST(PolynomialTest, EvaluateExamples) {
  Polynomial zero(3, 2);
  for (const auto& x : enumerate_vectors(3, 2)) EXPECT_EQ(evaluate(zero, x), 0u);
  EXPECT_EQ(evaluate(x1x2(2), FpVector{1, 1}), 1u);
  EXPECT_EQ(evaluate(x1x2(2), FpVector{1, 0}), 0u);
  EXPECT_EQ(zero.degree(), -1);
}

TEST(PolynomialTest, EvaluateAgreesWithNaive) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Polynomial poly = random_polynomial(3, 3, 2, false, seed);
    auto table = evaluate_table(poly);
    Point i = 0;
    for (const auto& x : enumerate_vectors(3, 3)) {
      EXPECT_EQ(evaluate(poly, x), naive_evaluate(poly, x));
      EXPECT_EQ(table[i++], naive_evaluate(poly, x));
    }
  }
}

TEST(PolynomialTest, DerivativeExamples) {
  Polynomial d = additive_derivative(x1x2(2), FpVector{1, 0});
  EXPECT_EQ(d, parse_polynomial("x2", 2, 2));
  Polynomial lin = parse_polynomial("2*x1 + x2 + 1", 5, 2);
  FpVector y{1, 1};
  Polynomial dl = additive_derivative(lin, y);
  EXPECT_EQ(dl.degree(), 0);
  EXPECT_EQ(evaluate(dl, FpVector{0, 0}), (evaluate(lin, y) + 5 - evaluate(lin, FpVector{0, 0})) % 5);
}

TEST(PolynomialTest, DerivativeMatchesPointwiseDifferenceAndDropsDegree) {
  for (uint32_t p : {2u, 3u, 5u}) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const int d = static_cast<int>(std::min<uint32_t>(p - 1, 3));
      Polynomial poly = random_polynomial(p, 3, d, false, seed);
      Rng rng = make_rng(seed);
      FpVector y = FpVector::zero(3);
      for (auto& c : y.coords) c = uniform_below(rng, p);
      Polynomial dp = additive_derivative(poly, y);
      EXPECT_LE(dp.degree(), poly.degree() - 1);
      for (const auto& x : enumerate_vectors(p, 3)) {
        FpVector xy = x;
        for (int i = 0; i < 3; ++i) xy[i] = (x[i] + y[i]) % p;
        EXPECT_EQ(evaluate(dp, x), (evaluate(poly, xy) + p - evaluate(poly, x)) % p);
      }
    }
  }
}

TEST(PolynomialTest, IteratedDerivativeVanishes) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const int d = 1 + static_cast<int>(seed % 2);
    Polynomial poly = random_polynomial(3, 2, d, false, seed);
    Rng rng = make_rng(seed, 1);
    for (int i = 0; i <= d; ++i) {
      poly = additive_derivative(poly, FpVector{uniform_below(rng, 3), uniform_below(rng, 3)});
    }
    EXPECT_TRUE(poly.is_zero());
  }
}

TEST(PolynomialTest, Homogeneity) {
  EXPECT_TRUE(is_homogeneous(x1x2(3)));
  EXPECT_FALSE(is_homogeneous(parse_polynomial("x1*x2 + x1", 3, 2)));
  EXPECT_TRUE(is_homogeneous(Polynomial(3, 2)));
}

TEST(PolynomialTest, BiasExamples) {
  EXPECT_NEAR(std::abs(bias(Polynomial::constant(5, 3, 2)).value), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(bias(parse_polynomial("x1 + 2*x3", 3, 3)).value), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(bias(x1x2(2)).value), 0.5, 1e-12);
  EXPECT_THROW(bias(x1x2(2), MonteCarlo{0, 1}), InvalidArgument);
}

TEST(PolynomialTest, BiasMonteCarloWithinError) {
  Polynomial poly = x1x2(2, 4);
  Estimate est = bias(poly, MonteCarlo{20000, 3});
  EXPECT_FALSE(est.exact);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_NEAR(est.value.real(), 0.5, 5 * est.std_error + 0.01);
}

TEST(PolynomialTest, BiasInvariantUnderAffineChange) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Polynomial poly = random_polynomial(3, 3, 2, false, seed);
    AffineMap a = random_affine(3, 3, seed);
    std::vector<Residue> composed;
    for (const auto& x : enumerate_vectors(3, 3)) composed.push_back(evaluate(poly, apply_map(a, x)));
    Polynomial pa = interpolate(3, 3, composed);
    EXPECT_EQ(pa.degree(), poly.degree());
    EXPECT_NEAR(bias(pa).value.real(), bias(poly).value.real(), 1e-12);
  }
}

TEST(PolynomialTest, MultiplicativeDerivativeBridge) {
  PrimeField f(5);
  Polynomial poly = random_polynomial(5, 2, 3, false, 9);
  FpVector y{2, 3};
  Polynomial dp = additive_derivative(poly, y);
  for (const auto& x : enumerate_vectors(5, 2)) {
    FpVector xy{(x[0] + y[0]) % 5, (x[1] + y[1]) % 5};
    auto lhs = f.character(evaluate(dp, x));
    auto rhs = f.character(evaluate(poly, xy)) * std::conj(f.character(evaluate(poly, x)));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
  }
}

TEST(PolynomialTest, RandomPolynomialContract) {
  EXPECT_EQ(random_polynomial(2, 2, 1, false, 7), random_polynomial(2, 2, 1, false, 7));
  for (uint64_t s = 0; s < 20; ++s) {
    Polynomial h = random_polynomial(3, 3, 2, true, s);
    EXPECT_TRUE(is_homogeneous(h));
    EXPECT_EQ(h.degree(), 2);
  }
  EXPECT_THROW(random_polynomial(2, 3, 4, false, 0), InvalidArgument);
  EXPECT_EQ(random_polynomial(2, 3, 3, false, 0).degree(), 3);
}

TEST(PolynomialTest, RandomPolynomialUniformOverExactDegree) {
  // Degree-exactly-1 polynomials over F_2^2: a*x1 + b*x2 + c with (a,b) != 0.
  std::map<std::string, int> counts;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) ++counts[to_text(random_polynomial(2, 2, 1, false, s))];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [text, c] : counts) EXPECT_NEAR(c / double(trials), 1.0 / 6, 0.02) << text;
}

TEST(PolynomialTest, InterpolateRoundTrip) {
  for (uint32_t p : {2u, 3u, 5u}) {
    for (uint64_t s = 0; s < 5; ++s) {
      Polynomial poly = random_polynomial(p, 3, static_cast<int>(p - 1), false, s);
      EXPECT_EQ(interpolate(p, 3, evaluate_table(poly)), poly);
    }
  }
}

TEST(PolynomialTest, TextRoundTrip) {
  Polynomial poly = parse_polynomial("2*x1^2*x3 + x2 - 1", 3, 3);
  EXPECT_EQ(to_text(poly), "2*x1^2*x3 + 1*x2 + 2");
  EXPECT_EQ(parse_polynomial(to_text(poly), 3, 3), poly);
  EXPECT_EQ(to_text(Polynomial(3, 2)), "0");
  EXPECT_THROW(parse_polynomial("x1^3", 3, 1), InvalidArgument);
  EXPECT_THROW(parse_polynomial("x4", 3, 3), InvalidArgument);
  EXPECT_THROW(parse_polynomial("2*", 3, 3), InvalidArgument);
  for (uint64_t s = 0; s < 10; ++s) {
    Polynomial r = random_polynomial(5, 3, 3, false, s);
    EXPECT_EQ(parse_polynomial(to_text(r), 5, 3), r);
  }
}

}  // namespace
}  // namespace hofa
