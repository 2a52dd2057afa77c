#include "hofa/polynomial.h"

#include <cctype>
#include <numeric>
#include <sstream>

#include "hofa/errors.h"
#include "hofa/linalg.h"
#include "hofa/random.h"

namespace hofa {

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

Polynomial::Polynomial(uint32_t p, int n) : p_(p), n_(n) {
  PrimeField field(p);
  if (n < 0) throw InvalidArgument("negative variable count");
}

Polynomial::Polynomial(uint32_t p, int n, const std::map<Exponents, Residue>& terms) : Polynomial(p, n) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

Polynomial Polynomial::constant(uint32_t p, int n, Residue c) {
  Polynomial poly(p, n);
  poly.add_term(Exponents(n, 0), c % p);
  return poly;
}

Polynomial Polynomial::linear(uint32_t p, int n, const FpVector& a) {
  if (static_cast<int>(a.size()) != n) throw InvalidArgument("linear form dimension mismatch");
  Polynomial poly(p, n);
  for (int i = 0; i < n; ++i) {
    Exponents e(n, 0);
    e[i] = 1;
    poly.add_term(e, a[i] % p);
  }
  return poly;
}

Polynomial Polynomial::monomial(uint32_t p, int n, const Exponents& e, Residue coeff) {
  Polynomial poly(p, n);
  poly.add_term(e, coeff % p);
  return poly;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

Residue Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void Polynomial::add_term(const Exponents& e, Residue coeff) {
  if (static_cast<int>(e.size()) != n_) throw InvalidArgument("monomial has wrong number of variables");
  for (auto x : e) {
    if (x >= p_) throw InvalidArgument("exponent must be below p");
  }
  coeff %= p_;
  if (coeff == 0) return;
  Residue& slot = terms_[e];
  slot = (slot + coeff) % p_;
  if (slot == 0) terms_.erase(e);
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (p_ != o.p_ || n_ != o.n_) throw InvalidArgument("polynomials over different spaces");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  check_compatible(o);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  check_compatible(o);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, (p_ - c) % p_);
  return r;
}

Polynomial Polynomial::scaled(Residue c) const {
  Polynomial r(p_, n_);
  for (const auto& [e, v] : terms_) r.add_term(e, (v * (c % p_)) % p_);
  return r;
}

Residue evaluate(const Polynomial& poly, const FpVector& x) {
  if (static_cast<int>(x.size()) != poly.n()) throw InvalidArgument("evaluate: dimension mismatch");
  const PrimeField field(poly.p());
  Residue sum = 0;
  for (const auto& [e, c] : poly.terms()) {
    Residue term = c;
    for (int i = 0; i < poly.n(); ++i) {
      if (e[i]) term = field.mul(term, field.pow(x[i] % poly.p(), e[i]));
    }
    sum = field.add(sum, term);
  }
  return sum;
}

std::vector<Residue> evaluate_table(const Polynomial& poly, uint64_t budget) {
  const uint32_t p = poly.p();
  const int n = poly.n();
  const PrimeField field(p);
  const PointSpace space(field, n, budget);
  std::vector<Residue> powers(static_cast<size_t>(p) * p);
  for (Residue v = 0; v < p; ++v) {
    for (Residue e = 0; e < p; ++e) powers[v * p + e] = field.pow(v, e);
  }
  std::vector<Residue> out(space.size(), 0);
  FpVector x = FpVector::zero(n);
  for (Point idx = 0; idx < space.size(); ++idx) {
    uint32_t sum = 0;
    for (const auto& [e, c] : poly.terms()) {
      uint32_t term = c;
      for (int i = 0; i < n && term; ++i) {
        if (e[i]) term = (term * powers[x[i] * p + e[i]]) % p;
      }
      sum += term;
    }
    out[idx] = sum % p;
    for (int j = n - 1; j >= 0; --j) {
      if (++x[j] < p) break;
      x[j] = 0;
    }
  }
  return out;
}

namespace {

std::vector<std::vector<Residue>> binomials(uint32_t p) {
  std::vector<std::vector<Residue>> c(p, std::vector<Residue>(p, 0));
  for (uint32_t a = 0; a < p; ++a) {
    c[a][0] = 1;
    for (uint32_t b = 1; b <= a; ++b) c[a][b] = (c[a - 1][b - 1] + (b < a ? c[a - 1][b] : 0)) % p;
  }
  return c;
}

}  // namespace

Polynomial additive_derivative(const Polynomial& poly, const FpVector& y) {
  const uint32_t p = poly.p();
  const int n = poly.n();
  if (static_cast<int>(y.size()) != n) throw InvalidArgument("derivative direction has wrong dimension");
  const PrimeField field(p);
  const auto binom = binomials(p);
  Polynomial shifted(p, n);
  for (const auto& [e, c] : poly.terms()) {
    // Expand c * prod_i (x_i + y_i)^{e_i} one variable at a time.
    std::map<Exponents, Residue> partial{{Exponents(n, 0), c}};
    for (int i = 0; i < n; ++i) {
      if (e[i] == 0) continue;
      std::map<Exponents, Residue> next;
      for (const auto& [pe, pc] : partial) {
        for (uint32_t j = 0; j <= e[i]; ++j) {
          Residue coeff = field.mul(pc, field.mul(binom[e[i]][j], field.pow(y[i] % p, e[i] - j)));
          if (coeff == 0) continue;
          Exponents ne = pe;
          ne[i] = static_cast<uint8_t>(j);
          Residue& slot = next[ne];
          slot = field.add(slot, coeff);
        }
      }
      partial = std::move(next);
    }
    for (const auto& [pe, pc] : partial) shifted.add_term(pe, pc);
  }
  return shifted - poly;
}

bool is_homogeneous(const Polynomial& poly) {
  const int d = poly.degree();
  for (const auto& [e, c] : poly.terms()) {
    if (total_degree(e) != d) return false;
  }
  return true;
}

Estimate bias(const Polynomial& poly, const Mode& mode) {
  const PrimeField field(poly.p());
  if (const auto* exact = std::get_if<Exact>(&mode)) {
    const auto values = evaluate_table(poly, exact->budget);
    std::vector<uint64_t> counts(poly.p(), 0);
    for (auto v : values) ++counts[v];
    std::complex<double> s = 0;
    for (Residue r = 0; r < poly.p(); ++r) s += static_cast<double>(counts[r]) * field.character(r);
    Estimate est;
    est.value = std::abs(s) / static_cast<double>(values.size());
    est.samples = values.size();
    return est;
  }
  const auto& mc = std::get<MonteCarlo>(mode);
  if (mc.samples < 1) throw InvalidArgument("bias: samples must be >= 1");
  Rng rng = make_rng(mc.seed);
  std::vector<uint64_t> counts(poly.p(), 0);
  FpVector x = FpVector::zero(poly.n());
  for (uint64_t s = 0; s < mc.samples; ++s) {
    for (auto& c : x.coords) c = uniform_below(rng, poly.p());
    ++counts[evaluate(poly, x)];
  }
  std::complex<double> mean = 0;
  for (Residue r = 0; r < poly.p(); ++r) mean += static_cast<double>(counts[r]) * field.character(r);
  mean /= static_cast<double>(mc.samples);
  double second = 0;
  for (Residue r = 0; r < poly.p(); ++r) {
    second += static_cast<double>(counts[r]) * std::norm(field.character(r) - mean);
  }
  Estimate est;
  est.value = std::abs(mean);
  est.exact = false;
  est.samples = mc.samples;
  est.std_error = std::sqrt(second / static_cast<double>(mc.samples)) / std::sqrt(static_cast<double>(mc.samples));
  return est;
}

std::vector<Exponents> monomial_basis(uint32_t p, int n, int d, bool exact_degree) {
  std::vector<Exponents> out;
  if (d < 0) return out;
  Exponents e(n, 0);
  for (int target = exact_degree ? d : 0; target <= d; ++target) {
    // Enumerate exponent vectors lexicographically, keeping total == target.
    std::fill(e.begin(), e.end(), 0);
    while (true) {
      if (total_degree(e) == target) out.push_back(e);
      int j = n - 1;
      while (j >= 0) {
        if (e[j] + 1u < p) {
          ++e[j];
          break;
        }
        e[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
  }
  return out;
}

Polynomial random_polynomial(uint32_t p, int n, int d, bool homogeneous, uint64_t seed) {
  PrimeField field(p);
  if (d < 0) throw InvalidArgument("random_polynomial: negative degree");
  if (static_cast<uint64_t>(d) > static_cast<uint64_t>(n) * (p - 1)) {
    throw InvalidArgument("random_polynomial: degree exceeds n(p-1)");
  }
  const auto basis = monomial_basis(p, n, d, homogeneous);
  if (basis.empty()) throw InvalidArgument("random_polynomial: no monomials of the requested degree");
  Rng rng = make_rng(seed);
  while (true) {
    Polynomial poly(p, n);
    for (const auto& e : basis) poly.add_term(e, uniform_below(rng, p));
    if (poly.degree() == d) return poly;
  }
}

Polynomial interpolate(uint32_t p, int n, const std::vector<Residue>& values) {
  const PrimeField field(p);
  const PointSpace space(field, n, UINT32_MAX);
  if (values.size() != space.size()) throw InvalidArgument("interpolate: table size mismatch");
  // Univariate change of basis: values at t = 0..p-1 -> coefficients of t^e.
  FpMatrix vandermonde(p, p);
  for (Residue t = 0; t < p; ++t) {
    for (Residue e = 0; e < p; ++e) vandermonde.at(t, e) = field.pow(t, e);
  }
  const FpMatrix vinv = *inverse(field, vandermonde);
  std::vector<Residue> coeffs = values;
  for (auto& c : coeffs) c %= p;
  std::vector<Residue> line(p), out(p);
  uint64_t stride = 1;
  for (int axis = n - 1; axis >= 0; --axis) {
    for (uint64_t base = 0; base < coeffs.size(); ++base) {
      if ((base / stride) % p != 0) continue;
      for (Residue t = 0; t < p; ++t) line[t] = coeffs[base + t * stride];
      for (Residue e = 0; e < p; ++e) {
        uint64_t s = 0;
        for (Residue t = 0; t < p; ++t) s += static_cast<uint64_t>(vinv.at(e, t)) * line[t];
        out[e] = static_cast<Residue>(s % p);
      }
      for (Residue e = 0; e < p; ++e) coeffs[base + e * stride] = out[e];
    }
    stride *= p;
  }
  Polynomial poly(p, n);
  for (Point idx = 0; idx < space.size(); ++idx) {
    if (coeffs[idx] == 0) continue;
    const FpVector e = space.decode(idx);
    Exponents ex(n);
    for (int i = 0; i < n; ++i) ex[i] = static_cast<uint8_t>(e[i]);
    poly.add_term(ex, coeffs[idx]);
  }
  return poly;
}

std::string to_text(const Polynomial& poly) {
  if (poly.is_zero()) return "0";
  // Highest total degree first, then reverse-lexicographic exponent order.
  std::vector<std::pair<Exponents, Residue>> terms(poly.terms().begin(), poly.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    if (!first) out << " + ";
    first = false;
    out << c;
    for (int i = 0; i < poly.n(); ++i) {
      if (e[i] == 0) continue;
      out << "*x" << (i + 1);
      if (e[i] > 1) out << '^' << static_cast<int>(e[i]);
    }
  }
  return out.str();
}

namespace {

class TermParser {
 public:
  TermParser(const std::string& text, uint32_t p, int n) : s_(text), p_(p), n_(n) {}

  Polynomial parse() {
    Polynomial poly(p_, n_);
    skip_space();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool negate = false;
    if (peek() == '-') {
      negate = true;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    while (true) {
      auto [e, c] = parse_term();
      poly.add_term(e, negate ? (p_ - c % p_) % p_ : c);
      skip_space();
      if (pos_ == s_.size()) break;
      char op = s_[pos_++];
      if (op == '+') {
        negate = false;
      } else if (op == '-') {
        negate = true;
      } else {
        fail("expected '+' or '-'");
      }
    }
    return poly;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("polynomial parse error at offset " + std::to_string(pos_) + ": " + what);
  }
  uint64_t parse_number() {
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    uint64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<uint64_t>(s_[pos_++] - '0');
      if (v > (uint64_t{1} << 40)) fail("number too large");
    }
    return v;
  }

  std::pair<Exponents, Residue> parse_term() {
    Exponents e(n_, 0);
    uint64_t coeff = 1;
    while (true) {
      skip_space();
      if (peek() == 'x') {
        ++pos_;
        const uint64_t var = parse_number();
        if (var < 1 || var > static_cast<uint64_t>(n_)) fail("variable index out of range");
        uint64_t exp = 1;
        skip_space();
        if (peek() == '^') {
          ++pos_;
          exp = parse_number();
        }
        const uint64_t total = e[var - 1] + exp;
        if (total >= p_) fail("exponent must be below p");
        e[var - 1] = static_cast<uint8_t>(total);
      } else {
        coeff = (coeff * (parse_number() % p_)) % p_;
      }
      skip_space();
      if (peek() != '*') break;
      ++pos_;
    }
    return {e, static_cast<Residue>(coeff)};
  }

  const std::string& s_;
  size_t pos_ = 0;
  uint32_t p_;
  int n_;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, uint32_t p, int n) {
  PrimeField field(p);
  return TermParser(text, p, n).parse();
}

}  // namespace hofa
