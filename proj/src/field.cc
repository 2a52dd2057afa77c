#include "hofa/field.h"

#include <numbers>
#include <sstream>

#include "hofa/errors.h"
#include "hofa/linalg.h"
#include "hofa/random.h"

namespace hofa {

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

uint64_t checked_power(uint32_t p, uint64_t e, uint64_t budget) {
  // Saturates at UINT64_MAX instead of overflowing.
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) r = (r > UINT64_MAX / p) ? UINT64_MAX : r * p;
  if (r > budget) throw BudgetExceeded(r, budget);
  return r;
}

PrimeField::PrimeField(uint32_t p) : p_(p) {
  if (!is_prime(p)) throw InvalidArgument("modulus " + std::to_string(p) + " is not prime");
  if (p > kMaxPrime) throw InvalidArgument("primes above 251 are not supported");
  inverses_.assign(p, 0);
  for (Residue a = 1; a < p; ++a) {
    for (Residue b = 1; b < p; ++b) {
      if ((a * b) % p == 1) {
        inverses_[a] = b;
        break;
      }
    }
  }
  roots_.reserve(p);
  for (Residue m = 0; m < p; ++m) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / p;
    roots_.emplace_back(std::cos(angle), std::sin(angle));
  }
  // Exact values where they are known, so p = 2 tables stay in {+1, -1}.
  roots_[0] = {1.0, 0.0};
  if (p == 2) roots_[1] = {-1.0, 0.0};
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw InvalidArgument("zero has no inverse");
  return inverses_[a % p_];
}

Residue PrimeField::pow(Residue a, uint64_t e) const {
  Residue result = 1 % p_;
  Residue base = a % p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

FpVector FpVector::standard(size_t n, size_t i) {
  FpVector v = zero(n);
  v.coords.at(i) = 1;
  return v;
}

std::string to_string(const FpVector& v) {
  std::ostringstream out;
  out << '(';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << v[i];
  }
  out << ')';
  return out.str();
}

PointSpace::PointSpace(const PrimeField& field, int n, uint64_t budget) : field_(field), n_(n) {
  if (n < 0) throw InvalidArgument("negative dimension");
  size_ = static_cast<Point>(checked_power(field.p(), static_cast<uint64_t>(n), budget));
  weights_.assign(n, 1);
  for (int j = n - 2; j >= 0; --j) weights_[j] = weights_[j + 1] * field.p();
  const uint64_t size = size_;
  if (field.p() != 2 && size * size <= (uint64_t{1} << 22)) {
    add_table_.resize(size * size);
    for (Point a = 0; a < size_; ++a) {
      for (Point b = 0; b < size_; ++b) add_table_[a * size + b] = add_digits(a, b);
    }
  }
  if (size * field.p() <= (uint64_t{1} << 24)) {
    scale_table_.resize(size * field.p());
    for (Residue c = 0; c < field.p(); ++c) {
      for (Point a = 0; a < size_; ++a) scale_table_[c * size + a] = scale_digits(c, a);
    }
  }
}

Point PointSpace::add_digits(Point a, Point b) const {
  const uint32_t p = field_.p();
  Point result = 0;
  Point weight = 1;
  for (int j = 0; j < n_; ++j) {
    Residue s = (a % p) + (b % p);
    if (s >= p) s -= p;
    result += s * weight;
    weight *= p;
    a /= p;
    b /= p;
  }
  return result;
}

Point PointSpace::scale_digits(Residue c, Point a) const {
  const uint32_t p = field_.p();
  Point result = 0;
  Point weight = 1;
  for (int j = 0; j < n_; ++j) {
    result += ((a % p) * c % p) * weight;
    weight *= p;
    a /= p;
  }
  return result;
}

Residue PointSpace::dot(Point a, Point b) const {
  const uint32_t p = field_.p();
  uint32_t s = 0;
  for (int j = 0; j < n_; ++j) {
    s += (a % p) * (b % p);
    a /= p;
    b /= p;
  }
  return s % p;
}

Point PointSpace::encode(const FpVector& v) const {
  if (static_cast<int>(v.size()) != n_) throw InvalidArgument("vector dimension mismatch");
  Point idx = 0;
  for (int j = 0; j < n_; ++j) {
    if (v[j] >= p()) throw InvalidArgument("coordinate out of range");
    idx = idx * p() + v[j];
  }
  return idx;
}

FpVector PointSpace::decode(Point a) const {
  FpVector v = FpVector::zero(n_);
  for (int j = n_ - 1; j >= 0; --j) {
    v[j] = a % p();
    a /= p();
  }
  return v;
}

VectorEnumeration::iterator::iterator(uint32_t p, int n, uint64_t index)
    : p_(p), index_(index), current_(FpVector::zero(n)) {}

VectorEnumeration::iterator& VectorEnumeration::iterator::operator++() {
  ++index_;
  for (int j = static_cast<int>(current_.size()) - 1; j >= 0; --j) {
    if (++current_[j] < p_) break;
    current_[j] = 0;
  }
  return *this;
}

VectorEnumeration enumerate_vectors(uint32_t p, int n, uint64_t budget) {
  PrimeField field(p);
  if (n < 0) throw InvalidArgument("negative dimension");
  return VectorEnumeration(p, n, checked_power(p, static_cast<uint64_t>(n), budget));
}

namespace {

FpMatrix square(uint32_t p, const std::vector<Residue>& m, int n) {
  FpMatrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a.at(r, c) = m[r * n + c] % p;
  }
  return a;
}

}  // namespace

AffineMap::AffineMap(uint32_t p, std::vector<Residue> matrix, FpVector offset)
    : p_(p), matrix_(std::move(matrix)), offset_(std::move(offset)) {
  PrimeField field(p);
  const int n = static_cast<int>(offset_.size());
  if (matrix_.size() != static_cast<size_t>(n) * n) throw InvalidArgument("affine map shape mismatch");
  for (auto& v : matrix_) {
    if (v >= p) throw InvalidArgument("matrix entry out of range");
  }
  for (auto v : offset_.coords) {
    if (v >= p) throw InvalidArgument("offset entry out of range");
  }
  if (rank(field, square(p, matrix_, n)) != n) throw InvalidArgument("affine map is not invertible");
}

AffineMap AffineMap::identity(uint32_t p, int n) {
  std::vector<Residue> m(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1;
  return AffineMap(p, std::move(m), FpVector::zero(n));
}

AffineMap random_affine(uint32_t p, int n, uint64_t seed) {
  if (n < 1) throw InvalidArgument("random_affine needs n >= 1");
  PrimeField field(p);
  Rng rng = make_rng(seed);
  constexpr int kRetryCap = 1000;
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    std::vector<Residue> m(static_cast<size_t>(n) * n);
    for (auto& v : m) v = uniform_below(rng, p);
    if (rank(field, square(p, m, n)) != n) continue;
    FpVector offset = FpVector::zero(n);
    for (auto& v : offset.coords) v = uniform_below(rng, p);
    return AffineMap(p, std::move(m), std::move(offset));
  }
  throw InternalError("random_affine: no invertible matrix after 1000 draws");
}

FpVector apply_map(const AffineMap& a, const FpVector& x) {
  const int n = a.n();
  if (static_cast<int>(x.size()) != n) throw InvalidArgument("apply_map: dimension mismatch");
  const uint32_t p = a.p();
  FpVector y = FpVector::zero(n);
  for (int r = 0; r < n; ++r) {
    uint64_t s = a.offset()[r];
    for (int c = 0; c < n; ++c) s += static_cast<uint64_t>(a.entry(r, c)) * (x[c] % p);
    y[r] = static_cast<Residue>(s % p);
  }
  return y;
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  if (outer.p() != inner.p() || outer.n() != inner.n()) throw InvalidArgument("compose: shape mismatch");
  const int n = outer.n();
  const uint32_t p = outer.p();
  std::vector<Residue> m(static_cast<size_t>(n) * n, 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      uint64_t s = 0;
      for (int k = 0; k < n; ++k) s += static_cast<uint64_t>(outer.entry(r, k)) * inner.entry(k, c);
      m[r * n + c] = static_cast<Residue>(s % p);
    }
  }
  FpVector offset = apply_map(outer, inner.offset());
  return AffineMap(p, std::move(m), std::move(offset));
}

std::vector<Point> point_permutation(const AffineMap& a, const PointSpace& space) {
  if (a.p() != space.p() || a.n() != space.n()) throw InvalidArgument("point_permutation: shape mismatch");
  std::vector<Point> perm(space.size());
  for (Point x = 0; x < space.size(); ++x) perm[x] = space.encode(apply_map(a, space.decode(x)));
  return perm;
}

}  // namespace hofa
