#ifndef HOFA_FIELD_H_
#define HOFA_FIELD_H_

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

namespace hofa {

using Residue = uint32_t;
// A point of F_p^n encoded as its lexicographic rank (first coordinate most
// significant). All dense tables are indexed this way.
using Point = uint32_t;

inline constexpr uint32_t kMaxPrime = 251;
inline constexpr uint64_t kDefaultBudget = uint64_t{1} << 24;

bool is_prime(uint32_t p);

// p^e, or BudgetExceeded if it is larger than `budget`.
uint64_t checked_power(uint32_t p, uint64_t e, uint64_t budget);

// The prime field F_p with p <= 251.
class PrimeField {
 public:
  explicit PrimeField(uint32_t p);

  uint32_t p() const { return p_; }

  Residue reduce(int64_t v) const {
    int64_t r = v % static_cast<int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const { return (a * b) % p_; }
  // Throws InvalidArgument on a == 0.
  Residue inv(Residue a) const;
  Residue pow(Residue a, uint64_t e) const;

  // e_p(m) = exp(2 pi i m / p).
  const std::complex<double>& character(Residue m) const { return roots_[m]; }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  uint32_t p_;
  std::vector<Residue> inverses_;
  std::vector<std::complex<double>> roots_;
};

// A point x of F_p^n as an explicit coordinate vector.
struct FpVector {
  std::vector<Residue> coords;

  FpVector() = default;
  explicit FpVector(std::vector<Residue> c) : coords(std::move(c)) {}
  FpVector(std::initializer_list<Residue> c) : coords(c) {}

  size_t size() const { return coords.size(); }
  Residue operator[](size_t i) const { return coords[i]; }
  Residue& operator[](size_t i) { return coords[i]; }

  static FpVector zero(size_t n) { return FpVector(std::vector<Residue>(n, 0)); }
  // e_i, 0-based.
  static FpVector standard(size_t n, size_t i);

  auto operator<=>(const FpVector&) const = default;
  bool operator==(const FpVector&) const = default;
};

std::string to_string(const FpVector& v);

// Index arithmetic on F_p^n. Points are encoded as integers in [0, p^n).
class PointSpace {
 public:
  PointSpace(const PrimeField& field, int n, uint64_t budget = kDefaultBudget);

  const PrimeField& field() const { return field_; }
  uint32_t p() const { return field_.p(); }
  int n() const { return n_; }
  Point size() const { return size_; }

  Point add(Point a, Point b) const {
    if (p() == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[static_cast<size_t>(a) * size_ + b];
    return add_digits(a, b);
  }
  Point scale(Residue c, Point a) const {
    if (!scale_table_.empty()) return scale_table_[static_cast<size_t>(c) * size_ + a];
    return scale_digits(c, a);
  }
  Point neg(Point a) const { return p() == 2 ? a : scale(p() - 1, a); }
  Point sub(Point a, Point b) const { return add(a, neg(b)); }

  // j-th coordinate (0-based) of the point.
  Residue coordinate(Point a, int j) const {
    return static_cast<Residue>((a / weights_[j]) % p());
  }
  Residue dot(Point a, Point b) const;

  Point encode(const FpVector& v) const;
  FpVector decode(Point a) const;

 private:
  Point add_digits(Point a, Point b) const;
  Point scale_digits(Residue c, Point a) const;

  PrimeField field_;
  int n_;
  Point size_;
  std::vector<Point> weights_;  // p^(n-1-j) for coordinate j
  std::vector<Point> add_table_;
  std::vector<Point> scale_table_;
};

// All vectors of F_p^n in lexicographic order, as a lazily generated range.
class VectorEnumeration {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = FpVector;
    using difference_type = std::ptrdiff_t;
    using pointer = const FpVector*;
    using reference = const FpVector&;

    iterator() = default;
    iterator(uint32_t p, int n, uint64_t index);

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator t = *this;
      ++*this;
      return t;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    uint32_t p_ = 2;
    uint64_t index_ = 0;
    FpVector current_;
  };

  VectorEnumeration(uint32_t p, int n, uint64_t count) : p_(p), n_(n), count_(count) {}

  iterator begin() const { return iterator(p_, n_, 0); }
  iterator end() const { return iterator(p_, n_, count_); }
  uint64_t size() const { return count_; }

 private:
  uint32_t p_;
  int n_;
  uint64_t count_;
};

// Throws BudgetExceeded when p^n > budget.
VectorEnumeration enumerate_vectors(uint32_t p, int n, uint64_t budget = kDefaultBudget);

// x -> matrix * x + offset over F_p, with an invertible matrix.
class AffineMap {
 public:
  // Throws InvalidArgument if the matrix is singular or shapes disagree.
  AffineMap(uint32_t p, std::vector<Residue> matrix, FpVector offset);

  static AffineMap identity(uint32_t p, int n);

  uint32_t p() const { return p_; }
  int n() const { return static_cast<int>(offset_.size()); }
  Residue entry(int row, int col) const { return matrix_[row * n() + col]; }
  const std::vector<Residue>& matrix() const { return matrix_; }
  const FpVector& offset() const { return offset_; }

  bool operator==(const AffineMap&) const = default;

 private:
  uint32_t p_;
  std::vector<Residue> matrix_;  // row-major n x n
  FpVector offset_;
};

// Uniform element of Aff(n, F_p), by rejection sampling on the linear part.
AffineMap random_affine(uint32_t p, int n, uint64_t seed);

FpVector apply_map(const AffineMap& a, const FpVector& x);

// outer o inner: x -> outer(inner(x)).
AffineMap compose(const AffineMap& outer, const AffineMap& inner);

// The permutation of point indices induced by the map.
std::vector<Point> point_permutation(const AffineMap& a, const PointSpace& space);

}  // namespace hofa

#endif  // HOFA_FIELD_H_
