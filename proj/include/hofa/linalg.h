#ifndef HOFA_LINALG_H_
#define HOFA_LINALG_H_

#include <optional>
#include <vector>

#include "hofa/field.h"

namespace hofa {

using FpRow = std::vector<Residue>;

// Dense matrix over F_p, row-major.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}
  static FpMatrix from_rows(const std::vector<FpRow>& rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Residue& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  Residue at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
  FpRow row(int r) const;

  bool operator==(const FpMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Residue> a_;
};

struct RowEchelon {
  FpMatrix reduced;         // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
};

// Gauss-Jordan elimination with first-nonzero pivoting (deterministic).
RowEchelon row_reduce(const PrimeField& f, FpMatrix m);
int rank(const PrimeField& f, const FpMatrix& m);
int rank_of_rows(const PrimeField& f, const std::vector<FpRow>& rows, int cols);

// Some x with A x = b, if one exists.
std::optional<FpRow> solve(const PrimeField& f, const FpMatrix& a, const FpRow& b);
// Basis of {x : A x = 0}.
std::vector<FpRow> nullspace(const PrimeField& f, const FpMatrix& a);
std::optional<FpMatrix> inverse(const PrimeField& f, const FpMatrix& a);
FpMatrix multiply(const PrimeField& f, const FpMatrix& a, const FpMatrix& b);
// Row vector times matrix.
FpRow row_times(const PrimeField& f, const FpRow& v, const FpMatrix& m);

// Incrementally built span of row vectors. Keeps, for every echelon row, its
// expression in terms of the independent generators that were inserted.
class SpanBasis {
 public:
  SpanBasis(const PrimeField& f, int dim) : field_(f), dim_(dim) {}

  // Returns true if v was independent of the current span (and adds it).
  bool insert(const FpRow& v);
  bool contains(const FpRow& v) const;
  // Coefficients of v in terms of the independent generators, in insertion
  // order, or nullopt if v is outside the span.
  std::optional<FpRow> coordinates(const FpRow& v) const;

  int dimension() const { return static_cast<int>(rows_.size()); }
  const std::vector<FpRow>& generators() const { return generators_; }

 private:
  // Reduces v against the echelon rows; returns residual and the combination
  // (over generators) that was subtracted.
  std::pair<FpRow, FpRow> reduce(const FpRow& v) const;

  PrimeField field_;
  int dim_;
  std::vector<FpRow> rows_;    // echelon rows, pivot normalised to 1
  std::vector<int> pivots_;
  std::vector<FpRow> combos_;  // rows_[i] = sum combos_[i][j] * generators_[j]
  std::vector<FpRow> generators_;
};

bool is_zero(const FpRow& v);

}  // namespace hofa

#endif  // HOFA_LINALG_H_
