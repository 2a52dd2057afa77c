#include "hofa/linalg.h"

#include "hofa/errors.h"

namespace hofa {

bool is_zero(const FpRow& v) {
  for (auto x : v) {
    if (x != 0) return false;
  }
  return true;
}

FpMatrix FpMatrix::from_rows(const std::vector<FpRow>& rows, int cols) {
  FpMatrix m(static_cast<int>(rows.size()), cols);
  for (int r = 0; r < m.rows(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) throw InvalidArgument("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

FpRow FpMatrix::row(int r) const {
  return FpRow(a_.begin() + static_cast<size_t>(r) * cols_, a_.begin() + static_cast<size_t>(r + 1) * cols_);
}

RowEchelon row_reduce(const PrimeField& f, FpMatrix m) {
  RowEchelon out;
  int lead = 0;
  for (int c = 0; c < m.cols() && lead < m.rows(); ++c) {
    int pivot = -1;
    for (int r = lead; r < m.rows(); ++r) {
      if (m.at(r, c) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != lead) {
      for (int k = 0; k < m.cols(); ++k) std::swap(m.at(pivot, k), m.at(lead, k));
    }
    const Residue s = f.inv(m.at(lead, c));
    for (int k = 0; k < m.cols(); ++k) m.at(lead, k) = f.mul(m.at(lead, k), s);
    for (int r = 0; r < m.rows(); ++r) {
      if (r == lead || m.at(r, c) == 0) continue;
      const Residue factor = m.at(r, c);
      for (int k = 0; k < m.cols(); ++k) m.at(r, k) = f.sub(m.at(r, k), f.mul(factor, m.at(lead, k)));
    }
    out.pivots.push_back(c);
    ++lead;
  }
  out.reduced = std::move(m);
  return out;
}

int rank(const PrimeField& f, const FpMatrix& m) {
  return static_cast<int>(row_reduce(f, m).pivots.size());
}

int rank_of_rows(const PrimeField& f, const std::vector<FpRow>& rows, int cols) {
  return rank(f, FpMatrix::from_rows(rows, cols));
}

std::optional<FpRow> solve(const PrimeField& f, const FpMatrix& a, const FpRow& b) {
  if (static_cast<int>(b.size()) != a.rows()) throw InvalidArgument("solve: shape mismatch");
  FpMatrix aug(a.rows(), a.cols() + 1);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r] % f.p();
  }
  RowEchelon e = row_reduce(f, aug);
  FpRow x(a.cols(), 0);
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;  // 0 = nonzero
    x[e.pivots[i]] = e.reduced.at(static_cast<int>(i), a.cols());
  }
  return x;
}

std::vector<FpRow> nullspace(const PrimeField& f, const FpMatrix& a) {
  RowEchelon e = row_reduce(f, a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<FpRow> basis;
  for (int free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    FpRow v(a.cols(), 0);
    v[free] = 1;
    for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = f.neg(e.reduced.at(static_cast<int>(i), free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<FpMatrix> inverse(const PrimeField& f, const FpMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("inverse of a non-square matrix");
  const int n = a.rows();
  FpMatrix aug(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, n + r) = 1;
  }
  RowEchelon e = row_reduce(f, aug);
  if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  FpMatrix inv(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) inv.at(r, c) = e.reduced.at(r, n + c);
  }
  return inv;
}

FpMatrix multiply(const PrimeField& f, const FpMatrix& a, const FpMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("multiply: shape mismatch");
  FpMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) {
      uint64_t s = 0;
      for (int k = 0; k < a.cols(); ++k) s += static_cast<uint64_t>(a.at(r, k)) * b.at(k, c);
      out.at(r, c) = static_cast<Residue>(s % f.p());
    }
  }
  return out;
}

FpRow row_times(const PrimeField& f, const FpRow& v, const FpMatrix& m) {
  if (static_cast<int>(v.size()) != m.rows()) throw InvalidArgument("row_times: shape mismatch");
  FpRow out(m.cols(), 0);
  for (int c = 0; c < m.cols(); ++c) {
    uint64_t s = 0;
    for (int k = 0; k < m.rows(); ++k) s += static_cast<uint64_t>(v[k]) * m.at(k, c);
    out[c] = static_cast<Residue>(s % f.p());
  }
  return out;
}

std::pair<FpRow, FpRow> SpanBasis::reduce(const FpRow& v) const {
  if (static_cast<int>(v.size()) != dim_) throw InvalidArgument("span vector dimension mismatch");
  FpRow residual = v;
  for (auto& x : residual) x %= field_.p();
  FpRow combo(generators_.size(), 0);
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Residue c = residual[pivots_[i]];
    if (c == 0) continue;
    for (int k = 0; k < dim_; ++k) residual[k] = field_.sub(residual[k], field_.mul(c, rows_[i][k]));
    for (size_t g = 0; g < combo.size(); ++g) combo[g] = field_.add(combo[g], field_.mul(c, combos_[i][g]));
  }
  return {std::move(residual), std::move(combo)};
}

bool SpanBasis::insert(const FpRow& v) {
  auto [residual, combo] = reduce(v);
  int pivot = -1;
  for (int k = 0; k < dim_; ++k) {
    if (residual[k] != 0) {
      pivot = k;
      break;
    }
  }
  if (pivot < 0) return false;
  // residual = v - sum combo_g * gen_g, and v becomes generator #new.
  const size_t new_index = generators_.size();
  generators_.push_back(v);
  for (auto& c : combos_) c.push_back(0);
  FpRow row_combo(generators_.size(), 0);
  for (size_t g = 0; g < new_index; ++g) row_combo[g] = field_.neg(combo[g]);
  row_combo[new_index] = 1;
  const Residue s = field_.inv(residual[pivot]);
  for (auto& x : residual) x = field_.mul(x, s);
  for (auto& x : row_combo) x = field_.mul(x, s);
  // Keep earlier rows reduced at the new pivot so reduce() stays one pass.
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Residue c = rows_[i][pivot];
    if (c == 0) continue;
    for (int k = 0; k < dim_; ++k) rows_[i][k] = field_.sub(rows_[i][k], field_.mul(c, residual[k]));
    for (size_t g = 0; g < row_combo.size(); ++g) {
      combos_[i][g] = field_.sub(combos_[i][g], field_.mul(c, row_combo[g]));
    }
  }
  rows_.push_back(std::move(residual));
  pivots_.push_back(pivot);
  combos_.push_back(std::move(row_combo));
  return true;
}

bool SpanBasis::contains(const FpRow& v) const { return is_zero(reduce(v).first); }

std::optional<FpRow> SpanBasis::coordinates(const FpRow& v) const {
  auto [residual, combo] = reduce(v);
  if (!is_zero(residual)) return std::nullopt;
  return combo;
}

}  // namespace hofa
