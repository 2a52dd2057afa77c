#ifndef HOFA_LINEAR_SYSTEM_H_
#define HOFA_LINEAR_SYSTEM_H_

#include <vector>

#include "hofa/field.h"
#include "hofa/linalg.h"

namespace hofa {

// A set partition of form indices.
using Partition = std::vector<std::vector<int>>;

// m linear forms in k variables over F_p. Form i maps X = (X_1..X_k) in
// (F_p^n)^k to sum_j form(i)[j] * X_j.
//
// The regular constructor requires distinct forms. Products of flagged
// systems can repeat a form, so a multiset variant is available; operations
// that need distinct forms reject it.
class LinearSystem {
 public:
  LinearSystem(uint32_t p, int k, std::vector<FpRow> forms);
  static LinearSystem multiset(uint32_t p, int k, std::vector<FpRow> forms);

  uint32_t p() const { return p_; }
  int k() const { return k_; }
  int m() const { return static_cast<int>(forms_.size()); }
  const std::vector<FpRow>& forms() const { return forms_; }
  const FpRow& form(int i) const { return forms_[i]; }
  PrimeField field() const { return PrimeField(p_); }

  bool has_repeats() const;
  int span_dimension() const;
  bool in_span(const FpRow& v) const;

  // The remaining forms in order; empty for a one-form system.
  std::vector<FpRow> without_form(int i) const;

  bool operator==(const LinearSystem&) const = default;

 private:
  LinearSystem(uint32_t p, int k, std::vector<FpRow> forms, bool allow_repeats);

  uint32_t p_;
  int k_;
  std::vector<FpRow> forms_;
};

// A system with a distinguished nonzero form in its span.
class FlaggedSystem {
 public:
  // Throws InvalidArgument if the flag is zero or outside span(system).
  FlaggedSystem(LinearSystem system, FpRow flag);

  const LinearSystem& system() const { return system_; }
  const FpRow& flag() const { return flag_; }
  uint32_t p() const { return system_.p(); }
  int k() const { return system_.k(); }

  // system forms followed by the flag, as a multiset.
  LinearSystem with_flag() const;

 private:
  LinearSystem system_;
  FpRow flag_;
};

// Standard named systems.
// {X_1 + a X_2 : a = 0..length-1}, the length-term arithmetic progression.
LinearSystem arithmetic_progression(uint32_t p, int length);
// {X + sum_{i in S} Y_i : S subset of [k]} in variables (X, Y_1..Y_k), the
// parallelepiped pattern of the U^k norm. Form number S has bit j of S as the
// coefficient of Y_{j+1}.
LinearSystem gowers_cube(uint32_t p, int k);

}  // namespace hofa

#endif  // HOFA_LINEAR_SYSTEM_H_
