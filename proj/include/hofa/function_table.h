#ifndef HOFA_FUNCTION_TABLE_H_
#define HOFA_FUNCTION_TABLE_H_

#include <complex>
#include <string>
#include <vector>

#include "hofa/field.h"
#include "hofa/polynomial.h"

namespace hofa {

enum class Codomain { kField, kDisk, kReal };

std::string codomain_name(Codomain c);
Codomain parse_codomain(const std::string& name);

inline constexpr double kDiskSlack = 1e-12;

// A function on F_p^n stored densely in enumeration order. Field-valued tables
// keep their residues; every table also exposes complex values, which for a
// field-valued table are e_p of the residues.
class FunctionTable {
 public:
  static FunctionTable field_valued(uint32_t p, int n, std::vector<Residue> values);
  // |z| <= 1 + kDiskSlack required.
  static FunctionTable disk_valued(uint32_t p, int n, std::vector<std::complex<double>> values);
  // Real values in [-1, 1].
  static FunctionTable real_valued(uint32_t p, int n, std::vector<double> values);

  uint32_t p() const { return p_; }
  int n() const { return n_; }
  Point size() const { return static_cast<Point>(values_.size()); }
  Codomain codomain() const { return codomain_; }

  const std::vector<std::complex<double>>& values() const { return values_; }
  std::complex<double> operator[](Point x) const { return values_[x]; }
  // Throws InvalidArgument unless field-valued.
  const std::vector<Residue>& residues() const;

  // Same shape and complex values (residues compared for field tables).
  bool operator==(const FunctionTable& o) const;

 private:
  FunctionTable(uint32_t p, int n, Codomain c) : p_(p), n_(n), codomain_(c) {}

  uint32_t p_;
  int n_;
  Codomain codomain_;
  std::vector<Residue> residues_;
  std::vector<std::complex<double>> values_;
};

void require_same_shape(const FunctionTable& a, const FunctionTable& b);

// The field-valued table of P; its complex values are e_p(P).
FunctionTable polynomial_table(const Polynomial& poly, uint64_t budget = kDefaultBudget);
FunctionTable constant_table(uint32_t p, int n, std::complex<double> c);

// Seeded random tables.
FunctionTable random_field_table(uint32_t p, int n, uint64_t seed);
// Uniform in the closed unit disk.
FunctionTable random_disk_table(uint32_t p, int n, uint64_t seed);
// Uniform on the unit circle.
FunctionTable random_unit_table(uint32_t p, int n, uint64_t seed);
// Uniform in [lo, hi] with -1 <= lo <= hi <= 1.
FunctionTable random_real_table(uint32_t p, int n, uint64_t seed, double lo = 0.0, double hi = 1.0);

// Fourier coefficients f^(alpha) = <f, chi_alpha>, indexed like points.
struct SpectrumTable {
  uint32_t p = 2;
  int n = 0;
  std::vector<std::complex<double>> coefficients;
};

}  // namespace hofa

#endif  // HOFA_FUNCTION_TABLE_H_
