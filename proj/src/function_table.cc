#include "hofa/function_table.h"

#include <cmath>
#include <numbers>

#include "hofa/errors.h"
#include "hofa/random.h"

namespace hofa {
namespace {

Point checked_size(uint32_t p, int n, size_t given) {
  PrimeField field(p);
  if (n < 0) throw InvalidArgument("negative dimension");
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  if (given != size) {
    throw InvalidArgument("table has " + std::to_string(given) + " values, expected " + std::to_string(size));
  }
  return static_cast<Point>(size);
}

}  // namespace

std::string codomain_name(Codomain c) {
  switch (c) {
    case Codomain::kField:
      return "field";
    case Codomain::kDisk:
      return "disk";
    case Codomain::kReal:
      return "real";
  }
  return "unknown";
}

Codomain parse_codomain(const std::string& name) {
  if (name == "field") return Codomain::kField;
  if (name == "disk") return Codomain::kDisk;
  if (name == "real") return Codomain::kReal;
  throw InvalidArgument("unknown codomain '" + name + "'");
}

FunctionTable FunctionTable::field_valued(uint32_t p, int n, std::vector<Residue> values) {
  checked_size(p, n, values.size());
  FunctionTable t(p, n, Codomain::kField);
  const PrimeField field(p);
  t.values_.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= p) {
      throw InvalidArgument("field value " + std::to_string(values[i]) + " at index " + std::to_string(i) +
                            " is not below p = " + std::to_string(p));
    }
    t.values_.push_back(field.character(values[i]));
  }
  t.residues_ = std::move(values);
  return t;
}

FunctionTable FunctionTable::disk_valued(uint32_t p, int n, std::vector<std::complex<double>> values) {
  checked_size(p, n, values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(std::abs(values[i]) <= 1.0 + kDiskSlack)) {
      throw InvalidArgument("value at index " + std::to_string(i) + " lies outside the unit disk");
    }
  }
  FunctionTable t(p, n, Codomain::kDisk);
  t.values_ = std::move(values);
  return t;
}

FunctionTable FunctionTable::real_valued(uint32_t p, int n, std::vector<double> values) {
  checked_size(p, n, values.size());
  FunctionTable t(p, n, Codomain::kReal);
  t.values_.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= -1.0 - kDiskSlack && values[i] <= 1.0 + kDiskSlack)) {
      throw InvalidArgument("real value at index " + std::to_string(i) + " lies outside [-1, 1]");
    }
    t.values_.emplace_back(values[i], 0.0);
  }
  return t;
}

const std::vector<Residue>& FunctionTable::residues() const {
  if (codomain_ != Codomain::kField) throw InvalidArgument("table is not field-valued");
  return residues_;
}

bool FunctionTable::operator==(const FunctionTable& o) const {
  return p_ == o.p_ && n_ == o.n_ && codomain_ == o.codomain_ && residues_ == o.residues_ && values_ == o.values_;
}

void require_same_shape(const FunctionTable& a, const FunctionTable& b) {
  if (a.p() != b.p() || a.n() != b.n()) throw InvalidArgument("function tables have different shapes");
}

FunctionTable polynomial_table(const Polynomial& poly, uint64_t budget) {
  return FunctionTable::field_valued(poly.p(), poly.n(), evaluate_table(poly, budget));
}

FunctionTable constant_table(uint32_t p, int n, std::complex<double> c) {
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  return FunctionTable::disk_valued(p, n, std::vector<std::complex<double>>(size, c));
}

FunctionTable random_field_table(uint32_t p, int n, uint64_t seed) {
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  Rng rng = make_rng(seed, 0xf1);
  std::vector<Residue> v(size);
  for (auto& x : v) x = uniform_below(rng, p);
  return FunctionTable::field_valued(p, n, std::move(v));
}

FunctionTable random_disk_table(uint32_t p, int n, uint64_t seed) {
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  Rng rng = make_rng(seed, 0xd1);
  std::vector<std::complex<double>> v(size);
  for (auto& z : v) {
    const double r = std::sqrt(uniform_unit(rng));
    z = std::polar(r, 2 * std::numbers::pi * uniform_unit(rng));
  }
  return FunctionTable::disk_valued(p, n, std::move(v));
}

FunctionTable random_unit_table(uint32_t p, int n, uint64_t seed) {
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  Rng rng = make_rng(seed, 0xc1);
  std::vector<std::complex<double>> v(size);
  for (auto& z : v) z = std::polar(1.0, 2 * std::numbers::pi * uniform_unit(rng));
  return FunctionTable::disk_valued(p, n, std::move(v));
}

FunctionTable random_real_table(uint32_t p, int n, uint64_t seed, double lo, double hi) {
  if (!(lo >= -1.0 && lo <= hi && hi <= 1.0)) throw InvalidArgument("real range must satisfy -1 <= lo <= hi <= 1");
  const uint64_t size = checked_power(p, static_cast<uint64_t>(n), UINT32_MAX);
  Rng rng = make_rng(seed, 0xa1);
  std::vector<double> v(size);
  for (auto& x : v) x = lo + (hi - lo) * uniform_unit(rng);
  return FunctionTable::real_valued(p, n, std::move(v));
}

}  // namespace hofa
