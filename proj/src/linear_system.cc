#include "hofa/linear_system.h"

#include <set>

#include "hofa/errors.h"

namespace hofa {

LinearSystem::LinearSystem(uint32_t p, int k, std::vector<FpRow> forms, bool allow_repeats)
    : p_(p), k_(k), forms_(std::move(forms)) {
  PrimeField field(p);
  if (k < 1) throw InvalidArgument("linear system needs at least one variable");
  if (forms_.empty()) throw InvalidArgument("linear system needs at least one form");
  for (auto& f : forms_) {
    if (static_cast<int>(f.size()) != k) throw InvalidArgument("form has wrong number of coefficients");
    for (auto& c : f) {
      if (c >= p) throw InvalidArgument("form coefficient out of range");
    }
  }
  if (!allow_repeats && has_repeats()) throw InvalidArgument("linear system forms must be distinct");
}

LinearSystem::LinearSystem(uint32_t p, int k, std::vector<FpRow> forms)
    : LinearSystem(p, k, std::move(forms), false) {}

LinearSystem LinearSystem::multiset(uint32_t p, int k, std::vector<FpRow> forms) {
  return LinearSystem(p, k, std::move(forms), true);
}

bool LinearSystem::has_repeats() const {
  std::set<FpRow> seen(forms_.begin(), forms_.end());
  return seen.size() != forms_.size();
}

int LinearSystem::span_dimension() const { return rank_of_rows(field(), forms_, k_); }

bool LinearSystem::in_span(const FpRow& v) const {
  SpanBasis span(field(), k_);
  for (const auto& f : forms_) span.insert(f);
  return span.contains(v);
}

std::vector<FpRow> LinearSystem::without_form(int i) const {
  std::vector<FpRow> rest;
  for (int j = 0; j < m(); ++j) {
    if (j != i) rest.push_back(forms_[j]);
  }
  return rest;
}

FlaggedSystem::FlaggedSystem(LinearSystem system, FpRow flag) : system_(std::move(system)), flag_(std::move(flag)) {
  if (static_cast<int>(flag_.size()) != system_.k()) throw InvalidArgument("flag has wrong number of coefficients");
  for (auto c : flag_) {
    if (c >= system_.p()) throw InvalidArgument("flag coefficient out of range");
  }
  if (is_zero(flag_)) throw InvalidArgument("flag must be nonzero");
  if (!system_.in_span(flag_)) throw InvalidArgument("flag must lie in the span of the system");
}

LinearSystem FlaggedSystem::with_flag() const {
  auto forms = system_.forms();
  forms.push_back(flag_);
  return LinearSystem::multiset(system_.p(), system_.k(), std::move(forms));
}

LinearSystem arithmetic_progression(uint32_t p, int length) {
  if (length < 1 || static_cast<uint32_t>(length) > p) {
    throw InvalidArgument("progression length must be between 1 and p");
  }
  std::vector<FpRow> forms;
  for (int a = 0; a < length; ++a) forms.push_back({1, static_cast<Residue>(a)});
  return LinearSystem(p, 2, std::move(forms));
}

LinearSystem gowers_cube(uint32_t p, int k) {
  if (k < 1 || k > 20) throw InvalidArgument("cube dimension out of range");
  std::vector<FpRow> forms;
  for (uint32_t s = 0; s < (1u << k); ++s) {
    FpRow f(k + 1, 0);
    f[0] = 1;
    for (int j = 0; j < k; ++j) f[j + 1] = (s >> j) & 1;
    forms.push_back(std::move(f));
  }
  return LinearSystem(p, k + 1, std::move(forms));
}

}  // namespace hofa
