#ifndef HOFA_MODE_H_
#define HOFA_MODE_H_

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include "hofa/field.h"

namespace hofa {

// Exact enumeration over the whole sample space, refused above `budget` points.
struct Exact {
  uint64_t budget = kDefaultBudget;
};

// Average over `samples` independent draws seeded by `seed`.
struct MonteCarlo {
  uint64_t samples = 10000;
  uint64_t seed = 0;
};

using Mode = std::variant<Exact, MonteCarlo>;

inline bool is_exact(const Mode& m) { return std::holds_alternative<Exact>(m); }
inline std::string mode_name(const Mode& m) { return is_exact(m) ? "exact" : "mc"; }

// A scalar result together with how it was obtained. For Monte Carlo results
// std_error is the standard error of the mean; it is 0 for exact results.
struct Estimate {
  std::complex<double> value;
  bool exact = true;
  double std_error = 0.0;
  uint64_t samples = 0;
};

}  // namespace hofa

#endif  // HOFA_MODE_H_
