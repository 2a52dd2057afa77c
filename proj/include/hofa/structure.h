#ifndef HOFA_STRUCTURE_H_
#define HOFA_STRUCTURE_H_

#include <optional>
#include <vector>

#include "hofa/linear_system.h"

namespace hofa {

// Some u with <L_i, u> = 1 for every form, if one exists. Its existence is
// equivalent to (L_i(X))_i and (L_i(X) + c)_i having the same distribution for
// every c.
std::optional<FpRow> homogeneity_witness(const LinearSystem& system);
bool is_homogeneous_system(const LinearSystem& system);

// An isomorphic system (forms L_i G for an invertible G) in which the first
// variable has coefficient 1 in every form. Throws InvalidArgument if the
// system is not homogeneous.
struct CanonicalForm {
  LinearSystem system;
  FpMatrix change;  // G, k x k
};
CanonicalForm canonicalize_homogeneous(const LinearSystem& system);

// Forms applied to every X in ((F_p^n)^k), collected as sorted value tuples.
// Used to compare joint distributions exhaustively.
std::vector<std::vector<Point>> value_tuples(const LinearSystem& system, int n, uint64_t budget = kDefaultBudget);

inline constexpr int kIsomorphismMaxForms = 10;

enum class Decision { kYes, kNo, kUndecided };

struct IsomorphismResult {
  Decision decision = Decision::kUndecided;
  // bijection[i] is the form of the second system that form i maps to.
  std::vector<int> bijection;
  // A k1 x k2 matrix A with L1_i A = L2_{bijection[i]}.
  std::optional<FpMatrix> map;
  bool isomorphic() const { return decision == Decision::kYes; }
};

// Searches for a bijection of forms that extends to an invertible linear map
// span(L1) -> span(L2). With flags, the flag must map to the flag.
IsomorphismResult are_isomorphic(const LinearSystem& a, const LinearSystem& b);
IsomorphismResult are_isomorphic(const FlaggedSystem& a, const FlaggedSystem& b);

// The finest partition of form indices into parts whose spans form a direct
// sum. Zero forms are singleton parts.
Partition connected_components(const LinearSystem& system);
bool is_connected(const LinearSystem& system);
// Direct check of the definition over every nontrivial subset (m <= 20).
bool is_connected_exhaustive(const LinearSystem& system);

// Number of ordered pairs (i, j) of forms with L_i + L_j = target.
int form_degree(const LinearSystem& system, const FpRow& target);

// Glues two flagged systems along their flags. The product lives in
// k0 + k1 - 1 variables with flag e_1; forms of the first factor come first.
struct FlaggedProduct {
  FlaggedSystem product;
  std::vector<int> from_first;   // product indices of the first factor's forms
  std::vector<int> from_second;  // product indices of the second factor's forms
};
// `variant` selects the identification: 0 is the canonical one; other values
// eliminate a different coordinate and apply a seeded invertible change of
// variables afterwards. All variants give isomorphic flagged systems.
FlaggedProduct flagged_product(const FlaggedSystem& a, const FlaggedSystem& b, uint64_t variant = 0);
FlaggedSystem flagged_power(const FlaggedSystem& base, int times);

// The flagged system M^{e_1} with M = ({0} x F_p^{d-1}) u ({1} x {0,1}^{d-1})
// minus {0, e_1}, after checking that M is connected, that every form has
// degree between 2^{d-1} and 4 p^{d-1}, and that deg(lambda e_1) = 0 for
// lambda outside {0, 1}. Supports p <= 3, 3 <= d <= 4.
FlaggedSystem build_high_rank_flag(uint32_t p, int d);

}  // namespace hofa

#endif  // HOFA_STRUCTURE_H_
