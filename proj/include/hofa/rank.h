#ifndef HOFA_RANK_H_
#define HOFA_RANK_H_

#include <optional>
#include <string>
#include <vector>

#include "hofa/polynomial.h"

namespace hofa {

enum class RankKind { kExactExhaustive, kQuadraticClosedForm, kLowerBoundOnly };

std::string rank_kind_name(RankKind kind);

// P_alpha = Gamma(Q_1(x), ..., Q_r(x)). gamma is indexed by the tuple
// (a_1..a_r) read as a base-p number with a_1 most significant; entries for
// tuples that never occur are 0.
struct RankCertificate {
  std::vector<Residue> alpha;  // combination of the input polynomials
  std::vector<Polynomial> q;
  std::vector<Residue> gamma;
};

// A verified boundary for rank(P): rank > lower is proven, and when `upper` is
// set a decomposition into `upper` polynomials is exhibited (so rank <= upper).
// lower == -1 means nothing was refuted (e.g. P constant).
struct RankReport {
  RankKind kind = RankKind::kLowerBoundOnly;
  int lower = -1;
  std::optional<int> upper;
  int r_max = 0;
  std::optional<RankCertificate> certificate;

  // True when every r <= r_max was decided either way.
  bool decided() const { return kind != RankKind::kLowerBoundOnly; }
  bool exceeds(int r) const { return r <= lower; }
};

enum class RankMethod { kAutomatic, kExhaustive, kClosedForm };

// Search limit on the number of (Q_1..Q_r) tuples tried by the exhaustive path.
inline constexpr uint64_t kRankSearchCap = uint64_t{1} << 23;

RankReport rank(const Polynomial& poly, int r_max, RankMethod method = RankMethod::kAutomatic);
// Rank of a set: the minimum over nonzero combinations P_alpha, each measured
// against the largest degree among the polynomials it uses.
RankReport rank(const std::vector<Polynomial>& polys, int r_max,
                RankMethod method = RankMethod::kAutomatic);

// Least r such that a quadratic P is a function of r polynomials of degree
// <= 1: the codimension of {u : Delta_u P == 0}.
int quadratic_decomposition_size(const Polynomial& poly);

// Evaluates the certificate at x.
Residue evaluate_certificate(const RankCertificate& cert, const FpVector& x);

}  // namespace hofa

#endif  // HOFA_RANK_H_
