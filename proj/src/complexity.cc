#include "hofa/complexity.h"

#include <functional>

#include "hofa/errors.h"

namespace hofa {
namespace {

void require_pairwise_independent(const LinearSystem& system) {
  if (system.has_repeats()) throw InvalidArgument("complexity needs distinct forms");
  const PrimeField field = system.field();
  for (int i = 0; i < system.m(); ++i) {
    for (int j = i + 1; j < system.m(); ++j) {
      if (rank_of_rows(field, {system.form(i), system.form(j)}, system.k()) < 2) {
        throw InvalidArgument("forms " + std::to_string(i) + " and " + std::to_string(j) +
                              " are linearly dependent");
      }
    }
  }
}

// Splits all forms except `target` into at most `parts` groups whose spans
// avoid form `target`.
std::optional<Partition> split_avoiding(const LinearSystem& system, int target, int parts) {
  const PrimeField field = system.field();
  std::vector<int> others;
  for (int j = 0; j < system.m(); ++j) {
    if (j != target) others.push_back(j);
  }
  Partition groups;
  std::vector<SpanBasis> spans;
  std::function<bool(size_t)> place = [&](size_t next) {
    if (next == others.size()) return true;
    const int j = others[next];
    for (size_t g = 0; g < groups.size(); ++g) {
      SpanBasis saved = spans[g];
      spans[g].insert(system.form(j));
      if (!spans[g].contains(system.form(target))) {
        groups[g].push_back(j);
        if (place(next + 1)) return true;
        groups[g].pop_back();
      }
      spans[g] = std::move(saved);
    }
    if (static_cast<int>(groups.size()) < parts) {
      // Pairwise independence guarantees a singleton avoids the target.
      groups.push_back({j});
      spans.emplace_back(field, system.k());
      spans.back().insert(system.form(j));
      if (place(next + 1)) return true;
      groups.pop_back();
      spans.pop_back();
    }
    return false;
  };
  if (place(0)) return groups;
  return std::nullopt;
}

void for_each_multiset(int k, int d, const std::function<void(const std::vector<int>&)>& body) {
  std::vector<int> idx(d, 0);
  while (true) {
    body(idx);
    int pos = d - 1;
    while (pos >= 0 && idx[pos] == k - 1) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int t = pos + 1; t < d; ++t) idx[t] = idx[pos];
  }
}

}  // namespace

CsComplexity cs_complexity(const LinearSystem& system) {
  require_pairwise_independent(system);
  CsComplexity result;
  const int m = system.m();
  if (m == 1) {
    result.partitions.push_back({});
    return result;
  }
  if (m > kCsSearchMaxForms) {
    result.s = m - 2;
    result.bound_only = true;
    return result;
  }
  int s = 0;
  for (int i = 0; i < m; ++i) {
    for (int parts = std::max(1, s + 1); parts <= m - 1; ++parts) {
      if (auto partition = split_avoiding(system, i, parts)) {
        s = std::max(s, parts - 1);
        result.partitions.push_back(std::move(*partition));
        break;
      }
    }
    if (static_cast<int>(result.partitions.size()) != i + 1) {
      throw InternalError("partition search failed despite pairwise independence");
    }
  }
  result.s = s;
  return result;
}

FpRow tensor_power(const FpRow& form, int d, uint32_t p) {
  if (d < 1) throw InvalidArgument("tensor power order must be >= 1");
  const PrimeField field(p);
  FpRow out{1};
  for (int t = 0; t < d; ++t) {
    FpRow next;
    next.reserve(out.size() * form.size());
    for (Residue a : out) {
      for (Residue b : form) next.push_back(field.mul(a, b));
    }
    out = std::move(next);
  }
  return out;
}

FpRow symmetric_power(const FpRow& form, int d, uint32_t p) {
  if (d < 1) throw InvalidArgument("tensor power order must be >= 1");
  const PrimeField field(p);
  FpRow out;
  for_each_multiset(static_cast<int>(form.size()), d, [&](const std::vector<int>& idx) {
    Residue v = 1;
    for (int i : idx) v = field.mul(v, form[i]);
    out.push_back(v);
  });
  return out;
}

TrueComplexity true_complexity(const LinearSystem& system) {
  const CsComplexity cs = cs_complexity(system);
  if (cs.s > static_cast<int>(system.p())) {
    throw HypothesisViolation("Cauchy-Schwarz complexity " + std::string(cs.bound_only ? "bound " : "") +
                              std::to_string(cs.s) + " exceeds p = " + std::to_string(system.p()));
  }
  const PrimeField field = system.field();
  const int m = system.m();
  std::vector<FpRow> previous;
  for (int d = 0; d < m; ++d) {
    std::vector<FpRow> powers;
    for (const auto& f : system.forms()) powers.push_back(symmetric_power(f, d + 1, system.p()));
    const int cols = static_cast<int>(powers.front().size());
    if (rank_of_rows(field, powers, cols) == m) {
      TrueComplexity result;
      result.d = d;
      if (d >= 1) {
        // Columns of the transposed power matrix are the order-d powers.
        const int pc = static_cast<int>(previous.front().size());
        FpMatrix transposed(pc, m);
        for (int i = 0; i < m; ++i) {
          for (int c = 0; c < pc; ++c) transposed.at(c, i) = previous[i][c];
        }
        auto kernel = nullspace(field, transposed);
        if (kernel.empty()) throw InternalError("order-d powers unexpectedly independent");
        result.dependency = kernel.front();
      }
      return result;
    }
    previous = std::move(powers);
  }
  throw InternalError("tensor powers never became independent");
}

ComplexityReport complexity_report(const LinearSystem& system) {
  ComplexityReport report;
  report.cs = cs_complexity(system);
  report.hypothesis_holds = report.cs.s <= static_cast<int>(system.p());
  if (report.hypothesis_holds) report.true_complexity = true_complexity(system);
  return report;
}

}  // namespace hofa
