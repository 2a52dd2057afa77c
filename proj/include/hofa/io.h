#ifndef HOFA_IO_H_
#define HOFA_IO_H_

#include <json.hpp>
#include <string>
#include <vector>

#include "hofa/errors.h"
#include "hofa/factors.h"
#include "hofa/function_table.h"
#include "hofa/linear_system.h"
#include "hofa/polynomial.h"
#include "hofa/testers.h"

namespace hofa {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct SchemaIssue {
  std::string pointer;  // JSON pointer into the document
  std::string message;
};

// Unreadable or schema-violating input. Carries every issue found.
class MalformedInput : public Error {
 public:
  MalformedInput(std::string source, std::vector<SchemaIssue> issues);
  const std::string& source() const { return source_; }
  const std::vector<SchemaIssue>& issues() const { return issues_; }

 private:
  std::string source_;
  std::vector<SchemaIssue> issues_;
};

// Function tables: {schema_version, p, n, codomain, values}. Field values are
// integers, real values numbers and disk values [re, im] pairs.
Json table_to_json(const FunctionTable& f);
FunctionTable table_from_json(const Json& j, const std::string& source = "<json>");

// Polynomials: {p, n, terms: [{exps, coeff}]}, or {p, n, text}.
Json polynomial_to_json(const Polynomial& poly);
Polynomial polynomial_from_json(const Json& j, const std::string& source = "<json>");

// Systems: {p, k, forms, flag?}.
Json system_to_json(const LinearSystem& system);
Json flagged_to_json(const FlaggedSystem& flagged);
LinearSystem system_from_json(const Json& j, const std::string& source = "<json>");
// Requires the flag field.
FlaggedSystem flagged_from_json(const Json& j, const std::string& source = "<json>");

// Factors: {p, n, polynomials: [...]}.
std::vector<Polynomial> factor_from_json(const Json& j, const std::string& source = "<json>");

// Tester specs: {p, q, support: [{points, prob}] | pattern: system,
// decision_table, thresholds: {minus, plus}, epsilon?, delta?,
// symmetrizations?}.
Json tester_to_json(const TesterSpec& spec);
TesterSpec tester_from_json(const Json& j, const std::string& source = "<json>");

// Reads and parses a file; syntax errors report the byte offset.
Json read_json_file(const std::string& path);
std::string read_file(const std::string& path);
// Canonical text: two-space indent and a trailing newline.
std::string dump_json(const Json& j);
void write_file(const std::string& path, const std::string& contents);

FunctionTable read_function_table(const std::string& path);
void write_function_table(const std::string& path, const FunctionTable& f);

// "index,re,im" rows.
std::string values_csv(const std::vector<std::complex<double>>& values);

std::string sha256_hex(const std::string& bytes);

}  // namespace hofa

#endif  // HOFA_IO_H_
