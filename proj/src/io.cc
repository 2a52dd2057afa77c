#include "hofa/io.h"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace hofa {
namespace {

constexpr size_t kMaxReportedIssues = 20;
constexpr uint64_t kMaxTablePoints = uint64_t{1} << 28;

std::string join_issues(const std::string& source, const std::vector<SchemaIssue>& issues) {
  std::string msg = source + ": malformed input";
  for (const auto& i : issues) msg += "\n  " + (i.pointer.empty() ? std::string("/") : i.pointer) + ": " + i.message;
  return msg;
}

// Collects schema issues; fields are fetched with type checks and a JSON
// pointer for every complaint.
class Checker {
 public:
  explicit Checker(std::string source) : source_(std::move(source)) {}

  void fail(const std::string& pointer, const std::string& message) {
    if (issues_.size() < kMaxReportedIssues) issues_.push_back({pointer, message});
    ++total_;
  }
  bool ok() const { return total_ == 0; }
  void finish() const {
    if (!ok()) throw MalformedInput(source_, issues_);
  }

  const Json* field(const Json& obj, const std::string& ptr, const char* name, bool required = true) {
    if (!obj.is_object()) {
      fail(ptr, "expected an object");
      return nullptr;
    }
    auto it = obj.find(name);
    if (it == obj.end()) {
      if (required) fail(ptr + "/" + name, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<uint64_t> unsigned_at(const Json& v, const std::string& ptr, uint64_t limit) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0)) {
      fail(ptr, "expected a nonnegative integer");
      return std::nullopt;
    }
    const uint64_t x = v.get<uint64_t>();
    if (x > limit) {
      fail(ptr, "value " + std::to_string(x) + " exceeds " + std::to_string(limit));
      return std::nullopt;
    }
    return x;
  }

  std::optional<uint64_t> unsigned_field(const Json& obj, const std::string& ptr, const char* name, uint64_t limit,
                                         bool required = true) {
    const Json* v = field(obj, ptr, name, required);
    if (!v) return std::nullopt;
    return unsigned_at(*v, ptr + "/" + name, limit);
  }

  std::optional<double> number_field(const Json& obj, const std::string& ptr, const char* name, bool required) {
    const Json* v = field(obj, ptr, name, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(ptr + "/" + name, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<uint32_t> prime_field(const Json& obj, const std::string& ptr) {
    const auto p = unsigned_field(obj, ptr, "p", kMaxPrime);
    if (p && !is_prime(static_cast<uint32_t>(*p))) {
      fail(ptr + "/p", std::to_string(*p) + " is not a prime");
      return std::nullopt;
    }
    if (!p) return std::nullopt;
    return static_cast<uint32_t>(*p);
  }

  std::optional<FpRow> row_at(const Json& v, const std::string& ptr, uint32_t p, std::optional<size_t> length) {
    if (!v.is_array()) {
      fail(ptr, "expected an array of residues");
      return std::nullopt;
    }
    if (length && v.size() != *length) {
      fail(ptr, "expected " + std::to_string(*length) + " entries, found " + std::to_string(v.size()));
      return std::nullopt;
    }
    FpRow row;
    bool good = true;
    for (size_t i = 0; i < v.size(); ++i) {
      const auto c = unsigned_at(v[i], ptr + "/" + std::to_string(i), p - 1);
      if (c) {
        row.push_back(static_cast<Residue>(*c));
      } else {
        good = false;
      }
    }
    if (!good) return std::nullopt;
    return row;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<SchemaIssue> issues_;
  size_t total_ = 0;
};

void check_version(Checker& c, const Json& j) {
  const Json* v = c.field(j, "", "schema_version");
  if (v && !(v->is_number_integer() && v->get<int64_t>() == kSchemaVersion)) {
    c.fail("/schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

Json row_json(const FpRow& row) {
  Json a = Json::array();
  for (Residue r : row) a.push_back(r);
  return a;
}

std::optional<Polynomial> polynomial_at(Checker& c, const Json& j, const std::string& ptr,
                                        std::optional<uint32_t> want_p = std::nullopt,
                                        std::optional<int> want_n = std::nullopt) {
  const auto p = c.prime_field(j, ptr);
  const auto n = c.unsigned_field(j, ptr, "n", 64);
  if (!p || !n) return std::nullopt;
  if (want_p && *p != *want_p) c.fail(ptr + "/p", "prime differs from the enclosing document");
  if (want_n && static_cast<int>(*n) != *want_n) c.fail(ptr + "/n", "dimension differs from the enclosing document");
  const Json* text = c.field(j, ptr, "text", false);
  const Json* terms = c.field(j, ptr, "terms", false);
  if (text && terms) {
    c.fail(ptr, "give either text or terms, not both");
    return std::nullopt;
  }
  if (text) {
    if (!text->is_string()) {
      c.fail(ptr + "/text", "expected a string");
      return std::nullopt;
    }
    try {
      return parse_polynomial(text->get<std::string>(), *p, static_cast<int>(*n));
    } catch (const Error& e) {
      c.fail(ptr + "/text", e.what());
      return std::nullopt;
    }
  }
  if (!terms) {
    c.fail(ptr + "/terms", "missing required field");
    return std::nullopt;
  }
  if (!terms->is_array()) {
    c.fail(ptr + "/terms", "expected an array");
    return std::nullopt;
  }
  Polynomial poly(*p, static_cast<int>(*n));
  bool good = true;
  for (size_t i = 0; i < terms->size(); ++i) {
    const std::string tp = ptr + "/terms/" + std::to_string(i);
    const Json* exps = c.field((*terms)[i], tp, "exps");
    const auto coeff = c.unsigned_field((*terms)[i], tp, "coeff", *p - 1);
    if (!exps || !coeff) {
      good = false;
      continue;
    }
    const auto row = c.row_at(*exps, tp + "/exps", *p, static_cast<size_t>(*n));
    if (!row) {
      good = false;
      continue;
    }
    poly.add_term(Exponents(row->begin(), row->end()), static_cast<Residue>(*coeff));
  }
  if (!good) return std::nullopt;
  return poly;
}

std::optional<LinearSystem> system_at(Checker& c, const Json& j, const std::string& ptr,
                                      std::optional<uint32_t> want_p = std::nullopt) {
  const auto p = c.prime_field(j, ptr);
  const auto k = c.unsigned_field(j, ptr, "k", 64);
  const Json* forms = c.field(j, ptr, "forms");
  if (!p || !k || !forms) return std::nullopt;
  if (want_p && *p != *want_p) c.fail(ptr + "/p", "prime differs from the enclosing document");
  if (!forms->is_array() || forms->empty()) {
    c.fail(ptr + "/forms", "expected a nonempty array of forms");
    return std::nullopt;
  }
  std::vector<FpRow> rows;
  bool good = true;
  for (size_t i = 0; i < forms->size(); ++i) {
    auto row = c.row_at((*forms)[i], ptr + "/forms/" + std::to_string(i), *p, static_cast<size_t>(*k));
    if (row) {
      rows.push_back(*row);
    } else {
      good = false;
    }
  }
  if (!good) return std::nullopt;
  try {
    return LinearSystem(*p, static_cast<int>(*k), std::move(rows));
  } catch (const InvalidArgument& e) {
    c.fail(ptr + "/forms", e.what());
    return std::nullopt;
  }
}

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

MalformedInput::MalformedInput(std::string source, std::vector<SchemaIssue> issues)
    : Error(join_issues(source, issues)), source_(std::move(source)), issues_(std::move(issues)) {}

Json table_to_json(const FunctionTable& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["p"] = f.p();
  j["n"] = f.n();
  j["codomain"] = codomain_name(f.codomain());
  Json values = Json::array();
  switch (f.codomain()) {
    case Codomain::kField:
      for (Residue r : f.residues()) values.push_back(r);
      break;
    case Codomain::kReal:
      for (const auto& z : f.values()) values.push_back(z.real());
      break;
    case Codomain::kDisk:
      for (const auto& z : f.values()) values.push_back(complex_json(z));
      break;
  }
  j["values"] = std::move(values);
  return j;
}

FunctionTable table_from_json(const Json& j, const std::string& source) {
  Checker c(source);
  check_version(c, j);
  const auto p = c.prime_field(j, "");
  const auto n = c.unsigned_field(j, "", "n", 64);
  const Json* cod = c.field(j, "", "codomain");
  const Json* values = c.field(j, "", "values");
  std::optional<Codomain> codomain;
  if (cod) {
    try {
      codomain = parse_codomain(cod->is_string() ? cod->get<std::string>() : std::string("?"));
    } catch (const InvalidArgument&) {
      c.fail("/codomain", "expected one of \"field\", \"disk\", \"real\"");
    }
  }
  uint64_t size = 0;
  if (p && n) {
    try {
      size = checked_power(*p, *n, kMaxTablePoints);
    } catch (const BudgetExceeded&) {
      c.fail("/n", "table would have more than 2^28 entries");
    }
  }
  if (values && !values->is_array()) c.fail("/values", "expected an array");
  c.finish();
  if (!codomain || size == 0) throw MalformedInput(source, {{"", "incomplete table"}});
  if (values->size() != size) {
    c.fail("/values", "expected p^n = " + std::to_string(size) + " entries, found " + std::to_string(values->size()));
    c.finish();
  }
  std::vector<Residue> residues;
  std::vector<std::complex<double>> disk;
  std::vector<double> real;
  for (uint64_t x = 0; x < size; ++x) {
    const Json& v = (*values)[x];
    const std::string ptr = "/values/" + std::to_string(x);
    switch (*codomain) {
      case Codomain::kField: {
        const auto r = c.unsigned_at(v, ptr, *p - 1);
        residues.push_back(r ? static_cast<Residue>(*r) : 0);
        break;
      }
      case Codomain::kReal:
        if (!v.is_number()) {
          c.fail(ptr, "expected a number");
          real.push_back(0);
        } else if (const double r = v.get<double>(); !(r >= -1 && r <= 1)) {
          c.fail(ptr, "real value outside [-1, 1]");
          real.push_back(0);
        } else {
          real.push_back(r);
        }
        break;
      case Codomain::kDisk:
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
          c.fail(ptr, "expected [re, im]");
          disk.push_back(0);
        } else {
          const std::complex<double> z(v[0].get<double>(), v[1].get<double>());
          if (!(std::abs(z) <= 1 + kDiskSlack)) {
            c.fail(ptr, "value outside the unit disk (|z| = " + std::to_string(std::abs(z)) + ")");
            disk.push_back(0);
          } else {
            disk.push_back(z);
          }
        }
        break;
    }
  }
  c.finish();
  const int nn = static_cast<int>(*n);
  switch (*codomain) {
    case Codomain::kField:
      return FunctionTable::field_valued(*p, nn, std::move(residues));
    case Codomain::kReal:
      return FunctionTable::real_valued(*p, nn, std::move(real));
    case Codomain::kDisk:
      break;
  }
  return FunctionTable::disk_valued(*p, nn, std::move(disk));
}

Json polynomial_to_json(const Polynomial& poly) {
  Json j;
  j["p"] = poly.p();
  j["n"] = poly.n();
  Json terms = Json::array();
  for (const auto& [e, c] : poly.terms()) {
    Json exps = Json::array();
    for (auto v : e) exps.push_back(static_cast<int>(v));
    terms.push_back({{"exps", exps}, {"coeff", c}});
  }
  j["terms"] = std::move(terms);
  j["text"] = to_text(poly);
  return j;
}

Polynomial polynomial_from_json(const Json& j, const std::string& source) {
  Checker c(source);
  Json copy = j;
  // The writer emits both forms; the terms are authoritative.
  if (copy.is_object() && copy.contains("terms") && copy.contains("text")) copy.erase("text");
  auto poly = polynomial_at(c, copy, "");
  c.finish();
  return *poly;
}

Json system_to_json(const LinearSystem& system) {
  Json j;
  j["p"] = system.p();
  j["k"] = system.k();
  Json forms = Json::array();
  for (const auto& f : system.forms()) forms.push_back(row_json(f));
  j["forms"] = std::move(forms);
  return j;
}

Json flagged_to_json(const FlaggedSystem& flagged) {
  Json j = system_to_json(flagged.system());
  j["flag"] = row_json(flagged.flag());
  return j;
}

LinearSystem system_from_json(const Json& j, const std::string& source) {
  Checker c(source);
  auto system = system_at(c, j, "");
  c.finish();
  return *system;
}

FlaggedSystem flagged_from_json(const Json& j, const std::string& source) {
  Checker c(source);
  auto system = system_at(c, j, "");
  const Json* flag = c.field(j, "", "flag");
  std::optional<FpRow> row;
  if (system && flag) row = c.row_at(*flag, "/flag", system->p(), static_cast<size_t>(system->k()));
  c.finish();
  try {
    return FlaggedSystem(*system, *row);
  } catch (const InvalidArgument& e) {
    throw MalformedInput(source, {{"/flag", e.what()}});
  }
}

std::vector<Polynomial> factor_from_json(const Json& j, const std::string& source) {
  Checker c(source);
  const auto p = c.prime_field(j, "");
  const auto n = c.unsigned_field(j, "", "n", 64);
  const Json* polys = c.field(j, "", "polynomials");
  if (polys && !polys->is_array()) c.fail("/polynomials", "expected an array");
  c.finish();
  std::vector<Polynomial> out;
  for (size_t i = 0; i < polys->size(); ++i) {
    Json item = (*polys)[i];
    if (item.is_string()) item = Json{{"p", *p}, {"n", *n}, {"text", item}};
    if (item.is_object() && item.contains("terms") && item.contains("text")) item.erase("text");
    auto poly = polynomial_at(c, item, "/polynomials/" + std::to_string(i), *p, static_cast<int>(*n));
    if (poly) out.push_back(*poly);
  }
  c.finish();
  return out;
}

Json tester_to_json(const TesterSpec& spec) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["p"] = spec.p;
  j["q"] = spec.q;
  if (const auto* ex = std::get_if<ExplicitSupport>(&spec.sampler)) {
    Json support = Json::array();
    for (const auto& s : ex->support) {
      Json pts = Json::array();
      for (const auto& v : s.points) pts.push_back(row_json(v.coords));
      support.push_back({{"points", pts}, {"prob", s.prob}});
    }
    j["support"] = std::move(support);
  } else if (const auto* form = std::get_if<FormPattern>(&spec.sampler)) {
    j["pattern"] = system_to_json(form->system);
  } else {
    throw InvalidArgument("black-box testers cannot be serialized");
  }
  Json table = Json::array();
  for (uint8_t v : spec.decision) table.push_back(v);
  j["decision_table"] = std::move(table);
  j["thresholds"] = {{"minus", spec.theta_minus}, {"plus", spec.theta_plus}};
  j["epsilon"] = spec.epsilon;
  j["delta"] = spec.delta;
  j["symmetrizations"] = spec.symmetrizations;
  return j;
}

TesterSpec tester_from_json(const Json& j, const std::string& source) {
  Checker c(source);
  TesterSpec spec;
  const auto p = c.prime_field(j, "");
  const auto q = c.unsigned_field(j, "", "q", 64);
  const Json* support = c.field(j, "", "support", false);
  const Json* pattern = c.field(j, "", "pattern", false);
  const Json* table = c.field(j, "", "decision_table");
  if (!p || !q) c.finish();
  if (!p || !q) throw MalformedInput(source, {{"", "incomplete tester"}});
  spec.p = *p;
  spec.q = static_cast<int>(*q);
  if (support && pattern) c.fail("", "give either support or pattern, not both");
  if (!support && !pattern) c.fail("/support", "missing required field (or pattern)");
  if (support) {
    ExplicitSupport ex;
    if (!support->is_array()) {
      c.fail("/support", "expected an array");
    } else {
      for (size_t i = 0; i < support->size(); ++i) {
        const std::string sp = "/support/" + std::to_string(i);
        const Json* pts = c.field((*support)[i], sp, "points");
        const auto prob = c.number_field((*support)[i], sp, "prob", true);
        if (!pts || !prob) continue;
        if (!pts->is_array()) {
          c.fail(sp + "/points", "expected an array of points");
          continue;
        }
        SupportPoint point;
        point.prob = *prob;
        for (size_t t = 0; t < pts->size(); ++t) {
          auto row = c.row_at((*pts)[t], sp + "/points/" + std::to_string(t), *p, std::nullopt);
          if (row) point.points.emplace_back(std::move(*row));
        }
        ex.support.push_back(std::move(point));
      }
    }
    spec.sampler = std::move(ex);
  } else if (pattern) {
    auto system = system_at(c, *pattern, "/pattern", *p);
    if (system) spec.sampler = FormPattern{*system};
  }
  if (table) {
    if (!table->is_array()) {
      c.fail("/decision_table", "expected an array");
    } else {
      for (size_t i = 0; i < table->size(); ++i) {
        const auto v = c.unsigned_at((*table)[i], "/decision_table/" + std::to_string(i), 1);
        spec.decision.push_back(v ? static_cast<uint8_t>(*v) : 0);
      }
    }
  }
  if (const Json* th = c.field(j, "", "thresholds", false)) {
    if (auto v = c.number_field(*th, "/thresholds", "minus", true)) spec.theta_minus = *v;
    if (auto v = c.number_field(*th, "/thresholds", "plus", true)) spec.theta_plus = *v;
  }
  if (auto v = c.number_field(j, "", "epsilon", false)) spec.epsilon = *v;
  if (auto v = c.number_field(j, "", "delta", false)) spec.delta = *v;
  if (auto v = c.unsigned_field(j, "", "symmetrizations", 64, false)) spec.symmetrizations = static_cast<int>(*v);
  c.finish();
  return spec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput(path, {{"", "cannot open file"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedInput(path, {{"", "syntax error at byte " + std::to_string(e.byte) + ": " + e.what()}});
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << contents;
  if (!out) throw InvalidArgument("write to " + path + " failed");
}

FunctionTable read_function_table(const std::string& path) { return table_from_json(read_json_file(path), path); }

void write_function_table(const std::string& path, const FunctionTable& f) {
  write_file(path, dump_json(table_to_json(f)));
}

std::string values_csv(const std::vector<std::complex<double>>& values) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "index,re,im\n";
  for (size_t i = 0; i < values.size(); ++i) out << i << "," << values[i].real() << "," << values[i].imag() << "\n";
  return out.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw InternalError("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

}  // namespace hofa
