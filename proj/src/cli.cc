#include "hofa/cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "hofa/analysis.h"
#include "hofa/complexity.h"
#include "hofa/errors.h"
#include "hofa/factors.h"
#include "hofa/io.h"
#include "hofa/parallel.h"
#include "hofa/rank.h"
#include "hofa/structure.h"
#include "hofa/testers.h"

namespace hofa {
namespace {

// Rounding slack quoted for exact enumerations.
constexpr double kExactTolerance = 1e-9;

struct Config {
  uint64_t seed = 0;
  uint64_t budget = kDefaultBudget;
  std::optional<uint64_t> mc;
  bool exact = false;
  std::string out;
  std::string format = "json";
  int threads = 0;
};

// Accumulates a report: inputs with hashes, the mode actually used and the
// result object.
class Report {
 public:
  Report(std::string command, const Config& config) : command_(std::move(command)), config_(config) {}

  Json read_input(const std::string& path) {
    const std::string text = read_file(path);
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw MalformedInput(path, {{"", "syntax error at byte " + std::to_string(e.byte) + ": " + e.what()}});
    }
  }
  FunctionTable table(const std::string& path) { return table_from_json(read_input(path), path); }
  LinearSystem system(const std::string& path) { return system_from_json(read_input(path), path); }
  FlaggedSystem flagged(const std::string& path) { return flagged_from_json(read_input(path), path); }
  TesterSpec tester(const std::string& path) { return tester_from_json(read_input(path), path); }

  // Runs `body` exactly; falls back to sampling when the budget is exceeded
  // and --mc was given.
  template <typename T>
  T with_mode(const std::function<T(const Mode&)>& body) {
    try {
      const T r = body(Exact{config_.budget});
      note_exact();
      return r;
    } catch (const BudgetExceeded&) {
      if (!config_.mc) throw;
      const T r = body(MonteCarlo{*config_.mc, config_.seed});
      note_mc(*config_.mc);
      return r;
    }
  }
  void note_exact() {
    mode_ = "exact";
    tolerance_ = kExactTolerance;
  }
  void note_mc(uint64_t samples) {
    mode_ = "mc";
    tolerance_ = 4.0 / std::sqrt(static_cast<double>(samples));
  }
  // Integer-valued outputs.
  void note_discrete() {
    mode_ = "exact";
    tolerance_ = 0;
  }

  Json result = Json::object();
  std::vector<std::complex<double>> csv_values;

  Json document() const {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command_;
    j["seed"] = config_.seed;
    j["budget"] = config_.budget;
    j["mode"] = mode_;
    j["tolerance"] = tolerance_;
    j["inputs"] = inputs_;
    j["result"] = result;
    return j;
  }

  std::string render() const {
    if (config_.format == "json") return dump_json(document());
    if (!csv_values.empty()) return values_csv(csv_values);
    std::ostringstream out;
    out.precision(17);
    out << "key,value\n";
    out << "command," << command_ << "\nseed," << config_.seed << "\nmode," << mode_ << "\ntolerance," << tolerance_
        << "\n";
    for (const auto& [k, v] : result.items()) {
      if (v.is_primitive()) out << k << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
    return out.str();
  }

 private:
  std::string command_;
  const Config& config_;
  std::string mode_ = "exact";
  double tolerance_ = kExactTolerance;
  Json inputs_ = Json::array();
};

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json complex_array(const std::vector<std::complex<double>>& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

Json estimate_json(const Estimate& e) {
  return {{"value", complex_json(e.value)}, {"exact", e.exact}, {"std_error", e.std_error}, {"samples", e.samples}};
}

Json row_json(const FpRow& row) {
  Json a = Json::array();
  for (Residue r : row) a.push_back(r);
  return a;
}

Json partition_json(const Partition& part) {
  Json a = Json::array();
  for (const auto& p : part) a.push_back(p);
  return a;
}

std::vector<Residue> parse_residues(const std::string& text) {
  std::vector<Residue> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<Residue>(v));
    } catch (const std::exception&) {
      throw InvalidArgument("expected comma-separated residues, got '" + text + "'");
    }
  }
  return out;
}

Json rank_json(const RankReport& r) {
  Json j{{"kind", rank_kind_name(r.kind)}, {"lower", r.lower}, {"r_max", r.r_max}, {"decided", r.decided()}};
  j["upper"] = r.upper ? Json(*r.upper) : Json(nullptr);
  if (r.certificate) {
    Json q = Json::array();
    for (const auto& poly : r.certificate->q) q.push_back(to_text(poly));
    j["certificate"] = {{"alpha", r.certificate->alpha}, {"q", q}};
  }
  return j;
}

Json complexity_json(const ComplexityReport& r) {
  Json j;
  j["cs_complexity"] = r.cs.s;
  j["cs_bound_only"] = r.cs.bound_only;
  j["true_complexity"] = r.true_complexity ? Json(r.true_complexity->d) : Json(nullptr);
  if (r.true_complexity && r.true_complexity->dependency) j["dependency"] = row_json(*r.true_complexity->dependency);
  j["hypothesis_holds"] = r.hypothesis_holds;
  return j;
}

struct CommandSet {
  CLI::App* app;
  std::function<void(Report&)> body;
};

int emit_error(std::ostream& err, int code, const std::string& kind, const std::string& message, Json extra = {}) {
  Json j;
  j["error"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) j[k] = v;
  }
  err << j.dump() << "\n";
  return code;
}

uint64_t default_budget() {
  if (const char* env = std::getenv("HOFA_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultBudget;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config config;
  config.budget = default_budget();
  CLI::App app{"Higher-order Fourier analysis over finite fields", "hofa"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", config.seed, "Random seed (recorded in every report)");
  app.add_option("--budget", config.budget, "Largest exact enumeration (points)")->check(CLI::PositiveNumber);
  auto* mc = app.add_option("--mc", config.mc, "Monte Carlo samples used when exact enumeration exceeds the budget")
                 ->check(CLI::PositiveNumber);
  app.add_flag("--exact", config.exact, "Never fall back to sampling")->excludes(mc);
  app.add_option("--out", config.out, "Report path (default stdout)");
  app.add_option("--format", config.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", config.threads, "Worker threads (default $HOFA_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  std::vector<CommandSet> commands;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    commands.push_back({sub, nullptr});
    return commands.size() - 1;
  };

  // table: generate function tables.
  std::string poly_text, random_kind;
  uint32_t p_opt = 2;
  int n_opt = 1;
  {
    const size_t id = add(&app, "table", "Write a function table from a polynomial or a seeded random draw");
    CLI::App* c = commands[id].app;
    auto* poly = c->add_option("--poly", poly_text, "Polynomial text, e.g. x1*x2 + 2*x3");
    c->add_option("--random", random_kind, "Random table codomain")
        ->check(CLI::IsMember({"field", "disk", "unit", "real"}))
        ->excludes(poly);
    c->add_option("--p", p_opt)->required();
    c->add_option("--n", n_opt)->required();
    commands[id].body = [&](Report& r) {
      r.note_discrete();
      if (!poly_text.empty()) {
        r.result = table_to_json(polynomial_table(parse_polynomial(poly_text, p_opt, n_opt), config.budget));
      } else if (random_kind == "field") {
        r.result = table_to_json(random_field_table(p_opt, n_opt, config.seed));
      } else if (random_kind == "disk") {
        r.result = table_to_json(random_disk_table(p_opt, n_opt, config.seed));
      } else if (random_kind == "unit") {
        r.result = table_to_json(random_unit_table(p_opt, n_opt, config.seed));
      } else if (random_kind == "real") {
        r.result = table_to_json(random_real_table(p_opt, n_opt, config.seed));
      } else {
        throw InvalidArgument("give --poly or --random");
      }
    };
  }

  // gowers
  std::string table_path;
  int k_opt = 2;
  {
    const size_t id = add(&app, "gowers", "Gowers uniformity norm of a table");
    CLI::App* c = commands[id].app;
    c->add_option("--table", table_path)->required();
    c->add_option("--k", k_opt, "Norm order")->required();
    commands[id].body = [&](Report& r) {
      const FunctionTable f = r.table(table_path);
      const GowersResult g =
          r.with_mode<GowersResult>([&](const Mode& m) { return gowers_norm(f, k_opt, m); });
      r.result = {{"k", k_opt},
                  {"norm", g.norm},
                  {"power", complex_json(g.power)},
                  {"exact", g.exact},
                  {"std_error", g.std_error},
                  {"samples", g.samples}};
    };
  }

  // average
  std::string system_path, beta_text;
  bool flagged_opt = false, boundary_opt = false;
  {
    const size_t id = add(&app, "average", "Linear-form average t_L(f), flagged averages and boundary functions");
    CLI::App* c = commands[id].app;
    c->add_option("--system", system_path)->required();
    c->add_option("--table", table_path)->required();
    auto* beta = c->add_option("--beta", beta_text, "Coefficients beta_i (field-valued tables)");
    auto* flagged = c->add_flag("--flagged", flagged_opt, "x -> E[prod f(L_i(X)) | flag(X) = x]");
    c->add_flag("--boundary", boundary_opt, "Boundary function of the system")->excludes(flagged)->excludes(beta);
    flagged->excludes(beta);
    commands[id].body = [&](Report& r) {
      const FunctionTable f = r.table(table_path);
      if (flagged_opt) {
        const FlaggedSystem fs = r.flagged(system_path);
        const FunctionTable avg = flagged_average(f, fs, config.budget);
        r.note_exact();
        r.result = table_to_json(avg);
        r.csv_values = avg.values();
        return;
      }
      const LinearSystem system = r.system(system_path);
      if (boundary_opt) {
        const auto b = boundary_function(f, system, config.budget);
        r.note_exact();
        r.result = {{"boundary", complex_array(b)}};
        r.csv_values = b;
        return;
      }
      Payload payload = Plain{f};
      if (!beta_text.empty()) payload = Coefficients{f, parse_residues(beta_text)};
      const Estimate e =
          r.with_mode<Estimate>([&](const Mode& m) { return linear_form_average(system, payload, m); });
      r.result = estimate_json(e);
    };
  }

  // system
  std::string other_path;
  bool true_opt = false, cs_opt = false, components_opt = false, homogeneous_opt = false;
  std::string iso_path, product_path;
  {
    const size_t id = add(&app, "system", "Complexity, isomorphism, components and flagged products");
    CLI::App* c = commands[id].app;
    c->add_option("--system", system_path)->required();
    c->add_flag("--true-complexity", true_opt);
    c->add_flag("--cs-complexity", cs_opt);
    c->add_flag("--components", components_opt);
    c->add_flag("--homogeneous", homogeneous_opt);
    c->add_option("--isomorphic", iso_path, "Second system to compare with");
    c->add_option("--product", product_path, "Second flagged system to glue with");
    commands[id].body = [&](Report& r) {
      r.note_discrete();
      const bool all = !true_opt && !cs_opt && !components_opt && !homogeneous_opt && iso_path.empty() &&
                       product_path.empty();
      if (!product_path.empty()) {
        const FlaggedSystem a = r.flagged(system_path);
        const FlaggedSystem b = r.flagged(product_path);
        const FlaggedProduct prod = flagged_product(a, b);
        r.result["product"] = flagged_to_json(prod.product);
        r.result["from_first"] = prod.from_first;
        r.result["from_second"] = prod.from_second;
        return;
      }
      const LinearSystem system = r.system(system_path);
      if (all) {
        r.result = complexity_json(complexity_report(system));
      }
      if (true_opt) {
        const TrueComplexity t = true_complexity(system);
        r.result["true_complexity"] = t.d;
        if (t.dependency) r.result["dependency"] = row_json(*t.dependency);
      }
      if (cs_opt) {
        const CsComplexity cs = cs_complexity(system);
        r.result["cs_complexity"] = cs.s;
        r.result["cs_bound_only"] = cs.bound_only;
      }
      if (components_opt || all) {
        r.result["components"] = partition_json(connected_components(system));
        r.result["connected"] = is_connected(system);
      }
      if (homogeneous_opt || all) r.result["homogeneous"] = is_homogeneous_system(system);
      if (!iso_path.empty()) {
        const IsomorphismResult iso = are_isomorphic(system, r.system(iso_path));
        r.result["isomorphic"] = iso.decision == Decision::kYes   ? Json(true)
                                 : iso.decision == Decision::kNo ? Json(false)
                                                                 : Json("undecided");
        if (iso.decision == Decision::kYes) r.result["bijection"] = iso.bijection;
      }
    };
  }

  // fourier
  {
    const size_t id = add(&app, "fourier", "Fourier spectrum and linear bias");
    CLI::App* c = commands[id].app;
    c->add_option("--table", table_path)->required();
    commands[id].body = [&](Report& r) {
      const FunctionTable f = r.table(table_path);
      const SpectrumTable s = fourier_transform(f, config.budget);
      r.note_exact();
      r.result = {{"p", s.p}, {"n", s.n}, {"linear_bias", linear_bias(s)}, {"coefficients", complex_array(s.coefficients)}};
      r.csv_values = s.coefficients;
    };
  }

  // decompose
  int degree_opt = 1, max_rounds = 64;
  double delta_opt = 0.25;
  bool homogeneous_family = false;
  {
    const size_t id = add(&app, "decompose", "Energy-increment decomposition f = E(f|B) + residual");
    CLI::App* c = commands[id].app;
    c->add_option("--table", table_path)->required();
    c->add_option("--degree", degree_opt)->required();
    c->add_option("--delta", delta_opt)->required();
    c->add_option("--max-rounds", max_rounds);
    c->add_flag("--homogeneous", homogeneous_family, "Only homogeneous polynomials refine the factor");
    commands[id].body = [&](Report& r) {
      const FunctionTable f = r.table(table_path);
      DecomposeOptions opts;
      opts.homogeneous = homogeneous_family;
      opts.max_rounds = max_rounds;
      opts.budget = config.budget;
      const Decomposition d = decompose(f, degree_opt, delta_opt, opts);
      r.note_exact();
      Json polys = Json::array();
      for (const auto& poly : d.factor.polynomials()) polys.push_back(to_text(poly));
      r.result = {{"rounds", d.rounds},
                  {"achieved_norm", d.achieved_norm},
                  {"complexity", d.factor.complexity()},
                  {"flagged", d.target_missed},
                  {"atoms", d.factor.atom_count()},
                  {"polynomials", polys},
                  {"norm_history", d.norm_history}};
      if (d.rank) r.result["rank"] = rank_json(*d.rank);
    };
  }

  // rank
  std::string factor_path;
  int r_max = 2;
  {
    const size_t id = add(&app, "rank", "Rank of a polynomial or of a set of polynomials");
    CLI::App* c = commands[id].app;
    auto* poly = c->add_option("--poly", poly_text);
    c->add_option("--factor", factor_path, "Factor JSON {p, n, polynomials}")->excludes(poly);
    c->add_option("--p", p_opt);
    c->add_option("--n", n_opt);
    c->add_option("--r-max", r_max);
    commands[id].body = [&](Report& r) {
      r.note_discrete();
      std::vector<Polynomial> polys;
      if (!factor_path.empty()) {
        polys = factor_from_json(r.read_input(factor_path), factor_path);
      } else if (!poly_text.empty()) {
        polys.push_back(parse_polynomial(poly_text, p_opt, n_opt));
      } else {
        throw InvalidArgument("give --poly or --factor");
      }
      r.result = rank_json(polys.size() == 1 ? rank(polys[0], r_max) : rank(polys, r_max));
    };
  }

  // test
  std::string spec_path;
  uint64_t samples_opt = 1000, trials_opt = 1000;
  double threshold_opt = 0.5;
  bool exact_acc = false;
  {
    CLI::App* t = app.add_subcommand("test", "Property testers");
    t->require_subcommand(1);
    const size_t u = add(t, "uniformity", "The U^{d+1} test on a field-valued table");
    commands[u].app->add_option("--table", table_path)->required();
    commands[u].app->add_option("--degree", degree_opt)->required();
    commands[u].app->add_option("--samples", samples_opt);
    commands[u].app->add_option("--threshold", threshold_opt);
    commands[u].body = [&](Report& r) {
      const FunctionTable f = r.table(table_path);
      const UniformityResult res = uniformity_test(f, degree_opt, samples_opt, config.seed, threshold_opt);
      r.note_mc(samples_opt);
      r.result = estimate_json(res.estimate);
      r.result["threshold"] = res.threshold;
      r.result["accept"] = res.accept;
      r.result["queries"] = res.queries;
    };
    const size_t g = add(t, "generic", "Run a tester spec on a table");
    commands[g].app->add_option("--spec", spec_path)->required();
    commands[g].app->add_option("--table", table_path)->required();
    commands[g].app->add_option("--trials", trials_opt);
    commands[g].app->add_flag("--exact-acceptance", exact_acc, "Also enumerate the acceptance probability");
    commands[g].body = [&](Report& r) {
      const TesterSpec spec = r.tester(spec_path);
      const FunctionTable f = r.table(table_path);
      const TesterRun run = run_tester(spec, f, trials_opt, config.seed);
      r.note_mc(trials_opt);
      r.result = estimate_json(run.acceptance);
      r.result["accept"] = run.accept;
      r.result["reject"] = run.reject;
      if (exact_acc) r.result["exact_acceptance"] = exact_acceptance(spec, f, config.budget);
    };
    const size_t s = add(t, "symmetrize", "Compose a tester with a uniform affine map");
    commands[s].app->add_option("--spec", spec_path)->required();
    commands[s].body = [&](Report& r) {
      r.note_discrete();
      r.result = tester_to_json(symmetrize_tester(r.tester(spec_path)));
    };
    const size_t pr = add(t, "profile", "Linear-form profile of a tester");
    commands[pr].app->add_option("--spec", spec_path)->required();
    commands[pr].app->add_option("--n", n_opt)->required();
    commands[pr].body = [&](Report& r) {
      r.note_exact();
      const LinearFormProfile prof = extract_linear_form_profile(r.tester(spec_path), n_opt);
      Json entries = Json::array();
      for (const auto& e : prof.entries) {
        entries.push_back({{"system", system_to_json(e.system)}, {"weight", e.weight}, {"rank", e.rank}});
      }
      Json weights = Json::array();
      for (const auto& w : prof.decision_weights) weights.push_back({{"beta", w.beta}, {"weight", complex_json(w.weight)}});
      r.result = {{"entries", entries}, {"decision_weights", weights}, {"correction", prof.correction}};
    };
  }

  // interior
  std::vector<std::string> system_paths;
  int trials_int = 50;
  bool allow_disconnected = false;
  {
    const size_t id = add(&app, "interior", "Linear independence of boundary functions");
    CLI::App* c = commands[id].app;
    c->add_option("--system", system_paths, "System file (repeat)")->required();
    c->add_option("--n", n_opt)->required();
    c->add_option("--trials", trials_int);
    c->add_flag("--allow-disconnected", allow_disconnected);
    commands[id].body = [&](Report& r) {
      std::vector<LinearSystem> systems;
      for (const auto& path : system_paths) systems.push_back(r.system(path));
      InteriorOptions opts;
      opts.require_connected = !allow_disconnected;
      opts.budget = config.budget;
      const InteriorResult res = interior_experiment(systems, systems[0].p(), n_opt, trials_int, config.seed, opts);
      r.note_exact();
      r.result = {{"independent", res.independent},
                  {"min_singular_value", res.min_singular_value},
                  {"first_success", res.first_success},
                  {"trials", res.trials},
                  {"gram", res.gram},
                  {"notes", res.notes}};
      if (res.witness) r.result["witness"] = table_to_json(*res.witness);
    };
  }

  // distributional
  int seeds_opt = 200;
  double deviation_opt = 0.1;
  {
    const size_t id = add(&app, "distributional", "Concentration of t*_L for functions sampled from a lift");
    CLI::App* c = commands[id].app;
    c->add_option("--table", table_path, "Real table F with values in [0, 1]")->required();
    c->add_option("--system", system_path)->required();
    c->add_option("--beta", beta_text, "Coefficients (default all 1)");
    c->add_option("--seeds", seeds_opt);
    c->add_option("--threshold", deviation_opt);
    commands[id].body = [&](Report& r) {
      const FunctionTable F = r.table(table_path);
      const LinearSystem system = r.system(system_path);
      const std::vector<Residue> beta =
          beta_text.empty() ? std::vector<Residue>(system.m(), 1) : parse_residues(beta_text);
      const DistributionalFunction gamma = DistributionalFunction::lift(F);
      const ConcentrationResult res =
          concentration_check(gamma, system, beta, seeds_opt, config.seed, deviation_opt, config.budget);
      r.note_exact();
      r.result = {{"expected", complex_json(res.expected)},
                  {"failures", res.failures},
                  {"failure_rate", res.failure_rate},
                  {"deviations", res.deviations}};
    };
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ExtrasError& e) {
    return emit_error(err, kExitUsage, "usage", e.what());
  } catch (const CLI::ParseError& e) {
    bool chosen = false;
    for (const auto& c : commands) chosen = chosen || c.app->parsed();
    if (!chosen) return emit_error(err, kExitUsage, "usage", e.what());
    return emit_error(err, kExitInvalid, "invalid_argument", e.what());
  }

  if (config.threads > 0) set_worker_count(config.threads);
  const CommandSet* chosen = nullptr;
  for (const auto& c : commands) {
    if (c.app->parsed()) chosen = &c;
  }
  if (!chosen) return emit_error(err, kExitUsage, "usage", "no command given");
  std::string name = chosen->app->get_name();
  if (chosen->app->get_parent() != &app) name = chosen->app->get_parent()->get_name() + " " + name;

  try {
    Report report(name, config);
    chosen->body(report);
    const std::string text = report.render();
    if (config.out.empty()) {
      out << text;
    } else {
      write_file(config.out, text);
    }
    return kExitOk;
  } catch (const MalformedInput& e) {
    Json issues = Json::array();
    for (const auto& i : e.issues()) issues.push_back({{"pointer", i.pointer}, {"message", i.message}});
    return emit_error(err, kExitMalformed, "malformed_input", e.what(), {{"source", e.source()}, {"issues", issues}});
  } catch (const BudgetExceeded& e) {
    return emit_error(err, kExitBudget, "budget_exceeded", e.what(),
                      {{"required", e.required()}, {"budget", e.budget()}});
  } catch (const SearchLimitExceeded& e) {
    return emit_error(err, kExitBudget, "search_limit", e.what());
  } catch (const HypothesisViolation& e) {
    return emit_error(err, kExitInvalid, "hypothesis_violation", e.what());
  } catch (const InvalidArgument& e) {
    return emit_error(err, kExitInvalid, "invalid_argument", e.what());
  } catch (const InternalError& e) {
    return emit_error(err, kExitInternal, "internal_error", e.what());
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hofa
