#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "hofa/cli.h"
#include "hofa/io.h"

namespace hofa {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
  Json diagnostic() const { return Json::parse(err); }
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hofa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& contents) {
    const std::string path = (dir_ / name).string();
    write_file(path, contents);
    return path;
  }
  std::string table(const std::string& name, const FunctionTable& f) { return file(name, dump_json(table_to_json(f))); }

  Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST_F(CliTest, TrueComplexityOfFourTermProgression) {
  const std::string sys = file("ap4.json", R"({"p": 5, "k": 2, "forms": [[1,0],[1,1],[1,2],[1,3]]})");
  const Outcome r = cli({"system", "--system", sys, "--true-complexity"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["true_complexity"], 2);
  const Outcome full = cli({"system", "--system", sys});
  EXPECT_EQ(full.report()["result"]["true_complexity"], 2);
  EXPECT_EQ(full.report()["result"]["cs_complexity"], 2);
  EXPECT_EQ(full.report()["result"]["connected"], true);
}

TEST_F(CliTest, GowersOfQuadraticPhaseIsOne) {
  const std::string t = table("q.json", polynomial_table(parse_polynomial("x1*x2 + 2*x3^2 + x1", 3, 3)));
  const Outcome r = cli({"gowers", "--table", t, "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.report();
  EXPECT_NEAR(j["result"]["norm"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(j["mode"], "exact");
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["inputs"][0]["sha256"], sha256_hex(read_file(t)));
}

TEST_F(CliTest, MalformedInputExits65WithPosition) {
  const std::string t = file("bad.json", "{\"schema_version\": 1, \"p\": 5,");
  const Outcome r = cli({"gowers", "--table", t, "--k", "2"});
  EXPECT_EQ(r.code, 65);
  const Json d = r.diagnostic();
  EXPECT_EQ(d["error"], "malformed_input");
  EXPECT_NE(d["message"].get<std::string>().find("byte"), std::string::npos);

  const std::string disk =
      file("disk.json", R"({"schema_version": 1, "p": 2, "n": 1, "codomain": "disk", "values": [[0, 0], [1.5, 0]]})");
  const Outcome r2 = cli({"gowers", "--table", disk, "--k", "2"});
  EXPECT_EQ(r2.code, 65);
  EXPECT_EQ(r2.diagnostic()["issues"][0]["pointer"], "/values/1");
  EXPECT_EQ(cli({"gowers", "--table", (dir_ / "missing.json").string(), "--k", "2"}).code, 65);
}

TEST_F(CliTest, UsageAndValidationCodes) {
  EXPECT_EQ(cli({}).code, 64);
  EXPECT_EQ(cli({"frobnicate"}).code, 64);
  const std::string t = table("f.json", random_field_table(2, 3, 1));
  EXPECT_EQ(cli({"gowers", "--table", t}).code, 2);
  EXPECT_EQ(cli({"gowers", "--table", t, "--k", "0"}).code, 2);
  EXPECT_EQ(cli({"gowers", "--table", t, "--k", "2", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, BudgetExceededAndFallback) {
  const std::string t = table("f.json", random_field_table(3, 3, 1));
  const Outcome over = cli({"gowers", "--table", t, "--k", "3", "--budget", "1000"});
  EXPECT_EQ(over.code, 66);
  EXPECT_EQ(over.diagnostic()["required"], 531441);
  const Outcome mc = cli({"gowers", "--table", t, "--k", "3", "--budget", "1000", "--mc", "4000", "--seed", "9"});
  ASSERT_EQ(mc.code, 0) << mc.err;
  EXPECT_EQ(mc.report()["mode"], "mc");
  EXPECT_NEAR(mc.report()["tolerance"].get<double>(), 4.0 / std::sqrt(4000.0), 1e-15);
  EXPECT_EQ(mc.report()["seed"], 9);
  EXPECT_EQ(cli({"gowers", "--table", t, "--k", "3", "--mc", "10", "--exact"}).code, 2);
}

TEST_F(CliTest, ReportsAreDeterministic) {
  const std::string t = table("f.json", random_field_table(3, 3, 1));
  const std::vector<std::string> args = {"gowers", "--table", t, "--k", "3", "--budget", "1000", "--mc", "500",
                                         "--seed", "4"};
  const Outcome a = cli(args), b = cli(args);
  EXPECT_EQ(a.out, b.out);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  EXPECT_EQ(cli(threaded).out, a.out);
  const std::string out = (dir_ / "report.json").string();
  std::vector<std::string> to_file = args;
  to_file.insert(to_file.end(), {"--out", out});
  EXPECT_EQ(cli(to_file).code, 0);
  EXPECT_EQ(read_file(out), a.out);
}

TEST_F(CliTest, AverageVariants) {
  const std::string sys = file("schur.json", R"({"p": 2, "k": 2, "forms": [[1,0],[0,1],[1,1]], "flag": [1,1]})");
  const std::string t = table("f.json", random_field_table(2, 3, 2));
  const Outcome plain = cli({"average", "--system", sys, "--table", t});
  ASSERT_EQ(plain.code, 0) << plain.err;
  const Outcome beta = cli({"average", "--system", sys, "--table", t, "--beta", "1,1,1"});
  EXPECT_EQ(plain.report()["result"]["value"], beta.report()["result"]["value"]);
  const Outcome flagged = cli({"average", "--system", sys, "--table", t, "--flagged", "--format", "csv"});
  ASSERT_EQ(flagged.code, 0) << flagged.err;
  EXPECT_EQ(flagged.out.substr(0, 12), "index,re,im\n");
  const Outcome boundary = cli({"average", "--system", sys, "--table", t, "--boundary"});
  EXPECT_EQ(boundary.report()["result"]["boundary"].size(), 8u);
  EXPECT_EQ(cli({"average", "--system", sys, "--table", t, "--beta", "1,x"}).code, 2);
}

TEST_F(CliTest, SystemQueries) {
  const std::string ap = file("ap.json", R"({"p": 3, "k": 2, "forms": [[1,0],[1,1],[1,2]], "flag": [0,1]})");
  const std::string shifted = file("sh.json", R"({"p": 3, "k": 2, "forms": [[1,0],[1,2],[1,1]], "flag": [0,1]})");
  const Outcome iso = cli({"system", "--system", ap, "--isomorphic", shifted, "--components"});
  ASSERT_EQ(iso.code, 0) << iso.err;
  EXPECT_EQ(iso.report()["result"]["isomorphic"], true);
  EXPECT_EQ(iso.report()["inputs"].size(), 2u);
  const Outcome prod = cli({"system", "--system", ap, "--product", shifted});
  ASSERT_EQ(prod.code, 0) << prod.err;
  EXPECT_EQ(prod.report()["result"]["product"]["k"], 3);
  EXPECT_EQ(prod.report()["result"]["product"]["flag"], Json({1, 0, 0}));
}

TEST_F(CliTest, FourierDecomposeRank) {
  const std::string t = table("lin.json", polynomial_table(parse_polynomial("x1 + x3", 2, 3)));
  const Outcome f = cli({"fourier", "--table", t});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_NEAR(f.report()["result"]["linear_bias"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(cli({"fourier", "--table", t, "--format", "csv"}).out.substr(0, 12), "index,re,im\n");
  const Outcome d = cli({"decompose", "--table", t, "--degree", "1", "--delta", "0.1"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.report()["result"]["flagged"], false);
  EXPECT_LE(d.report()["result"]["achieved_norm"].get<double>(), 0.1);
  const Outcome r = cli({"rank", "--poly", "x1*x2 + x3*x4", "--p", "2", "--n", "4", "--r-max", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.report()["result"].contains("kind"));
  EXPECT_EQ(cli({"rank"}).code, 2);
}

TEST_F(CliTest, TesterCommands) {
  const std::string lin = table("lin.json", polynomial_table(parse_polynomial("x1 + x2", 2, 4)));
  const Outcome u = cli({"test", "uniformity", "--table", lin, "--degree", "1", "--samples", "100"});
  ASSERT_EQ(u.code, 0) << u.err;
  EXPECT_EQ(u.report()["result"]["accept"], true);
  EXPECT_EQ(u.report()["result"]["queries"], 400);
  EXPECT_EQ(u.report()["command"], "test uniformity");
  const std::string spec = file("spec.json", dump_json(tester_to_json(uniformity_tester(2, 1))));
  const Outcome g = cli({"test", "generic", "--spec", spec, "--table", lin, "--trials", "200", "--exact-acceptance"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(g.report()["result"]["exact_acceptance"], 1.0);
  const Outcome s = cli({"test", "symmetrize", "--spec", spec});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.report()["result"]["symmetrizations"], 1);
  const Outcome pr = cli({"test", "profile", "--spec", spec, "--n", "4"});
  ASSERT_EQ(pr.code, 0) << pr.err;
  EXPECT_EQ(pr.report()["result"]["correction"], 0.0);
  EXPECT_EQ(cli({"test"}).code, 64);
}

TEST_F(CliTest, InteriorAndDistributional) {
  const std::string ap = file("ap.json", R"({"p": 3, "k": 2, "forms": [[1,0],[1,1],[1,2]]})");
  const std::string pair = file("pair.json", R"({"p": 3, "k": 2, "forms": [[1,0],[1,1]]})");
  const std::string shifted = file("sh.json", R"({"p": 3, "k": 2, "forms": [[1,0],[1,2],[1,1]]})");
  EXPECT_EQ(cli({"interior", "--system", ap, "--system", pair, "--n", "2"}).code, 2);
  EXPECT_EQ(cli({"interior", "--system", ap, "--system", shifted, "--n", "2"}).code, 2);
  const Outcome in = cli({"interior", "--system", ap, "--system", pair, "--n", "2", "--trials", "5",
                          "--allow-disconnected"});
  ASSERT_EQ(in.code, 0) << in.err;
  EXPECT_EQ(in.report()["result"]["gram"].size(), 2u);
  EXPECT_TRUE(in.report()["result"].contains("witness"));

  const std::string F = table("F.json", random_real_table(2, 4, 1, 0, 1));
  const std::string schur = file("schur.json", R"({"p": 2, "k": 2, "forms": [[1,0],[0,1],[1,1]]})");
  const Outcome dist = cli({"distributional", "--table", F, "--system", schur, "--seeds", "5"});
  ASSERT_EQ(dist.code, 0) << dist.err;
  EXPECT_EQ(dist.report()["result"]["deviations"].size(), 5u);
  const std::string signed_table = table("G.json", random_real_table(2, 4, 1, -1, 1));
  EXPECT_EQ(cli({"distributional", "--table", signed_table, "--system", schur}).code, 2);
}

TEST_F(CliTest, TableCommand) {
  const Outcome r = cli({"table", "--poly", "x1*x2", "--p", "2", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const FunctionTable f = table_from_json(r.report()["result"]);
  EXPECT_EQ(f.residues(), std::vector<Residue>({0, 0, 0, 1}));
  const Outcome a = cli({"table", "--random", "disk", "--p", "3", "--n", "2", "--seed", "5"});
  EXPECT_EQ(table_from_json(a.report()["result"]), random_disk_table(3, 2, 5));
}

}  // namespace
}  // namespace hofa
