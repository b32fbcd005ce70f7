#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace dsub;
using namespace dsub::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string C(const char* f) { return corpus_dir() + "/" + f; }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("dsub_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, Examples) {
  auto a = run({"check", C("minimality_w.dsub"), "--env", C("gamma_star.env")});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, "{V: Top .. Top}\n");
  EXPECT_EQ(run({"sub", "--env", C("gamma_star.env"), "{V: Top..Top}", "{Z: Top..Top}"}).code, 1);
  auto n = run({"nonsense"});
  EXPECT_EQ(n.code, 2);
  EXPECT_TRUE(n.out.empty());
  EXPECT_FALSE(n.err.empty());
}

TEST(Cli, EveryVerbHasHelpAndVersion) {
  std::vector<std::vector<std::string>> verbs = {
      {"check"}, {"sub"}, {"expose"}, {"promote"}, {"demote"}, {"decl", "verify"}, {"decl", "search"},
      {"lab", "colours"}, {"lab", "tags"}, {"lab", "minimality"}, {"bench", "pn"}, {"corpus", "run"}};
  for (auto v : verbs) {
    auto h = v;
    h.push_back("--help");
    auto rh = run(h);
    EXPECT_EQ(rh.code, 0) << v[0];
    EXPECT_NE(rh.out.find("Usage"), std::string::npos) << v[0];
    v.push_back("--version");
    auto rv = run(v);
    EXPECT_EQ(rv.code, 0) << v[0];
    EXPECT_EQ(rv.out, std::string("dsub ") + kVersion + "\n");
  }
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST(Cli, Check) {
  EXPECT_EQ(run({"check", C("identity.dsub")}).code, 0);
  auto bad = run({"check", C("app_mismatch.dsub")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("argument type"), std::string::npos);
  EXPECT_EQ(run({"check", C("no_such_file.dsub")}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", C("identity.dsub"), "--frobnicate"}).code, 2);

  fs::path d = scratch("check");
  std::ofstream(d / "bad.dsub") << "lam(x: Top";
  EXPECT_EQ(run({"check", (d / "bad.dsub").string()}).code, 2);

  fs::path trace = d / "trace.json";
  EXPECT_EQ(run({"check", C("minimality_w.dsub"), "--env", C("gamma_star.env"), "--emit-trace", trace.string()}).code,
            0);
  auto j = json::parse(read_file(trace));
  EXPECT_EQ(j["rule"], "T-Let");
}

TEST(Cli, Sub) {
  EXPECT_EQ(run({"sub", "Bot", "Top"}).code, 0);
  EXPECT_EQ(run({"sub", "Top", "Bot"}).code, 1);
  EXPECT_EQ(run({"sub", "Top"}).code, 2);
  EXPECT_EQ(run({"sub", "Top", "{A: Top"}).code, 2);
  auto r = run({"sub", "--env", C("gamma_star.env"), "all(b: {V: Top .. Top}) {V: Top .. Top}", "e.E"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
}

TEST(Cli, ExposeAndShift) {
  auto e = run({"expose", "--env", C("chain.env"), "y.B"});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(e.out, "Top\n");
  fs::path d = scratch("shift");
  std::ofstream(d / "top.env") << "x : Top;\n";
  std::string env = (d / "top.env").string();
  auto s = run({"expose", "--env", env, "x.A"});
  EXPECT_EQ(s.code, 1);
  EXPECT_EQ(s.out, "stuck: Top\n");
  EXPECT_EQ(run({"expose", "x.A"}).code, 2);

  EXPECT_EQ(run({"promote", "--env", C("chain.env"), "--var", "x", "{B: x.A .. x.A}"}).out, "{B: Bot .. Top}\n");
  EXPECT_EQ(run({"demote", "--env", C("chain.env"), "--var", "x", "x.A"}).out, "Bot\n");
  EXPECT_EQ(run({"promote", "--env", env, "--var", "x", "x.A"}).code, 1);
  EXPECT_EQ(run({"demote", "--env", env, "--var", "q", "Top"}).code, 2);
  EXPECT_EQ(run({"promote", "--var", "x", "Top"}).code, 2);
}

TEST(Cli, Decl) {
  EXPECT_EQ(run({"decl", "verify", C("bad_bounds_trans.json")}).code, 0);
  auto rej = run({"decl", "verify", C("top_bot_tampered.json")});
  EXPECT_EQ(rej.code, 1);
  EXPECT_NE(rej.err.find("root"), std::string::npos);
  EXPECT_EQ(run({"decl", "verify", C("gamma_star.env")}).code, 2);
  EXPECT_EQ(run({"decl"}).code, 2);

  auto found = run({"decl", "search", "--fuel", "1", "--sub", "Bot", "Top"});
  EXPECT_EQ(found.code, 0);
  EXPECT_EQ(json::parse(found.out)["rule"], "Top");
  EXPECT_EQ(run({"decl", "search", "--fuel", "8", "--sub", "Top", "Bot"}).code, 1);
  EXPECT_EQ(run({"decl", "search", "--env", C("gamma_star.env"), "--typ", C("minimality_w.dsub"), "{V: Top .. Top}"})
                .code,
            0);
  EXPECT_EQ(run({"decl", "search"}).code, 2);
  EXPECT_EQ(run({"decl", "search", "--sub", "Top", "Top", "--typ", "a", "Top"}).code, 2);
  EXPECT_EQ(run({"decl", "search", "--fuel", "-1", "--sub", "Top", "Top"}).code, 2);
}

TEST(Cli, Lab) {
  auto m = run({"lab", "minimality"});
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("step_type(Gamma*, w) = {V: Top .. Top}"), std::string::npos);
  EXPECT_EQ(run({"lab", "tags", "--max-size", "3", "--fuel", "4"}).code, 0);
  EXPECT_EQ(run({"lab", "colours", "--max-size", "1", "--fuel", "4"}).code, 0);
  auto c = run({"lab", "colours", "--max-size", "3", "--fuel", "4"});
  EXPECT_EQ(c.code, c.out.find("violations: 0\n") != std::string::npos ? 0 : 1);
  EXPECT_EQ(run({"lab", "colours", "--max-size", "0"}).code, 2);
  EXPECT_EQ(run({"lab"}).code, 2);
}

TEST(Cli, Bench) {
  auto b = run({"bench", "pn", "--min", "1", "--max", "4"});
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(b.out, "N,calls\n1,1\n2,5\n3,19\n4,69\n");
  fs::path d = scratch("bench");
  auto f = run({"bench", "pn", "--min", "2", "--max", "3", "--out", (d / "pn.csv").string()});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(read_file(d / "pn.csv"), "N,calls\n2,5\n3,19\n");
  EXPECT_EQ(run({"bench", "pn", "--min", "5", "--max", "2"}).code, 2);
  EXPECT_EQ(run({"bench", "pn", "--metric", "seconds"}).code, 2);
  auto nanos = run({"bench", "pn", "--min", "1", "--max", "2", "--metric", "nanos"});
  EXPECT_EQ(nanos.code, 0);
  EXPECT_EQ(nanos.out.rfind("N,nanos\n", 0), 0u);
}

TEST(Cli, CorpusRun) {
  auto ok = run({"corpus", "run", "--dir", corpus_dir()});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;

  fs::path d = scratch("corpus");
  fs::copy(corpus_dir(), d, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  std::ofstream(d / "b_sub_c.sub") << "//! env: gamma_star.env\n//! expect: true\n{V: Top .. Top} <: {Z: Top .. Top}\n";
  auto bad = run({"corpus", "run", "--dir", d.string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL b_sub_c.sub"), std::string::npos);

  fs::path empty = scratch("empty");
  EXPECT_EQ(run({"corpus", "run", "--dir", empty.string()}).code, 2);
  EXPECT_EQ(run({"corpus", "run", "--dir", (empty / "missing").string()}).code, 2);
}

TEST(Cli, OutputIsByteStable) {
  std::vector<std::string> args = {"decl", "search", "--env", C("gamma_star.env"), "--fuel", "6", "--sub",
                                   "all(b: {V: Top .. Top}) {V: Top .. Top}", "all(b: {V: Top .. Top}) {Z: Top .. Top}"};
  EXPECT_EQ(run(args).out, run(args).out);
  EXPECT_EQ(run({"lab", "tags", "--max-size", "3"}).out, run({"lab", "tags", "--max-size", "3"}).out);
}
