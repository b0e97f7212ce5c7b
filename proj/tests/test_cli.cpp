#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "ecs/cli.hpp"
#include "ecs/error.hpp"
#include "support.hpp"

using namespace ecs;
using namespace ecs::testing;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             ("ecs_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json"))
                .string();
    std::ofstream(path_) << content;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

const std::string& dilational_report() {
  static const std::string text = run({"build-dilational", "--dim", "5", "--trace", "3"}).out;
  return text;
}

const std::string& translational_report() {
  static const std::string text = run({"build-translational", "--dim", "5", "--charpoly", "-1,5,-6,1"}).out;
  return text;
}

}  // namespace

TEST(Cli, BuildDilational) {
  const CliRun r = run({"build-dilational", "--dim", "5", "--trace", "3"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["version"], "1");
  EXPECT_EQ(doc["classification"]["type"], "dilational");
  EXPECT_EQ(doc["classification"]["complete"], false);
  EXPECT_EQ(doc["classification"]["fiber"], "torus");
  for (const auto& c : doc["checks"]) {
    EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
    EXPECT_TRUE(c.contains("residual") && c.contains("tolerance"));
  }
  EXPECT_NE(r.err.find("all checks passed"), std::string::npos);
}

TEST(Cli, BuildDilationalSeven) {
  const CliRun r = run({"build-dilational", "--dim", "7", "--trace", "4"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.err.find("m=5, k=7"), std::string::npos);
}

TEST(Cli, EvenDimensionIsInputError) {
  const CliRun r = run({"build-dilational", "--dim", "6", "--trace", "3"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("odd"), std::string::npos);
  EXPECT_EQ(run({"build-dilational", "--dim", "5", "--trace", "2"}).code, kExitInputError);
}

TEST(Cli, BuildTranslational) {
  const CliRun r = run({"build-translational", "--dim", "5", "--charpoly", "-1,5,-6,1", "--seed-amp", "0.3", "--period",
                     "1", "--theta", "1"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["classification"]["type"], "translational");
  EXPECT_EQ(doc["classification"]["complete"], true);
  EXPECT_EQ(doc["classification"]["fiber"], "torus");
  EXPECT_EQ(run({"build-translational", "--dim", "5"}).code, kExitPass);
}

TEST(Cli, TranslationalInputErrors) {
  EXPECT_EQ(run({"build-translational", "--dim", "5", "--charpoly", "-1,3,-3,1"}).code, kExitInputError);
  EXPECT_EQ(run({"build-translational", "--dim", "5", "--charpoly", "-1,x,1"}).code, kExitInputError);
  EXPECT_EQ(run({"build-translational", "--dim", "6", "--charpoly", "-1,5,-6,1"}).code, kExitInputError);
  EXPECT_EQ(run({"build-translational", "--dim", "5", "--seed-amp", "0"}).code, kExitCheckFailure);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitInputError);
  EXPECT_EQ(run({"frobnicate"}).code, kExitInputError);
  EXPECT_EQ(run({"build-dilational"}).code, kExitInputError);
  EXPECT_EQ(run({"build-dilational", "--dim", "five"}).code, kExitInputError);
  EXPECT_EQ(run({"--help"}).code, kExitPass);
}

TEST(Cli, RoundTripIsBitIdentical) {
  for (const std::string* text : {&dilational_report(), &translational_report()}) {
    const TempFile f(*text);
    const CliRun r = run({"verify", f.path(), "--out", "-"});
    EXPECT_EQ(r.code, kExitPass) << r.err;
    const Json a = Json::parse(*text);
    const Json b = Json::parse(r.out);
    EXPECT_EQ(a["spec"].dump(), b["spec"].dump());
    EXPECT_EQ(a["certificate"].dump(), b["certificate"].dump());
    EXPECT_EQ(a["classification"].dump(), b["classification"].dump());
    EXPECT_EQ(a["checks"].dump(), b["checks"].dump());
  }
}

TEST(Cli, VerifyBareCertificate) {
  const Json doc = Json::parse(dilational_report());
  Json bare = {{"version", "1"}, {"spec", doc["spec"]}};
  for (const auto& [k, v] : doc["certificate"].items()) bare[k] = v;
  const TempFile f(bare.dump());
  EXPECT_EQ(run({"verify", f.path()}).code, kExitPass);
}

TEST(Cli, VerifyFailures) {
  Json doc = Json::parse(dilational_report());
  doc["certificate"]["lattice"]["basis"][1]["coeffs"][0] = doc["certificate"]["lattice"]["basis"][1]["coeffs"][0].get<double>() + 0.25;
  const TempFile corrupt(doc.dump());
  const CliRun r = run({"verify", corrupt.path()});
  EXPECT_EQ(r.code, kExitCheckFailure);
  EXPECT_NE(r.err.find("lattice_invariant"), std::string::npos);

  const TempFile empty("");
  EXPECT_EQ(run({"verify", empty.path()}).code, kExitInputError);
  const TempFile garbage("{not json");
  EXPECT_EQ(run({"verify", garbage.path()}).code, kExitInputError);
  EXPECT_EQ(run({"verify", "/nonexistent/ecs.json"}).code, kExitInputError);

  Json unknown = Json::parse(dilational_report());
  unknown["spec"]["colour"] = "red";
  const TempFile uf(unknown.dump());
  EXPECT_EQ(run({"verify", uf.path()}).code, kExitInputError);

  Json version = Json::parse(dilational_report());
  version["version"] = "2";
  const TempFile vf(version.dump());
  EXPECT_EQ(run({"verify", vf.path()}).code, kExitInputError);

  const TempFile ok(dilational_report());
  EXPECT_EQ(run({"verify", ok.path(), "--tol-scale", "0"}).code, kExitInputError);
  // Shrinking every tolerance far enough makes numeric checks fail.
  EXPECT_EQ(run({"verify", ok.path(), "--tol-scale", "1e-12"}).code, kExitCheckFailure);
  set_tolerance_scale(1.0);
}

TEST(Cli, Curvature) {
  const TempFile dil(dilational_report());
  const CliRun r = run({"curvature", "--spec", dil.path(), "--samples", "20", "--step", "1e-4"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.err.find("olszak rank 2"), std::string::npos);
  const TempFile tr(translational_report());
  const CliRun t = run({"curvature", "--spec", tr.path(), "--out", "-"});
  EXPECT_EQ(t.code, kExitPass) << t.err;
  EXPECT_NE(t.err.find("olszak rank 1"), std::string::npos);
  EXPECT_TRUE(Json::parse(t.out).contains("checks"));

  Json zero = Json::parse(dilational_report())["spec"];
  for (auto& row : zero["A"]) {
    for (auto& x : row) x = 0.0;
  }
  const TempFile zf(zero.dump());
  const CliRun z = run({"curvature", "--spec", zf.path()});
  EXPECT_EQ(z.code, kExitInputError);
  EXPECT_NE(z.err.find("ZeroOperator"), std::string::npos);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / ("ecs_cli_out_" + std::to_string(::getpid()) + ".json");
  const CliRun r = run({"build-dilational", "--dim", "5", "--out", path.string()});
  EXPECT_EQ(r.code, kExitPass);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), dilational_report());
  std::filesystem::remove(path);
}

TEST(Cli, SeedIsReproducible) {
  const CliRun a = run({"build-dilational", "--dim", "5", "--seed", "7"});
  const CliRun b = run({"build-dilational", "--dim", "5", "--seed", "7"});
  EXPECT_EQ(a.out, b.out);
}

TEST(NegativeControls, EveryFieldIsGuarded) {
  for (const std::string* text : {&dilational_report(), &translational_report()}) {
    const Json doc = Json::parse(*text);
    const SigmaKind kind = doc["classification"]["type"] == "dilational" ? SigmaKind::Dilational : SigmaKind::Translational;
    for (const Corruption& c : corruption_sweep(doc, 1e-3)) {
      const std::string why = exemption_reason(c.path, kind);
      if (!why.empty()) {
        EXPECT_FALSE(c.rejected) << c.path << " is listed as exempt but now fails";
        continue;
      }
      ASSERT_TRUE(c.rejected) << c.path;
      const auto expected = expected_checks(c.path);
      const bool named = std::any_of(c.failing.begin(), c.failing.end(), [&](const std::string& n) {
        return std::find(expected.begin(), expected.end(), n) != expected.end();
      });
      std::string got;
      for (const auto& n : c.failing) got += n + " ";
      EXPECT_TRUE(named) << c.path << " failed only " << got;
    }
  }
}
