#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "radial/error.hpp"
#include "radial/experiment.hpp"
#include "radial/parallel.hpp"

using namespace radial;

namespace {

Json config(const std::string& name) { return load_config(std::string(RADIAL_CONFIG_DIR) + "/" + name); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

// Structural equality with a relative tolerance on numbers.
void expect_close(const Json& a, const Json& b, const std::string& path) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    EXPECT_NEAR(x, y, 1e-9 * std::max(1.0, std::abs(y))) << path;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (auto it = b.begin(); it != b.end(); ++it) {
      ASSERT_TRUE(a.contains(it.key())) << path << "/" << it.key();
      expect_close(a[it.key()], it.value(), path + "/" + it.key());
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) expect_close(a[i], b[i], path + "/" + std::to_string(i));
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

}  // namespace

TEST(Rng, SampleIsSortedAndDistinct) {
  Rng r(9);
  const auto s = r.sample(100, 30);
  ASSERT_EQ(s.size(), 30u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1], s[i]);
  EXPECT_EQ(r.sample(5, 10).size(), 5u);
  Rng a(4), b(4);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(BuildMeasure, TypesAndModifiers) {
  Rng rng(1);
  const auto fc = build_measure(Json{{"type", "four_corner"}, {"depth", 3}}, rng).measure;
  EXPECT_EQ(fc.size(), 64u);
  const auto half = build_measure(Json::parse(R"({"type":"uniform","level":4,"restrict":[0,0,0.5,1]})"), rng).measure;
  EXPECT_EQ(half.size(), 128u);
  EXPECT_NEAR(half.total_mass(), 1.0, 1e-14);
  const auto raw =
      build_measure(Json::parse(R"({"type":"uniform","level":4,"restrict":[0,0,0.5,1],"normalize":false})"), rng);
  EXPECT_NEAR(raw.measure.total_mass(), 0.5, 1e-14);
  const auto moved = build_measure(
      Json::parse(R"({"type":"four_corner","depth":2,"transform":{"scale":0.5,"translate":[0.25,0.25],"level":6}})"),
      rng);
  for (const auto& p : moved.measure.support_points()) {
    EXPECT_GE(p.x, 0.25);
    EXPECT_LT(p.x, 0.75);
  }
  const auto un = build_measure(
      Json::parse(R"({"type":"union","parts":[{"type":"points","points":[[0.1,0.1]],"level":5},
                                             {"type":"points","points":[[0.9,0.9]],"level":7}]})"),
      rng);
  EXPECT_EQ(un.measure.level(), 7);
  EXPECT_EQ(un.measure.size(), 2u);
  const auto bl = build_measure(Json::parse(R"({"type":"blinds","viewpoints":[[0.5,2.0]],"level":8})"), rng);
  ASSERT_TRUE(bl.blinds.has_value());
  EXPECT_EQ(bl.blinds->state.tubes.size(), 2u);
}

TEST(BuildMeasure, Errors) {
  Rng rng(1);
  EXPECT_EQ(code_of([&] { build_measure(Json{{"type", "nope"}}, rng); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([&] { build_measure(Json::parse(R"({"type":"uniform","level":3,"restrict":[2,2,3,3]})"), rng); }),
            ErrorCode::kEmptySet);
  EXPECT_EQ(code_of([&] {
              build_measure(Json::parse(R"({"type":"uniform","level":3,"transform":{"translate":[0.5,0]}})"), rng);
            }),
            ErrorCode::kInvalidArgument);
}

TEST(RunExperiment, ParseErrors) {
  EXPECT_EQ(code_of([] { run_experiment(Json{{"experiment", "unknown"}}); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { run_experiment(Json::object()); }), ErrorCode::kParse);
  // missing s
  EXPECT_EQ(code_of([] { run_experiment(Json::parse(R"({"experiment":"exceptional","p":1.2,"mu":{"type":"uniform"}})")); }),
            ErrorCode::kParse);
  const auto path = std::filesystem::temp_directory_path() / "radial_bad_config.json";
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(code_of([&] { load_config(path.string()); }), ErrorCode::kParse);
  std::filesystem::remove(path);
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
  const auto cfg = config("visibility_four_corner.json");
  set_thread_count(1);
  const auto one = run_experiment(cfg).to_json().dump();
  set_thread_count(4);
  const auto four = run_experiment(cfg).to_json().dump();
  set_thread_count(0);
  EXPECT_EQ(one, four);
  EXPECT_EQ(run_experiment(config("level_segment.json")).to_json().dump(),
            run_experiment(config("level_segment.json")).to_json().dump());
}

TEST(RunExperiment, LevelAnalysisMatchesGolden) {
  std::ifstream in(std::string(RADIAL_TEST_GOLDEN_DIR) + "/level_analysis.json");
  ASSERT_TRUE(in);
  Json golden = Json::parse(in);
  Json got = run_experiment(config("level_segment.json")).to_json();
  golden.erase("version");
  got.erase("version");
  expect_close(got, golden, "");
  const auto* levels = run_experiment(config("level_segment.json")).table("levels");
  ASSERT_NE(levels, nullptr);
  EXPECT_EQ(levels->rows.size(), 1u);
}

TEST(RunExperiment, VisibilityRejectsCollinearViewpoints) {
  const auto path = std::string(RADIAL_TEST_DATA_DIR) + "/collinear_e.json";
  EXPECT_EQ(code_of([&] { run_experiment(load_config(path)); }), ErrorCode::kCollinearE);
}

TEST(ExceptionalScan, Admissibility) {
  Json cfg = config("exceptional_uniform.json");
  cfg["s"] = 1.0;
  EXPECT_EQ(code_of([&] { scan_exceptional(cfg); }), ErrorCode::kAdmissibility);
  cfg["s"] = 1.5;
  cfg["p"] = 1.0;
  EXPECT_EQ(code_of([&] { scan_exceptional(cfg); }), ErrorCode::kAdmissibility);
  // t_min = p(2 - s) must stay below t_max = 2 - p
  cfg["p"] = 1.6;
  EXPECT_EQ(code_of([&] { scan_exceptional(cfg); }), ErrorCode::kAdmissibility);
  cfg["p"] = 1.2;
  cfg["grid"] = 100;
  EXPECT_EQ(code_of([&] { scan_exceptional(cfg); }), ErrorCode::kInvalidArgument);
}

TEST(ExceptionalScan, UniformSquareHasNoExceptionalCentres) {
  const auto rec = scan_exceptional(config("exceptional_uniform.json"));
  ASSERT_NE(rec.table("flagged"), nullptr);
  EXPECT_TRUE(rec.table("flagged")->rows.empty());
  EXPECT_TRUE(rec.passed());
}

TEST(ExceptionalScan, FlaggedSetShrinksAsThresholdRises) {
  const auto rec = scan_exceptional(config("exceptional_uniform.json"));
  const auto* sweep = rec.table("theta_sweep");
  ASSERT_NE(sweep, nullptr);
  ASSERT_GE(sweep->rows.size(), 3u);
  const std::size_t stable = sweep->columns.size() - 2;
  EXPECT_EQ(sweep->columns[stable], "stable_count");
  for (std::size_t i = 1; i < sweep->rows.size(); ++i) {
    EXPECT_GT(sweep->rows[i][0], sweep->rows[i - 1][0]);
    EXPECT_LE(sweep->rows[i][stable], sweep->rows[i - 1][stable]);
    // a centre flagged at both resolutions is flagged at each
    for (std::size_t c = 1; c < stable; c += 2) EXPECT_LE(sweep->rows[i][stable], sweep->rows[i][c]);
  }
}

TEST(WriteRecord, TablesBecomeCsv) {
  const auto rec = run_experiment(config("level_segment.json"));
  const auto dir = std::filesystem::temp_directory_path() / "radial_record_test";
  std::filesystem::remove_all(dir);
  write_record(rec, dir.string());
  std::ifstream j(dir / "record.json");
  ASSERT_TRUE(j);
  const Json back = Json::parse(j);
  EXPECT_TRUE(back.contains("wall_seconds"));
  EXPECT_EQ(back["experiment"], "level_analysis");
  for (const auto& t : rec.tables) {
    std::ifstream csv(dir / (t.name + ".csv"));
    ASSERT_TRUE(csv) << t.name;
    std::string header;
    std::getline(csv, header);
    std::string expected;
    for (std::size_t c = 0; c < t.columns.size(); ++c) expected += (c ? "," : "") + t.columns[c];
    EXPECT_EQ(header, expected);
    std::size_t lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    EXPECT_EQ(lines, t.rows.size());
  }
  std::filesystem::remove_all(dir);
}
