#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radial/blinds.hpp"
#include "radial/measure.hpp"

namespace radial {

using Json = nlohmann::json;

std::string library_version();

/// Seeded generator with platform-independent draws (no std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();                    // [0, 1)
  std::size_t index(std::size_t n);    // [0, n)
  /// k distinct indices of [0, n) in increasing order (all of them when k >= n).
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

/// A measure built from a JSON spec. Blind constructions keep their tube state
/// so projections can be measured on the exact geometry.
struct BuiltMeasure {
  GridMeasure measure;
  std::optional<BlindResult> blinds;
};

/// Types: four_corner, middle_thirds, cantor_product, ifs, uniform, line,
/// points, random_points, file, union, blinds. Optional modifiers applied in
/// order: transform {scale, translate, level}, restrict [x0, y0, x1, y1],
/// normalize (default true). See docs/config.md.
BuiltMeasure build_measure(const Json& spec, Rng& rng);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Verdict {
  std::string name;
  std::string inequality;  // human-readable relation being tested
  double value = 0.0;      // left-hand side
  double bound = 0.0;      // right-hand side before tolerance
  double tolerance = 0.0;
  std::string anchor;      // which statement of the theory the check stands for
  bool passed = true;
  bool informational = false;  // recorded, never fails a run
};

struct RunRecord {
  std::string experiment;
  std::string version;
  std::uint64_t seed = 0;
  Json config;
  Json summary = Json::object();
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;
  Json timings = Json::object();

  /// All non-informational verdicts passed.
  bool passed() const;
  const Table* table(const std::string& name) const;
  /// Wall-clock fields are left out unless requested, so the default dump is
  /// reproducible bit-for-bit.
  Json to_json(bool include_timing = false) const;
};

RunRecord run_direction_experiment(const Json& config);
RunRecord run_visibility_experiment(const Json& config);
RunRecord run_identity_experiment(const Json& config);
RunRecord run_level_analysis(const Json& config);
RunRecord scan_exceptional(const Json& config);
RunRecord run_blinds_experiment(const Json& config);

/// Dispatches on config["experiment"]: direction, visibility, identity,
/// level_analysis, exceptional, blinds. JSON access errors become Parse errors.
RunRecord run_experiment(const Json& config);

Json load_config(const std::string& path);
/// Writes record.json (with timings) and one CSV per table into dir.
void write_record(const RunRecord& record, const std::string& dir);
void write_csv(const Table& table, const std::string& path);

}  // namespace radial
