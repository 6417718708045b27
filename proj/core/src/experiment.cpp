#include "radial/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "radial/error.hpp"

namespace radial {

std::string library_version() { return RADIAL_VERSION; }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::index(std::size_t n) {
  require(n > 0, ErrorCode::kInvalidArgument, "cannot draw from an empty range");
  return static_cast<std::size_t>(engine_() % n);
}

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= n) return idx;
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + index(n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

Point to_point(const Json& j) {
  require(j.is_array() && (j.size() == 2 || j.size() == 3), ErrorCode::kParse, "point must be [x, y] or [x, y, z]");
  return Point{j[0].get<double>(), j[1].get<double>(), j.size() == 3 ? j[2].get<double>() : 0.0};
}

std::vector<Point> to_points(const Json& j) {
  require(j.is_array(), ErrorCode::kParse, "expected an array of points");
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(to_point(p));
  return out;
}

GridMeasure transformed(const GridMeasure& m, double scale, const Vec& shift, int level) {
  GridMeasureBuilder b(m.dim(), level);
  for (const auto& c : m.cells()) {
    const Point p = m.center(c) * scale + shift;
    for (double v : {p.x, p.y, p.z})
      require(v >= 0.0 && v < 1.0, ErrorCode::kInvalidArgument, "transform moves mass outside the unit cube");
    b.add_at(p, c.mass);
  }
  return b.build(false);
}

GridMeasure build_base(const Json& spec, Rng& rng, std::optional<BlindResult>& blinds) {
  const std::string type = spec.at("type").get<std::string>();
  const int depth = spec.value("depth", 6);
  if (type == "four_corner") return build_ifs_measure(four_corner_maps(), depth, 2, spec.value("level", 0));
  if (type == "middle_thirds")
    return build_ifs_measure(middle_thirds_product_maps(), depth, 2, spec.value("level", 0));
  if (type == "cantor_product") {
    const auto offsets = spec.at("offsets").get<std::vector<double>>();
    return build_ifs_measure(cantor_product_maps(spec.at("ratio").get<double>(), offsets), depth, 2,
                             spec.value("level", 0));
  }
  if (type == "ifs") {
    std::vector<Similarity> maps;
    for (const auto& m : spec.at("maps"))
      maps.push_back({m.at("ratio").get<double>(), to_point(m.at("offset")), m.value("weight", 1.0)});
    return build_ifs_measure(maps, depth, spec.value("dim", 2), spec.value("level", 0));
  }
  if (type == "uniform") return uniform_measure(spec.value("dim", 2), spec.value("level", 8));
  if (type == "line")
    return line_measure(Line::from_point_direction(to_point(spec.at("point")), to_point(spec.at("direction"))),
                        spec.value("level", 10));
  if (type == "points") {
    const auto pts = to_points(spec.at("points"));
    require(!pts.empty(), ErrorCode::kInvalidArgument, "points measure needs at least one point");
    return atomic_measure(2, spec.value("level", 10), pts);
  }
  if (type == "random_points") {
    const auto n = spec.at("count").get<std::size_t>();
    const auto box = spec.value("box", std::vector<double>{0.0, 0.0, 1.0, 1.0});
    require(box.size() == 4 && n > 0, ErrorCode::kInvalidArgument, "random_points needs count > 0 and a 4-entry box");
    std::vector<Point> pts(n);
    for (auto& p : pts) {
      p.x = box[0] + (box[2] - box[0]) * rng.uniform();
      p.y = box[1] + (box[3] - box[1]) * rng.uniform();
    }
    return atomic_measure(2, spec.value("level", 10), pts);
  }
  if (type == "file") return load_measure(spec.at("path").get<std::string>());
  if (type == "union") {
    std::vector<GridMeasure> parts;
    int level = 0;
    for (const auto& p : spec.at("parts")) {
      parts.push_back(build_measure(p, rng).measure);
      require(parts.back().dim() == parts.front().dim(), ErrorCode::kInvalidArgument, "union parts differ in dimension");
      level = std::max(level, parts.back().level());
    }
    require(!parts.empty(), ErrorCode::kInvalidArgument, "union needs parts");
    GridMeasureBuilder b(parts.front().dim(), level);
    for (const auto& m : parts)
      for (const auto& c : m.cells()) b.add_at(m.center(c), c.mass);
    return b.build(false);
  }
  if (type == "blinds") {
    const auto vps = to_points(spec.at("viewpoints"));
    BlindOptions opt;
    opt.split = spec.value("split", std::size_t{2});
    opt.epsilon = spec.value("epsilon", 0.1);
    opt.thinning = spec.value("thinning", 0.0);
    blinds = blind_construct(vps, spec.value("generations", std::size_t{1}), opt, default_seed(),
                             spec.value("level", 10));
    return blinds->measure;
  }
  fail(ErrorCode::kParse, "unknown measure type '" + type + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BuiltMeasure build_measure(const Json& spec, Rng& rng) {
  require(spec.is_object(), ErrorCode::kParse, "measure spec must be an object");
  BuiltMeasure out;
  GridMeasure m = build_base(spec, rng, out.blinds);
  if (spec.contains("transform")) {
    const auto& t = spec["transform"];
    const Vec shift = t.contains("translate") ? to_point(t["translate"]) : Vec{};
    m = transformed(m, t.value("scale", 1.0), shift, t.value("level", m.level()));
  }
  if (spec.contains("restrict")) {
    const auto box = spec["restrict"].get<std::vector<double>>();
    require(box.size() == 4, ErrorCode::kParse, "restrict box must be [x0, y0, x1, y1]");
    m = m.restricted([&](const Point& p) { return p.x >= box[0] && p.y >= box[1] && p.x < box[2] && p.y < box[3]; });
  }
  require(!m.empty(), ErrorCode::kEmptySet, "measure spec produced an empty measure");
  if (spec.value("normalize", true)) m = m.normalized();
  out.measure = std::move(m);
  return out;
}

bool RunRecord::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.informational || v.passed; });
}

const Table* RunRecord::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

Json RunRecord::to_json(bool include_timing) const {
  Json j;
  j["experiment"] = experiment;
  j["version"] = version;
  j["seed"] = seed;
  j["config"] = config;
  j["summary"] = summary;
  Json tabs = Json::object();
  for (const auto& t : tables) tabs[t.name] = {{"columns", t.columns}, {"rows", t.rows}};
  j["tables"] = tabs;
  Json vs = Json::array();
  for (const auto& v : verdicts)
    vs.push_back({{"name", v.name},
                  {"inequality", v.inequality},
                  {"value", v.value},
                  {"bound", v.bound},
                  {"tolerance", v.tolerance},
                  {"anchor", v.anchor},
                  {"passed", v.passed},
                  {"informational", v.informational}});
  j["verdicts"] = vs;
  j["passed"] = passed();
  if (include_timing) {
    j["wall_seconds"] = wall_seconds;
    j["timings"] = timings;
  }
  return j;
}

RunRecord run_experiment(const Json& config) {
  try {
    const std::string kind = config.at("experiment").get<std::string>();
    if (kind == "direction") return run_direction_experiment(config);
    if (kind == "visibility") return run_visibility_experiment(config);
    if (kind == "identity") return run_identity_experiment(config);
    if (kind == "level_analysis") return run_level_analysis(config);
    if (kind == "exceptional") return scan_exceptional(config);
    if (kind == "blinds") return run_blinds_experiment(config);
    fail(ErrorCode::kParse, "unknown experiment '" + kind + "'");
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, std::string("config: ") + e.what());
  }
}

Json load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot open config " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kParse, path + ": " + e.what());
  }
}

void write_csv(const Table& table, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kInvalidArgument, "cannot write " + path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void write_record(const RunRecord& record, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream out(base / "record.json");
  require(static_cast<bool>(out), ErrorCode::kInvalidArgument, "cannot write into " + dir);
  out << record.to_json(true).dump(2) << '\n';
  for (const auto& t : record.tables) write_csv(t, (base / (t.name + ".csv")).string());
}

}  // namespace radial
