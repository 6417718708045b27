#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "radial/blinds.hpp"
#include "radial/error.hpp"
#include "radial/experiment.hpp"
#include "radial/identity.hpp"
#include "radial/parallel.hpp"
#include "radial/projection.hpp"
#include "radial/scale.hpp"
#include "radial/tubes.hpp"

using namespace radial;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdictFailed = 2;

struct MeasureSource {
  std::string file;
  std::string spec;  // inline JSON measure spec
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--measure", file, "gridmeasure file");
    app->add_option("--builder", spec, "inline JSON measure spec, e.g. '{\"type\":\"four_corner\",\"depth\":5}'");
    app->add_option("--seed", seed, "seed for randomized builders");
  }

  GridMeasure load() const {
    require(file.empty() != spec.empty(), ErrorCode::kInvalidArgument, "give exactly one of --measure or --builder");
    if (!file.empty()) return load_measure(file);
    Rng rng(seed);
    try {
      return build_measure(Json::parse(spec), rng).measure;
    } catch (const Json::exception& e) {
      fail(ErrorCode::kParse, std::string("--builder: ") + e.what());
    }
  }
};

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot open " + path);
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    if (line.empty() || line[0] == '#') continue;
    require(static_cast<bool>(ls >> x >> y), ErrorCode::kParse, "bad point line '" + line + "' in " + path);
    pts.push_back({x, y, 0.0});
  }
  return pts;
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  require(static_cast<bool>(file), ErrorCode::kInvalidArgument, "cannot write " + path);
  return file;
}

void print_estimate(std::ostream& os, const DimEstimate& e) {
  os << "scale,count\n";
  for (std::size_t i = 0; i < e.scales.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g,%zu\n", e.scales[i], e.counts[i]);
    os << buf;
  }
  std::fprintf(stderr, "estimate %.6f residual %.3g\n", e.estimate, e.residual);
}

int finish(const RunRecord& rec, const std::string& out) {
  if (!out.empty()) write_record(rec, out);
  for (const auto& v : rec.verdicts)
    std::printf("%-4s %-40s %.6g vs %.6g (tol %.3g)\n", v.informational ? "INFO" : (v.passed ? "PASS" : "FAIL"),
                v.name.c_str(), v.value, v.bound, v.tolerance);
  return rec.passed() ? kExitPass : kExitVerdictFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial-lab: radial projection experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware)");

  // Config-driven experiments share --config/--seed/--out.
  struct ExperimentCmd {
    std::string name;
    std::string kind;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
  };
  std::vector<ExperimentCmd> exps{{"run", "", {}, {}, {}},
                                  {"direction", "direction", {}, {}, {}},
                                  {"visibility", "visibility", {}, {}, {}},
                                  {"identity", "identity", {}, {}, {}},
                                  {"analyze-level", "level_analysis", {}, {}, {}},
                                  {"exceptional", "exceptional", {}, {}, {}}};
  std::vector<CLI::App*> exp_apps;
  for (auto& e : exps) {
    auto* sub = app.add_subcommand(e.name, e.kind.empty() ? "run the experiment named in the config"
                                                          : "run the " + e.kind + " experiment of a config");
    sub->add_option("--config", e.config, "experiment config (JSON)")->required();
    sub->add_option("--seed", e.seed, "override the config seed");
    sub->add_option("--out", e.out, "directory for record.json and CSV tables");
    exp_apps.push_back(sub);
  }

  MeasureSource proj_src;
  double px = 0.0, py = 0.0;
  std::size_t proj_bins = 1024;
  bool weighted = false;
  std::string proj_out;
  auto* project = app.add_subcommand("project", "radial pushforward of a measure from a centre (CSV)");
  proj_src.attach(project);
  project->add_option("--x", px)->required();
  project->add_option("--y", py)->required();
  project->add_option("--bins", proj_bins);
  project->add_flag("--weighted", weighted, "weighted density instead of the plain pushforward");
  project->add_option("--out", proj_out, "CSV path (default stdout)");

  MeasureSource box_src;
  int jmin = 1, jmax = -1;
  std::string box_out;
  auto* boxdim = app.add_subcommand("boxdim", "box-counting dimension of a measure's support");
  box_src.attach(boxdim);
  boxdim->add_option("--jmin", jmin);
  boxdim->add_option("--jmax", jmax, "finest scale exponent (default: the measure's level)");
  boxdim->add_option("--out", box_out, "CSV path (default stdout)");

  MeasureSource en_src;
  double en_s = 1.0;
  std::string en_method = "auto";
  auto* energy = app.add_subcommand("energy", "Riesz s-energy of a measure");
  en_src.attach(energy);
  energy->add_option("--s", en_s)->required();
  energy->add_option("--method", en_method)->check(CLI::IsMember({"auto", "direct", "fft"}));

  MeasureSource dir_src;
  std::size_t dir_max = 2000;
  auto* directions = app.add_subcommand("directions", "direction set of a measure's support points");
  dir_src.attach(directions);
  directions->add_option("--max-points", dir_max);

  double vi_p = 1.0;
  int vi_level = 9;
  auto* verify = app.add_subcommand("verify-identity", "weighted projection identity for the bundled bump pair");
  verify->add_option("--p", vi_p);
  verify->add_option("--level", vi_level);

  MeasureSource tube_src;
  double tx = 0.0, ty = 0.0;
  TubeParams tparams;
  auto* tubes = app.add_subcommand("tubes", "bad-point test of a viewpoint against a measure");
  tube_src.attach(tubes);
  tubes->add_option("--x", tx)->required();
  tubes->add_option("--y", ty)->required();
  tubes->add_option("--delta", tparams.delta);
  tubes->add_option("--tau", tparams.tau);
  tubes->add_option("--eta", tparams.eta);

  std::string bl_vps, bl_out = "blinds_out";
  std::size_t bl_gens = 1, bl_split = 2;
  double bl_eps = 0.1, bl_thin = 0.0;
  int bl_level = 10;
  auto* blinds = app.add_subcommand("blinds", "Venetian blind construction against a viewpoint file");
  blinds->add_option("--viewpoints", bl_vps, "file with one 'x y' per line")->required();
  blinds->add_option("--gens", bl_gens);
  blinds->add_option("--split", bl_split);
  blinds->add_option("--epsilon", bl_eps);
  blinds->add_option("--thinning", bl_thin, "0 selects 2/epsilon");
  blinds->add_option("--level", bl_level, "rasterisation level");
  blinds->add_option("--out", bl_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitError;
  }
  set_thread_count(threads);

  try {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (!exp_apps[i]->parsed()) continue;
      Json cfg = load_config(exps[i].config);
      if (!exps[i].kind.empty()) cfg["experiment"] = exps[i].kind;
      if (exps[i].seed) cfg["seed"] = *exps[i].seed;
      return finish(run_experiment(cfg), exps[i].out);
    }
    if (project->parsed()) {
      const auto m = proj_src.load();
      const Point x{px, py, 0.0};
      const auto d = weighted ? weighted_radial_density(m, x, proj_bins) : radial_pushforward(m, x, proj_bins);
      std::ofstream f;
      auto& os = output(proj_out, f);
      os << "bin,angle," << (weighted ? "density" : "mass") << "\n";
      for (std::size_t b = 0; b < d.bins(); ++b) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", b, (static_cast<double>(b) + 0.5) * d.bin_measure(), d[b]);
        os << buf;
      }
      return kExitPass;
    }
    if (boxdim->parsed()) {
      const auto m = box_src.load();
      std::ofstream f;
      print_estimate(output(box_out, f), box_dimension(m, dyadic_scales(jmin, jmax < 0 ? m.level() : jmax)));
      return kExitPass;
    }
    if (energy->parsed()) {
      EnergyOptions opt;
      opt.method = en_method == "direct" ? EnergyMethod::kDirect : en_method == "fft" ? EnergyMethod::kFft : EnergyMethod::kAuto;
      std::printf("%.17g\n", riesz_energy(en_src.load(), en_s, opt));
      return kExitPass;
    }
    if (directions->parsed()) {
      const auto m = dir_src.load();
      auto all = m.support_points();
      Rng rng(dir_src.seed);
      std::vector<Point> pts;
      for (auto i : rng.sample(all.size(), dir_max)) pts.push_back(all[i]);
      const auto ds = direction_set(pts, m.dim());
      std::printf("points %zu collinear %d", ds.points, ds.collinear ? 1 : 0);
      if (ds.distinct) std::printf(" distinct %zu", *ds.distinct);
      std::printf(" dimension %.6f\n", ds.dimension.estimate);
      return kExitPass;
    }
    if (verify->parsed()) {
      const auto [mu, nu] = bundled_bump_pair();
      const auto r = verify_projection_identity(mu, nu, vi_p, vi_level);
      std::printf("p %g level %d lhs %.12g rhs %.12g relative_error %.3e\n", r.p, r.level, r.lhs, r.rhs,
                  r.relative_error);
      return kExitPass;
    }
    if (tubes->parsed()) {
      const auto r = bad_point_test(tube_src.load(), {tx, ty, 0.0}, tparams);
      std::printf("bad %d covered %.12g threshold %.12g tubes %zu\n", r.is_bad ? 1 : 0, r.covered_mass, r.threshold,
                  r.cover.tubes.size());
      return kExitPass;
    }
    if (blinds->parsed()) {
      BlindOptions opt;
      opt.split = bl_split;
      opt.epsilon = bl_eps;
      opt.thinning = bl_thin;
      const auto vps = read_points(bl_vps);
      const auto res = blind_construct(vps, bl_gens, opt, default_seed(), bl_level);
      std::filesystem::create_directories(bl_out);
      save_measure(bl_out + "/measure.txt", res.measure);
      Table t{"content", {"generation", "viewpoint", "epsilon", "content_bound"}, {}};
      for (const auto& r : res.report)
        t.rows.push_back({static_cast<double>(r.generation), static_cast<double>(r.viewpoint), r.epsilon, r.content_bound});
      write_csv(t, bl_out + "/content.csv");
      std::printf("tubes %zu cells %zu\n", res.state.tubes.size(), res.measure.size());
      return kExitPass;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
