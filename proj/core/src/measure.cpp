#include "radial/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "radial/error.hpp"
#include "radial/summation.hpp"

namespace radial {

namespace {

double total_of(std::span<const Cell> cells) {
  std::vector<double> m;
  m.reserve(cells.size());
  for (const auto& c : cells) m.push_back(c.mass);
  return pairwise_sum(m);
}

void check_dim_level(int dim, int level) {
  require(dim == 2 || dim == 3, ErrorCode::kInvalidArgument, "dimension must be 2 or 3");
  require(level >= 0 && level <= GridMeasure::kMaxLevel, ErrorCode::kInvalidArgument,
          "grid level out of range [0, 30]");
}

}  // namespace

GridMeasure::GridMeasure(int dim, int level, std::vector<Cell> cells)
    : dim_(dim), level_(level), cells_(std::move(cells)) {
  check_dim_level(dim, level);
  const std::uint32_t n = side_cells();
  for (const auto& c : cells_) {
    require(std::isfinite(c.mass) && c.mass >= 0.0, ErrorCode::kInvalidArgument,
            "cell masses must be finite and nonnegative");
    for (int a = 0; a < 3; ++a) {
      const std::uint32_t limit = a < dim ? n : 1u;
      require(c.index[a] < limit, ErrorCode::kInvalidArgument, "cell index outside [0, 2^m)^d");
    }
  }
  std::sort(cells_.begin(), cells_.end(),
            [](const Cell& a, const Cell& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < cells_.size(); ++i) {
    require(cells_[i - 1].index != cells_[i].index, ErrorCode::kInvalidArgument,
            "duplicate cell index");
  }
  total_mass_ = total_of(cells_);
}

double GridMeasure::cell_side() const { return std::ldexp(1.0, -level_); }

double GridMeasure::cell_diameter() const { return cell_side() * std::sqrt(static_cast<double>(dim_)); }

Point GridMeasure::center(const CellIndex& idx) const {
  const double h = cell_side();
  Point p{(idx[0] + 0.5) * h, (idx[1] + 0.5) * h, 0.0};
  if (dim_ == 3) p.z = (idx[2] + 0.5) * h;
  return p;
}

std::vector<Point> GridMeasure::support_points() const {
  std::vector<Point> pts;
  pts.reserve(cells_.size());
  for (const auto& c : cells_) pts.push_back(center(c));
  return pts;
}

double GridMeasure::distance_to_support(const Point& p) const {
  const double h = cell_side();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cells_) {
    const double lo[3] = {c.index[0] * h, c.index[1] * h, c.index[2] * h};
    const double q[3] = {p.x, p.y, p.z};
    double d2 = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const double hi = lo[a] + h;
      const double e = q[a] < lo[a] ? lo[a] - q[a] : (q[a] > hi ? q[a] - hi : 0.0);
      d2 += e * e;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

GridMeasure GridMeasure::normalized() const {
  require(total_mass_ > 0.0, ErrorCode::kEmptySet, "cannot normalise a zero measure");
  std::vector<Cell> out(cells_.begin(), cells_.end());
  for (auto& c : out) c.mass /= total_mass_;
  return GridMeasure(dim_, level_, std::move(out));
}

GridMeasure GridMeasure::restricted(const std::function<bool(const Point&)>& keep) const {
  std::vector<Cell> out;
  for (const auto& c : cells_) {
    if (keep(center(c))) out.push_back(c);
  }
  return GridMeasure(dim_, level_, std::move(out));
}

GridMeasure GridMeasure::coarsened(int levels) const {
  require(levels >= 0 && levels <= level_, ErrorCode::kInvalidArgument, "cannot coarsen past level 0");
  std::map<CellIndex, std::vector<double>> parents;
  for (const auto& c : cells_) {
    CellIndex p = c.index;
    for (int a = 0; a < dim_; ++a) p[a] >>= levels;
    parents[p].push_back(c.mass);
  }
  std::vector<Cell> out;
  out.reserve(parents.size());
  for (auto& [idx, masses] : parents) out.push_back({idx, pairwise_sum(masses)});
  return GridMeasure(dim_, level_ - levels, std::move(out));
}

bool operator==(const GridMeasure& a, const GridMeasure& b) {
  if (a.dim_ != b.dim_ || a.level_ != b.level_ || a.cells_.size() != b.cells_.size()) return false;
  for (std::size_t i = 0; i < a.cells_.size(); ++i) {
    if (a.cells_[i].index != b.cells_[i].index || a.cells_[i].mass != b.cells_[i].mass) return false;
  }
  return true;
}

GridMeasureBuilder::GridMeasureBuilder(int dim, int level) : dim_(dim), level_(level) {
  check_dim_level(dim, level);
}

void GridMeasureBuilder::add(const CellIndex& idx, double mass) { cells_[idx] += mass; }

CellIndex GridMeasureBuilder::cell_of(const Point& p) const {
  const double n = std::ldexp(1.0, level_);
  const double q[3] = {p.x, p.y, p.z};
  CellIndex idx{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double f = std::floor(q[a] * n);
    idx[a] = static_cast<std::uint32_t>(std::clamp(f, 0.0, n - 1.0));
  }
  return idx;
}

void GridMeasureBuilder::add_at(const Point& p, double mass) { add(cell_of(p), mass); }

GridMeasure GridMeasureBuilder::build(bool normalize) const {
  std::vector<Cell> out;
  out.reserve(cells_.size());
  for (const auto& [idx, m] : cells_) {
    if (m > 0.0) out.push_back({idx, m});
  }
  GridMeasure g(dim_, level_, std::move(out));
  return normalize ? g.normalized() : g;
}

GridMeasure build_ifs_measure(std::span<const Similarity> maps, int depth, int dim, int min_level) {
  require(!maps.empty(), ErrorCode::kInvalidArgument, "IFS needs at least one map");
  require(depth >= 1, ErrorCode::kInvalidArgument, "IFS depth must be >= 1");
  std::vector<double> weights;
  double rmin = 1.0;
  for (const auto& f : maps) {
    require(f.ratio > 0.0, ErrorCode::kInvalidArgument, "contraction ratio must be positive");
    require(f.ratio <= 1.0, ErrorCode::kInvalidArgument, "expansive map (ratio > 1) rejected");
    require(f.weight >= 0.0, ErrorCode::kInvalidArgument, "negative IFS weight");
    const double off[3] = {f.offset.x, f.offset.y, f.offset.z};
    for (int a = 0; a < dim; ++a) {
      require(off[a] >= 0.0 && off[a] + f.ratio <= 1.0 + 1e-12, ErrorCode::kInvalidArgument,
              "IFS map does not send the unit cube into itself");
    }
    weights.push_back(f.weight);
    rmin = std::min(rmin, f.ratio);
  }
  require(std::abs(pairwise_sum(weights) - 1.0) <= 1e-9, ErrorCode::kInvalidArgument,
          "IFS weights must sum to 1");
  const double branches = std::pow(static_cast<double>(maps.size()), depth);
  require(branches <= 2.0e7, ErrorCode::kResolutionExceeded, "IFS depth too large");

  const int level = std::max(
      min_level, static_cast<int>(std::ceil(depth * std::log2(1.0 / rmin) - 1e-9)));
  require(level <= GridMeasure::kMaxLevel, ErrorCode::kResolutionExceeded,
          "IFS resolution exceeds grid level 30");

  // Composite maps y -> scale * y + offset with product weights.
  struct Composite {
    double scale;
    Vec offset;
    double weight;
  };
  std::vector<Composite> cur{{1.0, Vec{}, 1.0}};
  for (int k = 0; k < depth; ++k) {
    std::vector<Composite> next;
    next.reserve(cur.size() * maps.size());
    for (const auto& c : cur) {
      for (const auto& f : maps) {
        next.push_back({c.scale * f.ratio, c.offset + f.offset * c.scale, c.weight * f.weight});
      }
    }
    cur = std::move(next);
  }

  GridMeasureBuilder builder(dim, level);
  const double n = std::ldexp(1.0, level);
  for (const auto& c : cur) {
    if (c.weight == 0.0) continue;
    const double across = c.scale * n;
    if (std::floor(across + 1e-9) <= 1.0) {
      builder.add_at(c.offset + Vec{0.5, 0.5, dim == 3 ? 0.5 : 0.0} * c.scale, c.weight);
      continue;
    }
    const double off[3] = {c.offset.x, c.offset.y, c.offset.z};
    std::uint32_t lo[3] = {0, 0, 0};
    std::uint32_t hi[3] = {1, 1, 1};
    for (int a = 0; a < dim; ++a) {
      lo[a] = static_cast<std::uint32_t>(std::ceil(off[a] * n - 0.5));
      hi[a] = static_cast<std::uint32_t>(std::ceil((off[a] + c.scale) * n - 0.5));
    }
    double count = 1.0;
    for (int a = 0; a < dim; ++a) count *= static_cast<double>(hi[a] - lo[a]);
    const double m = c.weight / count;
    for (std::uint32_t i = lo[0]; i < hi[0]; ++i)
      for (std::uint32_t j = lo[1]; j < hi[1]; ++j)
        for (std::uint32_t k = lo[2]; k < hi[2]; ++k) builder.add({i, j, k}, m);
  }
  return builder.build(true);
}

std::vector<Similarity> four_corner_maps() {
  std::vector<Similarity> maps;
  for (double oy : {0.0, 0.75})
    for (double ox : {0.0, 0.75}) maps.push_back({0.25, Vec{ox, oy, 0.0}, 0.25});
  return maps;
}

std::vector<Similarity> cantor_product_maps(double ratio, std::span<const double> offsets) {
  std::vector<Similarity> maps;
  const double w = 1.0 / static_cast<double>(offsets.size() * offsets.size());
  for (double oy : offsets)
    for (double ox : offsets) maps.push_back({ratio, Vec{ox, oy, 0.0}, w});
  return maps;
}

std::vector<Similarity> middle_thirds_product_maps() {
  const double offsets[] = {0.0, 2.0 / 3.0};
  return cantor_product_maps(1.0 / 3.0, offsets);
}

GridMeasure uniform_measure(int dim, int level) {
  const Similarity id{1.0, Vec{}, 1.0};
  return build_ifs_measure(std::span(&id, 1), 1, dim, level);
}

GridMeasure point_mass(int dim, int level, const Point& p) {
  GridMeasureBuilder b(dim, level);
  b.add_at(p, 1.0);
  return b.build(true);
}

GridMeasure atomic_measure(int dim, int level, std::span<const Point> points,
                           std::span<const double> masses) {
  require(!points.empty(), ErrorCode::kEmptySet, "no atoms");
  require(masses.empty() || masses.size() == points.size(), ErrorCode::kInvalidArgument,
          "atom masses must match atom count");
  GridMeasureBuilder b(dim, level);
  for (std::size_t i = 0; i < points.size(); ++i) b.add_at(points[i], masses.empty() ? 1.0 : masses[i]);
  return b.build(true);
}

GridMeasure line_measure(const Line& line, int depth, int dim) {
  check_dim_level(dim, depth);
  // Clip the line to the closed unit cube (slab method).
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const double p0[3] = {line.foot.x, line.foot.y, line.foot.z};
  const double u[3] = {line.direction.x, line.direction.y, line.direction.z};
  for (int a = 0; a < dim; ++a) {
    if (u[a] == 0.0) {
      require(p0[a] >= 0.0 && p0[a] <= 1.0, ErrorCode::kInvalidArgument, "line misses the unit cube");
      continue;
    }
    double ta = (0.0 - p0[a]) / u[a];
    double tb = (1.0 - p0[a]) / u[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  require(t1 > t0, ErrorCode::kInvalidArgument, "line misses the unit cube");

  // Parameters where the segment crosses grid planes split it into pieces that
  // each lie in one cell; the midpoint of each piece names that cell.
  const double n = std::ldexp(1.0, depth);
  std::vector<double> cuts{t0, t1};
  for (int a = 0; a < dim; ++a) {
    if (u[a] == 0.0) continue;
    for (std::uint32_t k = 1; k < static_cast<std::uint32_t>(n); ++k) {
      const double t = (k / n - p0[a]) / u[a];
      if (t > t0 && t < t1) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  GridMeasureBuilder b(dim, depth);
  std::map<CellIndex, bool> hit;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double tm = 0.5 * (cuts[i] + cuts[i + 1]);
    hit[b.cell_of(line.point_at(tm))] = true;
  }
  require(!hit.empty(), ErrorCode::kInvalidArgument, "line misses the unit cube");
  for (const auto& [idx, _] : hit) b.add(idx, 1.0);
  return b.build(true);
}

double mass_in_ball(const GridMeasure& measure, const Point& center, double r) {
  require(r > 0.0, ErrorCode::kInvalidArgument, "ball radius must be positive");
  const double r2 = r * r;
  std::vector<double> inside;
  for (const auto& c : measure.cells()) {
    const Vec d = measure.center(c) - center;
    if (dot(d, d) <= r2) inside.push_back(c.mass);
  }
  return pairwise_sum(inside);
}

namespace {

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (s * s > v) --s;
  while ((s + 1) * (s + 1) <= v) ++s;
  return s;
}

std::int64_t floor_div2(std::int64_t a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
std::int64_t ceil_div2(std::int64_t a) { return -floor_div2(-a); }

// Cells grouped into rows along the first axis, with prefix masses, for exact
// integer ball queries in half-cell units.
class RowIndex {
 public:
  explicit RowIndex(const GridMeasure& m) : dim_(m.dim()) {
    for (const auto& c : m.cells()) {
      Row& row = rows_[key(c.index[1], c.index[2])];
      row.x.push_back(static_cast<std::int64_t>(c.index[0]));
      row.prefix.push_back((row.prefix.empty() ? 0.0 : row.prefix.back()) + c.mass);
    }
  }

  // Mass of cells with centre (2i+1, 2j+1, 2k+1) inside the closed ball of
  // squared radius r2 around (cx, cy, cz), all in half-cell units.
  double ball(std::int64_t cx, std::int64_t cy, std::int64_t cz, std::int64_t r) const {
    const std::int64_t r2 = r * r;
    double total = 0.0;
    const std::int64_t jlo = std::max<std::int64_t>(0, ceil_div2(cy - r - 1));
    const std::int64_t jhi = floor_div2(cy + r - 1);
    std::int64_t klo = 0, khi = 0;
    if (dim_ == 3) {
      klo = std::max<std::int64_t>(0, ceil_div2(cz - r - 1));
      khi = floor_div2(cz + r - 1);
    }
    for (std::int64_t k = klo; k <= khi; ++k) {
      const std::int64_t dz = dim_ == 3 ? 2 * k + 1 - cz : 0;
      for (std::int64_t j = jlo; j <= jhi; ++j) {
        const std::int64_t dy = 2 * j + 1 - cy;
        const std::int64_t w2 = r2 - dy * dy - dz * dz;
        if (w2 < 0) continue;
        auto it = rows_.find(key(static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k)));
        if (it == rows_.end()) continue;
        const std::int64_t q = isqrt(w2);
        const std::int64_t ilo = ceil_div2(cx - q - 1);
        const std::int64_t ihi = floor_div2(cx + q - 1);
        if (ihi < ilo) continue;
        const Row& row = it->second;
        auto a = std::lower_bound(row.x.begin(), row.x.end(), ilo) - row.x.begin();
        auto b = std::upper_bound(row.x.begin(), row.x.end(), ihi) - row.x.begin();
        if (b <= a) continue;
        total += row.prefix[b - 1] - (a > 0 ? row.prefix[a - 1] : 0.0);
      }
    }
    return total;
  }

 private:
  struct Row {
    std::vector<std::int64_t> x;
    std::vector<double> prefix;
  };
  static std::uint64_t key(std::uint32_t j, std::uint32_t k) {
    return (static_cast<std::uint64_t>(k) << 32) | j;
  }
  int dim_;
  std::unordered_map<std::uint64_t, Row> rows_;
};

}  // namespace

FrostmanCertificate frostman_certificate(const GridMeasure& measure, double kappa) {
  require(kappa > 0.0 && kappa <= measure.dim(), ErrorCode::kInvalidArgument,
          "Frostman exponent must lie in (0, d]");
  require(!measure.empty(), ErrorCode::kEmptySet, "empty measure");
  const RowIndex rows(measure);
  const int m = measure.level();

  double best = -1.0;
  int best_j = 0;
  CellIndex best_cell{};
  for (int j = 0; j <= m; ++j) {
    const int shift = m - j;
    const std::int64_t r = std::int64_t{1} << (shift + 1);  // 2^-j in half-cells
    const double radius = std::ldexp(1.0, -j);
    std::map<CellIndex, bool> centres;
    for (const auto& c : measure.cells()) {
      CellIndex p = c.index;
      for (int a = 0; a < measure.dim(); ++a) p[a] >>= shift;
      centres[p] = true;
    }
    for (const auto& [p, _] : centres) {
      // Centre of a level-j cell in level-m half-cell units.
      auto half = [&](std::uint32_t v) { return (std::int64_t{2} * v + 1) << shift; };
      const double mass = rows.ball(half(p[0]), half(p[1]), measure.dim() == 3 ? half(p[2]) : 0, r);
      const double ratio = mass / std::pow(radius, kappa);
      if (ratio > best) {
        best = ratio;
        best_j = j;
        best_cell = p;
      }
    }
  }
  FrostmanCertificate cert;
  cert.radius = std::ldexp(1.0, -best_j);
  const double h = cert.radius;
  cert.center = Point{(best_cell[0] + 0.5) * h, (best_cell[1] + 0.5) * h,
                      measure.dim() == 3 ? (best_cell[2] + 0.5) * h : 0.0};
  cert.witness_mass = mass_in_ball(measure, cert.center, cert.radius);
  cert.constant = cert.witness_mass / std::pow(cert.radius, kappa);
  return cert;
}

void write_measure(std::ostream& os, const GridMeasure& measure) {
  os << "gridmeasure v1 d=" << measure.dim() << " m=" << measure.level() << '\n';
  char buf[64];
  for (const auto& c : measure.cells()) {
    os << c.index[0] << ' ' << c.index[1];
    if (measure.dim() == 3) os << ' ' << c.index[2];
    std::snprintf(buf, sizeof(buf), "%.17g", c.mass);
    os << ' ' << buf << '\n';
  }
}

GridMeasure read_measure(std::istream& is) {
  std::string header;
  require(static_cast<bool>(std::getline(is, header)), ErrorCode::kParse, "missing header");
  int dim = 0;
  int level = -1;
  {
    std::istringstream hs(header);
    std::string magic, version, dtok, mtok, extra;
    hs >> magic >> version >> dtok >> mtok;
    require(magic == "gridmeasure", ErrorCode::kParse, "bad magic '" + magic + "'");
    require(version == "v1", ErrorCode::kParse, "unsupported version '" + version + "'");
    require(dtok.rfind("d=", 0) == 0 && mtok.rfind("m=", 0) == 0, ErrorCode::kParse,
            "header must be 'gridmeasure v1 d=<d> m=<m>'");
    require(!(hs >> extra), ErrorCode::kParse, "trailing header tokens");
    try {
      dim = std::stoi(dtok.substr(2));
      level = std::stoi(mtok.substr(2));
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, "non-numeric d or m");
    }
  }
  require(dim == 2 || dim == 3, ErrorCode::kParse, "d must be 2 or 3");
  require(level >= 0 && level <= GridMeasure::kMaxLevel, ErrorCode::kParse, "m out of range");

  std::vector<Cell> cells;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Cell c;
    long long v[3] = {0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      require(static_cast<bool>(ls >> v[a]) && v[a] >= 0, ErrorCode::kParse,
              "line " + std::to_string(lineno) + ": bad cell index");
      require(v[a] < (1LL << level), ErrorCode::kParse,
              "line " + std::to_string(lineno) + ": index out of range");
      c.index[a] = static_cast<std::uint32_t>(v[a]);
    }
    require(static_cast<bool>(ls >> c.mass), ErrorCode::kParse,
            "line " + std::to_string(lineno) + ": bad mass");
    std::string extra;
    require(!(ls >> extra), ErrorCode::kParse, "line " + std::to_string(lineno) + ": trailing tokens");
    cells.push_back(c);
  }
  try {
    return GridMeasure(dim, level, std::move(cells));
  } catch (const Error& e) {
    fail(ErrorCode::kParse, e.what());
  }
}

void save_measure(const std::string& path, const GridMeasure& measure) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::kInvalidArgument, "cannot open " + path);
  write_measure(os, measure);
}

GridMeasure load_measure(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::kInvalidArgument, "cannot open " + path);
  return read_measure(is);
}

}  // namespace radial
