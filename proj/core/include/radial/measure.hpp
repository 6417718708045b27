#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/line.hpp"

namespace radial {

using CellIndex = std::array<std::uint32_t, 3>;

struct Cell {
  CellIndex index{};
  double mass = 0.0;
};

/// Sparse probability (or restricted sub-probability) measure on the dyadic
/// grid of [0,1]^d at level m. Immutable after construction; cells are kept in
/// lexicographic index order so every reduction is reproducible.
///
/// Geometric queries use the cell-centre convention: a cell belongs to a ball,
/// tube or projection bin iff its centre does. The error this introduces is at
/// most one cell diameter.
class GridMeasure {
 public:
  static constexpr int kMaxLevel = 30;

  GridMeasure() = default;
  /// Validates indices and masses; duplicate indices are rejected.
  GridMeasure(int dim, int level, std::vector<Cell> cells);

  int dim() const { return dim_; }
  int level() const { return level_; }
  std::uint32_t side_cells() const { return std::uint32_t{1} << level_; }
  double cell_side() const;
  double cell_diameter() const;

  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  double total_mass() const { return total_mass_; }

  Point center(const CellIndex& idx) const;
  Point center(const Cell& c) const { return center(c.index); }
  std::vector<Point> support_points() const;

  /// Euclidean distance from p to the union of the support cells (closed squares).
  double distance_to_support(const Point& p) const;

  GridMeasure normalized() const;
  /// Sub-measure of cells whose centres satisfy `keep`; masses are not rescaled.
  GridMeasure restricted(const std::function<bool(const Point&)>& keep) const;
  /// Sums children into parents `levels` levels up.
  GridMeasure coarsened(int levels) const;

  friend bool operator==(const GridMeasure&, const GridMeasure&);

 private:
  int dim_ = 2;
  int level_ = 0;
  std::vector<Cell> cells_;
  double total_mass_ = 0.0;
};

/// Accumulates mass into cells; duplicates add up.
class GridMeasureBuilder {
 public:
  GridMeasureBuilder(int dim, int level);
  void add(const CellIndex& idx, double mass);
  /// Adds mass to the cell containing p (half-open cells, clamped to the cube).
  void add_at(const Point& p, double mass);
  CellIndex cell_of(const Point& p) const;
  GridMeasure build(bool normalize) const;

 private:
  int dim_;
  int level_;
  std::map<CellIndex, double> cells_;
};

/// y -> ratio * y + offset, applied with probability `weight`.
struct Similarity {
  double ratio = 0.5;
  Vec offset{};
  double weight = 1.0;
};

/// Depth-th iterate of the IFS measure starting from the uniform measure on
/// the unit cube, rasterised at the coarsest level m >= min_level with
/// 2^-m <= (min ratio)^depth. An image cube narrower than two cells puts its
/// mass on the cell containing its centre; wider cubes spread mass evenly over
/// the cells whose centres they contain.
GridMeasure build_ifs_measure(std::span<const Similarity> maps, int depth, int dim = 2,
                              int min_level = 0);

/// Four maps of ratio 1/4 into the corners of the unit square.
std::vector<Similarity> four_corner_maps();
/// Planar product of a one-dimensional Cantor construction with itself:
/// ratio r and left endpoints `offsets` per axis, all weights equal.
std::vector<Similarity> cantor_product_maps(double ratio, std::span<const double> offsets);
std::vector<Similarity> middle_thirds_product_maps();

GridMeasure uniform_measure(int dim, int level);
GridMeasure point_mass(int dim, int level, const Point& p);
/// Equal-mass atoms at the cells containing `points`.
GridMeasure atomic_measure(int dim, int level, std::span<const Point> points,
                           std::span<const double> masses = {});

/// Unit mass spread evenly over the cells crossed by line ∩ [0,1]^d at level `depth`.
GridMeasure line_measure(const Line& line, int depth, int dim = 2);

/// Mass of cells whose centre lies in the closed ball B(center, r).
double mass_in_ball(const GridMeasure& measure, const Point& center, double r);

struct FrostmanCertificate {
  double constant = 0.0;
  Point center{};
  double radius = 1.0;
  double witness_mass = 0.0;
};

/// max mu(B)/r^kappa over dyadic balls: radius 2^-j, centred at the centre of
/// an occupied level-j cell, 0 <= j <= m. Any ball of radius 2^-j-1 lies in one
/// of these, so the continuum constant is at most 2^kappa times larger.
FrostmanCertificate frostman_certificate(const GridMeasure& measure, double kappa);

/// Plain-text `gridmeasure v1` format.
void write_measure(std::ostream& os, const GridMeasure& measure);
GridMeasure read_measure(std::istream& is);
void save_measure(const std::string& path, const GridMeasure& measure);
GridMeasure load_measure(const std::string& path);

}  // namespace radial
