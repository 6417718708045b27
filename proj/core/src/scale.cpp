#include "radial/scale.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>

#include "radial/error.hpp"
#include "radial/parallel.hpp"
#include "radial/summation.hpp"

namespace radial {

ScaleSchedule::ScaleSchedule(double epsilon, int k0, int kmax) : epsilon_(epsilon), k0_(k0), kmax_(kmax) {
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::kInvalidArgument, "schedule needs epsilon > 0");
  require(k0 >= 1, ErrorCode::kInvalidArgument, "schedule needs k0 >= 1");
  require(kmax >= k0, ErrorCode::kInvalidArgument, "schedule needs kmax >= k0");
  for (int k = k0; k <= kmax; ++k) {
    const double e = std::pow(1.0 + epsilon, k);
    require(e <= kMaxExponent, ErrorCode::kScheduleUnderflow, "delta_k falls below 2^-1000");
    exponents_.push_back(e);
  }
}

double ScaleSchedule::exponent(int k) const {
  require(k >= k0_ && k <= kmax_, ErrorCode::kInvalidArgument, "schedule index out of range");
  return exponents_[static_cast<std::size_t>(k - k0_)];
}

double ScaleSchedule::delta(int k) const { return std::exp2(-exponent(k)); }

std::vector<double> ScaleSchedule::deltas() const {
  std::vector<double> out;
  out.reserve(exponents_.size());
  for (double e : exponents_) out.push_back(std::exp2(-e));
  return out;
}

ScaleSchedule make_schedule(double epsilon, int k0, int kmax) { return ScaleSchedule(epsilon, k0, kmax); }

std::vector<double> dyadic_scales(int jmin, int jmax) {
  require(jmin <= jmax, ErrorCode::kInvalidArgument, "empty dyadic scale range");
  std::vector<double> out;
  for (int j = jmin; j <= jmax; ++j) out.push_back(std::ldexp(1.0, -j));
  return out;
}

namespace {

std::size_t count_boxes(std::span<const Point> points, int dim, double delta) {
  std::vector<std::array<std::int64_t, 3>> keys;
  keys.reserve(points.size());
  for (const auto& p : points) {
    std::array<std::int64_t, 3> k{0, 0, 0};
    const double c[3] = {p.x, p.y, p.z};
    for (int a = 0; a < dim; ++a) k[a] = static_cast<std::int64_t>(std::floor(c[a] / delta));
    keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

DimEstimate fit(std::vector<double> scales, std::vector<std::size_t> counts, int dim) {
  DimEstimate out;
  const std::size_t n = scales.size();
  out.window_begin = n >= 5 ? 2 : 0;
  out.window_end = n >= 5 ? n - 1 : n;
  const std::size_t w = out.window_end - out.window_begin;
  std::vector<double> xs, ys;
  for (std::size_t i = out.window_begin; i < out.window_end; ++i) {
    xs.push_back(-std::log(scales[i]));
    ys.push_back(std::log(static_cast<double>(counts[i])));
  }
  double slope = 0.0, intercept = ys.empty() ? 0.0 : ys[0];
  if (w >= 2) {
    const double mx = pairwise_sum(xs) / static_cast<double>(w);
    const double my = pairwise_sum(ys) / static_cast<double>(w);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    slope = sxx > 0.0 ? sxy / sxx : 0.0;
    intercept = my - slope * mx;
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  out.residual = w > 0 ? std::sqrt(rss / static_cast<double>(w)) : 0.0;
  out.estimate = std::clamp(slope, 0.0, static_cast<double>(dim));
  out.scales = std::move(scales);
  out.counts = std::move(counts);
  return out;
}

}  // namespace

DimEstimate box_dimension(std::span<const Point> points, int dim, std::span<const double> scales) {
  require(!points.empty(), ErrorCode::kEmptySet, "box dimension of an empty set");
  require(dim >= 1 && dim <= 3, ErrorCode::kInvalidArgument, "dimension must be 1, 2 or 3");
  require(!scales.empty(), ErrorCode::kInvalidArgument, "no scales given");
  std::vector<double> sorted(scales.begin(), scales.end());
  for (double d : sorted)
    require(d > 0.0 && d >= std::ldexp(1.0, -60), ErrorCode::kInvalidArgument, "box scale out of range");
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::size_t> counts;
  for (double d : sorted) counts.push_back(count_boxes(points, dim, d));
  return fit(std::move(sorted), std::move(counts), dim);
}

DimEstimate box_dimension(std::span<const Point> points, int dim, const ScaleSchedule& schedule) {
  const auto deltas = schedule.deltas();
  return box_dimension(points, dim, deltas);
}

DimEstimate box_dimension(const GridMeasure& measure, std::span<const double> scales) {
  const auto pts = measure.support_points();
  return box_dimension(pts, measure.dim(), scales);
}

DimEstimate angular_box_dimension(std::span<const double> t, std::span<const double> scales) {
  std::vector<Point> pts;
  pts.reserve(t.size());
  for (double v : t) pts.push_back({v, 0.0, 0.0});
  return box_dimension(pts, 1, scales);
}

DimEstimate angular_box_dimension(const AngularDensity& density, int jmin) {
  const auto occ = density.occupied();
  require(!occ.empty(), ErrorCode::kEmptySet, "no occupied direction bins");
  const double bins = static_cast<double>(density.bins());
  if (density.dim() == 2) {
    const int jmax = std::max(jmin, static_cast<int>(std::floor(std::log2(bins))));
    std::vector<double> t;
    for (auto b : occ) t.push_back((static_cast<double>(b) + 0.5) / bins);
    const auto scales = dyadic_scales(jmin, jmax);
    return angular_box_dimension(t, scales);
  }
  // Hemisphere of directions: box-count the bin centres as points of R^3.
  std::vector<Point> pts;
  for (auto b : occ) pts.push_back(density.bin_center(b));
  const int jmax = std::max(jmin, static_cast<int>(std::floor(std::log2(std::sqrt(bins)))));
  const auto scales = dyadic_scales(jmin, jmax);
  auto est = box_dimension(pts, 3, scales);
  est.estimate = std::min(est.estimate, 2.0);
  return est;
}

namespace {

// Integer exponents take exact paths so that halving every distance scales the
// kernel by exactly 2^s.
double kernel(double d2, double s) {
  if (s == 1.0) return 1.0 / std::sqrt(d2);
  if (s == 2.0) return 1.0 / d2;
  return std::pow(d2, -0.5 * s);
}

double self_kernel(const GridMeasure& m, double s) {
  const double h = m.cell_side();
  return kernel(h * h * (static_cast<double>(m.dim()) / 6.0), s);
}

double energy_direct(const GridMeasure& measure, double s, bool include_self) {
  const auto cells = measure.cells();
  const std::size_t n = cells.size();
  std::vector<Point> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = measure.center(cells[i]);
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> terms;
    terms.reserve(n - i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec v = c[i] - c[j];
      terms.push_back(cells[i].mass * cells[j].mass * kernel(dot(v, v), s));
    }
    rows[i] = 2.0 * pairwise_sum(terms);
  });
  double total = pairwise_sum(rows);
  if (include_self) {
    std::vector<double> self(n);
    const double k0 = self_kernel(measure, s);
    for (std::size_t i = 0; i < n; ++i) self[i] = cells[i].mass * cells[i].mass * k0;
    total += pairwise_sum(self);
  }
  return total;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

double energy_fft(const GridMeasure& measure, double s, bool include_self) {
  const int dim = measure.dim();
  const std::size_t n = measure.side_cells();
  const std::size_t N = 2 * n;
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= N;
  const std::size_t last_complex = N / 2 + 1;
  const std::size_t complex_total = total / N * last_complex;

  std::unique_ptr<double, FftwFree> grid(static_cast<double*>(fftw_malloc(sizeof(double) * total)));
  std::unique_ptr<fftw_complex, FftwFree> spec(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * complex_total)));
  require(grid && spec, ErrorCode::kInvalidArgument, "FFT allocation failed");
  std::fill(grid.get(), grid.get() + total, 0.0);

  auto flat = [&](std::size_t i, std::size_t j, std::size_t k) {
    return dim == 2 ? i * N + j : (i * N + j) * N + k;
  };
  for (const auto& c : measure.cells()) grid.get()[flat(c.index[0], c.index[1], c.index[2])] = c.mass;

  const int dims[3] = {static_cast<int>(N), static_cast<int>(N), static_cast<int>(N)};
  fftw_plan fwd = fftw_plan_dft_r2c(dim, dims, grid.get(), spec.get(), FFTW_ESTIMATE);
  fftw_plan inv = fftw_plan_dft_c2r(dim, dims, spec.get(), grid.get(), FFTW_ESTIMATE);
  fftw_execute(fwd);
  for (std::size_t i = 0; i < complex_total; ++i) {
    const double re = spec.get()[i][0], im = spec.get()[i][1];
    spec.get()[i][0] = re * re + im * im;
    spec.get()[i][1] = 0.0;
  }
  fftw_execute(inv);
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(inv);

  // grid now holds total * autocorrelation at each wrapped offset.
  const double h = measure.cell_side();
  const double k0 = include_self ? self_kernel(measure, s) : 0.0;
  const double scale = 1.0 / static_cast<double>(total);
  auto signed_offset = [&](std::size_t i) {
    return i < n ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(N);
  };
  std::vector<double> terms(total, 0.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double d2 = 0.0;
    bool valid = true;
    for (int a = dim - 1; a >= 0; --a) {
      const std::size_t i = rest % N;
      rest /= N;
      if (i == n) valid = false;  // offset +-n never occurs
      const double o = signed_offset(i) * h;
      d2 += o * o;
    }
    if (!valid) continue;
    const double a = std::max(0.0, grid.get()[idx] * scale);
    terms[idx] = a * (d2 == 0.0 ? k0 : kernel(d2, s));
  }
  return pairwise_sum(terms);
}

}  // namespace

double riesz_energy(const GridMeasure& measure, double s, EnergyOptions options) {
  require(!measure.empty(), ErrorCode::kEmptySet, "energy of an empty measure");
  require(s > 0.0 && s < static_cast<double>(measure.dim()), ErrorCode::kInvalidArgument,
          "energy exponent must satisfy 0 < s < d");
  std::size_t padded = 1;
  for (int a = 0; a < measure.dim(); ++a) padded *= 2 * static_cast<std::size_t>(measure.side_cells());
  const bool fft_fits = measure.level() <= 12 && padded <= (std::size_t{1} << 24);
  EnergyMethod method = options.method;
  if (method == EnergyMethod::kAuto)
    method = (fft_fits && measure.size() > 20000) ? EnergyMethod::kFft : EnergyMethod::kDirect;
  if (method == EnergyMethod::kFft) {
    require(fft_fits, ErrorCode::kInvalidArgument, "grid too large for the FFT energy path");
    return energy_fft(measure, s, options.include_self);
  }
  return energy_direct(measure, s, options.include_self);
}

namespace {

double lp_sum(std::span<const double> values, double p, double weight) {
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = std::pow(values[i], p) * weight;
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

}  // namespace

double lp_norm(const AngularDensity& density, double p, LpMeasure measure) {
  require(density.mode() == DensityMode::kDensity, ErrorCode::kInvalidArgument,
          "lp_norm needs a density-mode histogram");
  require(p >= 1.0, ErrorCode::kInvalidArgument, "lp_norm needs p >= 1");
  const double w = measure == LpMeasure::kNormalized ? 1.0 / static_cast<double>(density.bins())
                                                     : density.bin_measure();
  return lp_sum(density.values(), p, w);
}

double lp_norm(const LineDensity& density, double p, LpMeasure measure) {
  require(density.mode() == DensityMode::kDensity, ErrorCode::kInvalidArgument,
          "lp_norm needs a density-mode histogram");
  require(p >= 1.0, ErrorCode::kInvalidArgument, "lp_norm needs p >= 1");
  const double w = measure == LpMeasure::kNormalized ? 1.0 / static_cast<double>(density.bins())
                                                     : density.bin_width();
  return lp_sum(density.values(), p, w);
}

std::size_t count_distinct_directions(std::span<const Point> points) {
  struct V {
    double x, y;
  };
  std::vector<V> dirs;
  dirs.reserve(points.size() * (points.size() - (points.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const Vec c = canonical_direction(Vec{points[j].x - points[i].x, points[j].y - points[i].y, 0.0});
      if (c.x == 0.0 && c.y == 0.0) continue;
      dirs.push_back({c.x, c.y});
    }
  // Canonical vectors lie in the half plane of angles [0, pi), where the sign
  // of the cross product orders them by angle.
  auto before = [](const V& a, const V& b) { return a.x * b.y - a.y * b.x > 0.0; };
  std::sort(dirs.begin(), dirs.end(), before);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (i == 0 || before(dirs[i - 1], dirs[i])) ++distinct;
  return distinct;
}

DirectionSet direction_set(std::span<const Point> points, int dim, DirectionSetOptions options) {
  require(points.size() >= 2, ErrorCode::kEmptySet, "direction set needs at least two points");
  require(dim == 2 || dim == 3, ErrorCode::kInvalidArgument, "dimension must be 2 or 3");
  const std::size_t n = points.size();
  DirectionSet out;
  out.points = n;

  std::vector<double> row_min(n, std::numeric_limits<double>::infinity());
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(points[i], points[j]);
      if (d > 0.0) row_min[i] = std::min(row_min[i], d);
    }
  });
  const double dmin = *std::min_element(row_min.begin(), row_min.end());
  require(std::isfinite(dmin), ErrorCode::kEmptySet, "direction set needs two distinct points");

  std::size_t bins = options.bins;
  if (bins == 0) {
    const double need = 4.0 * std::numbers::pi / dmin;
    bins = 1;
    while (static_cast<double>(bins) < need && bins < options.max_bins) bins *= 2;
  }
  AngularDensity hist(dim, bins, DensityMode::kMeasure);

  // Pair counts are integers, so chunked accumulation is exact in any order.
  constexpr std::size_t kChunks = 8;
  std::vector<std::vector<double>> partial(kChunks, std::vector<double>(hist.bins(), 0.0));
  parallel_for(kChunks, [&](std::size_t chunk) {
    auto& h = partial[chunk];
    for (std::size_t i = chunk; i < n; i += kChunks)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Vec v = points[j] - points[i];
        if (dot(v, v) == 0.0) continue;
        h[hist.bin_of(v)] += 1.0;
      }
  });
  for (const auto& h : partial)
    for (std::size_t b = 0; b < h.size(); ++b) hist.values()[b] += h[b];

  const Point& p0 = points[0];
  std::size_t far = 1;
  while (far < n && points[far] == p0) ++far;
  const Vec base = points[std::min(far, n - 1)] - p0;
  out.collinear = true;
  for (std::size_t i = 1; i < n && out.collinear; ++i) {
    const Vec v = points[i] - p0;
    out.collinear = dim == 2 ? cross2(base, v) == 0.0 : dot(cross(base, v), cross(base, v)) == 0.0;
  }

  if (dim == 2 && n <= options.exact_limit) out.distinct = count_distinct_directions(points);
  out.dimension = angular_box_dimension(hist);
  out.histogram = std::move(hist);
  return out;
}

}  // namespace radial
