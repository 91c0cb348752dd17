#ifndef BLOWUP_CORE_METRIC_HPP
#define BLOWUP_CORE_METRIC_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "blowup/common.hpp"
#include "blowup/point_set.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Set-distance kernels on finite point sets.
//
//   excess(A, B)            sup_{a in A} min_{b in B} |a - b|
//   ww_distance(A, B, x, r) r^-1 max{ excess(A n B(x,r), B),
//                                     excess(B n B(x,r), A) }
//   pointed_distance(A, B)  infimal grid eps with D^{x,1/eps} <= eps^2
//
// excess(empty, B) = 0 by convention; excess(A, empty) is an error.
// All operations are pure; the indexed path and the brute-force path compute
// identical values (the index is exact), so brute force stays available as a
// test oracle.
// ---------------------------------------------------------------------------

/// Point set bundled with its spatial index so repeated queries amortize.
class IndexedPoints {
 public:
  explicit IndexedPoints(const PointSet& ps) : ps_(&ps), idx_(ps) {}
  const PointSet& set() const { return *ps_; }
  const SpatialIndex& index() const { return idx_; }
  bool empty() const { return ps_->empty(); }
  double nearest_dist(std::span<const double> q) const { return idx_.nearest_dist(q); }

 private:
  const PointSet* ps_;
  SpatialIndex idx_;
};

inline double excess_brute(const PointSet& a, const PointSet& b) {
  require(!b.empty(), errc::empty_second_argument, "excess over an empty set is undefined");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = kInf;
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, dist(a.point(i), b.point(j)));
    worst = std::max(worst, best);
  }
  return worst;
}

inline double excess(const PointSet& a, const IndexedPoints& b) {
  require(!b.empty(), errc::empty_second_argument, "excess over an empty set is undefined");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, b.nearest_dist(a.point(i)));
  return worst;
}

inline double excess(const PointSet& a, const PointSet& b) {
  require(!b.empty(), errc::empty_second_argument, "excess over an empty set is undefined");
  if (a.empty()) return 0.0;
  IndexedPoints ib(b);
  return excess(a, ib);
}

/// Samples of A inside the closed ball, resolution and markers preserved.
inline PointSet intersect_ball(const PointSet& a, const Ball& ball) {
  PointSet out(a.dim, a.resolution, a.label);
  out.marker_names = a.marker_names;
  out.marker_flags.assign(a.marker_names.size(), {});
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!ball.contains(a.point(i))) continue;
    std::size_t idx = out.size();
    out.push_back(a.point(i));
    for (std::size_t m = 0; m < a.marker_flags.size(); ++m)
      if (a.marker_flags[m][i]) out.set_flag(static_cast<int>(m), idx);
  }
  return out;
}

namespace detail {
inline double nearest_into(const IndexedPoints& t, std::span<const double> q) {
  return t.nearest_dist(q);
}
inline double nearest_into(const PointSet& t, std::span<const double> q) {
  double best = kInf;
  for (std::size_t j = 0; j < t.size(); ++j) best = std::min(best, dist(q, t.point(j)));
  return best;
}

// sup over points of `from` inside B(x,r) of the nearest-sample distance
// into `to`. Returns 0 when the window is empty (empty-excess convention).
template <class Target>
inline double window_excess(const PointSet& from, const Target& to, std::span<const double> x,
                            double r) {
  double worst = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto p = from.point(i);
    if (dist(p, x) > r + kBallTol) continue;
    worst = std::max(worst, nearest_into(to, p));
  }
  return worst;
}
}  // namespace detail

/// Relative Walkup-Wets distance D^{x,r}[A,B] with indexed nearest-neighbor
/// queries. Window membership uses the closed-ball tolerance.
inline double ww_distance(const IndexedPoints& a, const IndexedPoints& b,
                          std::span<const double> x, double r) {
  require(r > 0.0, errc::nonpositive_radius, "window radius must be positive");
  require(!a.empty() && !b.empty(), errc::empty_set, "ww_distance needs nonempty sets");
  double ex_ab = detail::window_excess(a.set(), b, x, r);
  double ex_ba = detail::window_excess(b.set(), a, x, r);
  return std::max(ex_ab, ex_ba) / r;
}

inline double ww_distance(const PointSet& a, const PointSet& b, std::span<const double> x,
                          double r) {
  IndexedPoints ia(a), ib(b);
  return ww_distance(ia, ib, x, r);
}

inline double ww_distance(const PointSet& a, const PointSet& b,
                          std::initializer_list<double> x, double r) {
  return ww_distance(a, b, std::span<const double>(x.begin(), x.size()), r);
}

/// Brute-force oracle for D^{x,r}[A,B].
inline double ww_distance_brute(const PointSet& a, const PointSet& b,
                                std::span<const double> x, double r) {
  require(r > 0.0, errc::nonpositive_radius, "window radius must be positive");
  require(!a.empty() && !b.empty(), errc::empty_set, "ww_distance needs nonempty sets");
  double ex_ab = detail::window_excess(a, b, x, r);
  double ex_ba = detail::window_excess(b, a, x, r);
  return std::max(ex_ab, ex_ba) / r;
}

/// The eps-grid used by the pointed distance: {step, 2 step, ..., 1}.
inline std::vector<double> pointed_distance_grid(double step) {
  require(step > 0.0 && step < 1.0, errc::invalid_grid_step, "grid step must be in (0,1)");
  std::vector<double> grid;
  for (int k = 1;; ++k) {
    double eps = k * step;
    if (eps >= 1.0 - kBallTol) break;
    grid.push_back(eps);
  }
  grid.push_back(1.0);
  return grid;
}

inline bool pointed_distance_admissible(const IndexedPoints& a, const IndexedPoints& b,
                                        std::span<const double> x, double eps) {
  return ww_distance(a, b, x, 1.0 / eps) <= eps * eps;
}

/// Gromov's pointed distance H^x[A,B], discretized: the smallest grid eps
/// with D^{x,1/eps}[A,B] <= eps^2, or 1 when no grid value is admissible.
/// Admissibility is an up-set in eps (monotonicity of the window excesses),
/// so a binary search over the grid returns the grid infimum. The linear
/// full-grid sweep lives in pointed_distance_sweep as the independent check.
inline double pointed_distance(const PointedSet& a, const PointSet& b, double grid_step) {
  a.check_valid();
  require(!a.set.empty() && !b.empty(), errc::empty_set, "pointed distance needs nonempty sets");
  auto grid = pointed_distance_grid(grid_step);
  IndexedPoints ia(a.set), ib(b);
  auto x = a.base_point();
  // First admissible index via binary search; grid.size() when none.
  std::size_t lo = 0, hi = grid.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (pointed_distance_admissible(ia, ib, x, grid[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo == grid.size() ? 1.0 : grid[lo];
}

/// Independent oracle: full linear sweep over the grid, smallest admissible.
inline double pointed_distance_sweep(const PointedSet& a, const PointSet& b, double grid_step) {
  a.check_valid();
  require(!a.set.empty() && !b.empty(), errc::empty_set, "pointed distance needs nonempty sets");
  auto grid = pointed_distance_grid(grid_step);
  IndexedPoints ia(a.set), ib(b);
  auto x = a.base_point();
  double best = 1.0;
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    if (pointed_distance_admissible(ia, ib, x, *it)) best = *it;
  }
  return best;
}

}  // namespace blowup

#endif  // BLOWUP_CORE_METRIC_HPP
