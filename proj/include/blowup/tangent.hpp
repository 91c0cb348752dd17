#ifndef BLOWUP_TANGENT_HPP
#define BLOWUP_TANGENT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowup/common.hpp"
#include "blowup/core_metric.hpp"
#include "blowup/gh_metric.hpp"
#include "blowup/metric_space.hpp"
#include "blowup/point_set.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Multi-scale blow-up diagnostics: windows r^-1 (E - x) n B(0, R), pairwise
// Walkup-Wets scans across scales, principal-subspace plane fits, slab
// trimming for approximate tangents, isometry-invariant GH scans, and norm
// profiles for flat windows.
// ---------------------------------------------------------------------------

/// Rescaled recentered window r^-1 (E - x) n B(0, R). The center snaps to
/// the nearest sample so the origin is always a member.
struct BlowUp {
  PointSet window;
  std::size_t origin_index = 0;
  double scale = 1.0;
  double window_radius = 1.0;
  std::string source;
};

inline BlowUp blow_up(const PointSet& e, const SpatialIndex& idx, std::span<const double> x,
                      double r, double big_r) {
  require(r > 0.0 && big_r > 0.0, errc::nonpositive_radius, "blow-up needs r > 0 and R > 0");
  require(!e.empty(), errc::empty_set, "blow-up of an empty set");
  auto [center, gap] = idx.nearest(x);
  require(gap <= e.resolution + kBallTol, errc::point_not_in_set,
          "blow-up center is farther than the resolution from every sample");
  auto c = e.point(center);

  BlowUp out;
  out.scale = r;
  out.window_radius = big_r;
  out.source = e.label;
  out.window = PointSet(e.dim, e.resolution / r, e.label);
  out.window.marker_names = e.marker_names;
  out.window.marker_flags.assign(e.marker_names.size(), {});
  std::vector<double> q(e.dim);
  idx.for_each_within(c, r * big_r, [&](std::size_t i, double d) {
    auto p = e.point(i);
    for (int k = 0; k < e.dim; ++k) q[k] = (p[k] - c[k]) / r;
    if (i == center) out.origin_index = out.window.size();
    std::size_t at = out.window.size();
    out.window.push_back(std::span<const double>(q));
    for (std::size_t m = 0; m < e.marker_flags.size(); ++m)
      if (e.marker_flags[m][i]) out.window.set_flag(static_cast<int>(m), at);
  });
  return out;
}

inline BlowUp blow_up(const PointSet& e, std::span<const double> x, double r, double big_r) {
  SpatialIndex idx(e);
  return blow_up(e, idx, x, r, big_r);
}

inline BlowUp blow_up(const PointSet& e, std::initializer_list<double> x, double r,
                      double big_r) {
  return blow_up(e, std::span<const double>(x.begin(), x.size()), r, big_r);
}

/// Pairwise D^{0,R} between blow-up windows (symmetric, zero diagonal).
inline std::vector<std::vector<double>> pairwise_ww(const std::vector<BlowUp>& windows,
                                                    double big_r) {
  std::vector<std::vector<double>> m(windows.size(), std::vector<double>(windows.size(), 0.0));
  std::vector<double> origin;
  if (!windows.empty()) origin.assign(windows[0].window.dim, 0.0);
  std::vector<IndexedPoints> idx;
  idx.reserve(windows.size());
  for (const auto& w : windows) idx.emplace_back(w.window);
  for (std::size_t i = 0; i < windows.size(); ++i)
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      double d = ww_distance(idx[i], idx[j], std::span<const double>(origin), big_r);
      m[i][j] = d;
      m[j][i] = d;
    }
  return m;
}

/// D^{0,R} matrix between blow-ups of E at x across the given scales.
inline std::vector<std::vector<double>> aw_cauchy_scan(const PointSet& e,
                                                       std::span<const double> x,
                                                       const std::vector<double>& scales,
                                                       double big_r) {
  require(scales.size() >= 2, errc::invalid_argument, "scan needs at least two scales");
  SpatialIndex idx(e);
  std::vector<BlowUp> windows;
  windows.reserve(scales.size());
  // A small margin past R keeps boundary excesses exact at radius R.
  for (double r : scales) windows.push_back(blow_up(e, idx, x, r, big_r * 1.05));
  return pairwise_ww(windows, big_r);
}

// ---------------------------------------------------------------------------
// Principal-subspace plane fitting
// ---------------------------------------------------------------------------

namespace detail {

// Cyclic Jacobi eigensolver for small symmetric matrices. Returns
// eigenvalues descending with matching orthonormal rows in `vectors`;
// deterministic, ties keep the sweep order.
struct EigenSym {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

inline EigenSym eigen_symmetric(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vpk = v[p][k], vqk = v[q][k];
          v[p][k] = c * vpk - s * vqk;
          v[q][k] = s * vpk + c * vqk;
        }
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
  EigenSym out;
  for (std::size_t i : order) {
    out.values.push_back(a[i][i]);
    out.vectors.push_back(v[i]);
  }
  return out;
}

}  // namespace detail

/// Orthonormal basis (n rows of length dim) of an n-plane through the origin.
struct PlaneBasis {
  int n = 0;
  int dim = 0;
  std::vector<double> rows;  // n * dim

  std::span<const double> row(int k) const {
    return {rows.data() + static_cast<std::size_t>(k) * dim, static_cast<std::size_t>(dim)};
  }

  /// Euclidean distance from p to the subspace.
  double distance(std::span<const double> p) const {
    double norm2 = 0.0;
    for (double v : p) norm2 += v * v;
    double proj2 = 0.0;
    for (int k = 0; k < n; ++k) {
      double dot = 0.0;
      auto b = row(k);
      for (int i = 0; i < dim; ++i) dot += p[i] * b[i];
      proj2 += dot * dot;
    }
    return std::sqrt(std::max(0.0, norm2 - proj2));
  }

  /// Coordinates of the projection of p in the plane frame.
  std::vector<double> project(std::span<const double> p) const {
    std::vector<double> u(n, 0.0);
    for (int k = 0; k < n; ++k) {
      auto b = row(k);
      for (int i = 0; i < dim; ++i) u[k] += p[i] * b[i];
    }
    return u;
  }

  std::vector<double> embed(std::span<const double> u) const {
    std::vector<double> p(dim, 0.0);
    for (int k = 0; k < n; ++k) {
      auto b = row(k);
      for (int i = 0; i < dim; ++i) p[i] += u[k] * b[i];
    }
    return p;
  }
};

/// Least-squares n-plane through the origin: top-n eigenvectors of the
/// second-moment matrix of the window samples.
inline PlaneBasis fit_plane(const PointSet& window, int n) {
  require(n >= 1 && n <= window.dim, errc::invalid_argument, "bad plane dimension");
  require(window.size() >= static_cast<std::size_t>(n) + 1, errc::degenerate_window,
          "too few samples for a plane fit");
  const int d = window.dim;
  std::vector<std::vector<double>> m(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < window.size(); ++i) {
    auto p = window.point(i);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) m[a][b] += p[a] * p[b];
  }
  auto eig = detail::eigen_symmetric(m);
  PlaneBasis basis;
  basis.n = n;
  basis.dim = d;
  for (int k = 0; k < n; ++k)
    basis.rows.insert(basis.rows.end(), eig.vectors[k].begin(), eig.vectors[k].end());
  return basis;
}

/// Grid sampling of plane n B(0, R) in the ambient space.
inline PointSet sample_plane(const PlaneBasis& basis, double big_r, double step) {
  PointSet out(basis.dim);
  std::vector<double> u(basis.n, 0.0);
  long long range = static_cast<long long>(std::floor(big_r / step));
  std::vector<long long> iu(basis.n, -range);
  while (true) {
    double norm2 = 0.0;
    for (int k = 0; k < basis.n; ++k) {
      u[k] = iu[k] * step;
      norm2 += u[k] * u[k];
    }
    if (norm2 <= big_r * big_r) {
      auto p = basis.embed(std::span<const double>(u));
      out.push_back(std::span<const double>(p));
    }
    int k = 0;
    for (; k < basis.n; ++k) {
      if (++iu[k] <= range) break;
      iu[k] = -range;
    }
    if (k == basis.n) break;
  }
  return out;
}

struct PlaneFitResult {
  PlaneBasis basis;
  double score = 0.0;  // D^{0,R}[window, plane]
};

/// Fits the least-squares n-plane through 0 and scores the window against it
/// with the exact two-sided window distance at radius `score_radius`:
/// window-to-plane distances are analytic, plane-to-window uses a grid
/// sampling of the plane disk at `grid_step`.
inline PlaneFitResult plane_fit_distance(const BlowUp& t, int n, double score_radius = 0.0,
                                         double grid_step = 0.0) {
  require(!t.window.empty(), errc::degenerate_window, "empty blow-up window");
  double big_r = score_radius > 0.0 ? score_radius : t.window_radius;
  if (grid_step <= 0.0) grid_step = big_r / (n >= 2 ? 128.0 : 512.0);
  PlaneFitResult res;
  res.basis = fit_plane(t.window, n);

  double ex_window = 0.0;
  std::vector<double> origin(t.window.dim, 0.0);
  for (std::size_t i = 0; i < t.window.size(); ++i) {
    auto p = t.window.point(i);
    if (norm(p) > big_r + kBallTol) continue;
    ex_window = std::max(ex_window, res.basis.distance(p));
  }
  PointSet plane = sample_plane(res.basis, big_r, grid_step);
  IndexedPoints iw(t.window);
  double ex_plane = 0.0;
  for (std::size_t i = 0; i < plane.size(); ++i)
    ex_plane = std::max(ex_plane, iw.nearest_dist(plane.point(i)));
  res.score = std::max(ex_window, ex_plane) / big_r;
  return res;
}

// ---------------------------------------------------------------------------
// Approximate-tangent trimming
// ---------------------------------------------------------------------------

struct TrimResult {
  double scale = 0.0;
  double untrimmed_score = 0.0;  // D^{0,R}[window, fitted plane]
  double trimmed_score = 0.0;    // D^{0,R}[slab window, refitted plane]
  double mass_ratio = 0.0;       // discarded sample mass / (2 R r)^s
  std::size_t kept = 0;
  std::size_t discarded = 0;
};

/// Slab trimming surrogate for approximate tangents: per scale, fit a plane,
/// discard window samples farther than slab_fraction * R from it, report the
/// discarded mass normalized by (2 R r)^s (each sample weighs resolution^s)
/// and the distance of the trimmed window to its refitted plane.
inline TrimResult approx_tangent_trim_at(const BlowUp& t, int n, double s,
                                         double slab_fraction, double score_radius = 0.0) {
  require(slab_fraction > 0.0 && slab_fraction < 1.0, errc::invalid_argument,
          "slab fraction must lie in (0,1)");
  double big_r = score_radius > 0.0 ? score_radius : t.window_radius;
  TrimResult res;
  res.scale = t.scale;
  auto fit = plane_fit_distance(t, n, big_r);
  res.untrimmed_score = fit.score;

  BlowUp trimmed;
  trimmed.scale = t.scale;
  trimmed.window_radius = t.window_radius;
  trimmed.source = t.source;
  trimmed.window = PointSet(t.window.dim, t.window.resolution, t.window.label);
  double cut = slab_fraction * big_r;
  for (std::size_t i = 0; i < t.window.size(); ++i) {
    auto p = t.window.point(i);
    if (fit.basis.distance(p) <= cut) {
      if (i == t.origin_index) trimmed.origin_index = trimmed.window.size();
      trimmed.window.push_back(p);
      ++res.kept;
    } else {
      ++res.discarded;
    }
  }
  // Sample mass in original coordinates: resolution^s per sample; the window
  // normalizer is (2 R r)^s.
  double h = t.window.resolution * t.scale;
  res.mass_ratio = res.discarded * std::pow(h, s) / std::pow(2.0 * big_r * t.scale, s);
  res.trimmed_score = trimmed.window.empty()
                          ? 0.0
                          : plane_fit_distance(trimmed, n, big_r).score;
  return res;
}

// ---------------------------------------------------------------------------
// GH tangent scan
// ---------------------------------------------------------------------------

/// Euclidean farthest-point subsample of a blow-up window, seeded at the
/// origin sample; deterministic (smallest index on ties).
inline std::vector<std::size_t> fps_window(const BlowUp& t, std::size_t count) {
  std::vector<std::size_t> picked{t.origin_index};
  std::vector<double> d(t.window.size(), kInf);
  while (picked.size() < std::min<std::size_t>(count, t.window.size())) {
    std::size_t last = picked.back();
    auto pl = t.window.point(last);
    std::size_t arg = t.window.size();
    double best = -1.0;
    for (std::size_t i = 0; i < t.window.size(); ++i) {
      d[i] = std::min(d[i], dist(t.window.point(i), pl));
      if (d[i] > best + 1e-15) {
        best = d[i];
        arg = i;
      }
    }
    if (arg == t.window.size() || best <= 0.0) break;
    picked.push_back(arg);
  }
  return picked;
}

inline MetricSpace window_metric_subsample(const BlowUp& t, std::size_t count) {
  auto idx = fps_window(t, count);
  PointSet sub(t.window.dim);
  for (std::size_t i : idx) sub.push_back(t.window.point(i));
  return metric_from_points(sub, 0);  // origin is picked first
}

/// Pairwise pointed-GH values between subsampled blow-ups; exhaustive when
/// the subsample fits the guard, heuristic otherwise. Isometry-invariant by
/// construction.
inline std::vector<std::vector<double>> gh_tangent_scan(const std::vector<BlowUp>& windows,
                                                        std::size_t subsample) {
  std::vector<MetricSpace> spaces;
  spaces.reserve(windows.size());
  for (const auto& w : windows) spaces.push_back(window_metric_subsample(w, subsample));
  bool exhaustive = subsample <= kExhaustiveGuard;
  std::vector<std::vector<double>> m(windows.size(), std::vector<double>(windows.size(), 0.0));
  for (std::size_t i = 0; i < windows.size(); ++i)
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      double v = pgh_oracle(spaces[i], spaces[j], exhaustive).value;
      m[i][j] = v;
      m[j][i] = v;
    }
  return m;
}

inline std::vector<std::vector<double>> gh_tangent_scan(const PointSet& e,
                                                        std::span<const double> x,
                                                        const std::vector<double>& scales,
                                                        double big_r, std::size_t subsample) {
  SpatialIndex idx(e);
  std::vector<BlowUp> windows;
  for (double r : scales) windows.push_back(blow_up(e, idx, x, r, big_r));
  return gh_tangent_scan(windows, subsample);
}

// ---------------------------------------------------------------------------
// Norm fitting
// ---------------------------------------------------------------------------

/// Estimated unit-ball boundary of a tangent norm: radii along sampled plane
/// directions, antipodally symmetrized.
struct NormProfile {
  std::vector<std::vector<double>> directions;  // unit vectors in plane coords
  std::vector<double> radii;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["directions"] = directions;
    j["radii"] = radii;
    return j;
  }
};

/// Estimates where the metric distance from the origin reaches 1 along each
/// direction cone (half-angle 10 degrees) in the fitted plane. The window
/// must be approximately flat (plane-fit score below flat_threshold) unless
/// n equals the ambient dimension. `metric` gives the distance between two
/// window samples; Euclidean when omitted.
template <class Metric>
inline NormProfile norm_fit(const BlowUp& t, int n, int directions, Metric&& metric,
                            double flat_threshold = 0.2) {
  require(directions >= 2 && directions % 2 == 0, errc::invalid_argument,
          "direction count must be even");
  require(n >= 1 && n <= 2, errc::invalid_argument, "norm fitting supports n = 1 or 2");
  PlaneBasis basis;
  if (n == t.window.dim) {
    basis.n = n;
    basis.dim = n;
    basis.rows.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) basis.rows[k * n + k] = 1.0;
  } else {
    auto fit = plane_fit_distance(t, n);
    require(fit.score <= flat_threshold, errc::not_flat_enough,
            "window is not flat enough for a norm fit");
    basis = fit.basis;
  }

  const double cone_cos = std::cos(10.0 * 3.14159265358979323846 / 180.0);
  auto origin = t.window.point(t.origin_index);

  // Plane coordinates and metric distance from the origin, per sample.
  std::vector<std::vector<double>> u(t.window.size());
  std::vector<double> md(t.window.size());
  for (std::size_t i = 0; i < t.window.size(); ++i) {
    u[i] = basis.project(t.window.point(i));
    md[i] = metric(t.window.point(i), origin);
  }

  auto radius_along = [&](double cx, double cy) -> double {
    // samples in the cone, ordered by parameter radius
    std::vector<std::pair<double, double>> prof;  // (param radius, metric dist)
    for (std::size_t i = 0; i < t.window.size(); ++i) {
      double ux = u[i][0], uy = n == 2 ? u[i][1] : 0.0;
      double tpar = std::sqrt(ux * ux + uy * uy);
      if (tpar < 1e-12) continue;
      double cosang = (ux * cx + uy * cy) / tpar;
      if (cosang < cone_cos) continue;
      prof.emplace_back(tpar, md[i]);
    }
    std::sort(prof.begin(), prof.end());
    double prev_t = 0.0, prev_m = 0.0;
    for (auto [tpar, m] : prof) {
      if (m >= 1.0) {
        if (m == prev_m) return tpar;
        return prev_t + (1.0 - prev_m) * (tpar - prev_t) / (m - prev_m);
      }
      prev_t = tpar;
      prev_m = m;
    }
    fail(errc::invalid_argument, "window too small: no sample reaches metric distance 1");
  };

  NormProfile profile;
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < directions; ++k) {
    double ang = 2.0 * pi * k / directions;
    double cx = std::cos(ang), cy = n == 2 ? std::sin(ang) : 0.0;
    if (n == 1) cx = k % 2 == 0 ? 1.0 : -1.0;
    profile.directions.push_back({cx, cy});
    profile.radii.push_back(radius_along(cx, cy));
  }
  // Norms are symmetric: average antipodal pairs.
  int half = directions / 2;
  for (int k = 0; k < half; ++k) {
    double avg = 0.5 * (profile.radii[k] + profile.radii[k + half]);
    profile.radii[k] = avg;
    profile.radii[k + half] = avg;
  }
  return profile;
}

inline NormProfile norm_fit(const BlowUp& t, int n, int directions,
                            double flat_threshold = 0.2) {
  return norm_fit(
      t, n, directions,
      [](std::span<const double> a, std::span<const double> b) { return dist(a, b); },
      flat_threshold);
}

// ---------------------------------------------------------------------------
// Expansivity probe
// ---------------------------------------------------------------------------

struct ExpansivityRow {
  std::size_t probe = 0;   // index into E
  double scale = 0.0;
  double mass_ratio = 0.0;    // mass of E n B(x,r) outside F, over (2r)^s
  double excess_ratio = 0.0;  // ex(E n B(x, alpha r), F n B(x,r)) / r
};

/// Numerical expansivity signature of the subset F inside E at the probe
/// points: vanishing off-F mass ratio with persistently positive excess
/// ratio is the footprint of an expansive subset.
inline std::vector<ExpansivityRow> expansivity_probe(const PointSet& e,
                                                     const std::vector<std::size_t>& f_indices,
                                                     const std::vector<std::size_t>& probes,
                                                     double s,
                                                     const std::vector<double>& scales,
                                                     double alpha) {
  require(!f_indices.empty(), errc::empty_subset, "expansivity probe needs a nonempty subset");
  require(alpha > 0.0 && alpha < 1.0, errc::invalid_argument, "alpha must lie in (0,1)");
  std::vector<char> in_f(e.size(), 0);
  for (std::size_t i : f_indices) {
    require(i < e.size(), errc::invalid_argument, "subset index out of range");
    in_f[i] = 1;
  }
  SpatialIndex idx(e);
  PointSet f(e.dim, e.resolution);
  for (std::size_t i : f_indices) f.push_back(e.point(i));
  SpatialIndex fidx(f);

  std::vector<ExpansivityRow> rows;
  double h = e.resolution;
  for (std::size_t probe : probes) {
    require(probe < e.size(), errc::invalid_argument, "probe index out of range");
    auto x = e.point(probe);
    for (double r : scales) {
      ExpansivityRow row;
      row.probe = probe;
      row.scale = r;
      double off_mass = 0.0;
      idx.for_each_within(x, r, [&](std::size_t i, double) {
        if (!in_f[i]) off_mass += std::pow(h, s);
      });
      row.mass_ratio = off_mass / std::pow(2.0 * r, s);
      // F n B(x,r) as the snapshot; excess of the inner ball over it.
      std::vector<std::size_t> fball;
      fidx.for_each_within(x, r, [&](std::size_t i, double) { fball.push_back(i); });
      double worst = 0.0;
      if (!fball.empty()) {
        PointSet snapshot(e.dim);
        std::sort(fball.begin(), fball.end());
        for (std::size_t i : fball) snapshot.push_back(f.point(i));
        IndexedPoints snap(snapshot);
        idx.for_each_within(x, alpha * r, [&](std::size_t i, double) {
          worst = std::max(worst, snap.nearest_dist(e.point(i)));
        });
      }
      row.excess_ratio = worst / r;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Tangent report
// ---------------------------------------------------------------------------

struct VerdictThresholds {
  double flat_score = 0.05;
  double cauchy_tail = 0.05;
  double nonflat_score = 0.1;
  double gh_unique = 0.05;
  double aw_moving = 0.1;
};

/// Per-point multi-scale diagnostic record.
struct TangentReport {
  std::vector<double> point;
  std::vector<double> scales;
  std::vector<std::vector<double>> pairwise_ww;  // may be empty per mode
  std::vector<std::vector<double>> pairwise_gh;
  std::vector<double> flatness;        // per-scale plane-fit scores
  std::vector<double> density_ratios;  // per-scale trim mass ratios
  std::vector<double> trimmed_flatness;
  std::string verdict = "inconclusive";
  VerdictThresholds thresholds;
  std::optional<NormProfile> norm_profile;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["point"] = point;
    j["scales"] = scales;
    auto mat = [](const std::vector<std::vector<double>>& m) {
      auto rows = nlohmann::ordered_json::array();
      for (const auto& r : m) rows.push_back(r);
      return rows;
    };
    if (!pairwise_ww.empty()) j["pairwise_ww"] = mat(pairwise_ww);
    if (!pairwise_gh.empty()) j["pairwise_gh"] = mat(pairwise_gh);
    if (!flatness.empty()) j["flatness"] = flatness;
    if (!density_ratios.empty()) j["density_ratios"] = density_ratios;
    if (!trimmed_flatness.empty()) j["trimmed_flatness"] = trimmed_flatness;
    j["verdict"] = verdict;
    j["thresholds"] = {{"flat_score", thresholds.flat_score},
                       {"cauchy_tail", thresholds.cauchy_tail},
                       {"nonflat_score", thresholds.nonflat_score},
                       {"gh_unique", thresholds.gh_unique},
                       {"aw_moving", thresholds.aw_moving}};
    if (norm_profile) j["norm_profile"] = norm_profile->to_json();
    return j;
  }
};

inline double matrix_max(const std::vector<std::vector<double>>& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (double x : row) v = std::max(v, x);
  return v;
}

/// Max pairwise entry among the last `tail` scales.
inline double cauchy_tail(const std::vector<std::vector<double>>& m, std::size_t tail = 3) {
  double v = 0.0;
  if (m.empty()) return v;
  std::size_t n = m.size();
  std::size_t from = n > tail ? n - tail : 0;
  for (std::size_t i = from; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) v = std::max(v, m[i][j]);
  return v;
}

/// Verdict per the pinned thresholds: rotating beats flat beats nonflat.
inline std::string classify_verdict(const TangentReport& rep) {
  const auto& th = rep.thresholds;
  bool have_aw = !rep.pairwise_ww.empty();
  bool have_gh = !rep.pairwise_gh.empty();
  if (have_gh && have_aw && matrix_max(rep.pairwise_gh) <= th.gh_unique &&
      matrix_max(rep.pairwise_ww) >= th.aw_moving)
    return "rotating";
  if (!rep.flatness.empty()) {
    bool flat = rep.flatness.back() <= th.flat_score &&
                (!have_aw || cauchy_tail(rep.pairwise_ww) <= th.cauchy_tail);
    if (flat) return "flat";
    bool nonflat = true;
    for (double f : rep.flatness) nonflat = nonflat && f >= th.nonflat_score;
    if (nonflat) return "nonflat";
  }
  if (have_gh && !have_aw) {
    if (matrix_max(rep.pairwise_gh) <= th.gh_unique) return "gh-unique";
    if (matrix_max(rep.pairwise_gh) >= th.aw_moving) return "gh-multiple";
  }
  return "inconclusive";
}

}  // namespace blowup

#endif  // BLOWUP_TANGENT_HPP
