#ifndef BLOWUP_GENERATORS_HPP
#define BLOWUP_GENERATORS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowup/common.hpp"
#include "blowup/point_set.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Deterministic constructors for the example sets. Every generator is a pure
// function of its parameters; sample lattices are anchored at the origin
// with pitch tied to the resolution, so an optional window restriction
// yields an exact subset of the full output.
// ---------------------------------------------------------------------------

/// Optional spatial restriction: emit only samples inside B(center, radius).
struct GenWindow {
  std::vector<double> center;
  double radius = 0.0;

  bool contains(std::span<const double> p) const {
    if (radius <= 0.0) return true;
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += sq(p[k] - center[k]);
    return s <= radius * radius + kBallTol;
  }
};

namespace detail {
inline bool win_ok(const std::optional<GenWindow>& w, std::span<const double> p) {
  return !w || w->contains(p);
}

// Index range of the pitch-h lattice touching the window along axis `a`,
// clamped to [0, cells].
inline std::pair<long long, long long> lattice_range(const std::optional<GenWindow>& w, int a,
                                                     double h, long long cells) {
  if (!w || w->radius <= 0.0) return {0, cells};
  long long lo = static_cast<long long>(std::floor((w->center[a] - w->radius) / h)) - 1;
  long long hi = static_cast<long long>(std::ceil((w->center[a] + w->radius) / h)) + 1;
  return {std::clamp<long long>(lo, 0, cells), std::clamp<long long>(hi, 0, cells)};
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Logarithmic spiral {0} u { t e^{i log t} : t in [t_min, t_max] }
// ---------------------------------------------------------------------------

inline PointSet gen_spiral(double t_min, double t_max, double h) {
  require(0.0 < t_min && t_min < t_max, errc::bad_range, "need 0 < t_min < t_max");
  require(h > 0.0, errc::invalid_argument, "resolution must be positive");
  PointSet ps(2, h, "spiral");
  int origin = ps.add_marker("origin");
  ps.push_back({0.0, 0.0});
  ps.set_flag(origin, 0);
  // |S'(t)| = sqrt(2), so a t-step of h/sqrt(2) keeps arc spacing <= h.
  double step = h / std::sqrt(2.0);
  for (double t = t_min; t <= t_max + kBallTol; t += step) {
    double a = std::log(t);
    ps.push_back({t * std::cos(a), t * std::sin(a)});
  }
  return ps;
}

/// The spiral sample rotated by `angle`, window-clipped when given.
inline PointSet rotate_2d(const PointSet& ps, double angle,
                          std::optional<GenWindow> window = std::nullopt) {
  require(ps.dim == 2, errc::invalid_argument, "rotation needs a planar set");
  PointSet out(2, ps.resolution, ps.label);
  double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps.point(i);
    double q[2] = {c * p[0] - s * p[1], s * p[0] + c * p[1]};
    if (detail::win_ok(window, std::span<const double>(q, 2))) {
      out.push_back(std::span<const double>(q, 2));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spiked cube: [0,1]^n x {0} plus vertical segments {v} x [-1/k, 1/k] at the
// fresh dyadic grid points of each level k.
// ---------------------------------------------------------------------------

struct SpikedCubeSpec {
  int n = 2;
  int k_max = 8;
  double h = 1e-3;
  double spike_step_factor = 0.25;  // spike sampling step = factor * h
  std::optional<GenWindow> window;
};

/// Fresh level-k grid points (those of the 2^{1-k} lattice not already in a
/// coarser one).
inline std::vector<std::vector<double>> spiked_cube_fresh_grid(int n, int k) {
  std::vector<std::vector<double>> out;
  double pitch = std::pow(2.0, 1 - k);
  long long m = 1ll << (k - 1);
  std::vector<long long> c(n, 0);
  while (true) {
    bool fresh = k == 1;
    for (int a = 0; a < n; ++a) fresh = fresh || c[a] % 2 != 0;  // odd index => new point
    if (fresh) {
      std::vector<double> p(n);
      for (int a = 0; a < n; ++a) p[a] = c[a] * pitch;
      out.push_back(std::move(p));
    }
    int a = 0;
    for (; a < n; ++a) {
      if (++c[a] <= m) break;
      c[a] = 0;
    }
    if (a == n) break;
  }
  return out;
}

inline PointSet gen_spiked_cube(const SpikedCubeSpec& spec) {
  require(spec.n >= 1 && spec.k_max >= 1, errc::invalid_argument, "need n >= 1 and k_max >= 1");
  require(spec.h > 0.0, errc::invalid_argument, "resolution must be positive");
  const int n = spec.n, d = spec.n + 1;
  PointSet ps(d, spec.h, "spiked_cube");
  int plane = ps.add_marker("plane");
  int spikes = ps.add_marker("spikes");

  // Plane part on the lattice of pitch h anchored at 0.
  long long cells = static_cast<long long>(std::ceil(1.0 / spec.h));
  std::vector<std::pair<long long, long long>> range(n);
  for (int a = 0; a < n; ++a) range[a] = detail::lattice_range(spec.window, a, spec.h, cells);
  std::vector<long long> c(n);
  for (int a = 0; a < n; ++a) c[a] = range[a].first;
  std::vector<double> p(d, 0.0);
  while (true) {
    for (int a = 0; a < n; ++a) p[a] = std::min(1.0, c[a] * spec.h);
    p[n] = 0.0;
    if (detail::win_ok(spec.window, std::span<const double>(p))) {
      std::size_t at = ps.size();
      ps.push_back(std::span<const double>(p));
      ps.set_flag(plane, at);
    }
    int a = 0;
    for (; a < n; ++a) {
      if (++c[a] <= range[a].second) break;
      c[a] = range[a].first;
    }
    if (a == n) break;
  }

  // Spikes, sampled along the vertical segment.
  double zstep = spec.h * spec.spike_step_factor;
  for (int k = 1; k <= spec.k_max; ++k) {
    double height = 1.0 / k;
    for (const auto& v : spiked_cube_fresh_grid(n, k)) {
      // Quick reject: the whole segment misses the window.
      if (spec.window) {
        double horiz = 0.0;
        for (int a = 0; a < n; ++a) horiz += sq(v[a] - spec.window->center[a]);
        double wz = spec.window->center[n];
        double vert = std::abs(wz) > height ? std::abs(wz) - height : 0.0;
        if (std::sqrt(horiz + sq(vert)) > spec.window->radius + kBallTol) continue;
      }
      long long steps = static_cast<long long>(std::ceil(height / zstep));
      for (long long j = -steps; j <= steps; ++j) {
        double z = std::clamp(j * zstep, -height, height);
        for (int a = 0; a < n; ++a) p[a] = v[a];
        p[n] = z;
        if (!detail::win_ok(spec.window, std::span<const double>(p))) continue;
        if (z == 0.0) continue;  // the base point belongs to the plane part
        std::size_t at = ps.size();
        ps.push_back(std::span<const double>(p));
        ps.set_flag(spikes, at);
      }
    }
  }
  return ps;
}

// ---------------------------------------------------------------------------
// Whitney-disk set: D = [0,1]^n x {0}^{d-n} plus n-disks at the centers of
// the dyadic Whitney cubes of [0,1]^d relative to D.
// ---------------------------------------------------------------------------

struct WhitneyCube {
  std::vector<double> corner;  // lower corner
  double side = 0.0;
  int level = 0;

  std::vector<double> center() const {
    std::vector<double> c(corner.size());
    for (std::size_t k = 0; k < corner.size(); ++k) c[k] = corner[k] + side / 2.0;
    return c;
  }
};

struct WhitneySpec {
  int n = 1;
  int d = 2;
  double radius_exponent = 2.0;  // disk radius = side^exponent
  int depth = 8;
  double h = 1e-3;
  std::optional<GenWindow> window;
};

inline void whitney_subdivide(const std::vector<double>& corner, double side, int level,
                              int max_level, int n, int d, std::vector<WhitneyCube>& out) {
  // Distance of the cube to D: only the coordinates past n matter since the
  // horizontal slab always meets [0,1]^n.
  double dist2 = 0.0;
  for (int k = n; k < d; ++k) {
    double lo = corner[k], hi = corner[k] + side;
    double gap = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    dist2 += sq(gap);
  }
  double diam = side * std::sqrt(static_cast<double>(d));
  if (std::sqrt(dist2) >= diam) {
    out.push_back({corner, side, level});
    return;
  }
  if (level >= max_level) return;  // touching cubes recurse until the depth cap
  std::vector<double> child(corner);
  long long combos = 1ll << d;
  for (long long mask = 0; mask < combos; ++mask) {
    for (int k = 0; k < d; ++k)
      child[k] = corner[k] + ((mask >> k) & 1 ? side / 2.0 : 0.0);
    whitney_subdivide(child, side / 2.0, level + 1, max_level, n, d, out);
  }
}

inline std::vector<WhitneyCube> whitney_cubes(const WhitneySpec& spec) {
  std::vector<WhitneyCube> cubes;
  std::vector<double> corner(spec.d, 0.0);
  whitney_subdivide(corner, 1.0, 0, spec.depth, spec.n, spec.d, cubes);
  return cubes;
}

/// Per-level sums of r_i^n; the ratio test rejects radius rules whose level
/// sums stop decaying.
inline std::vector<double> whitney_level_sums(const std::vector<WhitneyCube>& cubes,
                                              const WhitneySpec& spec) {
  std::vector<double> sums;
  for (const auto& q : cubes) {
    if (static_cast<std::size_t>(q.level) >= sums.size()) sums.resize(q.level + 1, 0.0);
    sums[q.level] += std::pow(std::pow(q.side, spec.radius_exponent), spec.n);
  }
  return sums;
}

inline PointSet gen_whitney_disks(const WhitneySpec& spec) {
  require(1 <= spec.n && spec.n < spec.d, errc::invalid_argument, "need 1 <= n < d");
  auto cubes = whitney_cubes(spec);
  auto sums = whitney_level_sums(cubes, spec);
  int checked = 0;
  for (std::size_t l = 1; l + 1 < sums.size(); ++l) {
    if (sums[l] <= 0.0 || sums[l + 1] <= 0.0) continue;
    ++checked;
    require(sums[l + 1] < sums[l], errc::divergent_radii_rule,
            "per-level disk mass is not decaying");
  }
  require(checked > 0 || cubes.size() < 4, errc::divergent_radii_rule,
          "not enough levels to certify the radius rule");

  PointSet ps(spec.d, spec.h, "whitney_disks");
  int dmark = ps.add_marker("D");
  int disks = ps.add_marker("disks");

  // D on the pitch-h lattice.
  long long cells = static_cast<long long>(std::ceil(1.0 / spec.h));
  std::vector<std::pair<long long, long long>> range(spec.n);
  for (int a = 0; a < spec.n; ++a)
    range[a] = detail::lattice_range(spec.window, a, spec.h, cells);
  std::vector<long long> c(spec.n);
  for (int a = 0; a < spec.n; ++a) c[a] = range[a].first;
  std::vector<double> p(spec.d, 0.0);
  while (true) {
    for (int a = 0; a < spec.n; ++a) p[a] = std::min(1.0, c[a] * spec.h);
    for (int a = spec.n; a < spec.d; ++a) p[a] = 0.0;
    if (detail::win_ok(spec.window, std::span<const double>(p))) {
      std::size_t at = ps.size();
      ps.push_back(std::span<const double>(p));
      ps.set_flag(dmark, at);
    }
    int a = 0;
    for (; a < spec.n; ++a) {
      if (++c[a] <= range[a].second) break;
      c[a] = range[a].first;
    }
    if (a == spec.n) break;
  }

  // Horizontal n-disks at cube centers.
  for (const auto& q : cubes) {
    double r = std::pow(q.side, spec.radius_exponent);
    auto center = q.center();
    if (spec.window) {
      double gap = 0.0;
      for (int k = 0; k < spec.d; ++k) gap += sq(center[k] - spec.window->center[k]);
      if (std::sqrt(gap) > spec.window->radius + r) continue;
    }
    long long span = static_cast<long long>(std::floor(r / spec.h));
    std::vector<long long> g(spec.n, -span);
    while (true) {
      double rho2 = 0.0;
      for (int a = 0; a < spec.n; ++a) rho2 += sq(g[a] * spec.h);
      if (rho2 <= r * r) {
        for (int a = 0; a < spec.n; ++a) p[a] = center[a] + g[a] * spec.h;
        for (int a = spec.n; a < spec.d; ++a) p[a] = center[a];
        if (detail::win_ok(spec.window, std::span<const double>(p))) {
          std::size_t at = ps.size();
          ps.push_back(std::span<const double>(p));
          ps.set_flag(disks, at);
        }
      }
      int a = 0;
      for (; a < spec.n; ++a) {
        if (++g[a] <= span) break;
        g[a] = -span;
      }
      if (a == spec.n) break;
    }
  }
  return ps;
}

// ---------------------------------------------------------------------------
// Cantor-cone graph: nested corner-cube families with a positive-measure
// intersection, tent bumps centered in the gaps, and the graph of their sum.
// ---------------------------------------------------------------------------

struct CantorConeSpec {
  int n = 1;
  int depth = 4;
  double h = 2e-3;
  std::optional<GenWindow> window;
};

struct TentBump {
  std::vector<double> center;  // p_w in the domain
  double radius = 0.0;         // r_w (tent support and height)
  int generation = 0;
};

namespace detail {
inline void cantor_cone_recurse(const std::vector<double>& corner, double side, int gen,
                                int depth, int n, std::vector<TentBump>& tents,
                                std::vector<std::pair<std::vector<double>, double>>& leaf_cubes) {
  // Middle gap fraction 4^{-gen} at generation gen (1-based), corner children.
  double gamma = std::pow(4.0, -static_cast<double>(gen));
  std::vector<double> center(n);
  for (int k = 0; k < n; ++k) center[k] = corner[k] + side / 2.0;
  tents.push_back({center, gamma * side / 8.0, gen});
  if (gen == depth) {
    double child_side = (1.0 - gamma) * side / 2.0;
    for (long long mask = 0; mask < (1ll << n); ++mask) {
      std::vector<double> cc(n);
      for (int k = 0; k < n; ++k)
        cc[k] = corner[k] + ((mask >> k) & 1 ? side - child_side : 0.0);
      leaf_cubes.emplace_back(cc, child_side);
    }
    return;
  }
  double child_side = (1.0 - gamma) * side / 2.0;
  for (long long mask = 0; mask < (1ll << n); ++mask) {
    std::vector<double> cc(n);
    for (int k = 0; k < n; ++k)
      cc[k] = corner[k] + ((mask >> k) & 1 ? side - child_side : 0.0);
    cantor_cone_recurse(cc, child_side, gen + 1, depth, n, tents, leaf_cubes);
  }
}
}  // namespace detail

struct CantorConeSet {
  PointSet points;
  std::vector<TentBump> tents;
};

inline double tent_sum(const std::vector<TentBump>& tents, std::span<const double> x) {
  // Tent supports are pairwise disjoint, so at most one term is active; the
  // plain sum stays exact either way.
  double f = 0.0;
  for (const auto& t : tents) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d2 += sq(x[k] - t.center[k]);
    double d = std::sqrt(d2);
    if (d < t.radius) f += t.radius - d;
  }
  return f;
}

inline CantorConeSet gen_cantor_cone_graph(const CantorConeSpec& spec) {
  require(spec.n >= 1 && spec.depth >= 1, errc::invalid_argument, "need n >= 1 and depth >= 1");
  CantorConeSet out;
  std::vector<std::pair<std::vector<double>, double>> leaves;
  std::vector<double> corner(spec.n, 0.0);
  detail::cantor_cone_recurse(corner, 1.0, 1, spec.depth, spec.n, out.tents, leaves);

  const int d = spec.n + 1;
  out.points = PointSet(d, spec.h, "cantor_cone_graph");
  int emark = out.points.add_marker("E");
  int tips = out.points.add_marker("spike_tips");

  auto in_leaf = [&](std::span<const double> x) {
    for (const auto& [cc, side] : leaves) {
      bool inside = true;
      for (int k = 0; k < spec.n && inside; ++k)
        inside = x[k] >= cc[k] - kBallTol && x[k] <= cc[k] + side + kBallTol;
      if (inside) return true;
    }
    return false;
  };

  long long cells = static_cast<long long>(std::ceil(1.0 / spec.h));
  std::vector<long long> c(spec.n, 0);
  std::vector<double> x(spec.n), p(d);
  while (true) {
    for (int a = 0; a < spec.n; ++a) x[a] = std::min(1.0, c[a] * spec.h);
    double f = tent_sum(out.tents, std::span<const double>(x));
    for (int a = 0; a < spec.n; ++a) p[a] = x[a];
    p[spec.n] = f;
    if (detail::win_ok(spec.window, std::span<const double>(p))) {
      std::size_t at = out.points.size();
      out.points.push_back(std::span<const double>(p));
      if (f == 0.0 && in_leaf(std::span<const double>(x))) out.points.set_flag(emark, at);
    }
    int a = 0;
    for (; a < spec.n; ++a) {
      if (++c[a] <= cells) break;
      c[a] = 0;
    }
    if (a == spec.n) break;
  }

  // Exact apex samples; the domain grid fills the tent slopes.
  for (const auto& t : out.tents) {
    if (t.radius < spec.h / 4.0) continue;
    for (int a = 0; a < spec.n; ++a) p[a] = t.center[a];
    p[spec.n] = t.radius;
    if (detail::win_ok(spec.window, std::span<const double>(p))) {
      std::size_t at = out.points.size();
      out.points.push_back(std::span<const double>(p));
      out.points.set_flag(tips, at);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comb: X x {0} plus one tooth (x_i, y_i) per element of a dense enumeration
// of X, heights decaying to zero.
// ---------------------------------------------------------------------------

struct CombSpec {
  int m = 1;                  // base dimension (X = [0,1]^m)
  std::size_t teeth = 4096;   // enumeration length
  double h = 1e-3;
  std::function<double(std::size_t)> height = [](std::size_t i) {
    return 1.0 / std::log(static_cast<double>(i) + 2.0);
  };
};

/// Van der Corput radical-inverse point (base 2 per axis with offset primes).
inline std::vector<double> dense_enumeration_point(std::size_t i, int m) {
  static const int primes[] = {2, 3, 5, 7};
  std::vector<double> p(m, 0.0);
  for (int a = 0; a < m; ++a) {
    int b = primes[a % 4];
    double inv = 1.0 / b, frac = inv;
    std::size_t k = i + 1;
    while (k > 0) {
      p[a] += (k % b) * frac;
      k /= b;
      frac *= inv;
    }
  }
  return p;
}

inline PointSet gen_comb(const CombSpec& spec) {
  require(spec.m >= 1, errc::invalid_argument, "need m >= 1");
  require(spec.h > 0.0, errc::invalid_argument, "resolution must be positive");
  const int d = spec.m + 1;
  PointSet ps(d, spec.h, "comb");
  int fmark = ps.add_marker("F");
  int teeth = ps.add_marker("teeth");

  long long cells = static_cast<long long>(std::ceil(1.0 / spec.h));
  std::vector<long long> c(spec.m, 0);
  std::vector<double> p(d, 0.0);
  while (true) {
    for (int a = 0; a < spec.m; ++a) p[a] = std::min(1.0, c[a] * spec.h);
    p[spec.m] = 0.0;
    std::size_t at = ps.size();
    ps.push_back(std::span<const double>(p));
    ps.set_flag(fmark, at);
    int a = 0;
    for (; a < spec.m; ++a) {
      if (++c[a] <= cells) break;
      c[a] = 0;
    }
    if (a == spec.m) break;
  }
  for (std::size_t i = 0; i < spec.teeth; ++i) {
    auto x = dense_enumeration_point(i, spec.m);
    for (int a = 0; a < spec.m; ++a) p[a] = x[a];
    p[spec.m] = spec.height(i);
    std::size_t at = ps.size();
    ps.push_back(std::span<const double>(p));
    ps.set_flag(teeth, at);
  }
  return ps;
}

// ---------------------------------------------------------------------------
// Poke graph: a fat Cantor set K of corner cubes, a ball B_Q poked out of
// the complement next to each cube, and the graph of the radial-log bump
// field that lifts each poked ball to height l(Q).
// ---------------------------------------------------------------------------

struct PokeSpec {
  int n = 2;
  int depth = 5;              // generations of corner cubes
  double h = 1.5e-3;
  double alpha_margin = 2.0 * 3.14159265358979323846;  // multiplies the log(alpha) lower bound
  std::optional<GenWindow> window;
};

inline double poke_lambda(int i) { return std::pow(4.0, -static_cast<double>(i) - 1.0); }

struct Poke {
  std::vector<double> center;  // x_Q
  double radius = 0.0;         // r(B_Q)
  double alpha = 0.0;
  double height = 0.0;         // l(Q)
  int generation = 0;          // 1-based
};

struct PokeCube {
  std::vector<double> corner;
  double side = 0.0;
  int generation = 0;  // 1-based
};

struct PokeSet {
  PointSet points;
  std::vector<Poke> pokes;
  std::vector<std::vector<PokeCube>> cubes;  // per generation (1-based at index 0)

  double bump(std::span<const double> x) const {
    for (const auto& p : pokes) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) d2 += sq(x[k] - p.center[k]);
      double d = std::sqrt(d2);
      if (d >= p.radius) continue;
      double inner = p.alpha * p.radius;
      if (d <= inner) return p.height;
      return p.height * std::log(d / p.radius) / std::log(p.alpha);
    }
    return 0.0;
  }

  double gradient_norm(std::span<const double> x) const {
    for (const auto& p : pokes) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) d2 += sq(x[k] - p.center[k]);
      double d = std::sqrt(d2);
      if (d >= p.radius || d <= p.alpha * p.radius) continue;
      return p.height / (std::abs(std::log(p.alpha)) * d);
    }
    return 0.0;
  }
};

namespace detail {
inline void poke_recurse(const std::vector<double>& corner, double side, int gen, int depth,
                         int n, double margin, PokeSet& out) {
  if (gen > depth) return;
  if (static_cast<std::size_t>(gen) > out.cubes.size()) out.cubes.resize(gen);
  out.cubes[gen - 1].push_back({corner, side, gen});

  // Poke next to this cube: centered at the cube center with radius
  // lambda_{gen} side / 2, which lies inside the cube minus its children.
  double lam_next = poke_lambda(gen);
  std::vector<double> center(n);
  for (int k = 0; k < n; ++k) center[k] = corner[k] + side / 2.0;
  double ell = side;
  int kk = gen;  // 1-based generation index in the alpha rule
  double bound = std::pow(std::pow(2.0, n * kk) * kk * kk * std::pow(ell, n),
                          1.0 / (n - 1));
  Poke p;
  p.center = center;
  p.radius = lam_next * side / 2.0;
  p.alpha = std::exp(-margin * bound);
  p.height = ell;
  p.generation = kk;
  out.pokes.push_back(std::move(p));

  double child_side = (1.0 - lam_next) / 2.0 * side;
  for (long long mask = 0; mask < (1ll << n); ++mask) {
    std::vector<double> cc(n);
    for (int k = 0; k < n; ++k)
      cc[k] = corner[k] + ((mask >> k) & 1 ? side - child_side : 0.0);
    poke_recurse(cc, child_side, gen + 1, depth, n, margin, out);
  }
}
}  // namespace detail

inline PokeSet gen_poke_graph(const PokeSpec& spec) {
  require(spec.n >= 2, errc::invalid_argument, "the poke graph needs n >= 2");
  require(spec.depth >= 1 && spec.h > 0.0, errc::invalid_argument, "bad poke spec");
  require(spec.alpha_margin >= 1.0, errc::invalid_argument, "alpha margin must be >= 1");
  double lam_product = 1.0;
  for (int i = 0; i <= spec.depth; ++i) lam_product *= 1.0 - poke_lambda(i);
  require(lam_product > 0.0, errc::invalid_argument, "lambda schedule collapses the Cantor set");

  PokeSet out;
  double lam0 = poke_lambda(0);
  double side0 = (1.0 - lam0) / 2.0;
  for (long long mask = 0; mask < (1ll << spec.n); ++mask) {
    std::vector<double> corner(spec.n);
    for (int k = 0; k < spec.n; ++k) corner[k] = (mask >> k) & 1 ? 1.0 - side0 : 0.0;
    detail::poke_recurse(corner, side0, 1, spec.depth, spec.n, spec.alpha_margin, out);
  }

  const int d = spec.n + 1;
  out.points = PointSet(d, spec.h, "poke_graph");
  int kmark = out.points.add_marker("K");
  int pokemark = out.points.add_marker("pokes");

  const auto& deepest = out.cubes.back();
  auto in_k = [&](std::span<const double> x) {
    for (const auto& q : deepest) {
      bool inside = true;
      for (int k = 0; k < spec.n && inside; ++k)
        inside = x[k] >= q.corner[k] - kBallTol && x[k] <= q.corner[k] + q.side + kBallTol;
      if (inside) return true;
    }
    return false;
  };

  // Domain grid. The window clamp is on the horizontal coordinates; bump
  // heights stay in [0, 1] so a window in the graph clips vertically too.
  long long cells = static_cast<long long>(std::ceil(1.0 / spec.h));
  std::vector<std::pair<long long, long long>> range(spec.n);
  for (int a = 0; a < spec.n; ++a)
    range[a] = detail::lattice_range(spec.window, a, spec.h, cells);
  std::vector<long long> c(spec.n);
  for (int a = 0; a < spec.n; ++a) c[a] = range[a].first;
  std::vector<double> x(spec.n), p(d);
  while (true) {
    for (int a = 0; a < spec.n; ++a) x[a] = std::min(1.0, c[a] * spec.h);
    double f = out.bump(std::span<const double>(x));
    for (int a = 0; a < spec.n; ++a) p[a] = x[a];
    p[spec.n] = f;
    if (detail::win_ok(spec.window, std::span<const double>(p))) {
      std::size_t at = out.points.size();
      out.points.push_back(std::span<const double>(p));
      if (f == 0.0 && in_k(std::span<const double>(x))) out.points.set_flag(kmark, at);
      if (f > 0.0) out.points.set_flag(pokemark, at);
    }
    int a = 0;
    for (; a < spec.n; ++a) {
      if (++c[a] <= range[a].second) break;
      c[a] = range[a].first;
    }
    if (a == spec.n) break;
  }

  // Funnel walls and needle axes. The wall radius at height z is
  // r alpha^{z/l}; below the grid pitch the funnel is sampled as a vertical
  // axis segment.
  const double pi = 3.14159265358979323846;
  for (const auto& poke : out.pokes) {
    double logalpha = std::abs(std::log(poke.alpha));
    double z_wall_end =
        poke.radius <= spec.h ? 0.0
                              : poke.height * std::log(poke.radius / spec.h) / logalpha;
    // wall rays, arc step about h
    if (poke.radius > spec.h) {
      int dirs = std::max<int>(8, static_cast<int>(std::ceil(2.0 * pi * poke.radius / spec.h)));
      for (int a = 0; a < dirs; ++a) {
        double ang = 2.0 * pi * a / dirs;
        double ca = std::cos(ang), sa = std::sin(ang);
        for (double z = 0.0; z <= z_wall_end; z += spec.h / 2.0) {
          double rho = poke.radius * std::pow(poke.alpha, z / poke.height);
          p[0] = poke.center[0] + rho * ca;
          p[1] = poke.center[1] + rho * sa;
          for (int k = 2; k < spec.n; ++k) p[k] = poke.center[k];
          p[spec.n] = z;
          if (detail::win_ok(spec.window, std::span<const double>(p))) {
            std::size_t at = out.points.size();
            out.points.push_back(std::span<const double>(p));
            out.points.set_flag(pokemark, at);
          }
        }
      }
    }
    // axis segment from where the funnel gets thinner than the grid
    for (double z = z_wall_end; z <= poke.height; z += spec.h / 2.0) {
      for (int k = 0; k < spec.n; ++k) p[k] = poke.center[k];
      p[spec.n] = z;
      if (detail::win_ok(spec.window, std::span<const double>(p))) {
        std::size_t at = out.points.size();
        out.points.push_back(std::span<const double>(p));
        out.points.set_flag(pokemark, at);
      }
    }
    // apex
    for (int k = 0; k < spec.n; ++k) p[k] = poke.center[k];
    p[spec.n] = poke.height;
    if (detail::win_ok(spec.window, std::span<const double>(p))) {
      std::size_t at = out.points.size();
      out.points.push_back(std::span<const double>(p));
      out.points.set_flag(pokemark, at);
    }
  }
  return out;
}

/// Closed-form annulus energy per generation: each poke contributes
/// sigma_{n-1} l^n / |log alpha|^{n-1}.
inline std::vector<double> poke_energy_levels_analytic(const PokeSet& set, int n) {
  double sigma = n == 2 ? 2.0 * 3.14159265358979323846
                        : 4.0 * 3.14159265358979323846;  // n = 3 sphere area
  std::vector<double> sums;
  for (const auto& poke : set.pokes) {
    if (static_cast<std::size_t>(poke.generation) > sums.size()) sums.resize(poke.generation, 0.0);
    double la = std::abs(std::log(poke.alpha));
    sums[poke.generation - 1] +=
        sigma * std::pow(poke.height, n) / std::pow(la, n - 1);
  }
  return sums;
}

/// Discrete Dirichlet energy per generation: sum over pitch-h grid samples
/// inside each annulus of |grad f|^n h^n. The grid resolves the annulus only
/// down to radius h, so these undercount the analytic sums.
inline std::vector<double> poke_energy_levels_discrete(const PokeSet& set, int n, double h) {
  std::vector<double> sums;
  for (const auto& poke : set.pokes) {
    if (static_cast<std::size_t>(poke.generation) > sums.size()) sums.resize(poke.generation, 0.0);
    double la = std::abs(std::log(poke.alpha));
    double inner = std::max(poke.alpha * poke.radius, kBallTol);
    double total = 0.0;
    long long span = static_cast<long long>(std::ceil(poke.radius / h));
    for (long long i = -span; i <= span; ++i)
      for (long long j = -span; j <= span; ++j) {
        double rho = std::hypot(i * h, j * h);
        if (rho <= inner || rho >= poke.radius) continue;
        total += std::pow(poke.height / (la * rho), n) * std::pow(h, n);
      }
    sums[poke.generation - 1] += total;
  }
  return sums;
}

// ---------------------------------------------------------------------------
// Demo fixtures: quadratic graphs and the taxicab plane
// ---------------------------------------------------------------------------

/// Graph of |u|^2 over [-extent, extent]^n, optionally windowed.
inline PointSet gen_quadratic_graph(int n, double h, double extent,
                                    std::optional<GenWindow> window = std::nullopt) {
  require(n >= 1 && h > 0.0 && extent > 0.0, errc::invalid_argument, "bad quadratic-graph spec");
  PointSet ps(n + 1, h, "quadratic_graph");
  long long span = static_cast<long long>(std::ceil(extent / h));
  std::vector<long long> c(n, -span);
  std::vector<double> p(n + 1);
  while (true) {
    double q = 0.0;
    for (int a = 0; a < n; ++a) {
      p[a] = c[a] * h;
      q += sq(p[a]);
    }
    p[n] = q;
    if (detail::win_ok(window, std::span<const double>(p)))
      ps.push_back(std::span<const double>(p));
    int a = 0;
    for (; a < n; ++a) {
      if (++c[a] <= span) break;
      c[a] = -span;
    }
    if (a == n) break;
  }
  return ps;
}

/// The flat plane sample used with an l1 metric to exercise norm fitting.
inline PointSet gen_taxicab_plane(double h, double extent) {
  require(h > 0.0 && extent > 0.0, errc::invalid_argument, "bad taxicab spec");
  PointSet ps(2, h, "taxicab");
  long long span = static_cast<long long>(std::ceil(extent / h));
  for (long long i = -span; i <= span; ++i)
    for (long long j = -span; j <= span; ++j)
      ps.push_back({i * h, j * h});
  return ps;
}

inline double l1_metric(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

}  // namespace blowup

#endif  // BLOWUP_GENERATORS_HPP
