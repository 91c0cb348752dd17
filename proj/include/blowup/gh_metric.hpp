#ifndef BLOWUP_GH_METRIC_HPP
#define BLOWUP_GH_METRIC_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "blowup/common.hpp"
#include "blowup/metric_space.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Pointed Gromov-Hausdorff machinery on finite metric spaces.
//
// The embedding infimum in the pointed GH distance is replaced by the
// standard computable surrogate: correspondences between index sets. The
// canonical finite-space value is half the minimal distortion over
// base-preserving correspondences; exhaustive search is exact for spaces of
// at most kExhaustiveGuard points per side, the heuristic returns an upper
// bound flagged as such.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kExhaustiveGuard = 8;

/// Set of index pairs (i in X, j in Y) covering both sides. When both spaces
/// are based the base pair must be present.
struct Correspondence {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  void check_valid(const MetricSpace& x, const MetricSpace& y) const {
    std::vector<char> cx(x.n, 0), cy(y.n, 0);
    for (auto [i, j] : pairs) {
      require(i < x.n && j < y.n, errc::invalid_correspondence, "pair index out of range");
      cx[i] = 1;
      cy[j] = 1;
    }
    require(std::find(cx.begin(), cx.end(), 0) == cx.end(), errc::invalid_correspondence,
            "correspondence does not cover X");
    require(std::find(cy.begin(), cy.end(), 0) == cy.end(), errc::invalid_correspondence,
            "correspondence does not cover Y");
    if (x.base && y.base) {
      bool has_base = false;
      for (auto [i, j] : pairs)
        if (i == *x.base && j == *y.base) has_base = true;
      require(has_base, errc::invalid_correspondence, "base pair missing");
    }
  }
};

/// sup over pairs of pairs of |d_X(i,i') - d_Y(j,j')|.
inline double correspondence_distortion(const MetricSpace& x, const MetricSpace& y,
                                        const Correspondence& c) {
  c.check_valid(x, y);
  double worst = 0.0;
  for (std::size_t p = 0; p < c.pairs.size(); ++p)
    for (std::size_t q = p; q < c.pairs.size(); ++q) {
      auto [i, j] = c.pairs[p];
      auto [i2, j2] = c.pairs[q];
      worst = std::max(worst, std::abs(x.at(i, i2) - y.at(j, j2)));
    }
  return worst;
}

struct PghResult {
  double value = 0.0;        // half the (searched) minimal distortion
  bool exact = false;        // true only for the exhaustive search
  Correspondence corr;       // witness correspondence
};

namespace detail {

// Correspondences are generated as graph(f) u graph(g) for f:X->Y total and
// g defined on the Y indices not covered by f. Every correspondence contains
// a sub-correspondence of this form with no larger distortion, so minimizing
// distortion over this family is minimizing over all correspondences.
struct CorrSearch {
  const MetricSpace& x;
  const MetricSpace& y;
  std::size_t bx, by;
  std::vector<std::pair<std::size_t, std::size_t>> cur;
  double cur_dis = 0.0;
  double best = kInf;
  Correspondence best_corr;
  // Objective evaluated at each completed correspondence; must be bounded
  // below by dis/denom for the pruning to stay admissible.
  std::function<double(const std::vector<std::pair<std::size_t, std::size_t>>&, double)> eval;
  double prune_denom = 2.0;

  double pair_cost(std::size_t i, std::size_t j) const {
    double m = 0.0;
    for (auto [a, b] : cur) m = std::max(m, std::abs(x.at(i, a) - y.at(j, b)));
    return m;
  }

  void complete() {
    double v = eval(cur, cur_dis);
    if (v < best) {
      best = v;
      best_corr.pairs = cur;
    }
  }

  void assign_uncovered(std::vector<std::size_t>& left, std::size_t pos) {
    if (cur_dis / prune_denom >= best) return;
    if (pos == left.size()) {
      complete();
      return;
    }
    std::size_t j = left[pos];
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(x.n);
    for (std::size_t i = 0; i < x.n; ++i) order.emplace_back(pair_cost(i, j), i);
    std::stable_sort(order.begin(), order.end());
    for (auto [cost, i] : order) {
      double next_dis = std::max(cur_dis, cost);
      if (next_dis / prune_denom >= best) break;
      cur.emplace_back(i, j);
      double save = cur_dis;
      cur_dis = next_dis;
      assign_uncovered(left, pos + 1);
      cur_dis = save;
      cur.pop_back();
      if (best == 0.0) return;
    }
  }

  void assign_f(std::vector<std::size_t>& xs, std::size_t pos, std::vector<int>& covered) {
    if (cur_dis / prune_denom >= best) return;
    if (pos == xs.size()) {
      std::vector<std::size_t> left;
      for (std::size_t j = 0; j < y.n; ++j)
        if (!covered[j]) left.push_back(j);
      assign_uncovered(left, 0);
      return;
    }
    std::size_t i = xs[pos];
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(y.n);
    for (std::size_t j = 0; j < y.n; ++j) order.emplace_back(pair_cost(i, j), j);
    std::stable_sort(order.begin(), order.end());
    for (auto [cost, j] : order) {
      double next_dis = std::max(cur_dis, cost);
      if (next_dis / prune_denom >= best) break;
      cur.emplace_back(i, j);
      double save = cur_dis;
      cur_dis = next_dis;
      ++covered[j];
      assign_f(xs, pos + 1, covered);
      --covered[j];
      cur_dis = save;
      cur.pop_back();
      if (best == 0.0) return;
    }
  }

  void run() {
    cur.clear();
    cur.emplace_back(bx, by);
    cur_dis = 0.0;
    std::vector<std::size_t> xs;
    for (std::size_t i = 0; i < x.n; ++i)
      if (i != bx) xs.push_back(i);
    std::vector<int> covered(y.n, 0);
    ++covered[by];
    assign_f(xs, 0, covered);
  }
};

inline Correspondence greedy_correspondence(const MetricSpace& x, const MetricSpace& y) {
  std::size_t bx = x.base_or_throw(), by = y.base_or_throw();
  Correspondence c;
  c.pairs.emplace_back(bx, by);
  // Match by distance-to-base profile, then cover leftovers the same way.
  for (std::size_t i = 0; i < x.n; ++i) {
    if (i == bx) continue;
    std::size_t pick = by;
    double best = kInf;
    for (std::size_t j = 0; j < y.n; ++j) {
      double gap = std::abs(x.at(bx, i) - y.at(by, j));
      if (gap < best) {
        best = gap;
        pick = j;
      }
    }
    c.pairs.emplace_back(i, pick);
  }
  std::vector<char> cy(y.n, 0);
  for (auto [i, j] : c.pairs) cy[j] = 1;
  for (std::size_t j = 0; j < y.n; ++j) {
    if (cy[j]) continue;
    std::size_t pick = bx;
    double best = kInf;
    for (std::size_t i = 0; i < x.n; ++i) {
      double gap = std::abs(x.at(bx, i) - y.at(by, j));
      if (gap < best) {
        best = gap;
        pick = i;
      }
    }
    c.pairs.emplace_back(pick, j);
  }
  return c;
}

template <class Objective>
inline double improve_correspondence(const MetricSpace& x, const MetricSpace& y,
                                     Correspondence& c, Objective&& objective,
                                     std::size_t budget) {
  std::vector<int> cx(x.n, 0), cy(y.n, 0);
  for (auto [i, j] : c.pairs) {
    ++cx[i];
    ++cy[j];
  }
  double cur = objective(c);
  bool improved = true;
  std::size_t used = 0;
  // Single-pair reassignment passes on either coordinate; moves that would
  // uncover an index are skipped. Pair 0 is the base pair and stays fixed.
  while (improved && used < budget) {
    improved = false;
    for (std::size_t p = 1; p < c.pairs.size() && used < budget; ++p) {
      auto orig = c.pairs[p];
      auto pick = orig;
      double local = cur;
      if (cy[orig.second] > 1) {
        for (std::size_t j = 0; j < y.n && used < budget; ++j) {
          if (j == orig.second) continue;
          ++used;
          c.pairs[p] = {orig.first, j};
          double v = objective(c);
          if (v < local) {
            local = v;
            pick = c.pairs[p];
          }
        }
        c.pairs[p] = orig;
      }
      if (cx[orig.first] > 1) {
        for (std::size_t i = 0; i < x.n && used < budget; ++i) {
          if (i == orig.first) continue;
          ++used;
          c.pairs[p] = {i, orig.second};
          double v = objective(c);
          if (v < local) {
            local = v;
            pick = c.pairs[p];
          }
        }
        c.pairs[p] = orig;
      }
      if (local < cur) {
        --cx[orig.first];
        --cy[orig.second];
        c.pairs[p] = pick;
        ++cx[pick.first];
        ++cy[pick.second];
        cur = local;
        improved = true;
      }
    }
  }
  return cur;
}

}  // namespace detail

/// Half the minimal distortion over base-preserving correspondences.
/// Exhaustive mode (exact) is guarded at kExhaustiveGuard points per side;
/// heuristic mode (greedy profile matching + local reassignment) returns an
/// upper bound with exact == false.
inline PghResult pgh_oracle(const MetricSpace& x, const MetricSpace& y, bool exhaustive = true,
                            std::size_t budget = 10000) {
  std::size_t bx = x.base_or_throw(), by = y.base_or_throw();
  if (exhaustive) {
    require(x.n <= kExhaustiveGuard && y.n <= kExhaustiveGuard, errc::too_large_for_exhaustive,
            "exhaustive pgh search guarded at 8 points per side");
    detail::CorrSearch s{x, y, bx, by};
    s.prune_denom = 2.0;
    s.eval = [](const std::vector<std::pair<std::size_t, std::size_t>>&, double dis) {
      return dis / 2.0;
    };
    // Seed the incumbent with the greedy correspondence.
    Correspondence seed = detail::greedy_correspondence(x, y);
    s.best = correspondence_distortion(x, y, seed) / 2.0;
    s.best_corr = seed;
    s.run();
    return {s.best, true, s.best_corr};
  }
  Correspondence c = detail::greedy_correspondence(x, y);
  auto obj = [&](const Correspondence& cc) { return correspondence_distortion(x, y, cc) / 2.0; };
  double v = detail::improve_correspondence(x, y, c, obj, budget);
  return {v, false, c};
}

// ---------------------------------------------------------------------------
// eps-isometry and pGHA defects
// ---------------------------------------------------------------------------

struct EpsIsometryReport {
  bool pass = false;
  double distortion_defect = 0.0;  // worst pair distortion inside B_X(x, 1/eps)
  double covering_defect = 0.0;    // worst covering gap on B_Y(y, 1/eps - eps)
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  std::size_t worst_uncovered = 0;
};

/// Checks whether f (index map X -> Y) is an eps-isometry: distortion at most
/// eps over B_X(x, 1/eps) and B_Y(y, 1/eps - eps) inside the eps-neighborhood
/// of f(B_X(x, 1/eps)).
inline EpsIsometryReport epsilon_isometry_defect(const std::vector<std::size_t>& f,
                                                 const MetricSpace& x, const MetricSpace& y,
                                                 double eps) {
  require(eps > 0.0, errc::invalid_argument, "eps must be positive");
  require(f.size() == x.n, errc::invalid_argument, "map must be total on X");
  std::size_t bx = x.base_or_throw(), by = y.base_or_throw();
  require(f[bx] == by, errc::base_not_preserved, "map must send base to base");
  for (std::size_t j : f) require(j < y.n, errc::invalid_argument, "map image out of range");

  EpsIsometryReport rep;
  auto ball_x = x.ball(bx, 1.0 / eps);
  for (std::size_t a = 0; a < ball_x.size(); ++a)
    for (std::size_t b = a; b < ball_x.size(); ++b) {
      std::size_t i = ball_x[a], j = ball_x[b];
      double gap = std::abs(y.at(f[i], f[j]) - x.at(i, j));
      if (gap > rep.distortion_defect) {
        rep.distortion_defect = gap;
        rep.worst_pair = {i, j};
      }
    }
  double target_radius = 1.0 / eps - eps;
  for (std::size_t u = 0; u < y.n; ++u) {
    if (y.at(by, u) > target_radius + kBallTol) continue;
    double near = kInf;
    for (std::size_t i : ball_x) near = std::min(near, y.at(u, f[i]));
    if (near > rep.covering_defect) {
      rep.covering_defect = near;
      rep.worst_uncovered = u;
    }
  }
  rep.pass = rep.distortion_defect <= eps && rep.covering_defect <= eps;
  return rep;
}

/// Least eps such that phi is an eps-pGHA from A to B: the max of the global
/// pair distortion and the covering gap of phi(A) in B.
inline double pgha_defect(const std::vector<std::size_t>& phi, const MetricSpace& a,
                          const MetricSpace& b) {
  require(phi.size() == a.n, errc::invalid_argument, "map must be total on A");
  for (std::size_t j : phi) require(j < b.n, errc::invalid_argument, "map image out of range");
  double defect = 0.0;
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = i; j < a.n; ++j)
      defect = std::max(defect, std::abs(b.at(phi[i], phi[j]) - a.at(i, j)));
  for (std::size_t u = 0; u < b.n; ++u) {
    double near = kInf;
    for (std::size_t i = 0; i < a.n; ++i) near = std::min(near, b.at(u, phi[i]));
    defect = std::max(defect, near);
  }
  return defect;
}

/// Metric farthest-point subsample (seeded at `seed`), deterministic ties.
inline std::vector<std::size_t> farthest_point_sample(const MetricSpace& m, std::size_t seed,
                                                      std::size_t count) {
  std::vector<std::size_t> picked;
  if (m.n == 0 || count == 0) return picked;
  picked.push_back(seed);
  std::vector<double> d(m.n, kInf);
  while (picked.size() < std::min(count, m.n)) {
    std::size_t last = picked.back();
    std::size_t arg = m.n;
    double best = -1.0;
    for (std::size_t i = 0; i < m.n; ++i) {
      d[i] = std::min(d[i], m.at(last, i));
      if (d[i] > best + 1e-15) {
        best = d[i];
        arg = i;
      }
    }
    if (arg == m.n || best <= 0.0) break;
    picked.push_back(arg);
  }
  return picked;
}

/// Upper estimate of xi_{X,Y}(x, y, r): the best (eps r)-pGHA defect found
/// between B_X(x,r) and B_Y(y,r), divided by r. Search: profile-matching
/// seed, single-point reassignment passes bounded by `budget` candidate
/// evaluations. Balls larger than `subsample_cap` are reduced by
/// farthest-point sampling first.
inline double xi_estimate(const MetricSpace& x, const MetricSpace& y, double r,
                          std::size_t budget = 10000, std::size_t subsample_cap = 64) {
  require(r > 0.0, errc::nonpositive_radius, "xi radius must be positive");
  std::size_t bx = x.base_or_throw(), by = y.base_or_throw();
  MetricSpace a = x.restrict(x.ball(bx, r));
  MetricSpace b = y.restrict(y.ball(by, r));
  if (a.n > subsample_cap) a = a.restrict(farthest_point_sample(a, a.base_or_throw(), subsample_cap));
  if (b.n > subsample_cap) b = b.restrict(farthest_point_sample(b, b.base_or_throw(), subsample_cap));
  std::size_t ab = a.base_or_throw(), bb = b.base_or_throw();

  std::vector<std::size_t> phi(a.n, bb);
  for (std::size_t i = 0; i < a.n; ++i) {
    if (i == ab) continue;
    double best = kInf;
    for (std::size_t j = 0; j < b.n; ++j) {
      double gap = std::abs(a.at(ab, i) - b.at(bb, j));
      if (gap < best) {
        best = gap;
        phi[i] = j;
      }
    }
  }
  double cur = pgha_defect(phi, a, b);
  std::size_t used = 0;
  bool improved = true;
  while (improved && used < budget) {
    improved = false;
    for (std::size_t i = 0; i < a.n && used < budget; ++i) {
      if (i == ab) continue;  // keep the map pointed
      std::size_t orig = phi[i];
      std::size_t pick = orig;
      double local = cur;
      for (std::size_t j = 0; j < b.n && used < budget; ++j) {
        if (j == orig) continue;
        ++used;
        phi[i] = j;
        double v = pgha_defect(phi, a, b);
        if (v < local) {
          local = v;
          pick = j;
        }
      }
      phi[i] = pick;
      if (local < cur) {
        cur = local;
        improved = true;
      }
    }
  }
  return cur / r;
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

/// Disjoint-union space Z u (X \ Xsub) where Xsub embeds isometrically in Z.
/// Cross distances take the infimum of two-leg paths through the shared
/// subset, which keeps both original metrics intact and yields a metric.
struct GluedSpace {
  MetricSpace space;
  std::vector<int> part;                 // 0 = Z-part, 1 = X-part
  std::vector<std::size_t> source;       // index in Z resp. X
  std::vector<std::size_t> x_to_glued;   // isometric copy of X inside the glue

  std::size_t z_count = 0;
  std::size_t x_extra_count = 0;
};

inline GluedSpace glue(const MetricSpace& x, const std::vector<std::size_t>& xsub,
                       const MetricSpace& z, const std::vector<std::size_t>& embed) {
  require(!xsub.empty(), errc::empty_subset, "glue needs a nonempty shared subset");
  require(embed.size() == xsub.size(), errc::invalid_argument,
          "embed must match the subset length");
  for (std::size_t i : xsub) require(i < x.n, errc::invalid_argument, "subset index out of range");
  for (std::size_t j : embed) require(j < z.n, errc::invalid_argument, "embed index out of range");
  for (std::size_t a = 0; a < xsub.size(); ++a)
    for (std::size_t b = 0; b < xsub.size(); ++b) {
      double dx = x.at(xsub[a], xsub[b]);
      double dz = z.at(embed[a], embed[b]);
      double scale = std::max(1.0, std::max(dx, dz));
      require(std::abs(dx - dz) <= kMetricSlack * scale, errc::not_isometric_embedding,
              "embed is not an isometry on the subset");
    }

  std::vector<char> in_sub(x.n, 0);
  for (std::size_t i : xsub) in_sub[i] = 1;
  std::vector<std::size_t> extra;
  for (std::size_t i = 0; i < x.n; ++i)
    if (!in_sub[i]) extra.push_back(i);

  GluedSpace g;
  g.z_count = z.n;
  g.x_extra_count = extra.size();
  g.space = MetricSpace(z.n + extra.size());
  g.part.assign(g.space.n, 0);
  g.source.assign(g.space.n, 0);
  for (std::size_t j = 0; j < z.n; ++j) g.source[j] = j;
  for (std::size_t k = 0; k < extra.size(); ++k) {
    g.part[z.n + k] = 1;
    g.source[z.n + k] = extra[k];
  }

  // Z-Z block.
  for (std::size_t i = 0; i < z.n; ++i)
    for (std::size_t j = 0; j < z.n; ++j) g.space.at(i, j) = z.at(i, j);
  // X-X block on the points outside the subset.
  for (std::size_t a = 0; a < extra.size(); ++a)
    for (std::size_t b = 0; b < extra.size(); ++b)
      g.space.at(z.n + a, z.n + b) = x.at(extra[a], extra[b]);
  // Cross block: two legs through the shared subset.
  for (std::size_t a = 0; a < extra.size(); ++a)
    for (std::size_t j = 0; j < z.n; ++j) {
      double best = kInf;
      for (std::size_t s = 0; s < xsub.size(); ++s)
        best = std::min(best, x.at(extra[a], xsub[s]) + z.at(embed[s], j));
      g.space.at(z.n + a, j) = best;
      g.space.at(j, z.n + a) = best;
    }

  g.x_to_glued.assign(x.n, 0);
  for (std::size_t s = 0; s < xsub.size(); ++s) g.x_to_glued[xsub[s]] = embed[s];
  for (std::size_t k = 0; k < extra.size(); ++k) g.x_to_glued[extra[k]] = z.n + k;
  g.space.base = z.base;
  return g;
}

// ---------------------------------------------------------------------------
// Windowed Gromov-Hausdorff distance variant
// ---------------------------------------------------------------------------

namespace detail {

// Relative Walkup-Wets value at window radius r inside the space glued along
// a correspondence: cross distances are min two-leg paths through matched
// pairs plus the correspondence distortion (the distortion offset keeps the
// cross metric consistent). Windows are intrinsic balls around the bases.
inline double glued_ww_value(const MetricSpace& x, const MetricSpace& y,
                             const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                             double dis, double r) {
  std::size_t bx = x.base_or_throw(), by = y.base_or_throw();
  double worst = 0.0;
  for (std::size_t u = 0; u < x.n; ++u) {
    if (x.at(bx, u) > r + kBallTol) continue;
    double best = kInf;
    for (auto [a, b] : pairs) best = std::min(best, x.at(u, a) + dis);
    worst = std::max(worst, best);
  }
  for (std::size_t v = 0; v < y.n; ++v) {
    if (y.at(by, v) > r + kBallTol) continue;
    double best = kInf;
    for (auto [a, b] : pairs) best = std::min(best, y.at(v, b) + dis);
    worst = std::max(worst, best);
  }
  return worst / r;
}

}  // namespace detail

struct DghResult {
  double value = 0.0;
  bool exact = false;
  Correspondence corr;
};

/// Estimate of D_GH^r between pointed finite spaces: the minimum over
/// searched base-preserving correspondences of the Walkup-Wets value at
/// radius r in the space glued along the correspondence. Exhaustive mode
/// enumerates the (f,g)-generated correspondence family with an admissible
/// distortion bound; heuristic mode returns an upper bound.
inline DghResult dgh_window(const MetricSpace& x, const MetricSpace& y, double r,
                            bool exhaustive = true, std::size_t budget = 10000) {
  require(r > 0.0, errc::nonpositive_radius, "window radius must be positive");
  std::size_t bx = x.base_or_throw(), by = y.base_or_throw();
  auto objective = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                       double dis) { return detail::glued_ww_value(x, y, pairs, dis, r); };
  if (exhaustive) {
    require(x.n <= kExhaustiveGuard && y.n <= kExhaustiveGuard, errc::too_large_for_exhaustive,
            "exhaustive dgh search guarded at 8 points per side");
    detail::CorrSearch s{x, y, bx, by};
    // Every completed value is at least dis / r: each windowed point (the
    // base at minimum) sits at cross distance >= dis.
    s.prune_denom = r;
    s.eval = objective;
    Correspondence seed = detail::greedy_correspondence(x, y);
    s.best = objective(seed.pairs, correspondence_distortion(x, y, seed));
    s.best_corr = seed;
    s.run();
    return {s.best, true, s.best_corr};
  }
  Correspondence c = detail::greedy_correspondence(x, y);
  auto obj = [&](const Correspondence& cc) {
    return objective(cc.pairs, correspondence_distortion(x, y, cc));
  };
  double v = detail::improve_correspondence(x, y, c, obj, budget);
  return {v, false, c};
}

}  // namespace blowup

#endif  // BLOWUP_GH_METRIC_HPP
