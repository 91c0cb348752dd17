#ifndef BLOWUP_CONTENT_HPP
#define BLOWUP_CONTENT_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "blowup/common.hpp"
#include "blowup/core_metric.hpp"
#include "blowup/point_set.hpp"

namespace blowup {

// ---------------------------------------------------------------------------
// Content estimators on sampled sets.
//
// Covers are weighted by (diam U_i)^s with U_i the covered sample subset;
// packings by (2 r_i)^s. On a finite sample the raw Hausdorff content is 0
// (singleton covers), so each cover element is priced at
// (diam of its samples + 2 resolution)^s: a sample stands for every
// continuum point within `resolution` of it, and the thickened diameter is
// what the element actually covers of the continuum set. With resolution 0
// the sample set is the set and the raw diameter is used. Packing estimates
// are lower bounds witnessed by explicit disjoint ball families with radii
// <= diam. Greedy selections are sequential, ties broken by sample index.
// ---------------------------------------------------------------------------

struct ContentEstimate {
  double value = 0.0;
  double exponent = 0.0;
  std::string direction;  // "upper" | "lower"
  double scale = 0.0;     // the delta used (0 when only diam-capped)
  std::vector<Ball> witness;
  std::vector<double> witness_terms;  // per-element (diam)^s or (2r)^s

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["value"] = value;
    j["s"] = exponent;
    j["direction"] = direction;
    j["delta"] = scale;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& b : witness) {
      nlohmann::ordered_json e;
      e["center"] = b.center;
      e["radius"] = b.radius;
      arr.push_back(e);
    }
    j["witness"] = arr;
    return j;
  }
};

namespace detail {
inline double subset_diameter(const PointSet& ps, const std::vector<std::size_t>& idx) {
  double d2 = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      d2 = std::max(d2, ps.dist2(idx[a], idx[b]));
  return std::sqrt(d2);
}
}  // namespace detail

/// Cover-based upper estimate of the Hausdorff s-content at scale delta:
/// greedy max-coverage by closed balls of radius delta/2 centered at samples,
/// each cover element priced at (diam of covered samples + 2 resolution)^s.
inline ContentEstimate hausdorff_content_upper(const PointSet& x, double s, double delta) {
  require(!x.empty(), errc::empty_input, "content of an empty set");
  require(s > 0.0 && delta > 0.0, errc::invalid_argument, "need s > 0 and delta > 0");
  SpatialIndex idx(x);
  std::vector<char> covered(x.size(), 0);
  std::size_t remaining = x.size();
  ContentEstimate est;
  est.exponent = s;
  est.direction = "upper";
  est.scale = delta;
  double r = delta / 2.0;
  while (remaining > 0) {
    std::size_t best_center = x.size();
    std::size_t best_gain = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::size_t gain = 0;
      idx.for_each_within(x.point(i), r, [&](std::size_t j, double) {
        if (!covered[j]) ++gain;
      });
      if (gain > best_gain) {
        best_gain = gain;
        best_center = i;
      }
    }
    if (best_center == x.size()) break;
    std::vector<std::size_t> newly;
    idx.for_each_within(x.point(best_center), r, [&](std::size_t j, double) {
      if (!covered[j]) newly.push_back(j);
    });
    std::sort(newly.begin(), newly.end());
    for (std::size_t j : newly) covered[j] = 1;
    remaining -= newly.size();
    double diam = detail::subset_diameter(x, newly) + 2.0 * x.resolution;
    double term = std::pow(diam, s);
    est.value += term;
    est.witness.emplace_back(
        std::vector<double>(x.point(best_center).begin(), x.point(best_center).end()), r);
    est.witness_terms.push_back(term);
  }
  return est;
}

/// Greedy disjoint packing: places one ball per schedule entry (largest radii
/// first, first fit in sample-index order), centers restricted to samples.
/// Returns sum (2 r_i)^s, a witnessed lower bound for the s-packing content.
inline ContentEstimate packing_content_lower(const PointSet& x, double s,
                                             std::vector<double> schedule) {
  require(x.size() >= 2, errc::empty_input, "packing needs at least two samples");
  require(s > 0.0, errc::invalid_argument, "need s > 0");
  double diam = x.diameter();
  for (double r : schedule) {
    require(r > 0.0, errc::nonpositive_radius, "schedule radii must be positive");
    require(r <= diam + kBallTol, errc::radius_exceeds_diameter,
            "packing radius exceeds the set diameter");
  }
  std::stable_sort(schedule.begin(), schedule.end(), std::greater<double>());
  ContentEstimate est;
  est.exponent = s;
  est.direction = "lower";
  est.scale = schedule.empty() ? 0.0 : schedule.front();
  for (double r : schedule) {
    bool placed = false;
    for (std::size_t i = 0; i < x.size() && !placed; ++i) {
      auto p = x.point(i);
      bool ok = true;
      for (const auto& b : est.witness) {
        if (dist(std::span<const double>(b.center), p) <= r + b.radius - kBallTol) {
          ok = false;
          break;
        }
      }
      if (ok) {
        est.witness.emplace_back(std::vector<double>(p.begin(), p.end()), r);
        double term = std::pow(2.0 * r, s);
        est.witness_terms.push_back(term);
        est.value += term;
        placed = true;
      }
    }
  }
  return est;
}

/// Lower bound on the packing premeasure P^s_delta: greedy packing with
/// dyadic radius menus, each level filled until no further ball fits. Menus
/// run from a top radius down to an instance-intrinsic floor
/// max(resolution, diam / 4096); the estimate is the best over all menus
/// whose top radius is <= delta. Because the menu family depends only on the
/// instance, a smaller delta selects a sub-family, which makes the estimate
/// monotone nondecreasing in delta by construction.
inline ContentEstimate packing_premeasure_estimate(const PointSet& x, double s, double delta) {
  require(!x.empty(), errc::empty_input, "content of an empty set");
  require(s > 0.0 && delta > 0.0, errc::invalid_argument, "need s > 0 and delta > 0");
  if (x.size() == 1) {
    ContentEstimate est;
    est.exponent = s;
    est.direction = "lower";
    est.scale = delta;
    return est;  // no ball with positive radius fits below the zero diameter
  }
  double diam = x.diameter();
  require(delta <= diam + kBallTol, errc::radius_exceeds_diameter,
          "delta exceeds the set diameter");
  double floor_r = std::max(x.resolution, diam / 4096.0);

  auto run_menu = [&](double top) {
    ContentEstimate est;
    est.exponent = s;
    est.direction = "lower";
    est.scale = delta;
    for (double r = top; r >= floor_r; r /= 2.0) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        auto p = x.point(i);
        bool ok = true;
        for (const auto& b : est.witness) {
          if (dist(std::span<const double>(b.center), p) <= r + b.radius - kBallTol) {
            ok = false;
            break;
          }
        }
        if (ok) {
          est.witness.emplace_back(std::vector<double>(p.begin(), p.end()), r);
          double term = std::pow(2.0 * r, s);
          est.witness_terms.push_back(term);
          est.value += term;
        }
      }
    }
    return est;
  };

  ContentEstimate best;
  best.exponent = s;
  best.direction = "lower";
  best.scale = delta;
  bool have = false;
  for (double top = floor_r; top <= delta * (1.0 + kBallTol); top *= 2.0) {
    auto alt = run_menu(top);
    if (!have || alt.value > best.value) {
      best = alt;
      have = true;
    }
  }
  if (!have) best = run_menu(delta);  // delta below the floor: single coarse menu
  return best;
}

struct RegularityScan {
  double min_ratio = kInf;
  std::size_t witness_sample = 0;
  double witness_radius = 0.0;
};

/// min over samples and radii of mu(B(x,r)) / r^s with mu the given
/// per-sample weights; certifies lower s-regularity of the weighted sample.
inline RegularityScan lower_regularity_scan(const PointSet& x, const std::vector<double>& weights,
                                            double s, const std::vector<double>& radii) {
  require(weights.size() == x.size(), errc::invalid_argument, "one weight per sample");
  SpatialIndex idx(x);
  RegularityScan scan;
  for (double r : radii) {
    require(r > 0.0, errc::nonpositive_radius, "radii must be positive");
    for (std::size_t i = 0; i < x.size(); ++i) {
      double mass = 0.0;
      idx.for_each_within(x.point(i), r, [&](std::size_t j, double) { mass += weights[j]; });
      double ratio = mass / std::pow(r, s);
      if (ratio < scan.min_ratio) {
        scan.min_ratio = ratio;
        scan.witness_sample = i;
        scan.witness_radius = r;
      }
    }
  }
  return scan;
}

/// Revalidates a ContentEstimate against the sample set it was computed on:
/// covers must cover, packings must be disjoint sample-centered balls with
/// radii <= diam, and the stored value must match its witness within 1e-9.
inline bool revalidate(const ContentEstimate& est, const PointSet& x) {
  double recomputed = 0.0;
  for (double t : est.witness_terms) recomputed += t;
  if (std::abs(recomputed - est.value) > 1e-9 * std::max(1.0, std::abs(est.value))) return false;
  if (est.direction == "upper") {
    SpatialIndex idx(x);
    std::vector<char> covered(x.size(), 0);
    for (const auto& b : est.witness)
      idx.for_each_within(std::span<const double>(b.center), b.radius,
                          [&](std::size_t j, double) { covered[j] = 1; });
    for (char c : covered)
      if (!c) return false;
  } else {
    double diam = x.diameter();
    SpatialIndex idx(x);
    for (const auto& b : est.witness) {
      if (b.radius > diam + kBallTol) return false;
      auto [i, d] = idx.nearest(std::span<const double>(b.center));
      if (d > kBallTol) return false;  // centers must be samples
    }
    for (std::size_t a = 0; a < est.witness.size(); ++a)
      for (std::size_t b = a + 1; b < est.witness.size(); ++b) {
        double d = dist(std::span<const double>(est.witness[a].center),
                        std::span<const double>(est.witness[b].center));
        if (d <= est.witness[a].radius + est.witness[b].radius - kBallTol) return false;
      }
  }
  return true;
}

/// Witness-level form of the content chain: for a packing witness {B_i},
/// sum (2 r_i)^s >= sum (diam(X n B_i))^s holds exactly because each covered
/// subset fits inside its ball. Returns both sides.
inline std::pair<double, double> packing_chain_sides(const ContentEstimate& packing,
                                                     const PointSet& x, double s) {
  SpatialIndex idx(x);
  double lhs = 0.0, rhs = 0.0;
  for (const auto& b : packing.witness) {
    lhs += std::pow(2.0 * b.radius, s);
    std::vector<std::size_t> inside =
        idx.within(std::span<const double>(b.center), b.radius);
    rhs += std::pow(detail::subset_diameter(x, inside), s);
  }
  return {lhs, rhs};
}

}  // namespace blowup

#endif  // BLOWUP_CONTENT_HPP
