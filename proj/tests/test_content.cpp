#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "blowup/content.hpp"

using namespace blowup;

namespace {

PointSet segment_samples(int n, double h = 0.0) {
  PointSet ps(1, h);
  for (int i = 0; i <= n; ++i) ps.push_back({static_cast<double>(i) / n});
  return ps;
}

PointSet square_samples(int n) {
  PointSet ps(2, 1.0 / n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ps.push_back({(i + 0.5) / n, (j + 0.5) / n});
  return ps;
}

}  // namespace

TEST_CASE("hausdorff content of segment samples at fine delta") {
  auto seg = segment_samples(1000, 1e-3);
  auto est = hausdorff_content_upper(seg, 1.0, 0.01);
  CHECK(est.value >= 1.0);
  CHECK(est.value <= 1.1);
  CHECK(revalidate(est, seg));
}

TEST_CASE("hausdorff content degenerate cases") {
  PointSet single(2);
  single.push_back({0.3, 0.4});
  auto est = hausdorff_content_upper(single, 1.5, 0.5);
  CHECK(est.value == 0.0);  // one singleton cover element, diameter zero

  PointSet two(1);
  two.push_back({0.0});
  two.push_back({1.0});
  auto e2 = hausdorff_content_upper(two, 1.0, 0.1);
  CHECK(e2.value == 0.0);  // two singleton covers beat any interval cover
  CHECK(e2.witness.size() == 2);

  PointSet empty(1);
  CHECK_THROWS_AS(hausdorff_content_upper(empty, 1.0, 0.1), error);
}

TEST_CASE("resolution thickening keeps the cover estimate honest") {
  // Same two points, now declared as a sampled continuum with h = 0.25:
  // each singleton stands for a piece of diameter up to 2h.
  PointSet two(1, 0.25);
  two.push_back({0.0});
  two.push_back({1.0});
  auto est = hausdorff_content_upper(two, 1.0, 0.1);
  CHECK(est.value == Catch::Approx(1.0));
}

TEST_CASE("packing content basic schedule") {
  auto seg = segment_samples(1000);
  std::vector<double> schedule(32, 1.0 / 64.0);
  auto est = packing_content_lower(seg, 1.0, schedule);
  CHECK(est.witness.size() == 32);
  CHECK(est.value == Catch::Approx(1.0).epsilon(0.05));
  CHECK(revalidate(est, seg));
}

TEST_CASE("packing content: two points, one ball") {
  PointSet two(1);
  two.push_back({0.0});
  two.push_back({1.0});
  auto est = packing_content_lower(two, 1.0, {1.0});
  CHECK(est.witness.size() == 1);
  CHECK(est.value == Catch::Approx(2.0));

  CHECK_THROWS_AS(packing_content_lower(two, 1.0, {1.5}), error);
}

TEST_CASE("packing content is monotone under schedule extension") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    PointSet ps(2);
    std::size_t n = 20 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) ps.push_back({u(rng), u(rng)});
    std::vector<double> sched;
    for (int k = 0; k < 6; ++k) sched.push_back(0.02 + 0.2 * u(rng));
    auto base = packing_content_lower(ps, 1.5, sched);
    auto extended = sched;
    extended.push_back(0.01);
    extended.push_back(0.05);
    auto more = packing_content_lower(ps, 1.5, extended);
    CHECK(more.value >= base.value - 1e-12);
  }
}

TEST_CASE("packing premeasure estimate") {
  auto seg = segment_samples(512, 1.0 / 512.0);
  auto est = packing_premeasure_estimate(seg, 1.0, 0.5);
  CHECK(est.value >= 1.0);
  CHECK(revalidate(est, seg));

  PointSet single(1);
  single.push_back({0.0});
  CHECK(packing_premeasure_estimate(single, 1.0, 0.1).value == 0.0);
}

TEST_CASE("packing premeasure monotone in delta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    PointSet ps(2);
    std::size_t n = 30 + rng() % 50;
    for (std::size_t i = 0; i < n; ++i) ps.push_back({u(rng), u(rng)});
    double delta = 0.2 + 0.5 * u(rng);
    double s = 0.8 + u(rng);
    auto coarse = packing_premeasure_estimate(ps, s, delta);
    auto fine = packing_premeasure_estimate(ps, s, delta / 2.0);
    CHECK(fine.value <= coarse.value + 1e-12);
  }
}

TEST_CASE("lower regularity scan") {
  auto sq = square_samples(50);
  std::vector<double> w(sq.size(), 1.0 / sq.size());
  auto scan = lower_regularity_scan(sq, w, 2.0, {0.1, 0.2});
  CHECK(scan.min_ratio >= 0.7);
  CHECK(scan.min_ratio <= 1.2);

  PointSet single(1);
  single.push_back({0.0});
  auto s1 = lower_regularity_scan(single, {1.0}, 1.0, {0.5});
  CHECK(s1.min_ratio == Catch::Approx(2.0));  // 1 / r^s with r = 0.5

  // two far clusters, one with zero weight: ratio collapses to zero there
  PointSet clusters(1);
  clusters.push_back({0.0});
  clusters.push_back({100.0});
  auto s2 = lower_regularity_scan(clusters, {1.0, 0.0}, 1.0, {0.5});
  CHECK(s2.min_ratio == 0.0);
  CHECK(s2.witness_sample == 1);
}

TEST_CASE("witness chain: packing dominates the covered diameters") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    PointSet ps(2);
    std::size_t n = 40 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) ps.push_back({u(rng), u(rng)});
    double s = 1.0 + u(rng);
    auto est = packing_premeasure_estimate(ps, s, 0.3);
    auto [lhs, rhs] = packing_chain_sides(est, ps, s);
    CHECK(lhs >= rhs);
    CHECK(lhs == Catch::Approx(est.value));
  }
}

TEST_CASE("content estimate json shape") {
  PointSet two(1);
  two.push_back({0.0});
  two.push_back({1.0});
  auto est = packing_content_lower(two, 1.0, {1.0});
  auto j = est.to_json();
  CHECK(j["value"] == 2.0);
  CHECK(j["s"] == 1.0);
  CHECK(j["direction"] == "lower");
  REQUIRE(j["witness"].size() == 1);
  CHECK(j["witness"][0]["radius"] == 1.0);
}
