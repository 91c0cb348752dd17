#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "blowup/core_metric.hpp"
#include "blowup/point_set.hpp"

using namespace blowup;

namespace {

PointSet make_set(int dim, std::initializer_list<std::initializer_list<double>> pts,
                  double h = 0.0) {
  PointSet ps(dim, h);
  for (auto& p : pts) ps.push_back(std::span<const double>(p.begin(), p.size()));
  return ps;
}

PointSet random_set(std::mt19937_64& rng, int dim, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PointSet ps(dim);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    for (auto& v : p) v = u(rng);
    ps.push_back(std::span<const double>(p));
  }
  return ps;
}

}  // namespace

TEST_CASE("excess basic values") {
  auto b0 = make_set(2, {{0, 0}});
  auto a1 = make_set(2, {{0, 0}, {3, 4}});
  CHECK(excess(a1, b0) == Catch::Approx(5.0));

  PointSet empty(2);
  CHECK(excess(empty, b0) == 0.0);

  auto a2 = make_set(2, {{0, 0}});
  auto b2 = make_set(2, {{3, 4}, {0, 1}});
  CHECK(excess(a2, b2) == Catch::Approx(1.0));

  CHECK_THROWS_AS(excess(a1, empty), error);
}

TEST_CASE("excess of a subset vanishes") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto b = random_set(rng, 3, 20);
    PointSet a(3);
    for (std::size_t i = 0; i < b.size(); i += 2) a.push_back(b.point(i));
    CHECK(excess(a, b) == 0.0);
  }
}

TEST_CASE("indexed excess matches brute force") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    int dim = 1 + static_cast<int>(rng() % 3);
    auto a = random_set(rng, dim, 1 + rng() % 40);
    auto b = random_set(rng, dim, 1 + rng() % 40);
    CHECK(excess(a, b) == excess_brute(a, b));
  }
}

TEST_CASE("ww distance evaluates the definition") {
  auto a = make_set(1, {{0.0}});
  auto b = make_set(1, {{0.0}, {0.5}});
  CHECK(ww_distance(a, b, {0.0}, 1.0) == Catch::Approx(0.5));
  CHECK(ww_distance(a, b, {0.0}, 2.0) == Catch::Approx(0.25));

  // identical sets at any window
  std::mt19937_64 rng(3);
  auto c = random_set(rng, 2, 15);
  CHECK(ww_distance(c, c, {0.1, -0.2}, 0.7) == 0.0);

  CHECK_THROWS_AS(ww_distance(a, b, {0.0}, 0.0), error);
}

TEST_CASE("ww distance is symmetric in its set arguments") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto a = random_set(rng, 2, 5 + rng() % 20);
    auto b = random_set(rng, 2, 5 + rng() % 20);
    std::vector<double> x{0.0, 0.0};
    double r = 0.3 + 0.7 * (rng() % 100) / 100.0;
    CHECK(ww_distance(a, b, std::span<const double>(x), r) ==
          ww_distance(b, a, std::span<const double>(x), r));
  }
}

TEST_CASE("monotonicity under window inclusion") {
  // B(x,r) inside B(y,s) gives D^{x,r} <= (s/r) D^{y,s}, relative slack 1e-9.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int t = 0; t < 1200; ++t) {
    int dim = 1 + static_cast<int>(rng() % 3);
    auto a = random_set(rng, dim, 3 + rng() % 12);
    auto b = random_set(rng, dim, 3 + rng() % 12);
    double s = 0.5 + u(rng);
    double r = s * (0.2 + 0.7 * u(rng));
    std::vector<double> y(dim), x(dim);
    for (auto& v : y) v = u(rng) - 0.5;
    double shift = (s - r) * u(rng);
    for (int k = 0; k < dim; ++k) x[k] = y[k];
    x[0] += shift;  // |x - y| <= s - r keeps B(x,r) inside B(y,s)
    double dr = ww_distance(a, b, std::span<const double>(x), r);
    double ds = ww_distance(a, b, std::span<const double>(y), s);
    if (dr > (s / r) * ds * (1.0 + 1e-9)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("weak quasitriangle inequality") {
  // x in Bbar gives D^{x,r}[A,C] <= 2 D^{x,2r}[A,Bbar] + 2 D^{x,2r}[Bbar,C].
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int t = 0; t < 1200; ++t) {
    int dim = 1 + static_cast<int>(rng() % 3);
    auto a = random_set(rng, dim, 3 + rng() % 10);
    auto bbar = random_set(rng, dim, 3 + rng() % 10);
    auto c = random_set(rng, dim, 3 + rng() % 10);
    std::size_t xi = rng() % bbar.size();
    std::vector<double> x(bbar.point(xi).begin(), bbar.point(xi).end());
    double r = 0.2 + u(rng);
    double lhs = ww_distance(a, c, std::span<const double>(x), r);
    double rhs = 2.0 * ww_distance(a, bbar, std::span<const double>(x), 2.0 * r) +
                 2.0 * ww_distance(bbar, c, std::span<const double>(x), 2.0 * r);
    if (lhs > rhs * (1.0 + 1e-9) + 1e-15) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("intersect_ball basics and idempotence") {
  auto a = make_set(1, {{0.0}, {1.0}, {2.0}});
  Ball ball({0.0}, 1.0);
  auto w = intersect_ball(a, ball);
  REQUIRE(w.size() == 2);
  CHECK(w.point(0)[0] == 0.0);
  CHECK(w.point(1)[0] == 1.0);

  auto single = make_set(1, {{5.0}});
  CHECK(intersect_ball(single, ball).empty());

  auto again = intersect_ball(w, ball);
  CHECK(again.coords == w.coords);

  std::mt19937_64 rng(31);
  auto c = random_set(rng, 3, 60);
  Ball b2({0.1, 0.0, -0.2}, 0.8);
  auto once = intersect_ball(c, b2);
  auto twice = intersect_ball(once, b2);
  CHECK(once.coords == twice.coords);
}

TEST_CASE("intersect_ball captures the right area fraction") {
  // 10^3-ish uniform grid samples of the unit square; picking a ball of
  // radius 0.25 keeps about pi * 0.25^2 of them.
  PointSet ps(2);
  int n = 32;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ps.push_back({(i + 0.5) / n, (j + 0.5) / n});
  Ball ball({0.5, 0.5}, 0.25);
  auto w = intersect_ball(ps, ball);
  double frac = static_cast<double>(w.size()) / ps.size();
  double expect = 3.14159265358979 * 0.25 * 0.25;
  CHECK(std::abs(frac - expect) / expect < 0.05);
}

TEST_CASE("pointed distance basics") {
  auto a = make_set(1, {{0.0}, {0.3}, {0.7}});
  PointedSet pa{a, 0};
  CHECK(pointed_distance(pa, a, 1e-3) == Catch::Approx(1e-3));

  auto one = make_set(1, {{0.0}});
  auto other = make_set(1, {{1.0}});
  PointedSet pone{one, 0};
  CHECK(pointed_distance(pone, other, 1e-3) == 1.0);

  CHECK_THROWS_AS(pointed_distance(pone, other, 0.0), error);
  CHECK_THROWS_AS(pointed_distance(pone, other, 1.5), error);
}

TEST_CASE("pointed distance: unit segment versus doubled segment") {
  // Brute-force sweep at grid step 1e-3 is the oracle for the binary search.
  PointSet seg(1), seg2(1);
  int n = 200;
  for (int i = 0; i <= n; ++i) seg.push_back({static_cast<double>(i) / n});
  for (int i = 0; i <= 2 * n; ++i) seg2.push_back({static_cast<double>(i) / n});
  PointedSet pseg{seg, 0};
  double fast = pointed_distance(pseg, seg2, 1e-3);
  double sweep = pointed_distance_sweep(pseg, seg2, 1e-3);
  CHECK(fast == sweep);
  CHECK(fast < 1.0);
  CHECK(fast > 1e-3);
}

TEST_CASE("pointed distance grid infimum matches full sweep on random instances") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    int dim = 1 + static_cast<int>(rng() % 2);
    auto a = random_set(rng, dim, 2 + rng() % 8, 2.0);
    auto b = random_set(rng, dim, 2 + rng() % 8, 2.0);
    PointedSet pa{a, rng() % a.size()};
    double fast = pointed_distance(pa, b, 1e-2);
    double sweep = pointed_distance_sweep(pa, b, 1e-2);
    CHECK(fast == sweep);
  }
}

TEST_CASE("point set csv round trip") {
  PointSet ps(2, 0.125, "demo");
  ps.push_back({0.0, 1.0});
  ps.push_back({0.25, -0.75});
  int m = ps.add_marker("core");
  ps.set_flag(m, 1);

  std::ostringstream os;
  write_csv(ps, os);
  std::istringstream is(os.str());
  auto back = read_csv(is);

  CHECK(back.dim == 2);
  CHECK(back.resolution == 0.125);
  CHECK(back.label == "demo");
  CHECK(back.coords == ps.coords);
  REQUIRE(back.marker_names.size() == 1);
  CHECK(back.marker_names[0] == "core");
  CHECK(back.flag(0, 1));
  CHECK_FALSE(back.flag(0, 0));
}

TEST_CASE("csv without header infers dimension") {
  std::istringstream is("0.5,1.5\n-1,2\n");
  auto ps = read_csv(is);
  CHECK(ps.dim == 2);
  CHECK(ps.size() == 2);
  CHECK(ps.resolution == 0.0);
}
