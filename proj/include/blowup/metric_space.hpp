#ifndef BLOWUP_METRIC_SPACE_HPP
#define BLOWUP_METRIC_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "blowup/common.hpp"
#include "blowup/point_set.hpp"

namespace blowup {

/// Finite metric space: symmetric distance matrix with optional base point.
/// Stand-in for abstract pointed metric spaces (X, x).
struct MetricSpace {
  std::size_t n = 0;
  std::vector<double> d;  // n*n row-major
  std::optional<std::size_t> base;

  MetricSpace() = default;
  explicit MetricSpace(std::size_t count) : n(count), d(count * count, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return d[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    d[i * n + j] = v;
    d[j * n + i] = v;
  }

  std::size_t base_or_throw() const {
    require(base.has_value(), errc::invalid_argument, "metric space has no base point");
    return *base;
  }

  double diameter() const {
    double m = 0.0;
    for (double v : d) m = std::max(m, v);
    return m;
  }

  /// Indices inside the closed ball around `center` (ball tolerance applies).
  std::vector<std::size_t> ball(std::size_t center, double r) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
      if (at(center, i) <= r + kBallTol) out.push_back(i);
    return out;
  }

  MetricSpace restrict(const std::vector<std::size_t>& idx) const {
    MetricSpace out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) out.at(i, j) = at(idx[i], idx[j]);
    if (base) {
      for (std::size_t i = 0; i < idx.size(); ++i)
        if (idx[i] == *base) out.base = i;
    }
    return out;
  }

  /// Symmetry, zero diagonal, triangle inequality within relative slack.
  void check_valid(double slack = kMetricSlack) const {
    require(d.size() == n * n, errc::invalid_argument, "distance matrix size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      require(std::abs(at(i, i)) <= slack, errc::invalid_argument, "nonzero diagonal");
      for (std::size_t j = 0; j < n; ++j) {
        require(at(i, j) >= -slack, errc::invalid_argument, "negative distance");
        double scale = std::max(1.0, std::max(std::abs(at(i, j)), std::abs(at(j, i))));
        require(std::abs(at(i, j) - at(j, i)) <= slack * scale, errc::invalid_argument,
                "asymmetric distance matrix");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double lhs = at(i, j);
          double rhs = at(i, k) + at(k, j);
          double scale = std::max(1.0, std::max(lhs, rhs));
          require(lhs <= rhs + slack * scale, errc::invalid_argument,
                  "triangle inequality violated");
        }
    if (base) require(*base < n, errc::invalid_argument, "base index out of range");
  }

  bool triangle_ok(double slack = kMetricSlack) const {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double lhs = at(i, j), rhs = at(i, k) + at(k, j);
          double scale = std::max(1.0, std::max(lhs, rhs));
          if (lhs > rhs + slack * scale) return false;
        }
    return true;
  }
};

/// Euclidean distance matrix of a point set (optionally based).
inline MetricSpace metric_from_points(const PointSet& ps,
                                      std::optional<std::size_t> base = std::nullopt) {
  MetricSpace m(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) m.set(i, j, dist(ps.point(i), ps.point(j)));
  m.base = base;
  return m;
}

template <class Metric>
inline MetricSpace metric_from_points(const PointSet& ps, Metric&& metric,
                                      std::optional<std::size_t> base) {
  MetricSpace m(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      m.set(i, j, metric(ps.point(i), ps.point(j)));
  m.base = base;
  return m;
}

// CSV: square matrix rows, or dense lower-triangular rows (row i has i+1
// entries including the zero diagonal). Optional header `# base=<i>`.
inline void write_csv(const MetricSpace& m, std::ostream& out) {
  if (m.base) out << "# base=" << *m.base << '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) {
      if (j) out << ',';
      out << format_double(m.at(i, j));
    }
    out << '\n';
  }
}

inline void save_csv(const MetricSpace& m, const std::string& path) {
  std::ofstream f(path);
  require(f.good(), errc::parse_error, "cannot open for writing: " + path);
  write_csv(m, f);
}

inline MetricSpace read_metric_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::optional<std::size_t> base;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq != std::string::npos && tok.substr(0, eq) == "base")
          base = static_cast<std::size_t>(std::stoul(tok.substr(eq + 1)));
      }
      continue;
    }
    auto cols = detail::split(line, ',');
    std::vector<double> row;
    for (auto& c : cols) {
      auto t = detail::trim(c);
      if (t.empty()) continue;
      try {
        row.push_back(std::stod(t));
      } catch (const std::exception&) {
        fail(errc::parse_error, "bad float in matrix row: " + line);
      }
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), errc::parse_error, "empty metric CSV");
  std::size_t n = rows.size();
  MetricSpace m(n);
  bool lower = rows[0].size() == 1 && n > 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (lower)
      require(rows[i].size() == i + 1, errc::parse_error, "bad lower-triangular row length");
    else
      require(rows[i].size() == n, errc::parse_error, "bad matrix row length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.set(i, j, rows[i][j]);
  }
  m.base = base;
  m.check_valid();
  return m;
}

inline MetricSpace load_metric_csv(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), errc::parse_error, "cannot open: " + path);
  return read_metric_csv(f);
}

}  // namespace blowup

#endif  // BLOWUP_METRIC_SPACE_HPP
