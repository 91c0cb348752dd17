#ifndef BLOWUP_POINT_SET_HPP
#define BLOWUP_POINT_SET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "blowup/common.hpp"

namespace blowup {

inline double sq(double x) { return x * x; }

inline double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
  return std::sqrt(s);
}

inline double norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += sq(x);
  return std::sqrt(s);
}

/// Finite sample of a subset of R^d. `resolution` is the sample-spacing
/// guarantee: every point of the intended continuum set lies within
/// `resolution` of some sample (resolution 0 means the set is exactly the
/// finite sample). Named marker subsets tag generator-known parts.
struct PointSet {
  int dim = 0;
  double resolution = 0.0;
  std::string label;
  std::vector<double> coords;  // size() * dim, row-major

  std::vector<std::string> marker_names;
  std::vector<std::vector<std::uint8_t>> marker_flags;  // one flag row per marker

  PointSet() = default;
  explicit PointSet(int d, double h = 0.0, std::string lbl = {})
      : dim(d), resolution(h), label(std::move(lbl)) {}

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  bool empty() const { return coords.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }

  void push_back(std::span<const double> p) {
    coords.insert(coords.end(), p.begin(), p.end());
    for (auto& m : marker_flags) m.push_back(0);
  }
  void push_back(std::initializer_list<double> p) {
    push_back(std::span<const double>(p.begin(), p.size()));
  }

  int marker_id(const std::string& name) const {
    for (std::size_t i = 0; i < marker_names.size(); ++i)
      if (marker_names[i] == name) return static_cast<int>(i);
    return -1;
  }

  int add_marker(const std::string& name) {
    int id = marker_id(name);
    if (id >= 0) return id;
    marker_names.push_back(name);
    marker_flags.emplace_back(size(), 0);
    return static_cast<int>(marker_names.size()) - 1;
  }

  void set_flag(int marker, std::size_t i, bool on = true) {
    marker_flags[marker][i] = on ? 1 : 0;
  }
  bool flag(int marker, std::size_t i) const { return marker_flags[marker][i] != 0; }

  std::vector<std::size_t> marked_indices(const std::string& name) const {
    std::vector<std::size_t> out;
    int id = marker_id(name);
    if (id < 0) return out;
    for (std::size_t i = 0; i < size(); ++i)
      if (marker_flags[id][i]) out.push_back(i);
    return out;
  }

  void check_valid() const {
    require(dim > 0 || coords.empty(), errc::invalid_argument, "point set with dim 0 but points");
    require(resolution >= 0.0, errc::invalid_argument, "negative resolution");
    for (double v : coords)
      require(std::isfinite(v), errc::invalid_argument, "non-finite coordinate");
    for (auto& m : marker_flags)
      require(m.size() == size(), errc::invalid_argument, "marker length mismatch");
  }

  double diameter() const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) d2 = std::max(d2, dist2(i, j));
    return std::sqrt(d2);
  }

  double dist2(std::size_t i, std::size_t j) const {
    auto a = point(i), b = point(j);
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += sq(a[k] - b[k]);
    return s;
  }
};

/// Pointed set: a point set plus a distinguished base sample.
struct PointedSet {
  PointSet set;
  std::size_t base = 0;

  std::span<const double> base_point() const { return set.point(base); }
  void check_valid() const {
    set.check_valid();
    require(base < set.size(), errc::invalid_argument, "base index out of range");
  }
};

/// Closed ball (center, radius > 0) in R^d.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;

  Ball() = default;
  Ball(std::vector<double> c, double r) : center(std::move(c)), radius(r) {
    require(radius > 0.0, errc::nonpositive_radius, "ball radius must be positive");
  }
  bool contains(std::span<const double> p) const {
    return dist(std::span<const double>(center), p) <= radius + kBallTol;
  }
};

// ---------------------------------------------------------------------------
// Uniform-grid spatial index. Exact nearest-neighbor and range queries via
// expanding shell search; the brute-force path stays available as an oracle.
// ---------------------------------------------------------------------------
class SpatialIndex {
 public:
  SpatialIndex() = default;

  explicit SpatialIndex(const PointSet& ps) : ps_(&ps), dim_(ps.dim) {
    const std::size_t n = ps.size();
    if (n == 0) return;
    lo_.assign(dim_, kInf);
    hi_.assign(dim_, -kInf);
    for (std::size_t i = 0; i < n; ++i) {
      auto p = ps.point(i);
      for (int k = 0; k < dim_; ++k) {
        lo_[k] = std::min(lo_[k], p[k]);
        hi_[k] = std::max(hi_[k], p[k]);
      }
    }
    double extent = 0.0;
    for (int k = 0; k < dim_; ++k) extent = std::max(extent, hi_[k] - lo_[k]);
    double per_axis = std::pow(static_cast<double>(n), 1.0 / dim_);
    per_axis = std::clamp(per_axis, 1.0, 1024.0);
    cell_ = extent > 0.0 ? extent / per_axis : 1.0;
    if (cell_ <= 0.0) cell_ = 1.0;
    cells_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cells_[key(ps.point(i))].push_back(i);
  }

  const PointSet& points() const { return *ps_; }
  bool empty() const { return ps_ == nullptr || ps_->size() == 0; }

  /// Index and distance of the nearest sample to q. Exact: grows the search
  /// radius until a hit is found; a hit at distance d <= r is conclusive
  /// because every point within d was already enumerated.
  std::pair<std::size_t, double> nearest(std::span<const double> q) const {
    std::size_t best = static_cast<std::size_t>(-1);
    double best_d = kInf;
    if (empty()) return {best, best_d};
    double r = cell_;
    // Any sample is within this distance for sure.
    double d_cap = 0.0;
    for (int k = 0; k < dim_; ++k) {
      double gap = std::max({lo_[k] - q[k], q[k] - hi_[k], 0.0});
      d_cap += sq(gap + (hi_[k] - lo_[k]));
    }
    d_cap = std::sqrt(d_cap) + cell_;
    while (true) {
      for_each_within(q, r, [&](std::size_t i, double d) {
        if (d < best_d || (d == best_d && i < best)) {
          best_d = d;
          best = i;
        }
      });
      if (best_d <= r || r > d_cap) break;
      r *= 2.0;
    }
    return {best, best_d};
  }

  double nearest_dist(std::span<const double> q) const { return nearest(q).second; }

  /// Indices of samples within the closed ball B(q, r) (+ kBallTol).
  std::vector<std::size_t> within(std::span<const double> q, double r) const {
    std::vector<std::size_t> out;
    for_each_within(q, r, [&](std::size_t i, double) { out.push_back(i); });
    std::sort(out.begin(), out.end());
    return out;
  }

  template <class F>
  void for_each_within(std::span<const double> q, double r, F&& f) const {
    if (empty()) return;
    std::vector<long long> clo(dim_), chi(dim_);
    for (int k = 0; k < dim_; ++k) {
      clo[k] = std::max(cell_index(q[k] - r - kBallTol, k), cell_index(lo_[k], k));
      chi[k] = std::min(cell_index(q[k] + r + kBallTol, k), cell_index(hi_[k], k));
      if (clo[k] > chi[k]) return;
    }
    std::vector<long long> cur = clo;
    while (true) {
      auto it = cells_.find(pack(cur));
      if (it != cells_.end()) {
        for (std::size_t i : it->second) {
          double d = dist(q, ps_->point(i));
          if (d <= r + kBallTol) f(i, d);
        }
      }
      int k = 0;
      for (; k < dim_; ++k) {
        if (++cur[k] <= chi[k]) break;
        cur[k] = clo[k];
      }
      if (k == dim_) break;
    }
  }

 private:
  using Key = std::uint64_t;

  long long cell_index(double x, int k) const {
    return static_cast<long long>(std::floor((x - lo_[k]) / cell_));
  }

  std::vector<long long> cell_of(std::span<const double> q) const {
    std::vector<long long> c(dim_);
    for (int k = 0; k < dim_; ++k) c[k] = cell_index(q[k], k);
    return c;
  }

  Key key(std::span<const double> p) const { return pack(cell_of(p)); }

  static Key pack(const std::vector<long long>& c) {
    // FNV-style mix; collisions only cost a longer bucket.
    Key h = 1469598103934665603ull;
    for (long long v : c) {
      h ^= static_cast<Key>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }

  const PointSet* ps_ = nullptr;
  int dim_ = 0;
  double cell_ = 1.0;
  std::vector<double> lo_, hi_;
  std::unordered_map<Key, std::vector<std::size_t>> cells_;
};

// ---------------------------------------------------------------------------
// CSV serialization. One point per row, d float columns, then one 0/1 column
// per marker. Optional header row:
//   # dim=<d> resolution=<h> label=<s> markers=<a,b,...>
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_csv(const PointSet& ps, std::ostream& out) {
  out << "# dim=" << ps.dim << " resolution=" << format_double(ps.resolution);
  if (!ps.label.empty()) out << " label=" << ps.label;
  if (!ps.marker_names.empty()) {
    out << " markers=";
    for (std::size_t i = 0; i < ps.marker_names.size(); ++i) {
      if (i) out << ',';
      out << ps.marker_names[i];
    }
  }
  out << '\n';
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps.point(i);
    for (int k = 0; k < ps.dim; ++k) {
      if (k) out << ',';
      out << format_double(p[k]);
    }
    for (std::size_t m = 0; m < ps.marker_flags.size(); ++m)
      out << ',' << (ps.marker_flags[m][i] ? 1 : 0);
    out << '\n';
  }
}

inline void save_csv(const PointSet& ps, const std::string& path) {
  std::ofstream f(path);
  require(f.good(), errc::parse_error, "cannot open for writing: " + path);
  write_csv(ps, f);
}

namespace detail {
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace detail

inline PointSet read_csv(std::istream& in) {
  PointSet ps;
  int declared_dim = -1;
  std::string line;
  bool first = true;
  std::vector<std::string> marker_names;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!first) continue;
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "dim") declared_dim = std::stoi(v);
        else if (k == "resolution") ps.resolution = std::stod(v);
        else if (k == "label") ps.label = v;
        else if (k == "markers") marker_names = detail::split(v, ',');
      }
      first = false;
      continue;
    }
    first = false;
    auto cols = detail::split(line, ',');
    if (declared_dim < 0) declared_dim = static_cast<int>(cols.size());
    if (ps.dim == 0) {
      ps.dim = declared_dim;
      for (std::size_t m = declared_dim; m < cols.size(); ++m) {
        std::string name = m - declared_dim < marker_names.size()
                               ? marker_names[m - declared_dim]
                               : "marker" + std::to_string(m - declared_dim + 1);
        ps.add_marker(name);
      }
    }
    require(static_cast<int>(cols.size()) == ps.dim + static_cast<int>(ps.marker_flags.size()),
            errc::parse_error, "row has wrong column count: " + line);
    std::vector<double> p(ps.dim);
    try {
      for (int k = 0; k < ps.dim; ++k) p[k] = std::stod(cols[k]);
    } catch (const std::exception&) {
      fail(errc::parse_error, "bad float in row: " + line);
    }
    std::size_t idx = ps.size();
    ps.push_back(std::span<const double>(p));
    for (std::size_t m = 0; m < ps.marker_flags.size(); ++m)
      ps.set_flag(static_cast<int>(m), idx, detail::trim(cols[ps.dim + m]) == "1");
  }
  ps.check_valid();
  return ps;
}

inline PointSet load_csv(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), errc::parse_error, "cannot open: " + path);
  return read_csv(f);
}

}  // namespace blowup

#endif  // BLOWUP_POINT_SET_HPP
