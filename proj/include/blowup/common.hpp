#ifndef BLOWUP_COMMON_HPP
#define BLOWUP_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace blowup {

// Closed-ball membership uses |p - x| <= r + kBallTol to absorb float edge
// effects. Disjointness checks subtract the same tolerance.
inline constexpr double kBallTol = 1e-12;

// Relative slack used by metric validity checks (symmetry, triangle
// inequality, isometry verification).
inline constexpr double kMetricSlack = 1e-9;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class errc {
  empty_second_argument,
  empty_set,
  empty_input,
  empty_subset,
  nonpositive_radius,
  invalid_grid_step,
  invalid_correspondence,
  too_large_for_exhaustive,
  base_not_preserved,
  not_isometric_embedding,
  radius_exceeds_diameter,
  point_not_in_set,
  degenerate_window,
  not_flat_enough,
  bad_range,
  divergent_radii_rule,
  expansivity_signature_absent,
  resolution_exhausted,
  bad_axes,
  parse_error,
  invalid_argument,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_second_argument: return "EmptySecondArgument";
    case errc::empty_set: return "EmptySet";
    case errc::empty_input: return "EmptyInput";
    case errc::empty_subset: return "EmptySubset";
    case errc::nonpositive_radius: return "NonpositiveRadius";
    case errc::invalid_grid_step: return "InvalidGridStep";
    case errc::invalid_correspondence: return "InvalidCorrespondence";
    case errc::too_large_for_exhaustive: return "TooLargeForExhaustive";
    case errc::base_not_preserved: return "BaseNotPreserved";
    case errc::not_isometric_embedding: return "NotIsometricEmbedding";
    case errc::radius_exceeds_diameter: return "RadiusExceedsDiameter";
    case errc::point_not_in_set: return "PointNotInSet";
    case errc::degenerate_window: return "DegenerateWindow";
    case errc::not_flat_enough: return "NotFlatEnough";
    case errc::bad_range: return "BadRange";
    case errc::divergent_radii_rule: return "DivergentRadiiRule";
    case errc::expansivity_signature_absent: return "ExpansivitySignatureAbsent";
    case errc::resolution_exhausted: return "ResolutionExhausted";
    case errc::bad_axes: return "BadAxes";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace blowup

#endif  // BLOWUP_COMMON_HPP
