#pragma once

#include "fracstab/core_math.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace fracstab {

using cplx = std::complex<double>;

struct TwoTermFamily {
  FractionalOrderPair orders;
  double a = 0.0;
};

struct OneTermFamily {
  double alpha = 0.5;
  int order = 1;
};

using Family = std::variant<TwoTermFamily, OneTermFamily>;

/// Throws std::invalid_argument when the family parameters are out of range.
void validate(const Family& family);

/// Winding number that marks stability: 2 for the two-term family, N otherwise.
int stable_winding(const Family& family);

/// Image of e^{i theta} under z^2 (1 - 1/z)^alpha + a z (1 - 1/z)^beta + 1.
cplx gamma_locus(const FractionalOrderPair& orders, double a, double theta);

/// Image of e^{i theta} under z^N (1 - 1/z)^alpha + 1.
cplx capital_gamma_locus(double alpha, int order, double theta);

cplx locus_point(const Family& family, double theta);

struct BoundaryCurve {
  std::vector<double> thetas;
  std::vector<cplx> points;
  /// Set for sampled loci; lets winding_number refine between samples.
  std::optional<Family> family;

  /// Closed polyline through the given points (the first point is appended
  /// again at the end if needed). Thetas are the sample indices scaled to [0, 2pi].
  static BoundaryCurve polygon(std::vector<cplx> pts);
};

/// Uniform grid of `resolution` intervals on [0, 2pi], refined where consecutive
/// points lie farther apart than diameter / resolution. The upper half is
/// sampled and the lower half mirrored, so the curve is exactly conjugate
/// symmetric and closed. Throws std::invalid_argument for resolution < 1024.
BoundaryCurve sample_boundary(const Family& family, std::size_t resolution = 4096);

struct WindingResult {
  int winding = 0;
  double min_distance = 0.0;
  /// min_distance fell below the boundary margin; winding is then unreliable.
  bool boundary = false;
};

/// Winding number of curve - point around 0 and the polyline distance to the
/// curve. Angle increments above pi/2 are re-evaluated by bisecting theta on
/// the exact locus when the curve carries its family.
WindingResult winding_number(const BoundaryCurve& curve, cplx point, double boundary_margin = 1e-3);

enum class VerdictKind { Stable, Unstable, Boundary };

const char* to_string(VerdictKind kind);

struct StabilityVerdict {
  VerdictKind kind = VerdictKind::Unstable;
  int winding = 0;
  double min_distance = 0.0;
};

struct ClassifyOptions {
  double boundary_margin = 1e-3;
  std::size_t resolution = 4096;
};

/// Argument principle on the characteristic function: the number of roots with
/// |z| > 1 is (degree at infinity) - winding, so the parameter is stable exactly
/// when the winding equals 2 (two-term) or N (one-term).
StabilityVerdict classify_point(const Family& family, cplx param, const ClassifyOptions& options = {});

/// Same, against a curve sampled once by the caller.
StabilityVerdict classify_point(const BoundaryCurve& curve, int target_winding, cplx param,
                                double boundary_margin = 1e-3);

enum class Regime { PreA1, AtA1, Between, AtA2, PostA2 };

const char* to_string(Regime regime);

struct BifurcationReport {
  double a1 = 0.0;
  double a2 = 0.0;

  Regime regime_of(double a, double tol = 1e-9) const noexcept;
};

/// a1 = 2^(alpha - beta), a2 = a1 (alpha - 4) / (beta - 2).
BifurcationReport bifurcation_values(const FractionalOrderPair& orders);

class RootNotFound : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RealInterval {
  double left = 0.0;
  double right = 0.0;
  /// Root of the imaginary part on (0, pi) that produced `left`.
  double theta = 0.0;
  /// Sign changes of the imaginary part seen on the scan grid.
  int sign_changes = 0;
};

/// Stable real parameters b for the two-term family, or nullopt when a >= a2.
/// The left end is the real part at the root of Im gamma on (0, pi); with
/// several roots the one with the smallest real part is used. The right end is
/// 1 below a1 and 1 + 2^alpha - a 2^beta from a1 on.
/// Throws std::invalid_argument for a <= 0 and RootNotFound when a < a2 but
/// the imaginary part has no sign change.
std::optional<RealInterval> real_interval(const FractionalOrderPair& orders, double a);

/// (1 - 2^alpha, 1) for the first-order one-term family, 0 < alpha <= 1.
std::pair<double, double> one_term_real_interval(double alpha);

struct Box {
  double x0, x1, y0, y1;
};

/// Bounding box of the curve points, padded by margin times the larger side.
Box bounding_box(const BoundaryCurve& curve, double margin = 0.0);

/// Winding number at every cell centre of an nx by ny grid over the box,
/// row-major with y ascending. Cells within the boundary margin get INT_MIN.
/// With a zero margin the polyline is used as is (one crossing sweep per row),
/// so cells closer to the locus than its sampling error may differ from
/// winding_number.
std::vector<int> winding_grid(const BoundaryCurve& curve, const Box& box, std::size_t nx, std::size_t ny,
                              unsigned jobs = 1, double boundary_margin = 0.0);

struct Face {
  int winding = 0;
  std::size_t cells = 0;
  /// Touches the raster border, i.e. belongs to the unbounded exterior.
  bool unbounded = false;
  cplx sample;
};

struct FaceCensus {
  Box box{};
  std::size_t nx = 0, ny = 0;
  std::vector<Face> faces;
  /// Face index per cell, -1 on cells the curve passes through.
  std::vector<int> cell_face;

  std::size_t count_winding(int w) const;
  std::size_t bounded_other(int target) const;
};

/// Connected components of the plane minus the curve on a grid over the
/// curve's bounding box (padded so that the exterior reaches the border).
/// Cells the curve crosses act as walls; faces are 4-connected.
FaceCensus face_census(const BoundaryCurve& curve, std::size_t grid = 600, double margin = 0.05);

}  // namespace fracstab
