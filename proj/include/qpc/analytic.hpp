#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qpc/trig_poly.hpp"

namespace qpc {

// Image of the strip boundary under w = exp(2 pi i z): Im z = +delta maps to
// the inner circle, Im z = -delta to the outer one.
struct AnnulusContour {
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  int samples_per_circle = 64;

  static AnnulusContour from_strip(const StripDomain& dom, int samples = 64);
  /// Im z on the upper (inner-circle) boundary line.
  double y_top() const;
  /// Im z on the lower (outer-circle) boundary line.
  double y_bottom() const;
  void validate() const;
};

struct ZeroCluster {
  cd location;  // z with Re z in [0, 1)
  int multiplicity = 0;
};

struct TransversalityProfile {
  double alpha = 1.0;
  double epsilon0 = 0.0;
  int max_multiplicity = 0;  // l(f); 0 when f has no torus zeros
  std::vector<std::pair<double, double>> samples;  // (eps, measure), eps ascending
  bool zero_free = false;  // degenerate profile: alpha = 1, epsilon0 = min |f| on T
};

struct PolyaResult {
  double measure = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// f(z) for |Im z| <= delta.
cd eval(const TrigPoly& f, cd z, const StripDomain& dom);

/// sup of |f| over the closed strip, attained on one of the boundary lines.
double strip_norm(const TrigPoly& f, const StripDomain& dom);

/// Number of zeros (with multiplicity) in the closed annulus, from the
/// argument increment of f along both boundary circles.
int count_zeros(const TrigPoly& f, const AnnulusContour& contour);

/// Zeros of f in the strip between the contour lines, grouped into clusters
/// of diameter at most `tol` (multiple zeros are reported once with their
/// multiplicity).
std::vector<ZeroCluster> locate_zeros(const TrigPoly& f, const AnnulusContour& contour, double tol);

/// a_j(f, z0) = f^(j)(z0) / j! from a discretized Cauchy integral around z0.
cd taylor_coeff(const TrigPoly& f, cd z0, int j, const AnnulusContour& contour);
/// Same quantity from termwise differentiation of the Fourier series.
cd taylor_coeff_termwise(const TrigPoly& f, cd z0, int j);

/// <log|f|> = integral over the torus of log|f(x)| (no 1/(2 pi) prefactor).
double mean_log(const TrigPoly& f);

/// mu{x in T : |f(x)| < eps}.
double sublevel_measure(const TrigPoly& f, double eps);

/// `count` geometrically spaced points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int count);

/// Fits mu{|f| < eps} ~ eps^alpha over `eps_grid`. Functions without torus
/// zeros yield the degenerate profile flagged by `zero_free`.
TransversalityProfile fit_transversality(const TrigPoly& f, std::span<const double> eps_grid);
TransversalityProfile fit_transversality(const TrigPoly& f);

/// Lebesgue measure of {x in R : |p(x + iy)| <= eps} for the monic polynomial
/// with ascending coefficients `coeffs` (coeffs.back() == 1), compared with
/// the bounds 2^(2-1/n) eps^(1/n) and 4 eps^(1/n).
PolyaResult polya_check(std::span<const cd> coeffs, double y, double eps);

namespace detail {
// Zeros within `delta` of the torus; retries nearby strip widths if a zero
// sits on the boundary.
std::vector<ZeroCluster> near_torus_zeros(const TrigPoly& f, double delta = 0.05, double tol = 1e-9);
// Length of {x in [a, b] : h(x) < 0} for a continuous h, scanning the sorted
// sample points and bisecting sign changes to `xtol`.
double sublevel_length(const std::function<double(double)>& h, std::vector<double> pts, double xtol);
}  // namespace detail

}  // namespace qpc
