#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qpc/arithmetic.hpp"
#include "qpc/trig_poly.hpp"

namespace qpc {

// Row-major [[a, b], [c, d]].
struct Mat2 {
  cd a, b, c, d;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
cd det(const Mat2& m);
/// Largest singular value, closed form.
double spectral_norm(const Mat2& m);
double spectral_radius(const Mat2& m);
Mat2 inverse(const Mat2& m);

/// Matrix-valued trigonometric polynomial over the rotation by beta.
class AnalyticCocycle {
 public:
  AnalyticCocycle(Frequency freq, std::array<TrigPoly, 4> entries, StripDomain dom = StripDomain(0.1));

  const Frequency& freq() const { return freq_; }
  const std::array<TrigPoly, 4>& entries() const { return entries_; }
  /// Symbolic determinant entries[0]*entries[3] - entries[1]*entries[2].
  const TrigPoly& det() const { return det_; }
  const StripDomain& dom() const { return dom_; }

  Mat2 at(double x) const;
  /// Evaluation at w = exp(2 pi i x) on the unit circle.
  Mat2 at_w(cd w) const;

  AnalyticCocycle with_frequency(Frequency f) const { return {std::move(f), entries_, dom_}; }
  /// Upper bound for sup over the strip of the operator norm of (other - this).
  double distance(const AnalyticCocycle& other) const;

 private:
  struct Compiled {
    int lo = 0;
    std::vector<cd> c;
  };

  Frequency freq_;
  std::array<TrigPoly, 4> entries_;
  TrigPoly det_;
  StripDomain dom_;
  std::array<Compiled, 4> fast_;
  int reach_ = 0;  // max |k| over all entries
};

struct HarperParams {
  double lambda1 = 0.0;
  double lambda2 = 1.0;
  double lambda3 = 0.0;
  double E = 0.0;
};

struct JacobiCocycle {
  AnalyticCocycle A;
  /// B = A / c; kept symbolic, never divided pointwise.
  TrigPoly divisor;
};

/// A = [[E - v(x), -conj(c)(x - beta)], [c(x), 0]].
JacobiCocycle build_jacobi(const TrigPoly& v, const TrigPoly& c, double E, const Frequency& freq,
                           StripDomain dom = StripDomain(0.1));
/// c(x) = l3 e(-(x + beta/2)) + l2 + l1 e(x + beta/2) with e(t) = exp(2 pi i t).
TrigPoly harper_c(const HarperParams& p, double beta);
AnalyticCocycle build_harper(const HarperParams& p, const Frequency& freq);
/// v = 2 lambda cos(2 pi x), c = 1.
AnalyticCocycle build_almost_mathieu(double lambda, double E, const Frequency& freq);

struct IterateResult {
  double lognorm = 0.0;     // log ||D_n(x)||
  Mat2 frame{};             // D_n(x) / ||D_n(x)||
  double log_abs_det = 0.0; // sum of log |det D(x + j beta)| over the factors
  double phase = 0.0;       // phase actually used (after any singular-hit nudge)
  int perturbations = 0;
};

IterateResult iterate(const AnalyticCocycle& coc, double x, std::int64_t n);

/// A pointwise matrix function of the phase, for cocycles that are not
/// trigonometric polynomials (e.g. an explicitly renormalized one).
using MatrixField = std::function<Mat2(double)>;

struct LEEstimate {
  double value = 0.0;  // nats per iterate
  std::int64_t n = 0;
  int grid = 0;
  double std_error = 0.0;
  double cutoff_A = 1.0;
  std::vector<std::pair<std::int64_t, double>> history;  // (n_k, L_{n_k})
  int singular_hits = 0;
};

/// log ||D_n(x)|| for every phase and every n in `ns` (ascending), one orbit
/// per phase. Row-major: value(i, k) = lognorm[i * ns.size() + k].
struct PhaseTable {
  std::vector<double> phases;
  std::vector<std::int64_t> ns;
  std::vector<double> lognorm;
  int singular_hits = 0;
  double value(std::size_t i, std::size_t k) const { return lognorm[i * ns.size() + k]; }
};

PhaseTable lognorm_table(const AnalyticCocycle& coc, std::vector<double> phases, std::vector<std::int64_t> ns);
PhaseTable lognorm_table(const MatrixField& field, const Frequency& freq, std::vector<double> phases,
                         std::vector<std::int64_t> ns);

/// Phases (m + 1/2) / grid.
std::vector<double> midpoint_grid(int grid);

/// (1/n) average of log ||D_n(x)|| over the midpoint grid.
LEEstimate L_n(const AnalyticCocycle& coc, std::int64_t n, int grid);

/// Records L_{n_k} along the schedule. With two or more entries the value is
/// the increment estimate (I_K - I_{K-1}) / (n_K - n_{K-1}) of the averaged
/// log-norms I_k, which cancels the O(1/n) boundary term of L_n; the error
/// bar adds the last step |L_{n_K} - L_{n_{K-1}}| to the sampling error.
LEEstimate lyapunov(const AnalyticCocycle& coc, const std::vector<std::int64_t>& schedule, int grid = 64);
LEEstimate lyapunov(const MatrixField& field, const Frequency& freq, const std::vector<std::int64_t>& schedule,
                    int grid = 64);

/// L' = L - mean_log(det) / 2.
double renorm_le(const AnalyticCocycle& coc, const LEEstimate& est);

struct RationalLE {
  double L = 0.0;
  double L_prime = 0.0;
  std::int64_t q = 0;
};

/// Exact-period exponent (1/q) average of log rho(D_q(x)) for beta = p/q,
/// sampled at `grid` midpoints of one period [0, 1/q).
RationalLE rational_le(const AnalyticCocycle& coc, int grid);

/// sum over |j| < R of (R - |j|) / R^2 * v(x + j beta).
double fejer_average(const std::function<double(double)>& v, double x, int R, const Frequency& freq);

/// max(1, -mean_log(det)).
double default_cutoff(const AnalyticCocycle& coc);
/// max((1/n) log ||D_n(x)||, -A).
double cutoff_un(const AnalyticCocycle& coc, double x, std::int64_t n, double A);

}  // namespace qpc
