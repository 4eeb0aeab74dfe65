#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qpc/cocycle.hpp"

namespace qpc {

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementation.
double uniform01(std::mt19937_64& rng);

/// n = ceil((C kappa^-2 q)^eta), rejected above `cap`.
struct NPolicy {
  double C = 10.0;
  double eta = 1.1;
  std::int64_t cap = 1'000'000;
  std::int64_t n_for(double kappa, std::int64_t q) const;
};

struct DeviationReport {
  std::int64_t q = 0;
  double kappa = 0.0;
  std::int64_t n = 0;
  double empirical_measure = 0.0;  // fraction of samples with |u_n - L_n| > kappa
  bool below_resolution = false;   // no deviating sample: measure < 1/samples
  int samples = 0;
  double L_n = 0.0;                // sample mean of u_n = (1/n) log ||D_n||
  double fitted_c = 0.0;
};

struct LdtConfig {
  double kappa = 0.1;
  std::vector<std::int64_t> q_list;
  NPolicy policy;
  int phases = 1000;
  std::uint64_t seed = 1;
  std::int64_t q_min = 0;  // reports below q_min are kept but left out of the fit
};

struct LdtResult {
  std::vector<DeviationReport> reports;
  double fitted_c = 0.0;
  std::vector<std::int64_t> dropped_q;  // n above the policy cap
  std::uint64_t seed = 0;
};

/// Fraction of `u` with |u - center| > kappa.
double deviation_measure(const std::vector<double>& u, double center, double kappa);

/// Samples u_n at `phases` shifted-grid points per q (one orbit per phase,
/// shared across q) and fits c in measure ~ exp(-c kappa q) by least squares
/// through the origin; below-resolution cells enter the fit at 1/samples.
LdtResult ldt_experiment(const AnalyticCocycle& coc, const LdtConfig& cfg);

struct UniformityProbe {
  double gamma = 0.0;
  double fitted_c = 0.0;
  std::vector<double> distances;             // certified ||D~ - D|| bounds
  std::vector<LdtResult> results;            // one per perturbation
  bool common_c_holds = true;                // measure <= exp(-c kappa q) everywhere
};

/// Repeats the experiment at `count` random perturbations of strip distance
/// at most gamma and checks the measures against exp(-c kappa q).
UniformityProbe uniformity_probe(const AnalyticCocycle& coc, const LdtConfig& cfg, double fitted_c, int count = 5,
                                 double gamma = 1e-2);

struct BirkhoffRow {
  std::int64_t n = 0;
  double sup_error = 0.0;       // sup over phases of |S_n f / n - <log|f|>|
  double sup_error_free = 0.0;  // same for the zero-free factor
  double max_zero_term = 0.0;   // sup of N n^(-1/r) log^2 n |min_j log|f(x + j beta)||
  double free_term = 0.0;       // C4 / n
  double max_ratio = 0.0;       // sup of error / bound (<= 1 when the bound holds)
  bool calibration = false;
};

struct BirkhoffTable {
  std::vector<BirkhoffRow> rows;
  double C3 = 0.0;
  double C4 = 0.0;
  double r = 2.0;
  int zero_count = 0;
  bool zero_free = false;
  bool holds = false;  // bound verified on the non-calibration rows
};

/// Birkhoff-sum error of log|f| along the orbit; C3 and C4 are fitted on the
/// smaller half of n_list and tested on the larger half.
BirkhoffTable birkhoff_error(const TrigPoly& f, const Frequency& freq, std::vector<std::int64_t> n_list,
                             double r = 2.0, int grid = 256);

struct TrigProductResult {
  double sum = 0.0;           // k0 excluded
  double sum_with_k0 = 0.0;
  std::int64_t k0 = 0;
  std::int64_t q = 0;
  double bound = 0.0;         // C5 log q
};

/// sum over 1 <= k <= q, k != k0 of log|e(x + k beta) - e(x0)| with q the
/// denominator of the convergent with index `q_index` and k0 the index of
/// the closest return.
TrigProductResult trig_product(double x, double x0, const Frequency& freq, std::size_t q_index, double C5 = 0.0);

/// max |sum| / log q over denominators 2 <= q <= q_max and `samples` seeded
/// random (x, x0) pairs.
double fit_trig_constant(const Frequency& freq, std::int64_t q_max, int samples, std::uint64_t seed);

struct LEConfig {
  std::vector<std::int64_t> schedule{5000, 10000};
  int grid = 128;
};

struct ScanPoint {
  double t = 0.0;
  double L = 0.0;
  double L_prime = 0.0;
  double std_error = 0.0;
  bool refinement = false;  // inserted midpoint
};

struct JumpFlag {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double delta = 0.0;   // L' difference over the original step
  double sigma = 0.0;   // combined standard error
  bool persistent = false;
};

struct ContinuityScan {
  std::vector<ScanPoint> points;   // path plus refinement midpoints, ordered
  std::vector<JumpFlag> candidates;
  std::vector<JumpFlag> jumps;     // persistent candidates
  double modulus = 0.0;            // max |dL'| / dt over adjacent points
};

using CocycleFamily = std::function<AnalyticCocycle(double)>;

/// (L, L') along an ordered path. A pair is a candidate when |dL'| exceeds
/// 5 combined standard errors; its midpoint is then computed and the flag
/// persists only if one half step still carries more than 5 standard errors
/// and at least 3/4 of the original difference while the other half carries
/// at most 1/4 of it.
ContinuityScan continuity_scan(const CocycleFamily& family, const std::vector<double>& path, const LEConfig& le);

struct FrequencyRow {
  std::int64_t p = 0;
  std::int64_t q = 0;
  double L = 0.0;
  double L_prime = 0.0;
  double gap = 0.0;        // |L(p/q) - L(beta)|
  double gap_prime = 0.0;
};

struct FrequencyScan {
  std::vector<FrequencyRow> rows;
  double target_L = 0.0;
  double target_L_prime = 0.0;
  double target_std_error = 0.0;
  bool guaranteed = true;
  std::string label;  // "GUARANTEED" or "NON-GUARANTEED"
};

using FrequencyFamily = std::function<AnalyticCocycle(const Frequency&)>;

/// Rational exponents at the given approximants against the irrational
/// target. Singular determinants (zeros in the strip) are labelled
/// NON-GUARANTEED.
FrequencyScan frequency_scan(const FrequencyFamily& family, const Frequency& target,
                             const std::vector<std::pair<std::int64_t, std::int64_t>>& approximants,
                             const LEConfig& le, int rational_grid = 200);

}  // namespace qpc
