#include "qpc/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qpc/analytic.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"

namespace qpc {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::int64_t NPolicy::n_for(double kappa, std::int64_t q) const {
  return static_cast<std::int64_t>(std::ceil(std::pow(C * static_cast<double>(q) / (kappa * kappa), eta)));
}

double deviation_measure(const std::vector<double>& u, double center, double kappa) {
  if (u.empty()) return 0.0;
  std::size_t hits = 0;
  for (double v : u)
    if (std::abs(v - center) > kappa) ++hits;
  return static_cast<double>(hits) / static_cast<double>(u.size());
}

LdtResult ldt_experiment(const AnalyticCocycle& coc, const LdtConfig& cfg) {
  if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0)) throw NumericalError(ErrorKind::InvalidArgument, "kappa must lie in (0,1)");
  if (cfg.phases < 1000) throw NumericalError(ErrorKind::InvalidArgument, "at least 1000 phase samples are required");
  if (coc.det().is_zero()) throw NumericalError(ErrorKind::IdenticallyZeroDet, "det D vanishes identically");
  const auto dens = coc.freq().denominators();
  for (std::size_t i = 0; i < cfg.q_list.size(); ++i) {
    if (std::find(dens.begin(), dens.end(), cfg.q_list[i]) == dens.end())
      throw NumericalError(ErrorKind::InvalidArgument, "q = " + std::to_string(cfg.q_list[i]) + " is not a stored denominator");
    if (i > 0 && cfg.q_list[i] <= cfg.q_list[i - 1])
      throw NumericalError(ErrorKind::InvalidArgument, "q_list must increase");
  }

  LdtResult out;
  out.seed = cfg.seed;
  std::vector<std::int64_t> qs, ns;
  for (std::int64_t q : cfg.q_list) {
    const std::int64_t n = cfg.policy.n_for(cfg.kappa, q);
    if (n > cfg.policy.cap) {
      out.dropped_q.push_back(q);
      continue;
    }
    qs.push_back(q);
    ns.push_back(n);
  }
  if (qs.size() < 4) throw NumericalError(ErrorKind::InsufficientQ, "need at least 4 usable denominators");
  for (std::size_t k = 1; k < ns.size(); ++k)
    if (ns[k] <= ns[k - 1]) throw NumericalError(ErrorKind::InvalidArgument, "n policy must increase with q");

  std::mt19937_64 rng(cfg.seed);
  const double offset = uniform01(rng);
  std::vector<double> phases(static_cast<std::size_t>(cfg.phases));
  for (int m = 0; m < cfg.phases; ++m) phases[static_cast<std::size_t>(m)] = (m + offset) / cfg.phases;
  const PhaseTable table = lognorm_table(coc, phases, ns);

  const double resolution = 1.0 / cfg.phases;
  double sxy = 0.0, sxx = 0.0;
  std::vector<double> u(phases.size());
  for (std::size_t k = 0; k < qs.size(); ++k) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = table.value(i, k) / static_cast<double>(ns[k]);
    double mean = 0.0;
    for (double v : u) mean += v;
    mean /= static_cast<double>(u.size());
    DeviationReport rep;
    rep.q = qs[k];
    rep.kappa = cfg.kappa;
    rep.n = ns[k];
    rep.samples = cfg.phases;
    rep.L_n = mean;
    rep.empirical_measure = deviation_measure(u, mean, cfg.kappa);
    rep.below_resolution = rep.empirical_measure == 0.0;
    out.reports.push_back(rep);
    if (qs[k] >= cfg.q_min) {
      const double x = cfg.kappa * static_cast<double>(qs[k]);
      const double y = -std::log(std::max(rep.empirical_measure, resolution));
      sxy += x * y;
      sxx += x * x;
    }
  }
  if (sxx == 0.0) throw NumericalError(ErrorKind::InsufficientQ, "no denominators at or above q_min");
  out.fitted_c = sxy / sxx;
  for (auto& r : out.reports) r.fitted_c = out.fitted_c;
  return out;
}

UniformityProbe uniformity_probe(const AnalyticCocycle& coc, const LdtConfig& cfg, double fitted_c, int count,
                                 double gamma) {
  if (!(gamma > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "gamma must be positive");
  UniformityProbe probe;
  probe.gamma = gamma;
  probe.fitted_c = fitted_c;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < count; ++i) {
    std::array<TrigPoly, 4> delta;
    for (auto& e : delta) {
      std::vector<cd> c(3);
      for (auto& v : c) {
        const double re = 2.0 * uniform01(rng) - 1.0, im = 2.0 * uniform01(rng) - 1.0;
        v = cd(re, im);
      }
      e = TrigPoly::from_dense(-1, c);
    }
    double raw = 0.0;
    for (const auto& e : delta) raw += e.coefficient_bound(coc.dom().delta());
    const double scale = gamma * (0.5 + 0.5 * uniform01(rng)) / raw;
    std::array<TrigPoly, 4> entries = coc.entries();
    for (std::size_t k = 0; k < 4; ++k) entries[k] += scale * delta[k];
    const AnalyticCocycle pert(coc.freq(), entries, coc.dom());
    probe.distances.push_back(coc.distance(pert));
    LdtResult res = ldt_experiment(pert, cfg);
    for (const auto& r : res.reports)
      if (r.empirical_measure > std::exp(-fitted_c * r.kappa * static_cast<double>(r.q))) probe.common_c_holds = false;
    probe.results.push_back(std::move(res));
  }
  return probe;
}

namespace {

// Compensated summation; long orbit sums otherwise carry O(n eps) drift.
struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

BirkhoffTable birkhoff_error(const TrigPoly& f, const Frequency& freq, std::vector<std::int64_t> n_list, double r,
                             int grid) {
  if (f.is_zero()) throw NumericalError(ErrorKind::IdenticallyZero, "f vanishes identically");
  if (n_list.size() < 2) throw NumericalError(ErrorKind::InvalidArgument, "need at least two n values");
  if (grid < 1) throw NumericalError(ErrorKind::InvalidArgument, "grid must be positive");
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  if (n_list.front() < 1) throw NumericalError(ErrorKind::InvalidArgument, "n must be >= 1");

  const auto zeros = detail::near_torus_zeros(f);
  std::vector<std::pair<cd, int>> roots;
  int N = 0;
  double shift = 0.0;
  for (const auto& z : zeros) {
    const cd root = std::exp(cd(0.0, kTwoPi) * z.location);
    roots.emplace_back(root, z.multiplicity);
    N += z.multiplicity;
    shift += z.multiplicity * std::log(std::max(1.0, std::abs(root)));
  }
  const double mean_f = mean_log(f);
  const double mean_g = mean_f - shift;

  const std::size_t K = n_list.size(), P = static_cast<std::size_t>(grid);
  std::vector<double> err_f(P * K), err_g(P * K), minlog(P * K), roundoff(P * K);
  // C4 is calibrated from the largest remainder |S_m g - m <log|g|>| over every
  // m up to the last calibration n, not only at the listed n.
  const std::size_t calib = K / 2;
  const std::int64_t calib_n = calib > 0 ? n_list[calib - 1] : 0;
  std::vector<double> remainder_g(P, 0.0);
  const cd rot = std::polar(1.0, kTwoPi * freq.beta());
  parallel_for(P, [&](std::size_t i) {
    const double x = (static_cast<double>(i) + 0.5) / grid;
    Neumaier sf, sg;
    double mn = INFINITY, abs_sum = 0.0;
    std::size_t k = 0;
    cd w;
    for (std::int64_t j = 1; j <= n_list.back(); ++j) {
      if (j == 1 || (j & 255) == 0)
        w = std::polar(1.0, kTwoPi * freq.orbit_phase(x, j));
      else {
        w *= rot;
        w *= 1.5 - 0.5 * std::norm(w);
      }
      const double lf = std::log(std::abs(f.at_w(w)));
      double lg = lf;
      for (const auto& [root, m] : roots) lg -= m * std::log(std::abs(w - root));
      sf.add(lf);
      sg.add(lg);
      abs_sum += std::abs(lf);
      mn = std::min(mn, lf);
      if (j <= calib_n) remainder_g[i] = std::max(remainder_g[i], std::abs(sg.value() - static_cast<double>(j) * mean_g));
      if (j == n_list[k]) {
        const double n = static_cast<double>(j);
        err_f[i * K + k] = std::abs(sf.value() / n - mean_f);
        err_g[i * K + k] = std::abs(sg.value() / n - mean_g);
        minlog[i * K + k] = mn;
        // a few ulps per evaluated term survive the compensated sum
        roundoff[i * K + k] = 8.0 * std::numeric_limits<double>::epsilon() * (abs_sum / n + std::abs(mean_f) + 1.0);
        ++k;
      }
    }
  });

  BirkhoffTable t;
  t.r = r;
  t.zero_count = N;
  t.zero_free = N == 0;
  auto zero_term = [&](std::size_t i, std::size_t k) {
    const double n = static_cast<double>(n_list[k]);
    const double lg = std::log(n);
    return N * std::pow(n, -1.0 / r) * lg * lg * std::abs(minlog[i * K + k]);
  };
  for (std::size_t i = 0; i < P; ++i) t.C4 = std::max(t.C4, remainder_g[i]);
  if (N > 0)
    for (std::size_t k = 0; k < calib; ++k)
      for (std::size_t i = 0; i < P; ++i) {
        const double excess = err_f[i * K + k] - t.C4 / static_cast<double>(n_list[k]) - roundoff[i * K + k];
        const double z = zero_term(i, k);
        if (excess > 0.0 && z > 0.0) t.C3 = std::max(t.C3, excess / z);
      }

  t.holds = true;
  for (std::size_t k = 0; k < K; ++k) {
    BirkhoffRow row;
    row.n = n_list[k];
    row.calibration = k < calib;
    row.free_term = t.C4 / static_cast<double>(row.n);
    for (std::size_t i = 0; i < P; ++i) {
      row.sup_error = std::max(row.sup_error, err_f[i * K + k]);
      row.sup_error_free = std::max(row.sup_error_free, err_g[i * K + k]);
      const double z = zero_term(i, k);
      row.max_zero_term = std::max(row.max_zero_term, z);
      const double bound = t.C3 * z + row.free_term + roundoff[i * K + k];
      const double e = err_f[i * K + k];
      const double ratio = bound > 0.0 ? e / bound : (e > 0.0 ? INFINITY : 0.0);
      row.max_ratio = std::max(row.max_ratio, ratio);
    }
    if (!row.calibration && row.max_ratio > 1.0) t.holds = false;
    t.rows.push_back(row);
  }
  return t;
}

TrigProductResult trig_product(double x, double x0, const Frequency& freq, std::size_t q_index, double C5) {
  TrigProductResult res;
  res.q = freq.convergents().at(q_index).q;
  const long double base = static_cast<long double>(x) - static_cast<long double>(x0);
  std::vector<double> terms(static_cast<std::size_t>(res.q));
  double smallest = INFINITY;
  for (std::int64_t k = 1; k <= res.q; ++k) {
    long double t = base + freq.frac_multiple(k);
    t -= std::floor(t);
    const double s = std::abs(std::sin(std::numbers::pi * static_cast<double>(t)));
    terms[static_cast<std::size_t>(k - 1)] = std::log(2.0 * s);
    if (s < smallest) {
      smallest = s;
      res.k0 = k;
    }
  }
  for (std::int64_t k = 1; k <= res.q; ++k) {
    const double v = terms[static_cast<std::size_t>(k - 1)];
    res.sum_with_k0 += v;
    if (k != res.k0) res.sum += v;
  }
  res.bound = C5 * std::log(static_cast<double>(res.q));
  return res;
}

double fit_trig_constant(const Frequency& freq, std::int64_t q_max, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double c5 = 0.0;
  std::int64_t last = 0;
  bool any = false;
  for (std::size_t i = 0; i < freq.convergents().size(); ++i) {
    const std::int64_t q = freq.convergents()[i].q;
    if (q < 2 || q > q_max || q == last) continue;
    last = q;
    any = true;
    for (int s = 0; s < samples; ++s) {
      const double x = uniform01(rng), x0 = uniform01(rng);
      c5 = std::max(c5, std::abs(trig_product(x, x0, freq, i).sum) / std::log(static_cast<double>(q)));
    }
  }
  if (!any) throw NumericalError(ErrorKind::InsufficientQ, "no denominators in [2, q_max]");
  return c5;
}

ContinuityScan continuity_scan(const CocycleFamily& family, const std::vector<double>& path, const LEConfig& le) {
  if (path.size() < 2) throw NumericalError(ErrorKind::InvalidArgument, "path needs at least two points");
  const bool up = path[1] > path[0];
  for (std::size_t i = 1; i < path.size(); ++i)
    if ((path[i] > path[i - 1]) != up || path[i] == path[i - 1])
      throw NumericalError(ErrorKind::InvalidArgument, "path must be strictly ordered");

  auto evaluate = [&](double t, bool refinement) {
    const AnalyticCocycle coc = family(t);
    const LEEstimate est = lyapunov(coc, le.schedule, le.grid);
    return ScanPoint{t, est.value, renorm_le(coc, est), est.std_error, refinement};
  };

  ContinuityScan scan;
  std::vector<ScanPoint> base;
  for (double t : path) base.push_back(evaluate(t, false));

  std::vector<ScanPoint> mids;
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const ScanPoint& a = base[i];
    const ScanPoint& b = base[i + 1];
    const double delta = b.L_prime - a.L_prime;
    const double sigma = std::hypot(a.std_error, b.std_error);
    if (!(std::abs(delta) > 5.0 * sigma)) continue;
    const ScanPoint m = evaluate(0.5 * (a.t + b.t), true);
    mids.push_back(m);
    const double d1 = m.L_prime - a.L_prime, d2 = b.L_prime - m.L_prime;
    const double s1 = std::hypot(a.std_error, m.std_error), s2 = std::hypot(m.std_error, b.std_error);
    // A jump keeps its whole size in one half and leaves the other half flat;
    // smooth variation splits between the halves.
    const bool first = std::abs(d1) >= std::abs(d2);
    const double big = first ? d1 : d2, small = first ? d2 : d1;
    const bool resolved = std::abs(big) > 5.0 * (first ? s1 : s2);
    const bool concentrated = std::abs(big) >= 0.75 * std::abs(delta) && std::abs(small) <= 0.25 * std::abs(delta);
    JumpFlag flag{a.t, b.t, delta, sigma, resolved && concentrated};
    scan.candidates.push_back(flag);
    if (flag.persistent) scan.jumps.push_back(flag);
  }

  scan.points = base;
  scan.points.insert(scan.points.end(), mids.begin(), mids.end());
  std::sort(scan.points.begin(), scan.points.end(),
            [up](const ScanPoint& a, const ScanPoint& b) { return up ? a.t < b.t : a.t > b.t; });
  for (std::size_t i = 0; i + 1 < scan.points.size(); ++i) {
    const double dt = std::abs(scan.points[i + 1].t - scan.points[i].t);
    scan.modulus = std::max(scan.modulus, std::abs(scan.points[i + 1].L_prime - scan.points[i].L_prime) / dt);
  }
  return scan;
}

FrequencyScan frequency_scan(const FrequencyFamily& family, const Frequency& target,
                             const std::vector<std::pair<std::int64_t, std::int64_t>>& approximants,
                             const LEConfig& le, int rational_grid) {
  if (target.is_rational()) throw NumericalError(ErrorKind::InvalidArgument, "target frequency must be irrational");
  const AnalyticCocycle coc = family(target);
  FrequencyScan scan;
  const int strip_zeros = count_zeros(coc.det(), AnnulusContour::from_strip(coc.dom()));
  scan.guaranteed = strip_zeros == 0;
  scan.label = scan.guaranteed ? "GUARANTEED" : "NON-GUARANTEED";
  const LEEstimate est = lyapunov(coc, le.schedule, le.grid);
  scan.target_L = est.value;
  scan.target_L_prime = renorm_le(coc, est);
  scan.target_std_error = est.std_error;
  for (const auto& [p, q] : approximants) {
    const RationalLE r = rational_le(family(Frequency::rational(p, q)), rational_grid);
    scan.rows.push_back({p, q, r.L, r.L_prime, std::abs(r.L - scan.target_L), std::abs(r.L_prime - scan.target_L_prime)});
  }
  return scan;
}

}  // namespace qpc
