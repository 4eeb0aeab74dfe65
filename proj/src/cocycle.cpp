#include "qpc/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

#include "qpc/analytic.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"

namespace qpc {

namespace {

// Plain product; std::complex's operator* adds inf/nan recovery that
// dominates the orbit loop.
inline cd cmul(cd x, cd y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {cmul(x.a, y.a) + cmul(x.b, y.c), cmul(x.a, y.b) + cmul(x.b, y.d), cmul(x.c, y.a) + cmul(x.d, y.c),
          cmul(x.c, y.b) + cmul(x.d, y.d)};
}

cd det(const Mat2& m) { return m.a * m.d - m.b * m.c; }

double spectral_norm(const Mat2& m) {
  const double s = std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d);
  const double d2 = 2.0 * std::abs(det(m));
  const double disc = std::max(0.0, (s - d2) * (s + d2));
  return std::sqrt(0.5 * (s + std::sqrt(disc)));
}

double spectral_radius(const Mat2& m) {
  const cd half = 0.5 * (m.a + m.d);
  const cd s = std::sqrt(half * half - det(m));
  return std::max(std::abs(half + s), std::abs(half - s));
}

Mat2 inverse(const Mat2& m) {
  const cd d = det(m);
  if (d == 0.0) throw NumericalError(ErrorKind::InvalidArgument, "singular matrix");
  return {m.d / d, -m.b / d, -m.c / d, m.a / d};
}

AnalyticCocycle::AnalyticCocycle(Frequency freq, std::array<TrigPoly, 4> entries, StripDomain dom)
    : freq_(std::move(freq)), entries_(std::move(entries)), dom_(dom) {
  det_ = entries_[0] * entries_[3] - entries_[1] * entries_[2];
  for (std::size_t i = 0; i < 4; ++i) {
    fast_[i].lo = entries_[i].min_freq();
    fast_[i].c.assign(entries_[i].dense().begin(), entries_[i].dense().end());
    reach_ = std::max(reach_, entries_[i].degree());
  }
}

Mat2 AnalyticCocycle::at_w(cd w) const {
  constexpr int kStack = 8;
  double stack_re[2 * kStack + 1], stack_im[2 * kStack + 1];
  std::vector<double> heap;
  double* re = stack_re;
  double* im = stack_im;
  if (reach_ > kStack) {
    heap.resize(static_cast<std::size_t>(4 * reach_ + 2));
    re = heap.data();
    im = re + 2 * reach_ + 1;
  }
  re += reach_;  // (re[k], im[k]) = w^k for |k| <= reach_
  im += reach_;
  re[0] = 1.0;
  im[0] = 0.0;
  for (int k = 1; k <= reach_; ++k) {
    re[k] = re[k - 1] * w.real() - im[k - 1] * w.imag();
    im[k] = re[k - 1] * w.imag() + im[k - 1] * w.real();
    re[-k] = re[k];
    im[-k] = -im[k];
  }
  cd out[4];
  for (std::size_t e = 0; e < 4; ++e) {
    const Compiled& f = fast_[e];
    double ar = 0.0, ai = 0.0;
    for (std::size_t j = 0; j < f.c.size(); ++j) {
      const int k = f.lo + static_cast<int>(j);
      const double cr = f.c[j].real(), ci = f.c[j].imag();
      ar += cr * re[k] - ci * im[k];
      ai += cr * im[k] + ci * re[k];
    }
    out[e] = cd(ar, ai);
  }
  return {out[0], out[1], out[2], out[3]};
}

Mat2 AnalyticCocycle::at(double x) const { return at_w(std::polar(1.0, kTwoPi * x)); }

double AnalyticCocycle::distance(const AnalyticCocycle& other) const {
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += (other.entries_[i] - entries_[i]).coefficient_bound(dom_.delta());
  return s;
}

JacobiCocycle build_jacobi(const TrigPoly& v, const TrigPoly& c, double E, const Frequency& freq, StripDomain dom) {
  double scale = 0.0;
  for (cd z : v.dense()) scale = std::max(scale, std::abs(z));
  if (!v.is_real_valued(1e-14 * scale)) throw NumericalError(ErrorKind::NotRealValued, "potential is not real on the torus");
  if (c.is_zero()) throw NumericalError(ErrorKind::ZeroC, "off-diagonal term vanishes identically");
  const TrigPoly c_back = c.conj_reflected().shifted(-freq.beta());
  std::array<TrigPoly, 4> e{TrigPoly::constant(E) - v, -1.0 * c_back, c, TrigPoly()};
  return {AnalyticCocycle(freq, std::move(e), dom), c};
}

TrigPoly harper_c(const HarperParams& p, double beta) {
  const double h = std::numbers::pi * beta;
  return TrigPoly::from_dense(-1, {p.lambda3 * std::polar(1.0, -h), cd(p.lambda2), p.lambda1 * std::polar(1.0, h)});
}

AnalyticCocycle build_harper(const HarperParams& p, const Frequency& freq) {
  if (p.lambda1 < 0 || p.lambda2 < 0 || p.lambda3 < 0)
    throw NumericalError(ErrorKind::InvalidArgument, "coupling constants must be non-negative");
  const TrigPoly v = TrigPoly::monomial(1) + TrigPoly::monomial(-1);
  return build_jacobi(v, harper_c(p, freq.beta()), p.E, freq).A;
}

AnalyticCocycle build_almost_mathieu(double lambda, double E, const Frequency& freq) {
  const TrigPoly v = lambda * (TrigPoly::monomial(1) + TrigPoly::monomial(-1));
  return build_jacobi(v, TrigPoly::constant(1.0), E, freq).A;
}

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kNudge = 1e-9;
constexpr int kMaxNudges = 16;

struct OrbitOut {
  Mat2 m{};           // D_N(x) / 2^exp2
  long long exp2 = 0;
  double det_mant = 1.0;  // prod |det|^2 / 2^det_exp2
  long long det_exp2 = 0;
  bool ok = true;
  double log_abs_det() const {
    return det_mant == 0.0 ? -INFINITY : 0.5 * (std::log(det_mant) + static_cast<double>(det_exp2) * kLn2);
  }
};

void rescale(OrbitOut& o) {
  const double mx = std::max({std::abs(o.m.a.real()), std::abs(o.m.a.imag()), std::abs(o.m.b.real()),
                              std::abs(o.m.b.imag()), std::abs(o.m.c.real()), std::abs(o.m.c.imag()),
                              std::abs(o.m.d.real()), std::abs(o.m.d.imag())});
  if (mx == 0.0 || !std::isfinite(mx)) {
    o.ok = false;
    return;
  }
  int e = 0;
  std::frexp(mx, &e);
  const double s = std::ldexp(1.0, -e);
  o.m.a *= s;
  o.m.b *= s;
  o.m.c *= s;
  o.m.d *= s;
  o.exp2 += e;
  if (o.det_mant != 0.0) {
    int ed = 0;
    o.det_mant = std::frexp(o.det_mant, &ed);
    o.det_exp2 += ed;
  }
}

// Left-multiplies D(x + j beta) for j = 0..max(ns)-1, recording log ||D_n|| at
// each n in ns. Phases follow w_{j+1} = w_j exp(2 pi i beta), resynchronised
// from the exactly reduced phase every 256 steps.
template <bool TrackDet = true, class Field>
OrbitOut run_orbit(const Field& field, const Frequency& freq, double x, std::span<const std::int64_t> ns,
                   double* lognorms) {
  OrbitOut o;
  o.m = {1.0, 0.0, 0.0, 1.0};
  const cd rot = std::polar(1.0, kTwoPi * freq.beta());
  const std::int64_t total = ns.empty() ? 0 : ns.back();
  std::size_t k = 0;
  cd w;
  for (std::int64_t j = 0; j < total; ++j) {
    if ((j & 255) == 0)
      w = std::polar(1.0, kTwoPi * freq.orbit_phase(x, j));
    else {
      w = cmul(w, rot);
      w *= 1.5 - 0.5 * std::norm(w);  // keeps |w| = 1 to rounding
    }
    const Mat2 f = field(w);
    o.m = f * o.m;
    if constexpr (TrackDet) o.det_mant *= std::norm(det(f));
    if ((j & 3) == 3 || j + 1 == ns[k]) {
      rescale(o);
      if (!o.ok) return o;
    }
    if (j + 1 == ns[k]) {
      const double nm = spectral_norm(o.m);
      if (nm == 0.0) {
        o.ok = false;
        return o;
      }
      if (lognorms) lognorms[k] = std::log(nm) + static_cast<double>(o.exp2) * kLn2;
      ++k;
    }
  }
  return o;
}

std::mutex g_log_mu;

void report_hit(double x) {
  std::lock_guard lock(g_log_mu);
  std::clog << "qpc: exact singular hit at phase " << x << ", nudged by " << kNudge << '\n';
}

template <bool TrackDet = true, class Field>
OrbitOut orbit_with_retry(const Field& field, const Frequency& freq, double& x, std::span<const std::int64_t> ns,
                          double* lognorms, int& hits) {
  for (int attempt = 0; attempt < kMaxNudges; ++attempt) {
    OrbitOut o = run_orbit<TrackDet>(field, freq, x, ns, lognorms);
    if (o.ok) return o;
    report_hit(x);
    ++hits;
    x += kNudge;
  }
  throw NumericalError(ErrorKind::ExactSingularHit, "product vanishes at every nudged phase");
}

void check_schedule(const std::vector<std::int64_t>& ns) {
  if (ns.empty()) throw NumericalError(ErrorKind::InvalidArgument, "empty n schedule");
  if (ns.front() < 1) throw NumericalError(ErrorKind::InvalidArgument, "n must be >= 1");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw NumericalError(ErrorKind::InvalidArgument, "n schedule must increase");
}

void check_det(const AnalyticCocycle& coc) {
  if (coc.det().is_zero()) throw NumericalError(ErrorKind::IdenticallyZeroDet, "det D vanishes identically");
}

template <class Field>
PhaseTable table_impl(const Field& field, const Frequency& freq, std::vector<double> phases,
                      std::vector<std::int64_t> ns) {
  check_schedule(ns);
  PhaseTable t;
  t.phases = std::move(phases);
  t.ns = std::move(ns);
  t.lognorm.assign(t.phases.size() * t.ns.size(), 0.0);
  std::vector<int> hits(t.phases.size(), 0);
  parallel_for(t.phases.size(), [&](std::size_t i) {
    double x = t.phases[i];
    orbit_with_retry<false>(field, freq, x, t.ns, &t.lognorm[i * t.ns.size()], hits[i]);
  });
  for (int h : hits) t.singular_hits += h;
  return t;
}

auto field_adapter(const MatrixField& field) {
  return [&field](cd w) {
    double x = std::arg(w) / kTwoPi;
    if (x < 0) x += 1.0;
    return field(x);
  };
}

auto cocycle_adapter(const AnalyticCocycle& coc) {
  return [&coc](cd w) { return coc.at_w(w); };
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

LEEstimate estimate_from_table(const PhaseTable& t, int grid) {
  const std::size_t K = t.ns.size();
  LEEstimate est;
  est.grid = grid;
  est.n = t.ns.back();
  est.singular_hits = t.singular_hits;
  std::vector<double> col(t.phases.size());
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = t.value(i, k) / static_cast<double>(t.ns[k]);
    est.history.emplace_back(t.ns[k], mean(col));
  }
  if (K == 1) {
    est.value = est.history.back().second;
    est.std_error = standard_error(col);
    return est;
  }
  const double dn = static_cast<double>(t.ns[K - 1] - t.ns[K - 2]);
  for (std::size_t i = 0; i < col.size(); ++i) col[i] = (t.value(i, K - 1) - t.value(i, K - 2)) / dn;
  est.value = mean(col);
  est.std_error = standard_error(col) + std::abs(est.history[K - 1].second - est.history[K - 2].second);
  return est;
}

}  // namespace

IterateResult iterate(const AnalyticCocycle& coc, double x, std::int64_t n) {
  if (n < 1) throw NumericalError(ErrorKind::InvalidArgument, "n must be >= 1");
  IterateResult r;
  const std::int64_t ns[1] = {n};
  double x_used = x;
  const OrbitOut o = orbit_with_retry(cocycle_adapter(coc), coc.freq(), x_used, ns, &r.lognorm, r.perturbations);
  const double nm = spectral_norm(o.m);
  r.frame = {o.m.a / nm, o.m.b / nm, o.m.c / nm, o.m.d / nm};
  r.log_abs_det = o.log_abs_det();
  r.phase = x_used;
  return r;
}

std::vector<double> midpoint_grid(int grid) {
  if (grid < 1) throw NumericalError(ErrorKind::InvalidArgument, "grid must be positive");
  std::vector<double> x(static_cast<std::size_t>(grid));
  for (int m = 0; m < grid; ++m) x[static_cast<std::size_t>(m)] = (m + 0.5) / grid;
  return x;
}

PhaseTable lognorm_table(const AnalyticCocycle& coc, std::vector<double> phases, std::vector<std::int64_t> ns) {
  return table_impl(cocycle_adapter(coc), coc.freq(), std::move(phases), std::move(ns));
}

PhaseTable lognorm_table(const MatrixField& field, const Frequency& freq, std::vector<double> phases,
                         std::vector<std::int64_t> ns) {
  return table_impl(field_adapter(field), freq, std::move(phases), std::move(ns));
}

LEEstimate L_n(const AnalyticCocycle& coc, std::int64_t n, int grid) {
  check_det(coc);
  if (grid < 2) throw NumericalError(ErrorKind::InvalidArgument, "grid must be >= 2");
  LEEstimate est = estimate_from_table(lognorm_table(coc, midpoint_grid(grid), {n}), grid);
  est.cutoff_A = default_cutoff(coc);
  return est;
}

LEEstimate lyapunov(const AnalyticCocycle& coc, const std::vector<std::int64_t>& schedule, int grid) {
  check_det(coc);
  if (grid < 2) throw NumericalError(ErrorKind::InvalidArgument, "grid must be >= 2");
  LEEstimate est = estimate_from_table(lognorm_table(coc, midpoint_grid(grid), schedule), grid);
  est.cutoff_A = default_cutoff(coc);
  return est;
}

LEEstimate lyapunov(const MatrixField& field, const Frequency& freq, const std::vector<std::int64_t>& schedule,
                    int grid) {
  if (grid < 2) throw NumericalError(ErrorKind::InvalidArgument, "grid must be >= 2");
  return estimate_from_table(lognorm_table(field, freq, midpoint_grid(grid), schedule), grid);
}

double renorm_le(const AnalyticCocycle& coc, const LEEstimate& est) {
  check_det(coc);
  return est.value - 0.5 * mean_log(coc.det());
}

RationalLE rational_le(const AnalyticCocycle& coc, int grid) {
  if (!coc.freq().is_rational())
    throw NumericalError(ErrorKind::IrrationalFrequency, "rational_le needs beta = p/q");
  check_det(coc);
  if (grid < 2) throw NumericalError(ErrorKind::InvalidArgument, "grid must be >= 2");
  const std::int64_t q = coc.freq().convergents().back().q;
  const std::int64_t ns[1] = {q};
  // rho(D_q(x)) is 1/q-periodic: D_q(x + p/q) is conjugate to D_q(x).
  auto phases = midpoint_grid(grid);
  for (double& x : phases) x /= static_cast<double>(q);
  std::vector<double> log_rho(phases.size()), log_det(phases.size());
  std::vector<int> hits(phases.size(), 0);
  parallel_for(phases.size(), [&](std::size_t i) {
    double x = phases[i];
    for (int attempt = 0;; ++attempt) {
      const OrbitOut o = orbit_with_retry(cocycle_adapter(coc), coc.freq(), x, ns, nullptr, hits[i]);
      const double rho = spectral_radius(o.m);
      if (rho > 0.0) {
        log_rho[i] = std::log(rho) + static_cast<double>(o.exp2) * kLn2;
        log_det[i] = o.log_abs_det();
        return;
      }
      if (attempt == kMaxNudges) throw NumericalError(ErrorKind::ExactSingularHit, "nilpotent period product");
      report_hit(x);
      ++hits[i];
      x += kNudge;
    }
  });
  RationalLE r;
  r.q = q;
  r.L = mean(log_rho) / static_cast<double>(q);
  r.L_prime = r.L - mean(log_det) / (2.0 * static_cast<double>(q));
  return r;
}

double fejer_average(const std::function<double(double)>& v, double x, int R, const Frequency& freq) {
  if (R < 1) throw NumericalError(ErrorKind::InvalidArgument, "R must be >= 1");
  const double r2 = static_cast<double>(R) * R;
  double s = 0.0;
  for (int j = -R + 1; j < R; ++j) s += static_cast<double>(R - std::abs(j)) / r2 * v(freq.orbit_phase(x, j));
  return s;
}

double default_cutoff(const AnalyticCocycle& coc) {
  check_det(coc);
  return std::max(1.0, -mean_log(coc.det()));
}

double cutoff_un(const AnalyticCocycle& coc, double x, std::int64_t n, double A) {
  return std::max(iterate(coc, x, n).lognorm / static_cast<double>(n), -A);
}

}  // namespace qpc
