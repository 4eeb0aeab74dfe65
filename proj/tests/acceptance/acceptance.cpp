// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// all of them pass. Tolerances and budgets are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qpc/analytic.hpp"
#include "qpc/cocycle.hpp"
#include "qpc/deviation.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"
#include "qpc/report.hpp"

using namespace qpc;

namespace {

// 1
constexpr double kConstantTol = 1e-10;
constexpr double kFreeTol = 1e-6;
// 2
constexpr int kRenormCount = 50;
constexpr double kRenormSigmas = 3.0;
constexpr double kRenormMinDet = 0.2;
// 3
constexpr double kJensenTol = 1e-6;
// 5
constexpr double kAlphaTol = 0.05;
// 6
constexpr double kLowerBoundSlack = 1e-2;
// 7
constexpr double kKappa = 0.1;
constexpr int kPerturbations = 5;
constexpr double kGamma = 1e-2;
constexpr std::uint64_t kLdtSeed = 20240601;
// 9
constexpr double kFinalGap = 1e-2;

const Frequency kGolden = Frequency::golden();

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || secs < limit_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s [%2d] %s: %s (%.1fs%s)\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              in_time ? "" : ", over time limit");
  std::fflush(stdout);
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

TrigPoly random_poly(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g;
  std::vector<cd> c(static_cast<std::size_t>(2 * deg + 1));
  for (auto& v : c) v = cd(g(rng), g(rng));
  return TrigPoly::from_dense(-deg, c);
}

AnalyticCocycle diag(double a, double d) {
  return AnalyticCocycle(kGolden, {TrigPoly::constant(a), TrigPoly::constant(0.0), TrigPoly::constant(0.0),
                                   TrigPoly::constant(d)});
}

// Independent root count for w * c(w) = a w^2 + b w + e inside the annulus.
int quadratic_count(const TrigPoly& c, const AnnulusContour& ann) {
  const cd a = c.coeff(1), b = c.coeff(0), e = c.coeff(-1);
  std::vector<cd> roots;
  if (std::abs(a) > 0) {
    const cd s = std::sqrt(b * b - 4.0 * a * e);
    roots = {(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)};
  } else if (std::abs(b) > 0) {
    roots = {-e / b};
  }
  int n = 0;
  for (cd r : roots) n += std::abs(r) >= ann.inner_radius && std::abs(r) <= ann.outer_radius;
  return n;
}

struct LdtRun {
  LdtResult base;
  UniformityProbe probe;
  std::string csv;  // base and perturbation tables
};

LdtRun ldt_run(const AnalyticCocycle& coc) {
  LdtConfig cfg;
  cfg.kappa = kKappa;
  cfg.q_list = {34, 55, 89, 144};
  cfg.seed = kLdtSeed;
  LdtRun r;
  r.base = ldt_experiment(coc, cfg);
  r.probe = uniformity_probe(coc, cfg, r.base.fitted_c, kPerturbations, kGamma);
  r.csv = ldt_table(r.base, "acceptance").str() + uniformity_table(r.probe, "acceptance").str();
  return r;
}

std::vector<AnalyticCocycle> ldt_cocycles() {
  return {build_almost_mathieu(2.0, 0.0, kGolden), build_harper({1.0, 2.0, 1.0, 0.0}, kGolden)};
}

}  // namespace

int main() {
  report(1, "constant-cocycle exactness", 1.0, [] {
    const double L2 = lyapunov(diag(2.0, 1.0), {500, 1000}, 64).value;
    const double Lf = lyapunov(build_almost_mathieu(0.0, 3.0, kGolden), {500, 1000}, 64).value;
    const double e1 = std::abs(L2 - std::log(2.0)), e2 = std::abs(Lf - std::log((3 + std::sqrt(5.0)) / 2));
    return Outcome{e1 < kConstantTol && e2 < kFreeTol, "|L-log2| = " + fmt(e1) + ", free E=3 error " + fmt(e2)};
  });

  report(2, "renormalization identity", 120.0, [] {
    std::mt19937_64 rng(2);
    int tested = 0, bad = 0;
    double worst = 0.0;
    while (tested < kRenormCount) {
      const AnalyticCocycle r(kGolden, {random_poly(rng, 2), random_poly(rng, 2), random_poly(rng, 2), random_poly(rng, 2)});
      double dmin = INFINITY;
      for (int i = 0; i < 4096; ++i) dmin = std::min(dmin, std::abs(r.det().at((i + 0.5) / 4096)));
      if (dmin < kRenormMinDet) continue;
      ++tested;
      const MatrixField divided = [&r](double x) {
        const Mat2 m = r.at(x);
        const double s = 1.0 / std::sqrt(std::abs(r.det().at(x)));
        return Mat2{m.a * s, m.b * s, m.c * s, m.d * s};
      };
      const LEEstimate e = lyapunov(r, {2000, 4000}, 64);
      const LEEstimate ed = lyapunov(divided, kGolden, {2000, 4000}, 64);
      const double sigma = std::hypot(e.std_error, ed.std_error);
      const double z = std::abs(renorm_le(r, e) - ed.value) / std::max(sigma, 1e-300);
      worst = std::max(worst, z);
      bad += z > kRenormSigmas;
    }
    return Outcome{bad == 0, std::to_string(bad) + "/" + std::to_string(tested) + " outside 3 sigma, worst " +
                                 fmt(worst) + " sigma"};
  });

  report(3, "Jensen identity", 1.0, [] {
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const cd root = std::polar(1.0, kTwoPi * uniform01(rng));
      worst = std::max(worst, std::abs(mean_log(TrigPoly::from_dense(0, {-root, 1.0}))));
    }
    return Outcome{worst < kJensenTol, "max |mean log| = " + fmt(worst)};
  });

  report(4, "zero counting vs quadratic roots", 10.0, [] {
    std::mt19937_64 rng(4);
    const AnnulusContour ann = AnnulusContour::from_strip(StripDomain(0.1));
    int bad = 0, boundary = 0;
    for (int i = 0; i < 100; ++i) {
      const double l1 = 3 * uniform01(rng), l2 = 3 * uniform01(rng);
      const bool tie = i % 4 == 0;
      const double l3 = tie ? l1 : 3 * uniform01(rng);
      boundary += tie;
      const TrigPoly c = harper_c({l1, l2, l3, 0.0}, kGolden.beta());
      bad += count_zeros(c, ann) != quadratic_count(c, ann);
    }
    return Outcome{bad == 0, std::to_string(bad) + " mismatches over 100 triples (" + std::to_string(boundary) +
                                 " with lambda1 = lambda3)"};
  });

  report(5, "transversality and Polya", 30.0, [] {
    const TrigPoly simple = TrigPoly::from_dense(0, {-1.0, 1.0});
    const TrigPoly dbl = TrigPoly::from_dense(-1, {1.0, -2.0, 1.0});
    const double a1 = fit_transversality(simple).alpha, a2 = fit_transversality(dbl).alpha;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
      const int deg = 1 + i % 4;
      std::vector<cd> c(static_cast<std::size_t>(deg + 1));
      for (auto& v : c) v = cd(g(rng), g(rng));
      c.back() = 1.0;
      const double y = g(rng);
      for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) bad += !polya_check(c, y, eps).ok;
    }
    const bool ok = std::abs(a1 - 1.0) < kAlphaTol && std::abs(a2 - 0.5) < kAlphaTol && bad == 0;
    return Outcome{ok, "alpha " + fmt(a1) + " / " + fmt(a2) + ", Polya violations " + std::to_string(bad) + "/400"};
  });

  report(6, "almost Mathieu lower bound", 120.0, [] {
    double worst = INFINITY;
    for (double E : {-4.0, -2.0, 0.0, 2.0, 4.0})
      worst = std::min(worst, lyapunov(build_almost_mathieu(2.0, E, kGolden), {5000, 10000}, 200).value);
    return Outcome{worst >= std::log(2.0) - kLowerBoundSlack, "min L = " + fmt(worst) + " vs log 2 = " + fmt(std::log(2.0))};
  });

  std::vector<LdtRun> runs8;
  report(7, "uniform large deviations", 900.0, [&runs8] {
    set_max_threads(8);
    bool ok = true;
    std::string detail;
    for (const auto& coc : ldt_cocycles()) {
      runs8.push_back(ldt_run(coc));
      const LdtRun& r = runs8.back();
      bool monotone = true;
      detail += detail.empty() ? "" : "; ";
      detail += "measures";
      for (std::size_t i = 0; i < r.base.reports.size(); ++i) {
        detail += " " + fmt(r.base.reports[i].empirical_measure);
        if (i && r.base.reports[i].empirical_measure > r.base.reports[i - 1].empirical_measure) monotone = false;
      }
      detail += " c=" + fmt(r.base.fitted_c) + (r.probe.common_c_holds ? " uniform" : " NOT uniform");
      ok = ok && monotone && r.base.fitted_c > 0 && r.probe.common_c_holds && r.base.dropped_q.empty();
      for (double d : r.probe.distances) ok = ok && d <= kGamma;
    }
    set_max_threads(0);
    return Outcome{ok, detail};
  });

  report(8, "continuity along the lambda1 sweep", 900.0, [] {
    std::vector<double> path;
    for (int i = 0; i <= 40; ++i) path.push_back(0.05 * i);
    const ContinuityScan s = continuity_scan(
        [](double t) { return build_harper({t, 1.0, t, 0.0}, kGolden); }, path, LEConfig{});
    std::string where;
    for (const auto& j : s.jumps) where += " [" + fmt(j.t_lo) + "," + fmt(j.t_hi) + "]";
    return Outcome{s.jumps.empty(), std::to_string(s.candidates.size()) + " candidates, " +
                                        std::to_string(s.jumps.size()) + " persistent" + where + ", modulus " +
                                        fmt(s.modulus)};
  });

  report(9, "frequency continuity", 300.0, [] {
    const std::vector<std::pair<std::int64_t, std::int64_t>> approx{{21, 34}, {34, 55}, {55, 89}, {89, 144}};
    bool ok = true;
    std::string detail;
    for (double E : {0.0, 8.0}) {
      const FrequencyScan s = frequency_scan([E](const Frequency& f) { return build_almost_mathieu(2.0, E, f); },
                                             kGolden, approx, LEConfig{{100000, 200000}, 256}, 400);
      detail += detail.empty() ? "" : "; ";
      detail += "E=" + fmt(E) + " gaps";
      for (std::size_t i = 0; i < s.rows.size(); ++i) {
        detail += " " + fmt(s.rows[i].gap);
        if (i && !(s.rows[i].gap < s.rows[i - 1].gap)) ok = false;
      }
      ok = ok && s.rows.back().gap < kFinalGap && s.guaranteed;
    }
    return Outcome{ok, detail};
  });

  report(10, "trig-product bound out of sample", 60.0, [] {
    const double C5 = fit_trig_constant(kGolden, 21, 100, 10);
    std::mt19937_64 rng(1010);
    int bad = 0, total = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < kGolden.convergents().size(); ++i) {
      const std::int64_t q = kGolden.convergents()[i].q;
      if (q < 34 || q > 233) continue;
      for (int s = 0; s < 100; ++s) {
        const TrigProductResult r = trig_product(uniform01(rng), uniform01(rng), kGolden, i, C5);
        worst = std::max(worst, std::abs(r.sum) / std::log(static_cast<double>(q)));
        bad += std::abs(r.sum) > r.bound;
        ++total;
      }
    }
    return Outcome{bad == 0, "C5 = " + fmt(C5) + ", worst |sum|/log q = " + fmt(worst) + ", " + std::to_string(bad) +
                                 "/" + std::to_string(total) + " violations"};
  });

  report(11, "determinism across thread counts", 0.0, [&runs8] {
    if (runs8.size() != 2) return Outcome{false, "criterion 7 did not complete"};
    set_max_threads(1);
    const auto cocs = ldt_cocycles();
    bool same = true;
    for (std::size_t i = 0; i < cocs.size(); ++i) same = same && ldt_run(cocs[i]).csv == runs8[i].csv;
    set_max_threads(0);
    return Outcome{same, same ? "CSVs byte-identical at 1 and 8 threads" : "CSV contents differ"};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
