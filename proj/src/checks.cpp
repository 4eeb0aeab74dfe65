#include "qpc/checks.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "qpc/analytic.hpp"
#include "qpc/cocycle.hpp"
#include "qpc/deviation.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"
#include "qpc/report.hpp"

namespace qpc {

namespace {

TrigPoly w_minus(cd root) { return TrigPoly::from_dense(0, {-root, 1.0}); }

TrigPoly random_poly(std::mt19937_64& rng, int deg) {
  std::normal_distribution<double> g;
  std::vector<cd> c(static_cast<std::size_t>(2 * deg + 1));
  for (auto& v : c) v = cd(g(rng), g(rng));
  return TrigPoly::from_dense(-deg, c);
}

AnalyticCocycle constant_cocycle(double a, double d, const Frequency& f) {
  return AnalyticCocycle(f, {TrigPoly::constant(a), TrigPoly::constant(0.0), TrigPoly::constant(0.0),
                             TrigPoly::constant(d)});
}

using Check = std::function<CheckResult(std::mt19937_64&)>;

CheckResult ok(bool pass, std::string detail) { return {"", pass, std::move(detail)}; }

// Roots of w^2 c1 + w c0 + c_{-1} (the Harper c times w) on the torus or in
// the strip, counted directly.
int quadratic_strip_roots(const TrigPoly& c, const StripDomain& dom) {
  const cd a = c.coeff(1), b = c.coeff(0), e = c.coeff(-1);
  const AnnulusContour ann = AnnulusContour::from_strip(dom);
  std::vector<cd> roots;
  if (std::abs(a) > 0) {
    const cd s = std::sqrt(b * b - 4.0 * a * e);
    roots = {(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)};
  } else if (std::abs(b) > 0) {
    roots = {-e / b};
  }
  int n = 0;
  for (cd r : roots)
    if (std::abs(r) >= ann.inner_radius && std::abs(r) <= ann.outer_radius) ++n;
  return n;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  const Frequency golden = Frequency::golden();
  std::vector<std::pair<std::string, Check>> checks;

  checks.emplace_back("jensen-torus-zero", [](std::mt19937_64& rng) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(mean_log(w_minus(std::polar(1.0, kTwoPi * uniform01(rng))))));
    return ok(worst < 1e-6, "max |<log|e(x)-e(x0)|>| = " + format_real(worst));
  });

  checks.emplace_back("zero-count-harper-c", [&golden](std::mt19937_64& rng) {
    const StripDomain dom(0.1);
    int bad = 0;
    for (int i = 0; i < 30; ++i) {
      const double l1 = 2 * uniform01(rng), l2 = 2 * uniform01(rng);
      const double l3 = i % 3 == 0 ? l1 : 2 * uniform01(rng);
      const TrigPoly c = harper_c({l1, l2, l3, 0.0}, golden.beta());
      const int oracle = quadratic_strip_roots(c, dom);
      // A root landing on a contour circle is skipped; the count is undefined there.
      try {
        if (count_zeros(c, AnnulusContour::from_strip(dom)) != oracle) ++bad;
      } catch (const NumericalError& e) {
        if (e.kind() != ErrorKind::ZeroOnContour) throw;
      }
    }
    return ok(bad == 0, std::to_string(bad) + " mismatches over 30 triples");
  });

  checks.emplace_back("transversality-exponents", [](std::mt19937_64&) {
    const auto s = fit_transversality(w_minus(1.0));
    const auto d = fit_transversality(w_minus(1.0) * w_minus(1.0) * TrigPoly::monomial(-1));
    return ok(std::abs(s.alpha - 1.0) < 0.05 && std::abs(d.alpha - 0.5) < 0.05,
              "simple " + format_real(s.alpha) + ", double " + format_real(d.alpha));
  });

  checks.emplace_back("polya-bound", [](std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      const int deg = 1 + i % 4;
      std::vector<cd> c(static_cast<std::size_t>(deg + 1));
      for (auto& v : c) v = cd(g(rng), g(rng));
      c.back() = 1.0;
      for (double eps : {1e-1, 1e-2}) bad += !polya_check(c, g(rng), eps).ok;
    }
    return ok(bad == 0, std::to_string(bad) + " violations");
  });

  checks.emplace_back("convergent-quality", [&golden](std::mt19937_64&) {
    bool good = true;
    const auto& cv = golden.convergents();
    for (std::size_t i = 0; i < cv.size(); ++i) {
      const double q = static_cast<double>(cv[i].q);
      good = good && std::abs(static_cast<double>(golden.approximation_error(i))) < 1.0 / (q * q);
      if (i >= 2) good = good && cv[i].q == cv[i - 1].q + cv[i - 2].q;
    }
    return ok(good, std::to_string(cv.size()) + " convergents");
  });

  checks.emplace_back("ostrowski-round-trip", [&golden](std::mt19937_64& rng) {
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
      const auto n = static_cast<std::int64_t>(uniform01(rng) * 1e8);
      const OstrowskiDigits o = ostrowski(n, golden);
      std::int64_t sum = 0;
      for (std::size_t k = 0; k < o.digits.size(); ++k) sum += o.digits[k] * o.basis[k];
      bad += sum != n;
    }
    return ok(bad == 0, std::to_string(bad) + " failures over 200 integers");
  });

  checks.emplace_back("constant-cocycle-exact", [&golden](std::mt19937_64&) {
    const double L = lyapunov(constant_cocycle(2.0, 1.0, golden), {100, 200}, 16).value;
    return ok(std::abs(L - std::log(2.0)) < 1e-10, "L = " + format_real(L));
  });

  checks.emplace_back("subadditivity", [&golden](std::mt19937_64& rng) {
    const AnalyticCocycle coc(golden, {random_poly(rng, 1), random_poly(rng, 1), random_poly(rng, 1), random_poly(rng, 1)});
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      const double x = uniform01(rng);
      const std::int64_t n = 1 + static_cast<std::int64_t>(uniform01(rng) * 300), m = 1 + static_cast<std::int64_t>(uniform01(rng) * 300);
      const double lhs = iterate(coc, x, n + m).lognorm;
      const double rhs = iterate(coc, x, n).lognorm + iterate(coc, golden.orbit_phase(x, n), m).lognorm;
      bad += lhs > rhs + 1e-9 * (1 + std::abs(rhs));
    }
    return ok(bad == 0, std::to_string(bad) + " violations");
  });

  checks.emplace_back("renormalization-identity", [&golden](std::mt19937_64& rng) {
    int bad = 0;
    for (int i = 0; i < 3; ++i) {
      AnalyticCocycle coc(golden, {random_poly(rng, 1), random_poly(rng, 1), random_poly(rng, 1), random_poly(rng, 1)});
      // keep det bounded away from zero on the torus
      coc = AnalyticCocycle(golden, {coc.entries()[0] + TrigPoly::constant(4.0), coc.entries()[1], coc.entries()[2],
                                     coc.entries()[3] + TrigPoly::constant(4.0)});
      const LEEstimate est = lyapunov(coc, {1000, 2000}, 32);
      const MatrixField divided = [&coc](double x) {
        const Mat2 m = coc.at(x);
        const double s = 1.0 / std::sqrt(std::abs(det(m)));
        return Mat2{m.a * s, m.b * s, m.c * s, m.d * s};
      };
      const LEEstimate ref = lyapunov(divided, golden, {1000, 2000}, 32);
      bad += std::abs(renorm_le(coc, est) - ref.value) > 3 * std::hypot(est.std_error, ref.std_error) + 1e-12;
    }
    return ok(bad == 0, std::to_string(bad) + " of 3 outside 3 sigma");
  });

  checks.emplace_back("almost-mathieu-lower-bound", [&golden](std::mt19937_64&) {
    double worst = INFINITY;
    for (double E : {-2.0, 0.0, 2.0}) worst = std::min(worst, lyapunov(build_almost_mathieu(2.0, E, golden), {1000, 2000}, 32).value);
    return ok(worst >= std::log(2.0) - 1e-2, "min L = " + format_real(worst));
  });

  checks.emplace_back("thread-determinism", [&golden](std::mt19937_64&) {
    const AnalyticCocycle coc = build_harper({1.0, 2.0, 1.0, 0.3}, golden);
    const int saved = max_threads();
    set_max_threads(1);
    const double a = L_n(coc, 2000, 64).value;
    set_max_threads(4);
    const double b = L_n(coc, 2000, 64).value;
    set_max_threads(saved);
    return ok(a == b, format_real(a) + " vs " + format_real(b));
  });

  checks.emplace_back("ldt-constant-zero", [&golden](std::mt19937_64&) {
    LdtConfig cfg;
    cfg.q_list = {5, 8, 13, 21};
    cfg.policy.C = 0.01;
    const LdtResult r = ldt_experiment(constant_cocycle(2.0, 0.5, golden), cfg);
    bool good = true;
    for (const auto& d : r.reports) good = good && d.empirical_measure == 0.0;
    return ok(good, "4 cells");
  });

  checks.emplace_back("deviation-monotone-in-kappa", [&golden](std::mt19937_64&) {
    const AnalyticCocycle coc = build_almost_mathieu(1.1, 0.2, golden);
    const PhaseTable t = lognorm_table(coc, midpoint_grid(1000), {200});
    std::vector<double> u;
    double mean = 0.0;
    for (std::size_t i = 0; i < t.phases.size(); ++i) u.push_back(t.value(i, 0) / 200.0), mean += u.back();
    mean /= static_cast<double>(u.size());
    double prev = 1.0;
    bool good = true;
    for (double k = 1e-3; k < 1.0; k *= 2) {
      const double m = deviation_measure(u, mean, k);
      good = good && m <= prev && m >= 0.0;
      prev = m;
    }
    return ok(good, "kappa from 1e-3 to 1");
  });

  checks.emplace_back("birkhoff-zero-free-rate", [&golden](std::mt19937_64&) {
    const BirkhoffTable t = birkhoff_error(TrigPoly::from_dense(-1, {0.5, 2.0, 0.5}), golden, {100, 1000, 10000, 100000}, 2.0, 64);
    return ok(t.holds, "C4 = " + format_real(t.C4));
  });

  checks.emplace_back("trig-product-out-of-sample", [&golden](std::mt19937_64& rng) {
    const double C5 = fit_trig_constant(golden, 21, 100, rng());
    int bad = 0;
    for (std::size_t i = 0; i < golden.convergents().size(); ++i) {
      const std::int64_t q = golden.convergents()[i].q;
      if (q < 34 || q > 233) continue;
      for (int s = 0; s < 100; ++s) {
        const TrigProductResult r = trig_product(uniform01(rng), uniform01(rng), golden, i, C5);
        bad += std::abs(r.sum) > r.bound;
      }
    }
    return ok(bad == 0, "C5 = " + format_real(C5) + ", " + std::to_string(bad) + " violations");
  });

  checks.emplace_back("scan-smooth-family", [&golden](std::mt19937_64&) {
    std::vector<double> path;
    for (int i = 0; i <= 10; ++i) path.push_back(1.0 + 0.1 * i);
    const ContinuityScan s =
        continuity_scan([&golden](double t) { return constant_cocycle(t, 1.0, golden); }, path, LEConfig{{200, 400}, 16});
    return ok(s.jumps.empty(), std::to_string(s.jumps.size()) + " jumps");
  });

  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::mt19937_64 rng(seed + 7919 * i);
    CheckResult r;
    try {
      r = checks[i].second(rng);
    } catch (const std::exception& e) {
      r = ok(false, std::string("threw: ") + e.what());
    }
    r.name = checks[i].first;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qpc
