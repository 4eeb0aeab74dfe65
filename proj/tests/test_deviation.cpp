#include <doctest.h>

#include <cmath>
#include <random>

#include "qpc/analytic.hpp"
#include "qpc/deviation.hpp"
#include "qpc/errors.hpp"

using namespace qpc;

namespace {

const Frequency kGolden = Frequency::golden();

AnalyticCocycle diag_cocycle(double a, double d, const Frequency& f = kGolden) {
  return AnalyticCocycle(f, {TrigPoly::constant(a), TrigPoly::constant(0.0), TrigPoly::constant(0.0),
                             TrigPoly::constant(d)});
}

LdtConfig small_config() {
  LdtConfig cfg;
  cfg.kappa = 0.1;
  cfg.q_list = {5, 8, 13, 21};
  cfg.policy.C = 0.01;
  return cfg;
}

}  // namespace

TEST_CASE("n policy") {
  NPolicy p;
  CHECK(p.n_for(0.1, 34) == 96523);
  CHECK(p.n_for(0.1, 144) == 472280);
  // (10 * 100 * 1)^1.1 = 1000^1.1
  CHECK(p.n_for(0.1, 1) == static_cast<std::int64_t>(std::ceil(std::pow(1000.0, 1.1))));
}

TEST_CASE("deviation measure is monotone in kappa") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<double> u(5000);
  for (auto& v : u) v = g(rng);
  double prev = 1.0;
  for (double k = 0.01; k < 4.0; k *= 1.5) {
    const double m = deviation_measure(u, 0.0, k);
    CHECK(m <= prev);
    prev = m;
  }
  CHECK(deviation_measure({0.0, 1.0, -1.0, 0.5}, 0.0, 0.75) == doctest::Approx(0.5));
}

TEST_CASE("constant cocycle has no deviations") {
  const LdtResult r = ldt_experiment(diag_cocycle(2.0, 0.5), small_config());
  REQUIRE(r.reports.size() == 4);
  for (const auto& rep : r.reports) {
    CHECK(rep.empirical_measure == 0.0);
    CHECK(rep.below_resolution);
    CHECK(rep.samples == 1000);
    CHECK(rep.L_n == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  CHECK(r.fitted_c > 0.0);
}

TEST_CASE("ldt experiment is reproducible under a seed") {
  const AnalyticCocycle amo = build_almost_mathieu(1.2, 0.3, kGolden);
  LdtConfig cfg = small_config();
  cfg.kappa = 0.05;
  const LdtResult a = ldt_experiment(amo, cfg), b = ldt_experiment(amo, cfg);
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].empirical_measure == b.reports[i].empirical_measure);
    CHECK(a.reports[i].L_n == b.reports[i].L_n);
  }
  CHECK(a.fitted_c == b.fitted_c);
}

TEST_CASE("ldt argument errors") {
  const AnalyticCocycle coc = diag_cocycle(2.0, 1.0);
  LdtConfig cfg = small_config();
  cfg.q_list = {5, 8, 13};
  try {
    ldt_experiment(coc, cfg);
    FAIL("expected InsufficientQ");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::InsufficientQ);
  }
  cfg = small_config();
  cfg.q_list = {5, 8, 13, 20};
  CHECK_THROWS_AS(ldt_experiment(coc, cfg), NumericalError);
  cfg = small_config();
  cfg.phases = 999;
  CHECK_THROWS_AS(ldt_experiment(coc, cfg), NumericalError);
  // Every n above the cap leaves nothing to fit.
  cfg = small_config();
  cfg.policy.cap = 1;
  try {
    ldt_experiment(coc, cfg);
    FAIL("expected InsufficientQ");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::InsufficientQ);
  }
}

TEST_CASE("uniformity probe stays near the cocycle") {
  const AnalyticCocycle coc = diag_cocycle(2.0, 0.5);
  const UniformityProbe u = uniformity_probe(coc, small_config(), 0.5, 3, 1e-3);
  REQUIRE(u.distances.size() == 3);
  for (double d : u.distances) CHECK(d <= 1e-3 * (1 + 1e-12));
  CHECK(u.results.size() == 3);
}

TEST_CASE("birkhoff sums") {
  const std::vector<std::int64_t> ns{100, 300, 1000, 3000, 10000, 30000, 100000};
  SUBCASE("constant") {
    const BirkhoffTable t = birkhoff_error(TrigPoly::constant(3.0), kGolden, ns);
    for (const auto& row : t.rows) CHECK(row.sup_error < 1e-14);
    CHECK(t.zero_free);
    CHECK(t.holds);
  }
  SUBCASE("zero free") {
    // 2 + cos(2 pi x)
    const TrigPoly f = TrigPoly::from_dense(-1, {0.5, 2.0, 0.5});
    const BirkhoffTable t = birkhoff_error(f, kGolden, ns);
    CHECK(t.zero_free);
    CHECK(t.zero_count == 0);
    CHECK(t.holds);
    CHECK(t.rows.back().sup_error < t.rows.front().sup_error);
    // n * error stays bounded by the calibrated constant on the test half
    for (const auto& row : t.rows) CHECK(static_cast<double>(row.n) * row.sup_error <= t.C4 * (1 + 1e-9) + 1e-9);
  }
  SUBCASE("one zero on the circle") {
    // e(x) - 1
    const TrigPoly f = TrigPoly::from_dense(0, {-1.0, 1.0});
    const BirkhoffTable t = birkhoff_error(f, kGolden, ns);
    CHECK_FALSE(t.zero_free);
    CHECK(t.zero_count == 1);
    CHECK(t.holds);
  }
  CHECK_THROWS_AS(birkhoff_error(TrigPoly::constant(0.0), kGolden, ns), NumericalError);
}

TEST_CASE("trig product") {
  const TrigProductResult one = trig_product(0.3, 0.1, kGolden, 0);
  CHECK(one.q == 1);
  CHECK(one.sum == 0.0);

  // The closest return carries the most negative term.
  for (std::size_t i = 3; i < 10; ++i) {
    const TrigProductResult r = trig_product(0.37, 0.81, kGolden, i);
    CHECK(r.sum_with_k0 <= r.sum);
    CHECK(r.k0 >= 1);
    CHECK(r.k0 <= r.q);
  }

  // Oracle: product over k of |e(x + k beta) - e(x0)| directly in complex form.
  const double x = 0.123, x0 = 0.654;
  const TrigProductResult r = trig_product(x, x0, kGolden, 6);
  double direct = 0.0;
  for (std::int64_t k = 1; k <= r.q; ++k) {
    if (k == r.k0) continue;
    const double ph = x + static_cast<double>(k) * kGolden.beta();
    direct += std::log(std::abs(std::polar(1.0, 2 * M_PI * ph) - std::polar(1.0, 2 * M_PI * x0)));
  }
  CHECK(r.sum == doctest::Approx(direct).epsilon(1e-9));

  const double C5 = fit_trig_constant(kGolden, 21, 200, 3);
  CHECK(C5 > 0.0);
  std::mt19937_64 rng(11);
  for (std::size_t i = 0; i < kGolden.convergents().size(); ++i) {
    const std::int64_t q = kGolden.convergents()[i].q;
    if (q < 34 || q > 233) continue;
    for (int s = 0; s < 100; ++s) {
      const TrigProductResult t = trig_product(uniform01(rng), uniform01(rng), kGolden, i, C5);
      CHECK(std::abs(t.sum) <= t.bound);
    }
  }
}

TEST_CASE("continuity scan") {
  LEConfig le;
  le.schedule = {500, 1000};
  le.grid = 32;

  SUBCASE("smooth diagonal family") {
    std::vector<double> path;
    for (int i = 0; i <= 10; ++i) path.push_back(1.0 + 0.1 * i);
    const ContinuityScan s = continuity_scan([](double t) { return diag_cocycle(t, 1.0); }, path, le);
    CHECK(s.jumps.empty());
    for (const auto& p : s.points) CHECK(p.L_prime == doctest::Approx(0.5 * std::log(p.t)).epsilon(1e-9));
    CHECK(s.modulus == doctest::Approx(0.5).epsilon(0.01));
  }
  SUBCASE("step family is flagged") {
    const std::vector<double> path{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto step = [](double t) { return diag_cocycle(t < 0.6 ? 1.0 : std::exp(1.0), 1.0); };
    const ContinuityScan s = continuity_scan(step, path, le);
    REQUIRE(s.jumps.size() == 1);
    CHECK(s.jumps[0].t_lo == 0.5);
    CHECK(s.jumps[0].delta == doctest::Approx(0.5));
  }
  SUBCASE("almost Mathieu energies") {
    const std::vector<double> path{-1.0, -0.5, 0.0, 0.5, 1.0};
    const ContinuityScan s =
        continuity_scan([](double E) { return build_almost_mathieu(2.0, E, kGolden); }, path, le);
    for (const auto& p : s.points) CHECK(p.L >= std::log(2.0) - 0.01);
  }
  CHECK_THROWS_AS(continuity_scan([](double t) { return diag_cocycle(t, 1.0); }, {1.0, 1.0}, le), NumericalError);
}

TEST_CASE("frequency scan") {
  LEConfig le;
  le.schedule = {2000, 4000};
  le.grid = 64;
  const std::vector<std::pair<std::int64_t, std::int64_t>> approx{{3, 5}, {5, 8}, {8, 13}, {13, 21}, {21, 34}};

  SUBCASE("constant cocycle") {
    const FrequencyScan s = frequency_scan([](const Frequency& f) { return diag_cocycle(3.0, 1.0, f); }, kGolden,
                                           approx, le);
    CHECK(s.guaranteed);
    CHECK(s.label == "GUARANTEED");
    for (const auto& r : s.rows) CHECK(r.gap < 1e-12);
  }
  SUBCASE("almost Mathieu outside the spectrum") {
    const FrequencyScan s = frequency_scan([](const Frequency& f) { return build_almost_mathieu(1.0, 8.0, f); },
                                           kGolden, approx, le);
    CHECK(s.guaranteed);
    for (std::size_t i = 1; i < s.rows.size(); ++i) CHECK(s.rows[i].gap < s.rows[i - 1].gap);
  }
  SUBCASE("singular Harper") {
    const FrequencyScan s = frequency_scan(
        [](const Frequency& f) { return build_harper({1.0, 2.0, 1.0, 0.0}, f); }, kGolden, approx, le);
    CHECK_FALSE(s.guaranteed);
    CHECK(s.label == "NON-GUARANTEED");
  }
  CHECK_THROWS_AS(frequency_scan([](const Frequency& f) { return diag_cocycle(3.0, 1.0, f); },
                                 Frequency::rational(1, 2), approx, le),
                  NumericalError);
}
