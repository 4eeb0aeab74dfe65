#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qpc/arithmetic.hpp"
#include "qpc/errors.hpp"

using namespace qpc;

namespace {

using q128 = __float128;

// sqrt by Newton in quad precision, independent of the library's long double path.
q128 sqrt_q(q128 a) {
  q128 x = std::sqrt(static_cast<double>(a));
  for (int i = 0; i < 6; ++i) x = 0.5Q * (x + a / x);
  return x;
}

q128 frac_q(q128 x) {
  const auto i = static_cast<long long>(x);
  q128 f = x - static_cast<q128>(i);
  if (f < 0) f += 1;
  return f;
}

std::vector<std::int64_t> cf_oracle(double beta, int depth) {
  // Textbook floating recursion, fine for shallow depth.
  std::vector<std::int64_t> q;
  long double x = beta;
  std::int64_t q1 = 1, q0 = 0;
  for (int i = 0; i < depth; ++i) {
    const long double y = 1.0L / x;
    const auto a = static_cast<std::int64_t>(std::floor(y));
    x = y - a;
    const std::int64_t qn = a * q1 + q0;
    q0 = q1;
    q1 = qn;
    q.push_back(qn);
  }
  return q;
}

std::int64_t reconstruct(const OstrowskiDigits& d) {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < d.digits.size(); ++k) s += d.digits[k] * d.basis[k];
  return s;
}

}  // namespace

TEST_CASE("golden and silver convergents") {
  const auto g = expand_cf(SurdTag::Golden, 8);
  std::vector<std::int64_t> q;
  for (auto c : g.convergents()) q.push_back(c.q);
  CHECK(q == std::vector<std::int64_t>{1, 2, 3, 5, 8, 13, 21, 34});
  CHECK(q == cf_oracle(0.5 * (std::sqrt(5.0) - 1.0), 8));
  for (auto a : g.digits()) CHECK(a == 1);

  const auto s = expand_cf(SurdTag::Silver, 5);
  q.clear();
  for (auto c : s.convergents()) q.push_back(c.q);
  CHECK(q == std::vector<std::int64_t>{2, 5, 12, 29, 70});
  CHECK(q == cf_oracle(std::sqrt(2.0) - 1.0, 5));
  for (auto a : s.digits()) CHECK(a == 2);
  CHECK_FALSE(s.is_rational());
}

TEST_CASE("rational input terminates") {
  const auto f = expand_cf(0.625, 20);
  CHECK(f.is_rational());
  CHECK(f.convergents().back().p == 5);
  CHECK(f.convergents().back().q == 8);
  CHECK(f.digits().size() < 20);
  const auto r = Frequency::rational(10, 16);
  CHECK(r.convergents().back().p == 5);
  CHECK(r.convergents().back().q == 8);
  CHECK(r.frac_multiple(3) == 0.875L);
  CHECK_THROWS_AS(expand_cf(1.5, 3), NumericalError);
  CHECK_THROWS_AS(expand_cf(0.3, 0), NumericalError);
}

TEST_CASE("depth is capped before 64-bit overflow") {
  const auto g = expand_cf(SurdTag::Golden, 200);
  CHECK(g.depth_capped());
  CHECK(g.convergents().size() < 200);
  CHECK(g.convergents().back().q <= (std::int64_t{1} << 62));
}

TEST_CASE("convergent recurrences and approximation quality") {
  for (const auto& f : {Frequency::golden(60), Frequency::silver(40), expand_cf(0.1234567, 12)}) {
    const auto& c = f.convergents();
    const auto& a = f.digits();
    for (std::size_t n = 0; n < c.size(); ++n) {
      CHECK(std::gcd(c[n].p, c[n].q) == 1);
      if (n >= 2) {
        CHECK(c[n].q == a[n] * c[n - 1].q + c[n - 2].q);
        CHECK(c[n].p == a[n] * c[n - 1].p + c[n - 2].p);
        CHECK(c[n].q > c[n - 1].q);
      }
      const long double err = std::abs(f.approximation_error(n));
      const long double qn = c[n].q;
      CHECK(err < 1.0L / (qn * qn));
      if (n + 1 < c.size()) CHECK(err < 1.0L / (qn * static_cast<long double>(c[n + 1].q)));
    }
  }
}

TEST_CASE("reduced multiples match a quad precision oracle") {
  const q128 phi = 0.5Q * (sqrt_q(5.0Q) - 1.0Q);
  const q128 sil = sqrt_q(2.0Q) - 1.0Q;
  const auto g = Frequency::golden();
  const auto s = Frequency::silver();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> J(1, 2'000'000'000);
  for (int i = 0; i < 200; ++i) {
    const std::int64_t j = J(rng);
    CHECK(std::abs(static_cast<double>(g.frac_multiple(j)) - static_cast<double>(frac_q(phi * j))) < 1e-15);
    CHECK(std::abs(static_cast<double>(s.frac_multiple(j)) - static_cast<double>(frac_q(sil * j))) < 1e-15);
  }
  // Close returns near a denominator are where naive products lose digits.
  const std::int64_t q = g.convergents()[35].q;
  const double rel = static_cast<double>((g.frac_multiple(q) - static_cast<long double>(frac_q(phi * q))) /
                                         static_cast<long double>(frac_q(phi * q) - (frac_q(phi * q) > 0.5Q)));
  CHECK(std::abs(rel) < 1e-9);
}

TEST_CASE("ostrowski examples") {
  const auto g = Frequency::golden(5);  // q = 1, 2, 3, 5, 8
  const auto d = ostrowski(7, g);
  CHECK(reconstruct(d) == 7);
  const auto g8 = Frequency::golden(8);
  const auto ten = ostrowski(10, g8);
  CHECK(reconstruct(ten) == 10);
  CHECK(ten.basis.back() == 8);
  CHECK(ten.digits.back() == 1);
  std::int64_t nonzero = 0;
  for (std::size_t k = 0; k < ten.digits.size(); ++k)
    if (ten.digits[k] != 0) {
      ++nonzero;
      CHECK((ten.basis[k] == 8 || ten.basis[k] == 2));
    }
  CHECK(nonzero == 2);

  const auto at_q = ostrowski(13, g8);
  CHECK(at_q.digits.back() == 1);
  CHECK(reconstruct(at_q) == 13);
  CHECK(std::accumulate(at_q.digits.begin(), at_q.digits.end(), std::int64_t{0}) == 1);

  const auto one = ostrowski(1, g8);
  CHECK(one.digits == std::vector<std::int64_t>{1});

  CHECK_THROWS_AS(ostrowski(34, g8), NumericalError);
  try {
    ostrowski(100, g8);
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::InsufficientDepth);
  }
}

TEST_CASE("ostrowski round trip up to a million") {
  for (const auto& f : {Frequency::golden(40), Frequency::silver(24)}) {
    const auto q = f.denominators();
    for (std::int64_t n = 1; n <= 1'000'000; ++n) {
      const auto d = ostrowski(n, f);
      if (reconstruct(d) != n) {
        FAIL("round trip failed at n = " << n);
      }
      const std::size_t s = d.digits.size() - 1;
      if (!(d.basis[s] <= n && n < q[s + 1])) FAIL("top denominator wrong at n = " << n);
      for (std::size_t k = 0; k < s; ++k)
        if (d.digits[k] > q[k + 1] / q[k]) FAIL("digit too large at n = " << n);
    }
  }
}

TEST_CASE("diophantine fit") {
  const auto g = Frequency::golden();
  const double beta = g.beta();
  // Direct minimisation oracle in quad precision.
  const q128 phi = 0.5Q * (sqrt_q(5.0Q) - 1.0Q);
  double oracle = 1e300;
  for (std::int64_t j = 1; j <= 10000; ++j) {
    const double t = static_cast<double>(frac_q(phi * j));
    oracle = std::min(oracle, std::abs(std::sin(2 * M_PI * t)) * static_cast<double>(j * j));
  }
  const auto p = fit_diophantine(g, 2.0, 10000);
  CHECK(p.b > 0.0);
  CHECK(p.b == doctest::Approx(oracle).epsilon(1e-9));

  const auto one = fit_diophantine(g, 2.0, 1);
  CHECK(one.b == doctest::Approx(std::abs(std::sin(2 * M_PI * beta))).epsilon(1e-14));

  try {
    fit_diophantine(Frequency::rational(1, 2), 2.0, 10);
    FAIL("expected DegenerateBeta");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateBeta);
    CHECK(std::string(e.what()).find("j = 2") != std::string::npos);
  }
}

TEST_CASE("diophantine constant monotonicity") {
  for (const auto& f : {Frequency::golden(), Frequency::silver(), expand_cf(0.3819660112501051 * 0.9, 30)}) {
    double prev = 1e300;
    for (std::int64_t jm : {1, 3, 10, 30, 100, 1000, 5000}) {
      const double b = fit_diophantine(f, 2.0, jm).b;
      CHECK(b <= prev);
      prev = b;
    }
    double prevr = 0.0;
    for (double r : {1.1, 1.5, 2.0, 2.5, 3.0}) {
      const double b = fit_diophantine(f, r, 2000).b;
      CHECK(b >= prevr);
      prevr = b;
    }
  }
}

TEST_CASE("denominator growth check") {
  const auto g = Frequency::golden();
  CHECK(growth_check(g, fit_diophantine(g, 2.0, 10000)));
  const auto s = Frequency::silver();
  CHECK(growth_check(s, fit_diophantine(s, 2.0, 10000)));
  auto bad = fit_diophantine(g, 2.0, 10000);
  bad.b = 1e6;
  CHECK_FALSE(growth_check(g, bad));
}
