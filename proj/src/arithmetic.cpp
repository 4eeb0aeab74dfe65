#include "qpc/arithmetic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "qpc/errors.hpp"

namespace qpc {

namespace {

constexpr std::int64_t kMaxQ = std::int64_t{1} << 62;

long double fracl(long double x) { return x - std::floor(x); }

// Complete quotient of a purely periodic surd: golden 1 + beta, silver 2 + beta.
long double surd_tail(SurdTag tag) {
  switch (tag) {
    case SurdTag::Golden: return 0.5L * (1.0L + std::sqrt(5.0L));
    case SurdTag::Silver: return 1.0L + std::sqrt(2.0L);
    case SurdTag::None: break;
  }
  return 0.0L;
}

}  // namespace

void Frequency::push_digit(std::int64_t a) {
  const Convergent prev = conv_.empty() ? Convergent{0, 1} : conv_.back();
  const Convergent prev2 = conv_.size() < 2 ? (conv_.empty() ? Convergent{1, 0} : Convergent{0, 1})
                                            : conv_[conv_.size() - 2];
  __int128 p = static_cast<__int128>(a) * prev.p + prev2.p;
  __int128 q = static_cast<__int128>(a) * prev.q + prev2.q;
  if (q > kMaxQ || p > kMaxQ) {
    capped_ = true;
    return;
  }
  digits_.push_back(a);
  conv_.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
}

Frequency Frequency::golden(int depth) { return expand_cf(SurdTag::Golden, depth); }
Frequency Frequency::silver(int depth) { return expand_cf(SurdTag::Silver, depth); }
Frequency Frequency::decimal(double beta, int depth) { return expand_cf(beta, depth); }

Frequency Frequency::rational(std::int64_t p, std::int64_t q) {
  if (q <= 0 || p <= 0 || p >= q)
    throw NumericalError(ErrorKind::InvalidArgument, "rational frequency must lie in (0,1)");
  const std::int64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  Frequency f;
  f.beta_ = static_cast<long double>(p) / static_cast<long double>(q);
  f.rational_ = true;
  f.rp_ = p;
  f.rq_ = q;
  // Euclid on q / p gives the digits of p / q.
  std::int64_t num = q, den = p;
  while (den != 0) {
    f.push_digit(num / den);
    const std::int64_t r = num % den;
    num = den;
    den = r;
  }
  return f;
}

Frequency expand_cf(SurdTag tag, int depth) {
  if (tag == SurdTag::None) throw NumericalError(ErrorKind::InvalidArgument, "untagged surd");
  if (depth < 1) throw NumericalError(ErrorKind::InvalidArgument, "depth must be >= 1");
  Frequency f;
  f.tag_ = tag;
  f.beta_ = surd_tail(tag) - (tag == SurdTag::Golden ? 1.0L : 2.0L);
  const std::int64_t digit = tag == SurdTag::Golden ? 1 : 2;
  for (int i = 0; i < depth && !f.capped_; ++i) f.push_digit(digit);
  return f;
}

Frequency expand_cf(double beta, int depth) {
  if (!(beta > 0.0 && beta < 1.0)) throw NumericalError(ErrorKind::InvalidArgument, "beta must lie in (0,1)");
  if (depth < 1) throw NumericalError(ErrorKind::InvalidArgument, "depth must be >= 1");
  // A double is the dyadic rational m / 2^e; run Euclid on it exactly.
  int exp = 0;
  const double mant = std::frexp(beta, &exp);  // beta = mant * 2^exp, mant in [0.5, 1)
  std::int64_t m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  std::int64_t d = std::int64_t{1} << (53 - exp);
  const std::int64_t g = std::gcd(m, d);
  m /= g;
  d /= g;
  Frequency f;
  f.beta_ = static_cast<long double>(beta);
  std::int64_t num = d, den = m;
  for (int i = 0; i < depth && den != 0 && !f.capped_; ++i) {
    f.push_digit(num / den);
    const std::int64_t r = num % den;
    num = den;
    den = r;
  }
  if (den == 0 && !f.capped_) {
    f.rational_ = true;
    f.rp_ = m;
    f.rq_ = d;
  }
  return f;
}

std::vector<std::int64_t> Frequency::denominators() const {
  std::vector<std::int64_t> out{1};
  for (const auto& c : conv_)
    if (c.q > out.back()) out.push_back(c.q);
  return out;
}

long double Frequency::approximation_error(std::size_t i) const {
  const Convergent c = conv_.at(i);
  if (tag_ != SurdTag::None) {
    // beta - p_n/q_n = (-1)^n / (q_n (alpha q_n + q_{n-1})), alpha the complete quotient.
    const long double qprev = i == 0 ? 1.0L : static_cast<long double>(conv_[i - 1].q);
    const long double qn = static_cast<long double>(c.q);
    const long double sign = (i + 1) % 2 == 0 ? 1.0L : -1.0L;
    return sign / (qn * (surd_tail(tag_) * qn + qprev));
  }
  if (rational_) {
    const __int128 num = static_cast<__int128>(rp_) * c.q - static_cast<__int128>(c.p) * rq_;
    return static_cast<long double>(num) / (static_cast<long double>(rq_) * static_cast<long double>(c.q));
  }
  return beta_ - static_cast<long double>(c.p) / static_cast<long double>(c.q);
}

long double Frequency::frac_multiple(std::int64_t j) const {
  if (rational_) {
    const std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(j % rq_) * rp_) % rq_);
    return static_cast<long double>(r < 0 ? r + rq_ : r) / static_cast<long double>(rq_);
  }
  if (conv_.empty()) return fracl(static_cast<long double>(j) * beta_);
  // j beta = j p_n / q_n + j (beta - p_n / q_n).
  const std::size_t i = conv_.size() - 1;
  const Convergent c = conv_[i];
  std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(j % c.q) * c.p) % c.q);
  if (r < 0) r += c.q;
  return fracl(static_cast<long double>(r) / static_cast<long double>(c.q) +
               static_cast<long double>(j) * approximation_error(i));
}

double Frequency::orbit_phase(double x, std::int64_t j) const {
  return static_cast<double>(fracl(static_cast<long double>(x) + frac_multiple(j)));
}

OstrowskiDigits ostrowski(std::int64_t n, const Frequency& freq) {
  if (n < 1) throw NumericalError(ErrorKind::InvalidArgument, "ostrowski needs n >= 1");
  const auto q = freq.denominators();
  if (n >= q.back())
    throw NumericalError(ErrorKind::InsufficientDepth, "n is not below the largest stored denominator");
  std::size_t s = 0;
  while (s + 1 < q.size() && q[s + 1] <= n) ++s;
  OstrowskiDigits out;
  out.n = n;
  out.basis.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(s) + 1);
  out.digits.assign(s + 1, 0);
  std::int64_t rem = n;
  for (std::size_t k = s + 1; k-- > 0;) {
    out.digits[k] = rem / q[k];
    rem %= q[k];
  }
  return out;
}

DiophantineParams fit_diophantine(const Frequency& freq, double r, std::int64_t j_max) {
  if (j_max < 1) throw NumericalError(ErrorKind::InvalidArgument, "j_max must be >= 1");
  if (!(r > 1.0)) throw NumericalError(ErrorKind::InvalidArgument, "r must exceed 1");
  double b = std::numeric_limits<double>::infinity();
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const long double t = freq.frac_multiple(j);
    if (t == 0.0L)
      throw NumericalError(ErrorKind::DegenerateBeta, "sin(2 pi j beta) = 0 at j = " + std::to_string(j));
    const double s = std::abs(std::sin(static_cast<double>(2.0L * std::numbers::pi_v<long double> * t)));
    b = std::min(b, s * std::pow(static_cast<double>(j), r));
  }
  return {b, r, j_max};
}

bool growth_check(const Frequency& freq, const DiophantineParams& params) {
  const auto q = freq.denominators();
  if (q.size() < 2) throw NumericalError(ErrorKind::InvalidArgument, "need at least two convergents");
  const double scale = 2.0 * std::numbers::pi / params.b;
  for (std::size_t k = 0; k + 1 < q.size(); ++k)
    if (static_cast<double>(q[k + 1]) > scale * std::pow(static_cast<double>(q[k]), params.r)) return false;
  for (std::size_t s = 0; s < q.size(); ++s)
    if (static_cast<double>(s) > 2.0 * std::log(static_cast<double>(q[s])) / std::log(2.0) + 1e-12) return false;
  return true;
}

}  // namespace qpc
