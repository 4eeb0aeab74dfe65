#pragma once

#include <cstdint>
#include <vector>

namespace qpc {

enum class SurdTag { None, Golden, Silver };

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

/// Rotation number beta in (0,1) with a finite continued-fraction prefix.
///
/// Convergents are stored for n = 1..depth (q_1 = a_1); the trivial q_0 = 1
/// is implicit. Quadratic surds keep their exact periodic digits and an
/// exact error formula so |beta - p_n/q_n| does not suffer from cancellation.
class Frequency;
/// Continued-fraction expansion of a real beta in (0,1).
Frequency expand_cf(double beta, int depth);
Frequency expand_cf(SurdTag tag, int depth);

class Frequency {
 public:
  static Frequency golden(int depth = 40);  // (sqrt(5) - 1) / 2
  static Frequency silver(int depth = 24);  // sqrt(2) - 1
  /// Expands the exact binary value of `beta`.
  static Frequency decimal(double beta, int depth = 40);
  static Frequency rational(std::int64_t p, std::int64_t q);

  double beta() const { return static_cast<double>(beta_); }
  long double beta_ld() const { return beta_; }
  SurdTag tag() const { return tag_; }
  /// True when the expansion terminated (rational beta).
  bool is_rational() const { return rational_; }
  /// True when the requested depth was cut short by 64-bit overflow.
  bool depth_capped() const { return capped_; }
  const std::vector<std::int64_t>& digits() const { return digits_; }
  const std::vector<Convergent>& convergents() const { return conv_; }
  /// q_0 = 1 followed by the distinct stored denominators.
  std::vector<std::int64_t> denominators() const;

  /// beta - p_n/q_n for the stored convergent with index i (0-based, i.e. n = i+1).
  long double approximation_error(std::size_t i) const;
  /// frac(j * beta), reduced through the deepest convergent.
  long double frac_multiple(std::int64_t j) const;
  /// frac(x + j * beta).
  double orbit_phase(double x, std::int64_t j) const;

 private:
  friend Frequency expand_cf(double beta, int depth);
  friend Frequency expand_cf(SurdTag tag, int depth);
  void push_digit(std::int64_t a);

  long double beta_ = 0.0L;
  SurdTag tag_ = SurdTag::None;
  bool rational_ = false;
  bool capped_ = false;
  std::int64_t rp_ = 0, rq_ = 1;  // exact value when rational_
  std::vector<std::int64_t> digits_;
  std::vector<Convergent> conv_;
};

struct OstrowskiDigits {
  std::int64_t n = 0;
  std::vector<std::int64_t> basis;   // q_0 = 1, q_1, ..., q_s (distinct)
  std::vector<std::int64_t> digits;  // l_0 .. l_s
};

/// Greedy representation n = sum_k l_k q_k.
OstrowskiDigits ostrowski(std::int64_t n, const Frequency& freq);

struct DiophantineParams {
  double b = 0.0;
  double r = 2.0;
  std::int64_t j_max = 0;
};

/// Largest b with |sin(2 pi j beta)| > b / j^r verified for 1 <= j <= j_max.
DiophantineParams fit_diophantine(const Frequency& freq, double r = 2.0, std::int64_t j_max = 10000);

/// Checks q_{k+1} <= (2 pi / b) q_k^r and s <= 2 log q_s / log 2 over the
/// stored denominators.
bool growth_check(const Frequency& freq, const DiophantineParams& params);

}  // namespace qpc
