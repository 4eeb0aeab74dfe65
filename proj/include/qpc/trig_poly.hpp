#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace qpc {

using cd = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Half-width of the strip |Im z| <= delta around the torus.
class StripDomain {
 public:
  explicit StripDomain(double delta);
  double delta() const { return delta_; }

 private:
  double delta_;
};

/// Finite Fourier series f(z) = sum_k f_k exp(2 pi i k z).
///
/// Coefficients are stored densely between the lowest and highest stored
/// frequency. In the variable w = exp(2 pi i z) the series is a Laurent
/// polynomial; most of the zero-structure code works in that picture.
class TrigPoly {
 public:
  TrigPoly() = default;  // the zero function
  static TrigPoly constant(cd c);
  static TrigPoly monomial(int k, cd c = 1.0);
  /// Coefficients for frequencies lo, lo+1, ..., lo+coeffs.size()-1.
  static TrigPoly from_dense(int lo, std::vector<cd> coeffs);

  int min_freq() const { return lo_; }
  int max_freq() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  /// max |k| over stored frequencies; 0 for the zero function.
  int degree() const;
  bool is_zero() const { return c_.empty(); }
  cd coeff(int k) const;
  std::span<const cd> dense() const { return c_; }

  cd operator()(cd z) const;
  /// Evaluation on the real torus.
  cd at(double x) const;
  /// Evaluation given w = exp(2 pi i z) directly.
  cd at_w(cd w) const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(cd s);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, cd s) { return a *= s; }
  friend TrigPoly operator*(cd s, TrigPoly a) { return a *= s; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend bool operator==(const TrigPoly& a, const TrigPoly& b) = default;

  /// x -> f(x + s).
  TrigPoly shifted(double s) const;
  /// The function x -> conj(f(x)) on the real torus: coefficient conj(f_{-k}) at k.
  TrigPoly conj_reflected() const;
  TrigPoly derivative(int order = 1) const;
  /// True when f is real on the torus (f_{-k} == conj(f_k) within tol).
  bool is_real_valued(double tol = 0.0) const;
  /// sum |f_k| exp(2 pi delta |k|), an upper bound for the strip norm.
  double coefficient_bound(double delta) const;
  /// Drops leading/trailing coefficients that are exactly zero.
  void trim();

 private:
  int lo_ = 0;
  std::vector<cd> c_;
};

/// Truncates an arbitrary coefficient sequence at degree `deg`, reporting
/// the strip-norm bound of the discarded tail.
struct Truncation {
  TrigPoly poly;
  double tail_bound = 0.0;
};
Truncation truncate(const TrigPoly& f, int deg, const StripDomain& dom);

// {"degree": n, "coeffs": [[k, re, im], ...]}
nlohmann::json to_json(const TrigPoly& f);
TrigPoly trig_poly_from_json(const nlohmann::json& j);

}  // namespace qpc
