#include "qpc/trig_poly.hpp"

#include <algorithm>
#include <cmath>

#include "qpc/errors.hpp"

namespace qpc {

StripDomain::StripDomain(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw NumericalError(ErrorKind::InvalidArgument, "strip half-width must be positive");
}

TrigPoly TrigPoly::constant(cd c) { return monomial(0, c); }

TrigPoly TrigPoly::monomial(int k, cd c) {
  TrigPoly f;
  if (c != cd(0.0)) {
    f.lo_ = k;
    f.c_ = {c};
  }
  return f;
}

TrigPoly TrigPoly::from_dense(int lo, std::vector<cd> coeffs) {
  TrigPoly f;
  f.lo_ = lo;
  f.c_ = std::move(coeffs);
  f.trim();
  return f;
}

int TrigPoly::degree() const {
  if (is_zero()) return 0;
  return std::max(std::abs(min_freq()), std::abs(max_freq()));
}

cd TrigPoly::coeff(int k) const {
  if (is_zero() || k < min_freq() || k > max_freq()) return 0.0;
  return c_[static_cast<std::size_t>(k - lo_)];
}

cd TrigPoly::at_w(cd w) const {
  if (is_zero()) return 0.0;
  // Horner over the dense block, then multiply by w^lo.
  cd acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * w + *it;
  if (lo_ != 0) acc *= std::pow(w, lo_);
  return acc;
}

cd TrigPoly::operator()(cd z) const {
  const double x = z.real() - std::floor(z.real());
  const double r = std::exp(-kTwoPi * z.imag());
  return at_w(std::polar(r, kTwoPi * x));
}

cd TrigPoly::at(double x) const {
  const double t = x - std::floor(x);
  return at_w(std::polar(1.0, kTwoPi * t));
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const int lo = std::min(min_freq(), o.min_freq());
  const int hi = std::max(max_freq(), o.max_freq());
  std::vector<cd> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (int k = min_freq(); k <= max_freq(); ++k) out[k - lo] += coeff(k);
  for (int k = o.min_freq(); k <= o.max_freq(); ++k) out[k - lo] += o.coeff(k);
  lo_ = lo;
  c_ = std::move(out);
  trim();
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) { return *this += o * cd(-1.0); }

TrigPoly& TrigPoly::operator*=(cd s) {
  if (s == cd(0.0)) {
    c_.clear();
    lo_ = 0;
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cd> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return TrigPoly::from_dense(a.lo_ + b.lo_, std::move(out));
}

TrigPoly TrigPoly::shifted(double s) const {
  TrigPoly f = *this;
  const double t = s - std::floor(s);
  for (int k = min_freq(); k <= max_freq() && !is_zero(); ++k) {
    // k*t reduced mod 1 before the trig call.
    double kt = static_cast<double>(k) * t;
    kt -= std::floor(kt);
    f.c_[k - lo_] *= std::polar(1.0, kTwoPi * kt);
  }
  return f;
}

TrigPoly TrigPoly::conj_reflected() const {
  if (is_zero()) return {};
  std::vector<cd> out(c_.rbegin(), c_.rend());
  for (auto& c : out) c = std::conj(c);
  return from_dense(-max_freq(), std::move(out));
}

TrigPoly TrigPoly::derivative(int order) const {
  TrigPoly f = *this;
  for (int k = min_freq(); k <= max_freq() && !is_zero(); ++k)
    f.c_[k - lo_] *= std::pow(cd(0.0, kTwoPi * k), order);
  f.trim();
  return f;
}

bool TrigPoly::is_real_valued(double tol) const {
  const int d = degree();
  for (int k = 0; k <= d; ++k)
    if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
  return true;
}

double TrigPoly::coefficient_bound(double delta) const {
  double s = 0.0;
  for (int k = min_freq(); k <= max_freq() && !is_zero(); ++k)
    s += std::abs(coeff(k)) * std::exp(kTwoPi * delta * std::abs(k));
  return s;
}

void TrigPoly::trim() {
  std::size_t first = 0;
  while (first < c_.size() && c_[first] == cd(0.0)) ++first;
  if (first == c_.size()) {
    c_.clear();
    lo_ = 0;
    return;
  }
  std::size_t last = c_.size();
  while (c_[last - 1] == cd(0.0)) --last;
  c_ = std::vector<cd>(c_.begin() + static_cast<std::ptrdiff_t>(first),
                       c_.begin() + static_cast<std::ptrdiff_t>(last));
  lo_ += static_cast<int>(first);
}

Truncation truncate(const TrigPoly& f, int deg, const StripDomain& dom) {
  Truncation t;
  if (f.is_zero()) return t;
  std::vector<cd> kept;
  const int lo = std::max(f.min_freq(), -deg);
  const int hi = std::min(f.max_freq(), deg);
  for (int k = lo; k <= hi; ++k) kept.push_back(f.coeff(k));
  if (lo <= hi) t.poly = TrigPoly::from_dense(lo, std::move(kept));
  for (int k = f.min_freq(); k <= f.max_freq(); ++k)
    if (std::abs(k) > deg)
      t.tail_bound += std::abs(f.coeff(k)) * std::exp(kTwoPi * dom.delta() * std::abs(k));
  return t;
}

nlohmann::json to_json(const TrigPoly& f) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int k = f.min_freq(); k <= f.max_freq() && !f.is_zero(); ++k) {
    const cd c = f.coeff(k);
    if (c != cd(0.0)) coeffs.push_back({k, c.real(), c.imag()});
  }
  return {{"degree", f.degree()}, {"coeffs", coeffs}};
}

TrigPoly trig_poly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coeffs"))
    throw ConfigError("coeffs", "trig polynomial must be an object with a coeffs array");
  TrigPoly f;
  for (const auto& e : j.at("coeffs")) {
    if (!e.is_array() || e.size() != 3) throw ConfigError("coeffs", "entries must be [k, re, im]");
    f += TrigPoly::monomial(e[0].get<int>(), cd(e[1].get<double>(), e[2].get<double>()));
  }
  if (j.contains("degree") && j.at("degree").get<int>() < f.degree())
    throw ConfigError("degree", "declared degree below stored frequencies");
  return f;
}

}  // namespace qpc
