#include "qpc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qpc/errors.hpp"

namespace qpc {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative guard for sub-contours during subdivision. The top-level contour
// uses the stricter 1e-10 guard.
constexpr double kSubGuard = 1e-13;
constexpr double kTopGuard = 1e-10;

double frac(double x) { return x - std::floor(x); }

double periodic_distance(double a, double b) {
  const double d = frac(a - b);
  return std::min(d, 1.0 - d);
}

// Argument increment of g between ta and tb. The interval is accepted once
// the increment is below pi/4 and agrees with the two half-intervals.
double arg_increment(const std::function<cd(double)>& g, double ta, double tb, cd ga, cd gb,
                     double guard, int depth) {
  const double whole = std::arg(gb / ga);
  const double tm = 0.5 * (ta + tb);
  const cd gm = g(tm);
  if (std::abs(gm) < guard)
    throw NumericalError(ErrorKind::ZeroOnContour, "|f| below guard on contour");
  const double left = std::arg(gm / ga);
  const double right = std::arg(gb / gm);
  if (std::abs(whole) <= kPi / 4 && std::abs(left + right - whole) < 1e-9) return left + right;
  if (depth == 0) throw NumericalError(ErrorKind::NonConvergence, "argument tracking did not resolve");
  return arg_increment(g, ta, tm, ga, gm, guard, depth - 1) +
         arg_increment(g, tm, tb, gm, gb, guard, depth - 1);
}

// Total argument change of g along the parameter interval [0, 1].
double path_argument(const std::function<cd(double)>& g, int samples, double guard) {
  std::vector<cd> vals(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) {
    vals[i] = g(static_cast<double>(i) / samples);
    if (std::abs(vals[i]) < guard)
      throw NumericalError(ErrorKind::ZeroOnContour, "|f| below guard on contour");
  }
  double total = 0.0;
  for (int i = 0; i < samples; ++i)
    total += arg_increment(g, static_cast<double>(i) / samples, static_cast<double>(i + 1) / samples,
                           vals[i], vals[i + 1], guard, 48);
  return total;
}

int to_winding(double total_arg) {
  const double w = total_arg / (2.0 * kPi);
  const double n = std::round(w);
  if (std::abs(w - n) > 0.05)
    throw NumericalError(ErrorKind::NonConvergence, "non-integer winding number");
  return static_cast<int>(n);
}

int initial_samples(const TrigPoly& f, int requested) {
  const int span = f.max_freq() - f.min_freq() + 1;
  return std::max({requested, 64, 8 * span});
}

struct Box {
  double x0, x1, y0, y1;
  int count;
  double diameter() const { return std::hypot(x1 - x0, y1 - y0); }
};

// Zeros inside the z-plane rectangle, from the winding along its boundary.
int count_in_box(const TrigPoly& f, double x0, double x1, double y0, double y1, int samples,
                 double guard) {
  auto edge = [&](cd a, cd b) {
    return path_argument([&](double t) { return f(a + t * (b - a)); }, samples, guard);
  };
  const cd p00(x0, y0), p10(x1, y0), p11(x1, y1), p01(x0, y1);
  return to_winding(edge(p00, p10) + edge(p10, p11) + edge(p11, p01) + edge(p01, p00));
}

double guard_scale(const TrigPoly& f, const AnnulusContour& c) {
  const double delta = std::max(std::abs(c.y_top()), std::abs(c.y_bottom()));
  return strip_norm(f, StripDomain(delta));
}

// Golden-section maximization of phi on [a, b].
double golden_max(const std::function<double(double)>& phi, double a, double b, double xtol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

AnnulusContour AnnulusContour::from_strip(const StripDomain& dom, int samples) {
  AnnulusContour c;
  c.inner_radius = std::exp(-kTwoPi * dom.delta());
  c.outer_radius = std::exp(kTwoPi * dom.delta());
  c.samples_per_circle = samples;
  c.validate();
  return c;
}

double AnnulusContour::y_top() const { return -std::log(inner_radius) / kTwoPi; }
double AnnulusContour::y_bottom() const { return -std::log(outer_radius) / kTwoPi; }

void AnnulusContour::validate() const {
  if (!(inner_radius > 0.0 && inner_radius < 1.0 && outer_radius > 1.0 && std::isfinite(outer_radius)))
    throw NumericalError(ErrorKind::InvalidArgument, "annulus radii must satisfy 0 < r_in < 1 < r_out");
  if (samples_per_circle < 64)
    throw NumericalError(ErrorKind::InvalidArgument, "samples_per_circle must be at least 64");
}

cd eval(const TrigPoly& f, cd z, const StripDomain& dom) {
  if (std::abs(z.imag()) > dom.delta())
    throw NumericalError(ErrorKind::InvalidArgument, "evaluation point outside the strip");
  return f(z);
}

double strip_norm(const TrigPoly& f, const StripDomain& dom) {
  if (f.is_zero()) return 0.0;
  if (f.min_freq() == f.max_freq())  // single mode: modulus constant on each line
    return std::abs(f.coeff(f.min_freq())) * std::exp(kTwoPi * dom.delta() * std::abs(f.min_freq()));
  const int span = f.max_freq() - f.min_freq() + 1;
  const int m = std::max(1024, 64 * span);
  double best = 0.0;
  for (double y : {dom.delta(), -dom.delta()}) {
    auto modulus = [&](double x) { return std::abs(f(cd(x, y))); };
    std::vector<double> vals(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) vals[i] = modulus(static_cast<double>(i) / m);
    // Refine every sampled local maximum within 1% of the running best.
    const double top = *std::max_element(vals.begin(), vals.end());
    for (int i = 0; i < m; ++i) {
      const double prev = vals[(i + m - 1) % m], next = vals[(i + 1) % m];
      if (vals[i] >= prev && vals[i] >= next && vals[i] >= 0.99 * top) {
        const double x = golden_max(modulus, static_cast<double>(i - 1) / m,
                                    static_cast<double>(i + 1) / m, 1e-13);
        best = std::max({best, vals[i], modulus(x)});
      }
    }
    best = std::max(best, top);
  }
  return best;
}

int count_zeros(const TrigPoly& f, const AnnulusContour& contour) {
  contour.validate();
  if (f.is_zero()) throw NumericalError(ErrorKind::NotRepresentable, "f is identically zero");
  const double guard = kTopGuard * guard_scale(f, contour);
  const int samples = initial_samples(f, contour.samples_per_circle);
  auto circle = [&](double r) {
    return path_argument([&](double t) { return f.at_w(std::polar(r, kTwoPi * t)); }, samples, guard);
  };
  // Outer minus inner: the pole at w = 0 contributes equally to both.
  return to_winding(circle(contour.outer_radius) - circle(contour.inner_radius));
}

std::vector<ZeroCluster> locate_zeros(const TrigPoly& f, const AnnulusContour& contour, double tol) {
  const int total = count_zeros(f, contour);
  if (total == 0) return {};
  if (!(tol > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "tol must be positive");

  const double scale = guard_scale(f, contour);
  const double guard = kSubGuard * scale;
  const double y0 = contour.y_bottom(), y1 = contour.y_top();
  const int samples = 16;

  // Pick a vertical cut x = xs away from every zero so the periodic strip
  // becomes one rectangle.
  double xs = 0.0;
  bool found = false;
  for (int k = 0; k < 64 && !found; ++k) {
    xs = frac(0.1234567 + 0.6180339887 * k);
    double lo = INFINITY;
    for (int i = 0; i <= 256; ++i) lo = std::min(lo, std::abs(f(cd(xs, y0 + (y1 - y0) * i / 256.0))));
    found = lo > 1e-6 * scale;
  }
  if (!found) throw NumericalError(ErrorKind::NonConvergence, "no zero-free vertical cut found");

  std::vector<Box> leaves;
  std::vector<Box> stack{{xs, xs + 1.0, y0, y1, total}};
  static constexpr double kJitter[] = {0.0, 0.0137, -0.0231, 0.0311, -0.0419, 0.0523, -0.0617, 0.0733};
  while (!stack.empty()) {
    Box b = stack.back();
    stack.pop_back();
    if (b.count == 0) continue;
    if (b.diameter() <= tol) {
      leaves.push_back(b);
      continue;
    }
    const bool split_x = (b.x1 - b.x0) >= (b.y1 - b.y0);
    bool split_ok = false;
    for (double jit : kJitter) {
      Box lo = b, hi = b;
      try {
        if (split_x) {
          const double s = 0.5 * (b.x0 + b.x1) + jit * (b.x1 - b.x0);
          lo.x1 = hi.x0 = s;
        } else {
          const double s = 0.5 * (b.y0 + b.y1) + jit * (b.y1 - b.y0);
          lo.y1 = hi.y0 = s;
        }
        lo.count = count_in_box(f, lo.x0, lo.x1, lo.y0, lo.y1, samples, guard);
        hi.count = count_in_box(f, hi.x0, hi.x1, hi.y0, hi.y1, samples, guard);
      } catch (const NumericalError&) {
        continue;
      }
      if (lo.count < 0 || hi.count < 0 || lo.count + hi.count != b.count) continue;
      stack.push_back(hi);
      stack.push_back(lo);
      split_ok = true;
      break;
    }
    // Below the resolvable scale (|f| under the guard near a multiple zero)
    // the box is kept as an unresolved cluster and polished below.
    if (!split_ok) leaves.push_back(b);
  }

  // Merge touching leaves into clusters.
  std::vector<int> parent(leaves.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const Box &a = leaves[i], &b = leaves[j];
      const double dx = periodic_distance(0.5 * (a.x0 + a.x1), 0.5 * (b.x0 + b.x1));
      const double dy = std::abs(0.5 * (a.y0 + a.y1) - 0.5 * (b.y0 + b.y1));
      if (dx <= 0.5 * ((a.x1 - a.x0) + (b.x1 - b.x0)) * 1.001 &&
          dy <= 0.5 * ((a.y1 - a.y0) + (b.y1 - b.y0)) * 1.001)
        parent[find(static_cast<int>(j))] = find(static_cast<int>(i));
    }

  std::vector<ZeroCluster> out;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (find(static_cast<int>(i)) != static_cast<int>(i)) continue;
    int mult = 0;
    double extent = 0.0;
    cd centroid = 0.0;
    const double ref = 0.5 * (leaves[i].x0 + leaves[i].x1);
    for (std::size_t j = 0; j < leaves.size(); ++j) {
      if (find(static_cast<int>(j)) != static_cast<int>(i)) continue;
      const Box& b = leaves[j];
      double cx = 0.5 * (b.x0 + b.x1);
      cx = ref + std::remainder(cx - ref, 1.0);  // unwrap next to the reference leaf
      centroid += static_cast<double>(b.count) * cd(cx, 0.5 * (b.y0 + b.y1));
      mult += b.count;
      extent = std::max(extent, b.diameter());
    }
    centroid /= static_cast<double>(mult);

    // Newton on f^(m-1), which has a simple zero at a zero of order m.
    const TrigPoly g = f.derivative(mult - 1), dg = f.derivative(mult);
    cd z = centroid;
    for (int it = 0; it < 40; ++it) {
      const cd d = dg(z);
      if (d == cd(0.0)) break;
      const cd step = g(z) / d;
      z -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    const double reach = std::max(tol, extent);
    if (!(std::abs(z - centroid) <= reach && std::abs(g(z)) <= std::abs(g(centroid)))) z = centroid;
    out.push_back({cd(frac(z.real()), z.imag()), mult});
  }
  std::sort(out.begin(), out.end(),
            [](const ZeroCluster& a, const ZeroCluster& b) { return a.location.real() < b.location.real(); });
  return out;
}

cd taylor_coeff_termwise(const TrigPoly& f, cd z0, int j) {
  if (j < 0) throw NumericalError(ErrorKind::InvalidArgument, "negative Taylor index");
  double factorial = 1.0;
  for (int i = 2; i <= j; ++i) factorial *= i;
  return f.derivative(j)(z0) / factorial;
}

cd taylor_coeff(const TrigPoly& f, cd z0, int j, const AnnulusContour& contour) {
  contour.validate();
  if (j < 0) throw NumericalError(ErrorKind::InvalidArgument, "negative Taylor index");
  const double room = std::min(contour.y_top() - z0.imag(), z0.imag() - contour.y_bottom());
  if (!(room > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "z0 not strictly inside contour");
  const double rho = std::min(0.9 * room, 1.0 / (kTwoPi * std::max(1, f.degree())));
  const int n = 128 + 2 * j;
  cd acc = 0.0;
  for (int m = 0; m < n; ++m) {
    const double theta = kTwoPi * m / n;
    acc += f(z0 + std::polar(rho, theta)) * std::polar(1.0, -j * theta);
  }
  return acc / (static_cast<double>(n) * std::pow(rho, j));
}

namespace detail {

std::vector<ZeroCluster> near_torus_zeros(const TrigPoly& f, double delta, double tol) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return locate_zeros(f, AnnulusContour::from_strip(StripDomain(delta * (1.0 + 0.13 * attempt))), tol);
    } catch (const NumericalError& e) {
      if (e.kind() != ErrorKind::ZeroOnContour && e.kind() != ErrorKind::NonConvergence) throw;
    }
  }
  throw NumericalError(ErrorKind::ZeroOnContour, "zeros cluster on every trial contour near the torus");
}

double sublevel_length(const std::function<double(double)>& h, std::vector<double> pts, double xtol) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto crossing = [&](double a, double b, double ha) {
    // h(a) and h(b) differ in sign; returns the crossing point.
    while (b - a > xtol) {
      const double m = 0.5 * (a + b);
      const double hm = h(m);
      if ((hm < 0.0) == (ha < 0.0)) {
        a = m;
        ha = hm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  double length = 0.0;
  double prev_x = pts.front(), prev_h = h(prev_x);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double x = pts[i], hx = h(x);
    const bool in_a = prev_h < 0.0, in_b = hx < 0.0;
    if (in_a && in_b) {
      length += x - prev_x;
    } else if (in_a != in_b) {
      const double c = crossing(prev_x, x, prev_h);
      length += in_a ? c - prev_x : x - c;
    }
    prev_x = x;
    prev_h = hx;
  }
  return length;
}

}  // namespace detail

double mean_log(const TrigPoly& f) {
  if (f.is_zero()) throw NumericalError(ErrorKind::IdenticallyZero, "mean_log of the zero function");
  if (f.min_freq() == f.max_freq()) return std::log(std::abs(f.coeff(f.min_freq())));

  // Divide out every zero near the torus; each factor (w - r) contributes
  // log max(1, |r|) exactly, and the remainder is zero-free on an annulus.
  const auto zeros = detail::near_torus_zeros(f);
  double jensen = 0.0;
  std::vector<std::pair<cd, int>> factors;
  for (const auto& z : zeros) {
    const cd r = std::exp(cd(0.0, kTwoPi) * z.location);
    jensen += z.multiplicity * std::max(0.0, std::log(std::abs(r)));
    factors.emplace_back(r, z.multiplicity);
  }
  auto log_remainder = [&](double x) {
    const cd w = std::polar(1.0, kTwoPi * x);
    double v = std::log(std::abs(f.at_w(w)));
    for (const auto& [r, m] : factors) v -= m * std::log(std::abs(w - r));
    return v;
  };
  const int span = f.max_freq() - f.min_freq() + 1;
  int n = std::max(256, 8 * span);
  double prev = NAN;
  for (; n <= (1 << 18); n *= 2) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += log_remainder((i + 0.5) / n);
    const double cur = s / n;
    if (std::abs(cur - prev) < 1e-13 * (1.0 + std::abs(cur))) return cur + jensen;
    prev = cur;
  }
  return prev + jensen;
}

double sublevel_measure(const TrigPoly& f, double eps) {
  if (f.is_zero()) throw NumericalError(ErrorKind::IdenticallyZero, "sublevel set of the zero function");
  if (!(eps > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "eps must be positive");
  if (f.min_freq() == f.max_freq()) return std::abs(f.coeff(f.min_freq())) < eps ? 1.0 : 0.0;

  constexpr int kGrid = 1 << 14;
  auto h = [&](double x) { return std::norm(f.at(x)) - eps * eps; };
  std::vector<double> pts;
  pts.reserve(kGrid + 16);
  std::vector<double> vals(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    pts.push_back(static_cast<double>(i) / kGrid);
    vals[i] = h(pts.back());
  }
  // Seeds: zeros near the torus, and refined local minima of |f| so that
  // sublevel intervals narrower than the grid are not missed.
  for (const auto& z : detail::near_torus_zeros(f)) pts.push_back(frac(z.location.real()));
  for (int i = 0; i < kGrid; ++i) {
    const double prev = vals[(i + kGrid - 1) % kGrid], next = vals[(i + 1) % kGrid];
    if (vals[i] <= prev && vals[i] <= next && vals[i] >= 0.0) {
      const double x = golden_max([&](double t) { return -h(t); }, static_cast<double>(i - 1) / kGrid,
                                  static_cast<double>(i + 1) / kGrid, 1e-13);
      pts.push_back(frac(x));
    }
  }
  // Rotate so that the scan starts at a point outside the sublevel set when
  // one exists; the periodic wrap is handled by closing at start + 1.
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::size_t start = 0;
  while (start < pts.size() && h(pts[start]) < 0.0) ++start;
  if (start == pts.size()) return 1.0;
  std::vector<double> rotated;
  rotated.reserve(pts.size() + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t k = (start + i) % pts.size();
    rotated.push_back(k >= start ? pts[k] : pts[k] + 1.0);
  }
  rotated.push_back(pts[start] + 1.0);
  return std::clamp(detail::sublevel_length(h, std::move(rotated), 1e-12), 0.0, 1.0);
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2)
    throw NumericalError(ErrorKind::InvalidArgument, "geometric grid needs 0 < lo < hi and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double r = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(r * i);
  g.back() = hi;
  return g;
}

TransversalityProfile fit_transversality(const TrigPoly& f) {
  return fit_transversality(f, geometric_grid(1e-6, 1e-2, 16));
}

TransversalityProfile fit_transversality(const TrigPoly& f, std::span<const double> eps_grid) {
  if (f.is_zero()) throw NumericalError(ErrorKind::IdenticallyZero, "transversality of the zero function");
  TransversalityProfile p;
  for (const auto& z : detail::near_torus_zeros(f))
    if (std::abs(z.location.imag()) < 1e-6) p.max_multiplicity = std::max(p.max_multiplicity, z.multiplicity);

  if (p.max_multiplicity == 0) {
    p.zero_free = true;
    p.alpha = 1.0;
    double lo = INFINITY;
    constexpr int kGrid = 1 << 14;
    for (int i = 0; i < kGrid; ++i) lo = std::min(lo, std::abs(f.at(static_cast<double>(i) / kGrid)));
    p.epsilon0 = lo;
    return p;
  }

  std::vector<double> eps(eps_grid.begin(), eps_grid.end());
  std::sort(eps.begin(), eps.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double e : eps) {
    const double m = sublevel_measure(f, e);
    p.samples.emplace_back(e, m);
    if (m > 0.0) {
      const double x = std::log(e), y = std::log(m);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  if (n < 2) throw NumericalError(ErrorKind::NonConvergence, "too few positive sublevel measures to fit");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  p.alpha = std::min(slope, 1.0);
  p.epsilon0 = eps.back();
  for (const auto& [e, m] : p.samples)
    if (!(m < std::pow(e, p.alpha))) {
      p.epsilon0 = e;
      break;
    }
  return p;
}

PolyaResult polya_check(std::span<const cd> coeffs, double y, double eps) {
  if (coeffs.size() < 2 || std::abs(coeffs.back() - cd(1.0)) > 1e-12)
    throw NumericalError(ErrorKind::NotMonic, "polynomial must be monic of degree >= 1");
  if (!(eps > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "eps must be positive");
  const int n = static_cast<int>(coeffs.size()) - 1;

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -coeffs[i];
  const Eigen::VectorXcd roots = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(companion, false).eigenvalues();

  auto p = [&](cd z) {
    cd acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  auto h = [&](double x) { return std::norm(p(cd(x, y))) - eps * eps; };

  // |p(z)| >= (min_i |z - r_i|)^n, so the set lies within eps^(1/n) of the
  // real parts of the roots.
  const double reach = std::pow(eps, 1.0 / n) * (1.0 + 1e-9) + 1e-12;
  std::vector<std::pair<double, double>> windows;
  for (int i = 0; i < n; ++i) windows.emplace_back(roots[i].real() - reach, roots[i].real() + reach);
  std::sort(windows.begin(), windows.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, w.second);
    else
      merged.push_back(w);
  }

  PolyaResult r;
  for (const auto& [a, b] : merged) {
    constexpr int kScan = 4096;
    std::vector<double> pts;
    std::vector<double> vals;
    for (int i = 0; i <= kScan; ++i) {
      pts.push_back(a + (b - a) * i / kScan);
      vals.push_back(h(pts.back()));
    }
    for (int i = 0; i < n; ++i)
      if (roots[i].real() > a && roots[i].real() < b) pts.push_back(roots[i].real());
    for (int i = 1; i < kScan; ++i)
      if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] && vals[i] >= 0.0)
        pts.push_back(golden_max([&](double t) { return -h(t); }, pts[i - 1], pts[i + 1], 1e-14));
    r.measure += detail::sublevel_length(h, std::move(pts), 1e-13 * std::max(1.0, b - a));
  }
  r.bound = std::pow(2.0, 2.0 - 1.0 / n) * std::pow(eps, 1.0 / n);
  r.ok = r.measure <= 4.0 * std::pow(eps, 1.0 / n);
  return r;
}

}  // namespace qpc
