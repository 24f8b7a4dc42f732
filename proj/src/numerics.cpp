#include "soliton/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soliton::numerics {

std::vector<double> fornberg_weights(double z, const std::vector<double>& nodes, int order) {
  // B. Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988).
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < order) throw std::invalid_argument("fornberg_weights: too few nodes");
  std::vector<std::vector<double>> c(nodes.size(), std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int s = mn; s >= 1; --s)
          c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int s = mn; s >= 1; --s)
        c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][order];
  return w;
}

std::vector<double> derivative_on_grid(const std::vector<double>& t,
                                       const std::vector<double>& f, int stencil) {
  const std::size_t n = t.size();
  if (f.size() != n) throw std::invalid_argument("derivative_on_grid: size mismatch");
  if (n < 2) throw std::invalid_argument("derivative_on_grid: need at least 2 samples");
  const std::size_t w = std::min<std::size_t>(stencil, n);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // window of `w` nodes containing i, centered where possible
    std::size_t lo = (i >= w / 2) ? i - w / 2 : 0;
    lo = std::min(lo, n - w);
    std::vector<double> nodes(t.begin() + lo, t.begin() + lo + w);
    const auto wt = fornberg_weights(t[i], nodes, 1);
    double acc = 0.0;
    for (std::size_t j = 0; j < w; ++j) acc += wt[j] * f[lo + j];
    out[i] = acc;
  }
  return out;
}

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1,1] (7-point Gauss embedded).
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodX[i]);
    fv[14 - i] = f(c + h * kKronrodX[i]);
  }
  fv[7] = f(c);
  double kron = kKronrodW[7] * fv[7];
  double gauss = kGaussW[3] * fv[7];
  for (int i = 0; i < 7; ++i) kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) gauss += kGaussW[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

double gk_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                   double rel_tol, int depth, int max_depth) {
  const GkResult r = gk15(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * std::abs(r.value));
  if (r.error <= tol || depth >= max_depth) return r.value;
  const double c = 0.5 * (a + b);
  return gk_adaptive(f, a, c, abs_tol * 0.5, rel_tol, depth + 1, max_depth) +
         gk_adaptive(f, c, b, abs_tol * 0.5, rel_tol, depth + 1, max_depth);
}

} // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b, double abs_tol,
                    double rel_tol, int max_depth) {
  if (a == b) return 0.0;
  return gk_adaptive(f, a, b, abs_tol, rel_tol, 0, max_depth);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect: no sign change on the given interval");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break; // interval collapsed to adjacent doubles
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

LinearFit fit_affine(const std::vector<double>& g, const std::vector<double>& y) {
  if (g.size() != y.size() || g.empty())
    throw std::invalid_argument("fit_affine: bad sample vectors");
  long double s0 = 0, s1 = 0, s2 = 0, r0 = 0, r1 = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s0 += 1.0L;
    s1 += g[i];
    s2 += static_cast<long double>(g[i]) * g[i];
    r0 += y[i];
    r1 += static_cast<long double>(g[i]) * y[i];
  }
  const long double det = s0 * s2 - s1 * s1;
  LinearFit fit;
  if (det == 0.0L) {
    fit.c0 = static_cast<double>(r0 / s0);
    fit.c1 = 0.0;
    return fit;
  }
  fit.c0 = static_cast<double>((r0 * s2 - r1 * s1) / det);
  fit.c1 = static_cast<double>((s0 * r1 - s1 * r0) / det);
  return fit;
}

std::vector<double> reflection_safe_grid(double span, std::size_t n) {
  if (n < 2 || !(span > 0.0)) throw std::invalid_argument("reflection_safe_grid: bad arguments");
  double h = span / static_cast<double>(n - 1);
  // Drop the mantissa to 40 bits: i*h is then exact for i < 2^13.
  int ex = 0;
  const double mant = std::frexp(h, &ex);
  h = std::ldexp(std::round(std::ldexp(mant, 40)), ex - 40);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * h;
  return t;
}

double hermite(double t, double t0, double t1, double f0, double f1, double d0, double d1) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 +
         (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * h * d1;
}

double hermite_derivative(double t, double t0, double t1, double f0, double f1, double d0,
                          double d1) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * f0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * f1 +
          (3 * s2 - 2 * s) * h * d1) /
         h;
}

} // namespace soliton::numerics
