#include "rotrad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "rotrad/constants.hpp"
#include "rotrad/error.hpp"

namespace rotrad::quad {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

// Kronrod abscissae (descending) and weights; every second node is a
// Gauss node.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(result))
    throw AccuracyError("integrand is not finite on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]",
                        0.0, std::numeric_limits<double>::infinity());
  return {a, b, result, err};
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints) {
  if (!(cfg.rel_tol > 0.0)) throw DomainError("quadrature: rel_tol must be > 0");
  if (!(a < b)) return {};

  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  for (double x : cfg.split_points)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel, std::vector<Panel>, ByError> work;
  std::vector<Panel> done;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    value += p.value;
    error += p.error;
    work.push(p);
  }

  auto target = [&] { return std::max(cfg.abs_floor, cfg.rel_tol * std::abs(value)); };
  int panels = static_cast<int>(work.size());
  while (error > target() && !work.empty()) {
    Panel worst = work.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Panel cannot be split further in double precision.
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e-14 * std::max(std::abs(worst.a), std::abs(worst.b))) {
      work.pop();
      done.push_back(worst);
      continue;
    }
    if (panels + 1 > cfg.max_panels) {
      throw AccuracyError("adaptive quadrature did not converge within " +
                              std::to_string(cfg.max_panels) + " panels",
                          value, error);
    }
    work.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++panels;
  }
  while (!work.empty()) {
    done.push_back(work.top());
    work.pop();
  }

  std::sort(done.begin(), done.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadratureResult out;
  for (const Panel& p : done) {
    out.value += p.value;
    out.error += p.error;
  }
  out.panels = static_cast<int>(done.size());
  if (out.error > std::max(cfg.abs_floor, cfg.rel_tol * std::abs(out.value))) {
    throw AccuracyError("adaptive quadrature stalled: panels reached double-precision width",
                        out.value, out.error);
  }
  return out;
}

}  // namespace rotrad::quad
