#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rotrad::quad {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_floor = 0.0;
  int max_panels = 4000;
  // Extra breakpoints; the radiation engine always adds every window edge.
  std::vector<double> split_points;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over
/// [a, b]. The interval is first cut at every breakpoint strictly inside
/// (a, b); the panel with the largest error estimate is bisected until the
/// summed error is below max(abs_floor, rel_tol * |value|). Endpoints are
/// never sampled.
///
/// Panels are summed in left-to-right order so the result does not depend
/// on the order in which panels were refined.
///
/// Throws AccuracyError (carrying the partial sum) once `max_panels` is
/// exceeded.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints = {});

}  // namespace rotrad::quad
