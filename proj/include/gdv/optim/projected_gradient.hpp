#ifndef GDV_OPTIM_PROJECTED_GRADIENT_HPP
#define GDV_OPTIM_PROJECTED_GRADIENT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "gdv/core.hpp"

namespace gdv::optim {

struct PgOptions {
  std::size_t max_iter = 10000;
  double tol = 1e-12;  // on the projected-gradient step length
  /// Stop as soon as the objective drops to this level.
  double target = -std::numeric_limits<double>::infinity();
};

struct PgResult {
  std::vector<double> x;
  double value;
  std::size_t iterations;
  bool converged;
};

/// Minimizes a differentiable convex function over the nonnegative orthant
/// by projected gradient with backtracking on the projection arc. Starts
/// from x0 (clamped to the orthant).
template <class Value, class Grad>
PgResult minimize_nonnegative(const Value& value, const Grad& grad, std::vector<double> x0, PgOptions opt = {}) {
  for (double& v : x0) v = std::max(v, 0.0);
  std::vector<double> x = std::move(x0);
  double fx = value(x);
  if (x.empty() || fx <= opt.target) return {x, fx, 0, true};
  double t = 1.0;
  std::vector<double> y(x.size());
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    const std::vector<double> g = grad(x);
    bool accepted = false;
    double fy = fx;
    double step2 = 0.0;
    for (int bt = 0; bt < 80; ++bt) {
      double lin = 0.0;
      step2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = std::max(x[i] - t * g[i], 0.0);
        const double d = y[i] - x[i];
        lin += g[i] * d;
        step2 += d * d;
      }
      if (step2 == 0.0) return {x, fx, it, true};
      fy = value(y);
      if (fy <= fx + lin + step2 / (2.0 * t)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    // no decrease even for a vanishing step: stationary up to rounding
    if (!accepted) return {x, fx, it, true};
    // an accepted step that does not lower f means rounding has taken over
    const bool small = std::sqrt(step2) / t <= opt.tol || fy >= fx;
    x = y;
    fx = fy;
    if (fx <= opt.target || small) return {x, fx, it + 1, true};
    t *= 2.0;
  }
  return {x, fx, opt.max_iter, false};
}

}  // namespace gdv::optim

#endif  // GDV_OPTIM_PROJECTED_GRADIENT_HPP
