#ifndef GDV_OPTIM_FRANK_WOLFE_HPP
#define GDV_OPTIM_FRANK_WOLFE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/market.hpp"

namespace gdv::optim {

/// A concave functional on measures with a supergradient oracle. value()
/// must accept points with tiny negative coordinates from round-off.
template <class F>
concept ConcaveFunctional = requires(const F& f, std::span<const double> q) {
  { f.value(q) } -> std::convertible_to<double>;
  { f.supergradient(q) } -> std::convertible_to<std::vector<double>>;
};

struct FwOptions {
  double tol = 1e-6;
  std::size_t max_iter = 200000;
};

struct FwResult {
  Measure point;
  double value;
  double gap;
  std::size_t iterations;
};

class FwBudgetExceeded : public SolverError {
 public:
  FwBudgetExceeded(FwResult best)
      : SolverError("frank-wolfe: iteration budget exhausted"), best_(std::move(best)) {}
  const FwResult& best() const noexcept { return best_; }

 private:
  FwResult best_;
};

namespace detail {

/// Step in [0, hi] maximizing a concave 1-D function, found by bisection on
/// the sign of its derivative. Working on the derivative rather than on
/// function values keeps full precision near the optimum.
template <class Slope>
double derivative_line_search(const Slope& slope, double hi) {
  if (slope(hi) >= 0.0) return hi;
  if (slope(0.0) <= 0.0) return 0.0;
  double a = 0.0, b = hi;
  for (int it = 0; it < 200 && b - a > 1e-17 * std::max(1.0, hi); ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if (slope(m) > 0.0) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Maximizes a concave functional over a nonempty measure polytope with
/// away-step Frank-Wolfe. The linear oracle is the cached vertex list when
/// available and the polytope LP otherwise. Terminates when the
/// Frank-Wolfe duality gap (an upper bound on suboptimality) is <= tol.
template <ConcaveFunctional F>
FwResult maximize_concave_over_polytope(const F& f, const MeasurePolytope& polytope, FwOptions opt = {}) {
  if (polytope.empty()) throw PreconditionError("maximize_concave_over_polytope: polytope is empty");
  const std::size_t n = polytope.dim();
  const auto& cached = polytope.cached_vertices();

  auto lmo = [&](const std::vector<double>& g) -> std::vector<double> {
    if (cached) {
      std::size_t best = 0;
      double bv = -1e300;
      for (std::size_t k = 0; k < cached->size(); ++k) {
        const double v = gdv::detail::dot(g, (*cached)[k].weights());
        if (v > bv + 1e-15) {
          bv = v;
          best = k;
        }
      }
      return (*cached)[best].weights();
    }
    auto r = polytope.maximize(g);
    return r->first.weights();
  };

  // Active set: atoms with convex weights.
  std::vector<std::vector<double>> atoms;
  std::vector<double> alpha;
  auto find_atom = [&](const std::vector<double>& v) -> std::size_t {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(atoms[k][i] - v[i]));
      if (d <= 1e-12) return k;
    }
    atoms.push_back(v);
    alpha.push_back(0.0);
    return atoms.size() - 1;
  };

  std::vector<double> x(n, 0.0);
  if (cached) {
    for (const auto& v : *cached) {
      atoms.push_back(v.weights());
      alpha.push_back(1.0 / static_cast<double>(cached->size()));
    }
  } else {
    auto v = lmo(std::vector<double>(n, 0.0));
    atoms.push_back(v);
    alpha.push_back(1.0);
  }
  auto rebuild = [&]() {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha[k] * atoms[k][i];
    }
  };
  rebuild();

  double gap = 0.0;
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    const std::vector<double> g = f.supergradient(x);
    const std::vector<double> s = lmo(g);
    const double gx = gdv::detail::dot(g, x);
    gap = gdv::detail::dot(g, s) - gx;
    if (gap <= opt.tol) {
      return FwResult{Measure::from_solver(x), f.value(x), std::max(gap, 0.0), it};
    }
    std::size_t away = 0;
    double worst = 1e300;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (alpha[k] <= 0.0) continue;
      const double v = gdv::detail::dot(g, atoms[k]);
      if (v < worst) {
        worst = v;
        away = k;
      }
    }
    const double away_gap = gx - worst;

    std::vector<double> d(n);
    double gmax;
    bool fw_step = gap >= away_gap;
    if (fw_step) {
      for (std::size_t i = 0; i < n; ++i) d[i] = s[i] - x[i];
      gmax = 1.0;
    } else {
      for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - atoms[away][i];
      gmax = alpha[away] / (1.0 - alpha[away]);
    }
    std::vector<double> y(n);
    auto slope = [&](double t) {
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + t * d[i];
      return gdv::detail::dot(f.supergradient(y), d);
    };
    const double step = detail::derivative_line_search(slope, gmax);

    if (fw_step) {
      const std::size_t k = find_atom(s);
      for (double& a : alpha) a *= (1.0 - step);
      alpha[k] += step;
    } else {
      for (double& a : alpha) a *= (1.0 + step);
      alpha[away] -= step;
      if (step >= gmax * (1.0 - 1e-12)) alpha[away] = 0.0;
    }
    // Drop vanished atoms.
    for (std::size_t k = atoms.size(); k-- > 0;) {
      if (alpha[k] <= 1e-15) {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(k));
        alpha.erase(alpha.begin() + static_cast<std::ptrdiff_t>(k));
      }
    }
    double tot = 0.0;
    for (double a : alpha) tot += a;
    for (double& a : alpha) a /= tot;
    rebuild();
  }
  throw FwBudgetExceeded(FwResult{Measure::from_solver(x), f.value(x), gap, opt.max_iter});
}

/// q . z, the linear case.
struct LinearFunctional {
  std::vector<double> z;
  double value(std::span<const double> q) const { return gdv::detail::dot(z, q); }
  std::vector<double> supergradient(std::span<const double>) const { return z; }
};

}  // namespace gdv::optim

#endif  // GDV_OPTIM_FRANK_WOLFE_HPP
