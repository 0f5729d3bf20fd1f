#ifndef GDV_SHORTFALL_HPP
#define GDV_SHORTFALL_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/market.hpp"
#include "gdv/optim/bisect.hpp"
#include "gdv/optim/linear_program.hpp"
#include "gdv/optim/projected_gradient.hpp"
#include "gdv/superhedge.hpp"

namespace gdv {

/// Loss on the shortfall t >= 0: power t^p (p >= 1) or exponential e^{at} - 1.
class LossFunction {
 public:
  enum class Kind { power, exponential };

  static LossFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("loss: power exponent must be >= 1");
    return LossFunction(Kind::power, p);
  }
  static LossFunction exponential(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("loss: exponential rate must be > 0");
    return LossFunction(Kind::exponential, a);
  }
  /// "power:2" or "exp:0.5".
  static LossFunction parse(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw InvalidArgument("loss: expected kind:parameter, got '" + s + "'");
    const std::string kind = s.substr(0, colon);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(s.substr(colon + 1), &used);
      if (used != s.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidArgument("loss: bad parameter in '" + s + "'");
    }
    if (kind == "power") return power(v);
    if (kind == "exp" || kind == "exponential") return exponential(v);
    throw InvalidArgument("loss: unknown kind '" + kind + "'");
  }

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  std::string to_string() const {
    return std::string(kind_ == Kind::power ? "power:" : "exp:") + detail::format_double(param_);
  }

  double operator()(double t) const {
    return kind_ == Kind::power ? std::pow(t, param_) : std::expm1(param_ * t);
  }
  double derivative(double t) const {
    if (kind_ == Kind::power) return t > 0.0 ? param_ * std::pow(t, param_ - 1.0) : (param_ == 1.0 ? 1.0 : 0.0);
    return param_ * std::exp(param_ * t);
  }
  double inverse(double v) const {
    return kind_ == Kind::power ? std::pow(v, 1.0 / param_) : std::log1p(v) / param_;
  }

  bool operator==(const LossFunction&) const = default;

 private:
  LossFunction(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

struct ShortfallOptions {
  double tol = 1e-7;               // bisection width on the price
  std::size_t inner_iter = 10000;  // projected-gradient cap per feasibility test
};

class ShortfallMeasure {
 public:
  ShortfallMeasure(MarketCone market, LossFunction loss, double delta, ShortfallOptions opt = {})
      : market_(std::move(market)), loss_(loss), delta_(delta), opt_(opt) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("shortfall: delta must be > 0");
    if (!(opt.tol > 0.0)) throw InvalidArgument("shortfall: tol must be > 0");
  }

  const MarketCone& market() const noexcept { return market_; }
  const LossFunction& loss() const noexcept { return loss_; }
  double delta() const noexcept { return delta_; }
  const ShortfallOptions& options() const noexcept { return opt_; }

  /// Smallest expected loss over hedges lambda >= 0 at capital c; stops early
  /// once it is below delta.
  double min_expected_loss(double c, const Claim& x) const {
    const std::size_t n = market_.dim(), k = market_.generators().size();
    const auto& p = market_.space().probabilities();
    const auto& gens = market_.generators();
    if (k == 0) return expected_loss(c, x, {});
    if (loss_.kind() == LossFunction::Kind::exponential) return outer_approximation(c, x);
    if (loss_.kind() == LossFunction::Kind::power && loss_.parameter() == 1.0) {
      // min sum p_i s_i, s_i >= -(c + x_i + (G lambda)_i), s, lambda >= 0
      optim::LinearProgram lp(k + n);
      for (std::size_t i = 0; i < n; ++i) {
        lp.objective[k + i] = -p[i];
        std::vector<double> row(k + n, 0.0);
        for (std::size_t j = 0; j < k; ++j) row[j] = gens[j][i];
        row[k + i] = 1.0;
        lp.add_ge(std::move(row), -(c + x[i]));
      }
      const auto out = optim::solve_lp(lp);
      if (!out.optimal()) throw SolverError("shortfall: inner LP failed");
      return std::max(-out.value, 0.0);
    }
    auto value = [&](const std::vector<double>& lam) { return expected_loss(c, x, lam); };
    auto grad = [&](const std::vector<double>& lam) {
      const Claim pos = position(c, x, lam);
      std::vector<double> g(k, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (pos[i] >= 0.0) continue;
        const double w = p[i] * loss_.derivative(-pos[i]);
        for (std::size_t j = 0; j < k; ++j) g[j] -= w * gens[j][i];
      }
      return g;
    };
    optim::PgOptions o;
    o.max_iter = opt_.inner_iter;
    o.target = delta_;
    const auto r = optim::minimize_nonnegative(value, grad, std::vector<double>(k, 0.0), o);
    if (!r.converged && r.value > delta_) {
      throw SolverError("shortfall: inner solver hit its iteration cap; best expected loss " +
                        detail::format_double(r.value) + " at c = " + detail::format_double(c));
    }
    return r.value;
  }

  bool acceptable(double c, const Claim& x) const { return min_expected_loss(c, x) <= delta_; }

  /// rho_l(x) = inf{ c : some m in M has E[l((c + m + x)^-)] <= delta }.
  /// -inf when the market admits free lunches of unbounded size.
  double price(const Claim& x) const {
    if (x.size() != market_.dim()) throw DimensionError("shortfall: claim/space size mismatch");
    const Extended up = superhedging_cost(market_, x), down = superhedging_cost(market_, -x);
    if (!up.is_finite() || !down.is_finite()) return -std::numeric_limits<double>::infinity();
    auto pred = [&](double c) { return acceptable(c, x); };
    const double hi = up.value() + 1.0;
    double lo = -down.value() - loss_.inverse(delta_) - 1.0;
    double width = hi - lo;
    for (int e = 0; pred(lo); ++e) {
      if (e > 60) throw SolverError("shortfall: price unbounded below");
      width *= 2.0;
      lo = hi - width;
    }
    return optim::bisect(pred, lo, hi, opt_.tol);
  }
  double operator()(const Claim& x) const { return price(x); }

 private:
  // l(t^-) has a kink at 0 when l'(0) > 0, which stalls gradient steps.
  // Instead: min sum p_i eta_i over (lambda, s, eta) >= 0 with
  // s_i >= -(c + x + G lambda)_i and tangent cuts eta_i >= l(t) + l'(t)(s_i - t),
  // adding cuts at the current shortfalls until the bound decides.
  double outer_approximation(double c, const Claim& x) const {
    const std::size_t n = market_.dim(), k = market_.generators().size();
    const auto& p = market_.space().probabilities();
    const auto& gens = market_.generators();
    optim::LinearProgram lp(k + 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      lp.objective[k + n + i] = -p[i];
      std::vector<double> row(k + 2 * n, 0.0);
      for (std::size_t j = 0; j < k; ++j) row[j] = gens[j][i];
      row[k + i] = 1.0;
      lp.add_ge(std::move(row), -(c + x[i]));
    }
    auto add_cut = [&](std::size_t i, double t) {
      std::vector<double> row(k + 2 * n, 0.0);
      const double d = loss_.derivative(t);
      row[k + i] = d;
      row[k + n + i] = -1.0;
      lp.add_le(std::move(row), d * t - loss_(t));
    };
    const Claim start = x + c;
    for (std::size_t i = 0; i < n; ++i) {
      add_cut(i, 0.0);
      if (start[i] < 0.0) add_cut(i, -start[i]);
    }
    double best = expected_loss(c, x, std::vector<double>(k, 0.0));
    for (std::size_t it = 0; it < 200; ++it) {
      if (best <= delta_) return best;
      const auto out = optim::solve_lp(lp);
      if (!out.optimal()) throw SolverError("shortfall: outer approximation LP failed");
      const double lower = -out.value;
      if (lower > delta_) return lower;
      std::vector<double> lam(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(k));
      const Claim pos = position(c, x, lam);
      best = std::min(best, expected_loss(c, x, lam));
      if (best - lower <= 1e-13 * (1.0 + best)) return best;
      for (std::size_t i = 0; i < n; ++i) {
        if (pos[i] < 0.0) add_cut(i, -pos[i]);
      }
    }
    if (best <= delta_) return best;
    throw SolverError("shortfall: outer approximation hit its iteration cap; best expected loss " +
                      detail::format_double(best) + " at c = " + detail::format_double(c));
  }

  Claim position(double c, const Claim& x, const std::vector<double>& lam) const {
    Claim pos = x + c;
    if (!lam.empty()) pos = pos + market_.combine(lam);
    return pos;
  }
  double expected_loss(double c, const Claim& x, const std::vector<double>& lam) const {
    const Claim pos = position(c, x, lam);
    const auto& p = market_.space().probabilities();
    double s = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (pos[i] < 0.0) s += p[i] * loss_(-pos[i]);
    }
    return s;
  }

  MarketCone market_;
  LossFunction loss_;
  double delta_;
  ShortfallOptions opt_;
};

inline double shortfall_price(const ShortfallMeasure& sm, const Claim& x) { return sm.price(x); }

/// x -> rho_l(x) - rho_l(0).
class NormalizedShortfall {
 public:
  explicit NormalizedShortfall(ShortfallMeasure sm)
      : sm_(std::move(sm)), at_zero_(sm_.price(Claim::constant(sm_.market().dim(), 0.0))) {}
  double operator()(const Claim& x) const { return sm_.price(x) - at_zero_; }
  double at_zero() const noexcept { return at_zero_; }
  const ShortfallMeasure& measure() const noexcept { return sm_; }

 private:
  ShortfallMeasure sm_;
  double at_zero_;
};

inline NormalizedShortfall normalized_shortfall(const ShortfallMeasure& sm) { return NormalizedShortfall(sm); }

}  // namespace gdv

#endif  // GDV_SHORTFALL_HPP
