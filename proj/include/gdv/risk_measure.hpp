#ifndef GDV_RISK_MEASURE_HPP
#define GDV_RISK_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/market.hpp"
#include "gdv/optim/frank_wolfe.hpp"
#include "gdv/optim/linear_program.hpp"

namespace gdv {

/// Finitely many measures Q_i with penalties c_i >= 0, min c_i = 0.
struct FiniteListPenalty {
  std::vector<Measure> measures;
  std::vector<double> penalties;
};

/// Zero penalty on a polytope of measures (coherent).
struct WorstCasePenalty {
  MeasurePolytope polytope;
};

/// Two atoms, c(Q) = Q(first atom)^2 over all measures.
struct QuadraticExamplePenalty {};

/// (1/gamma) * relative entropy to the reference measure, over all measures.
struct EntropicPenalty {
  double gamma;
};

/// (1/gamma) * relative entropy restricted to a polytope, shifted so that its
/// minimum over the polytope is zero. This is the dual form of the
/// indifference price of the entropic measure.
struct EntropicOnPolytopePenalty {
  double gamma;
  MeasurePolytope domain;
  double shift;  // min over domain of (1/gamma) H(Q | P)
};

using PenaltySpec =
    std::variant<FiniteListPenalty, WorstCasePenalty, QuadraticExamplePenalty, EntropicPenalty, EntropicOnPolytopePenalty>;

inline const char* penalty_kind(const PenaltySpec& spec) {
  struct V {
    const char* operator()(const FiniteListPenalty&) const { return "finite_list"; }
    const char* operator()(const WorstCasePenalty&) const { return "worst_case"; }
    const char* operator()(const QuadraticExamplePenalty&) const { return "quadratic_example"; }
    const char* operator()(const EntropicPenalty&) const { return "entropic"; }
    const char* operator()(const EntropicOnPolytopePenalty&) const { return "entropic_on_polytope"; }
  };
  return std::visit(V{}, spec);
}

namespace detail {

inline double relative_entropy(std::span<const double> q, std::span<const double> p) {
  double h = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) h += q[i] * std::log(q[i] / p[i]);
  }
  return h;
}

/// q . z - (1/gamma) H(q | p) - shift
struct EntropicObjective {
  std::vector<double> z;
  std::vector<double> p;
  double gamma;
  double shift;

  double value(std::span<const double> q) const {
    double v = -shift;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double qi = std::max(q[i], 0.0);
      v += qi * z[i];
      if (qi > 0.0) v -= qi * std::log(qi / p[i]) / gamma;
    }
    return v;
  }
  std::vector<double> supergradient(std::span<const double> q) const {
    std::vector<double> g(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double qi = std::max(q[i], 1e-300);
      g[i] = z[i] - (std::log(qi / p[i]) + 1.0) / gamma;
    }
    return g;
  }
};

inline constexpr double kEntropicFwTol = 1e-11;

}  // namespace detail

/// Result of a risk evaluation together with a measure attaining the
/// supremum in the dual representation.
struct RiskEvaluation {
  double value;
  Measure argmax;
};

/// A normalized convex risk measure on a finite space given in dual form
/// rho(x) = sup_Q { E_Q[-x] - c(Q) }.
class RiskMeasure {
 public:
  RiskMeasure(Space space, PenaltySpec penalty) : space_(std::move(space)), penalty_(std::move(penalty)) {
    validate();
  }

  static RiskMeasure finite_list(Space space, std::vector<Measure> measures, std::vector<double> penalties) {
    return RiskMeasure(std::move(space), FiniteListPenalty{std::move(measures), std::move(penalties)});
  }
  static RiskMeasure worst_case(const MeasurePolytope& polytope) {
    return RiskMeasure(polytope.space(), WorstCasePenalty{polytope});
  }
  static RiskMeasure quadratic_example(Space space) {
    return RiskMeasure(std::move(space), QuadraticExamplePenalty{});
  }
  static RiskMeasure entropic(Space space, double gamma) {
    return RiskMeasure(std::move(space), EntropicPenalty{gamma});
  }
  /// Entropic penalty restricted to a polytope and normalized on it.
  static RiskMeasure entropic_on_polytope(double gamma, const MeasurePolytope& domain) {
    if (!(gamma > 0.0)) throw InvalidArgument("entropic: gamma must be > 0");
    if (domain.empty()) throw InvalidArgument("entropic_on_polytope: empty domain");
    detail::EntropicObjective f{std::vector<double>(domain.dim(), 0.0), domain.space().probabilities(), gamma, 0.0};
    auto r = optim::maximize_concave_over_polytope(f, domain, {detail::kEntropicFwTol, 200000});
    return RiskMeasure(domain.space(), EntropicOnPolytopePenalty{gamma, domain, -r.value});
  }

  const Space& space() const noexcept { return space_; }
  const PenaltySpec& penalty() const noexcept { return penalty_; }
  const char* kind() const { return penalty_kind(penalty_); }

  /// Absolute accuracy of evaluate(): 0 for closed forms and LPs, the
  /// Frank-Wolfe gap bound for iterative variants.
  double accuracy() const {
    return std::holds_alternative<EntropicOnPolytopePenalty>(penalty_) ? 10.0 * detail::kEntropicFwTol : 0.0;
  }

  bool is_coherent() const {
    if (std::holds_alternative<WorstCasePenalty>(penalty_)) return true;
    if (auto* fl = std::get_if<FiniteListPenalty>(&penalty_)) {
      return std::all_of(fl->penalties.begin(), fl->penalties.end(), [](double c) { return c == 0.0; });
    }
    return false;
  }

  /// Polytope containing every measure with finite penalty, when the
  /// penalty is described that way (all variants but finite_list).
  std::optional<MeasurePolytope> penalty_domain() const {
    if (auto* w = std::get_if<WorstCasePenalty>(&penalty_)) return w->polytope;
    if (auto* e = std::get_if<EntropicOnPolytopePenalty>(&penalty_)) return e->domain;
    if (std::holds_alternative<FiniteListPenalty>(penalty_)) return std::nullopt;
    return MeasurePolytope::simplex(space_);
  }

  RiskEvaluation evaluate_detailed(const Claim& x) const {
    if (x.size() != space_.size()) throw DimensionError("RiskMeasure: claim/space size mismatch");
    const std::size_t n = space_.size();
    if (auto* fl = std::get_if<FiniteListPenalty>(&penalty_)) {
      std::size_t best = 0;
      double bv = -1e300;
      for (std::size_t i = 0; i < fl->measures.size(); ++i) {
        const double v = -fl->measures[i].expectation(x) - fl->penalties[i];
        if (v > bv) {
          bv = v;
          best = i;
        }
      }
      return {bv, fl->measures[best]};
    }
    if (auto* w = std::get_if<WorstCasePenalty>(&penalty_)) {
      std::vector<double> obj(n);
      for (std::size_t i = 0; i < n; ++i) obj[i] = -x[i];
      auto r = w->polytope.maximize(obj);
      return {r->second, r->first};
    }
    if (std::holds_alternative<QuadraticExamplePenalty>(penalty_)) {
      // sup_q { -q x1 - (1-q) x2 - q^2 }, maximizer q = clamp((x2 - x1)/2, 0, 1)
      const double a = x[1] - x[0];
      const double q = std::clamp(a / 2.0, 0.0, 1.0);
      return {-x[1] + q * a - q * q, Measure({q, 1.0 - q})};
    }
    if (auto* e = std::get_if<EntropicPenalty>(&penalty_)) {
      const auto& p = space_.probabilities();
      double mx = -1e300;
      for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, -e->gamma * x[i]);
      double s = 0.0;
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = p[i] * std::exp(-e->gamma * x[i] - mx);
        s += w[i];
      }
      for (double& v : w) v /= s;
      return {(mx + std::log(s)) / e->gamma, Measure::from_solver(std::move(w))};
    }
    const auto& e = std::get<EntropicOnPolytopePenalty>(penalty_);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = -x[i];
    // penalty is H/gamma - shift, so the objective gains +shift
    detail::EntropicObjective f{std::move(z), space_.probabilities(), e.gamma, -e.shift};
    auto r = optim::maximize_concave_over_polytope(f, e.domain, {detail::kEntropicFwTol, 200000});
    return {r.value, r.point};
  }

  double evaluate(const Claim& x) const { return evaluate_detailed(x).value; }
  double operator()(const Claim& x) const { return evaluate(x); }

  /// The stored penalty c(Q) (not necessarily the minimal one for finite_list).
  Extended penalty_at(const Measure& q, double tol = Tolerances::feasibility) const {
    if (auto* fl = std::get_if<FiniteListPenalty>(&penalty_)) {
      for (std::size_t i = 0; i < fl->measures.size(); ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) d = std::max(d, std::abs(fl->measures[i][k] - q[k]));
        if (d <= tol) return Extended::finite(fl->penalties[i]);
      }
      return Extended::plus_infinity();
    }
    return conjugate_of(q, tol);
  }

  /// rho*(Q) = sup_x { E_Q[-x] - rho(x) }.
  Extended conjugate_of(const Measure& q, double tol) const {
    if (q.size() != space_.size()) throw DimensionError("conjugate: measure/space size mismatch");
    if (auto* fl = std::get_if<FiniteListPenalty>(&penalty_)) {
      // Lower convex envelope: min sum mu_i c_i s.t. sum mu_i Q_i = Q, mu in simplex.
      // Exact equality first; the tol-slack version only if that is infeasible.
      const std::size_t k = fl->measures.size();
      auto solve = [&](double slack) {
        optim::LinearProgram lp(k);
        for (std::size_t i = 0; i < k; ++i) lp.objective[i] = -fl->penalties[i];
        lp.add_eq(std::vector<double>(k, 1.0), 1.0);
        for (std::size_t a = 0; a < q.size(); ++a) {
          std::vector<double> row(k);
          for (std::size_t i = 0; i < k; ++i) row[i] = fl->measures[i][a];
          if (slack == 0.0) {
            lp.add_eq(std::move(row), q[a]);
          } else {
            lp.add_le(row, q[a] + slack);
            lp.add_ge(std::move(row), q[a] - slack);
          }
        }
        return optim::solve_lp(lp);
      };
      auto out = solve(0.0);
      if (!out.optimal() && tol > 0.0) out = solve(tol);
      if (!out.optimal()) return Extended::plus_infinity();
      return Extended::finite(std::max(-out.value, 0.0));
    }
    if (auto* w = std::get_if<WorstCasePenalty>(&penalty_)) {
      return w->polytope.contains(q, tol) ? Extended::finite(0.0) : Extended::plus_infinity();
    }
    if (std::holds_alternative<QuadraticExamplePenalty>(penalty_)) return Extended::finite(q[0] * q[0]);
    if (auto* e = std::get_if<EntropicPenalty>(&penalty_)) {
      return Extended::finite(detail::relative_entropy(q.weights(), space_.probabilities()) / e->gamma);
    }
    const auto& e = std::get<EntropicOnPolytopePenalty>(penalty_);
    if (!e.domain.contains(q, tol)) return Extended::plus_infinity();
    return Extended::finite(
        std::max(detail::relative_entropy(q.weights(), space_.probabilities()) / e.gamma - e.shift, 0.0));
  }

 private:
  void validate() const {
    const std::size_t n = space_.size();
    if (auto* fl = std::get_if<FiniteListPenalty>(&penalty_)) {
      if (fl->measures.empty()) throw InvalidArgument("finite_list: at least one measure required");
      if (fl->measures.size() != fl->penalties.size()) {
        throw DimensionError("finite_list: measure/penalty count mismatch");
      }
      double mn = 1e300;
      for (std::size_t i = 0; i < fl->measures.size(); ++i) {
        if (fl->measures[i].size() != n) throw DimensionError("finite_list: measure/space size mismatch");
        const double c = fl->penalties[i];
        if (!std::isfinite(c) || c < 0.0) throw InvalidArgument("finite_list: penalties must be finite and >= 0");
        mn = std::min(mn, c);
      }
      if (mn > Tolerances::probability) {
        throw InvalidArgument("finite_list: minimum penalty must be 0 (normalization rho(0) = 0)");
      }
    } else if (auto* w = std::get_if<WorstCasePenalty>(&penalty_)) {
      if (!(w->polytope.space() == space_)) throw DimensionError("worst_case: polytope on a different space");
      if (w->polytope.empty()) throw InvalidArgument("worst_case: empty polytope");
    } else if (std::holds_alternative<QuadraticExamplePenalty>(penalty_)) {
      if (n != 2) throw InvalidArgument("quadratic_example: requires exactly two atoms");
    } else if (auto* e = std::get_if<EntropicPenalty>(&penalty_)) {
      if (!(e->gamma > 0.0) || !std::isfinite(e->gamma)) throw InvalidArgument("entropic: gamma must be > 0");
    } else {
      const auto& ep = std::get<EntropicOnPolytopePenalty>(penalty_);
      if (!(ep.gamma > 0.0) || !std::isfinite(ep.gamma)) throw InvalidArgument("entropic: gamma must be > 0");
      if (!(ep.domain.space() == space_) || ep.domain.empty()) {
        throw InvalidArgument("entropic_on_polytope: domain must be a nonempty polytope on the same space");
      }
    }
  }

  Space space_;
  PenaltySpec penalty_;
};

inline double evaluate(const RiskMeasure& rho, const Claim& x) { return rho.evaluate(x); }

/// rho*(Q); +inf sentinel outside the effective domain.
inline Extended conjugate(const RiskMeasure& rho, const Measure& q, double tol = Tolerances::feasibility) {
  return rho.conjugate_of(q, tol);
}

struct AxiomViolation {
  std::string axiom;
  Claim x;
  Claim y;
  double excess;
};

struct AxiomReport {
  std::size_t samples = 0;
  std::vector<AxiomViolation> violations;
  bool passed() const { return violations.empty(); }
};

namespace detail {

inline Claim random_claim(std::mt19937_64& rng, std::size_t n, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return Claim(std::move(v));
}

}  // namespace detail

/// Randomized check of normalization, monotonicity, cash invariance and
/// convexity for any evaluator double(const Claim&).
template <class Eval>
AxiomReport check_axioms(const Eval& rho, std::size_t atoms, std::size_t samples, std::uint64_t seed,
                         double tol = 1e-8) {
  if (samples < 1) throw InvalidArgument("axioms_check: samples must be >= 1");
  AxiomReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Claim zero = Claim::constant(atoms, 0.0);
  const double r0 = rho(zero);
  if (std::abs(r0) > std::max(Tolerances::feasibility, tol)) rep.violations.push_back({"normalization", zero, zero, std::abs(r0)});
  for (std::size_t s = 0; s < samples; ++s) {
    const Claim x = detail::random_claim(rng, atoms);
    std::vector<double> up(atoms);
    for (double& v : up) v = unit(rng);
    const Claim y = x + Claim(up);
    const double rx = rho(x);
    const double ry = rho(y);
    if (ry > rx + tol) rep.violations.push_back({"monotonicity", x, y, ry - rx});

    const double c = 6.0 * unit(rng) - 3.0;
    const double rc = rho(x + c);
    if (std::abs(rc - rx + c) > tol) rep.violations.push_back({"cash-invariance", x, Claim::constant(atoms, c), std::abs(rc - rx + c)});

    const Claim z = detail::random_claim(rng, atoms);
    const double lam = unit(rng);
    const double mix = rho(lam * x + (1.0 - lam) * z);
    const double chord = lam * rx + (1.0 - lam) * rho(z);
    if (mix > chord + tol) rep.violations.push_back({"convexity", x, z, mix - chord});
  }
  return rep;
}

inline AxiomReport axioms_check(const RiskMeasure& rho, std::size_t samples, std::uint64_t seed) {
  return check_axioms([&](const Claim& x) { return rho.evaluate(x); }, rho.space().size(), samples, seed,
                      1e-8 + 4.0 * rho.accuracy());
}

}  // namespace gdv

#endif  // GDV_RISK_MEASURE_HPP
