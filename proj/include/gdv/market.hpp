#ifndef GDV_MARKET_HPP
#define GDV_MARKET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/double_description.hpp"
#include "gdv/optim/linear_program.hpp"

namespace gdv {

/// Finite probability space: labelled atoms with a reference probability
/// that charges every atom.
class Space {
 public:
  Space(std::vector<std::string> atoms, std::vector<double> probabilities)
      : atoms_(std::move(atoms)), p_(std::move(probabilities)) {
    if (atoms_.empty()) throw InvalidArgument("Space: at least one atom required");
    if (atoms_.size() != p_.size()) throw DimensionError("Space: atom/probability count mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (!std::isfinite(p_[i]) || !(p_[i] > 0.0)) {
        throw InvalidArgument("Space: probability of atom '" + atoms_[i] + "' must be > 0");
      }
      s += p_[i];
    }
    if (std::abs(s - 1.0) > Tolerances::probability) {
      throw InvalidArgument("Space: probabilities must sum to 1");
    }
  }

  /// n atoms labelled w1..wn with uniform probability.
  static Space uniform(std::size_t n) {
    std::vector<std::string> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back("w" + std::to_string(i + 1));
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += p[i];
    p[n - 1] = 1.0 - s;
    return Space(std::move(a), std::move(p));
  }

  std::size_t size() const noexcept { return p_.size(); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& probabilities() const noexcept { return p_; }
  double p(std::size_t i) const { return p_.at(i); }

  bool operator==(const Space&) const = default;

 private:
  std::vector<std::string> atoms_;
  std::vector<double> p_;
};

/// Payoff at the horizon, one entry per atom.
class Claim {
 public:
  Claim() = default;
  explicit Claim(std::vector<double> values) : v_(std::move(values)) {
    if (!detail::all_finite(v_)) throw InvalidArgument("Claim: entries must be finite");
  }
  static Claim constant(std::size_t n, double c) { return Claim(std::vector<double>(n, c)); }
  static Claim indicator(std::size_t n, std::size_t atom) {
    std::vector<double> v(n, 0.0);
    v.at(atom) = 1.0;
    return Claim(std::move(v));
  }

  std::size_t size() const noexcept { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const noexcept { return v_; }
  std::span<const double> span() const noexcept { return v_; }

  Claim operator-() const {
    std::vector<double> v(v_);
    for (double& x : v) x = -x;
    return Claim(std::move(v));
  }
  Claim operator+(const Claim& o) const {
    check(o);
    std::vector<double> v(v_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v_[i];
    return Claim(std::move(v));
  }
  Claim operator-(const Claim& o) const { return *this + (-o); }
  Claim operator+(double c) const {
    std::vector<double> v(v_);
    for (double& x : v) x += c;
    return Claim(std::move(v));
  }
  Claim operator-(double c) const { return *this + (-c); }
  Claim operator*(double s) const {
    std::vector<double> v(v_);
    for (double& x : v) x *= s;
    return Claim(std::move(v));
  }

  bool operator==(const Claim&) const = default;

 private:
  void check(const Claim& o) const {
    if (o.size() != size()) throw DimensionError("Claim: size mismatch");
  }
  std::vector<double> v_;
};

inline Claim operator*(double s, const Claim& x) { return x * s; }

/// Probability weights on the atoms.
class Measure {
 public:
  explicit Measure(std::vector<double> q) : q_(std::move(q)) {
    double s = 0.0;
    for (double v : q_) {
      if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("Measure: weights must be >= 0");
      s += v;
    }
    if (std::abs(s - 1.0) > Tolerances::probability) {
      throw InvalidArgument("Measure: weights must sum to 1");
    }
  }

  /// Repairs solver round-off (tiny negatives, sum off by ~1e-15) before
  /// validating. Anything beyond feasibility tolerance is still rejected.
  static Measure from_solver(std::vector<double> q) {
    double s = 0.0;
    for (double& v : q) {
      if (v < -Tolerances::feasibility) throw InvalidArgument("Measure: negative weight from solver");
      if (v < 0.0) v = 0.0;
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-7) throw InvalidArgument("Measure: solver weights do not sum to 1");
    for (double& v : q) v /= s;
    return Measure(std::move(q));
  }

  static Measure reference(const Space& s) { return Measure(s.probabilities()); }

  std::size_t size() const noexcept { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  const std::vector<double>& weights() const noexcept { return q_; }

  double expectation(const Claim& x) const {
    if (x.size() != size()) throw DimensionError("Measure: claim size mismatch");
    return detail::dot(q_, x.span());
  }
  double min_weight() const { return *std::min_element(q_.begin(), q_.end()); }
  bool is_equivalent() const { return min_weight() > 0.0; }

  bool operator==(const Measure&) const = default;

 private:
  std::vector<double> q_;
};

/// The 0-attainable claims M = cone(generators) - L+.
class MarketCone {
 public:
  MarketCone(Space space, std::vector<Claim> generators) : space_(std::move(space)) {
    for (auto& g : generators) {
      if (g.size() != space_.size()) throw DimensionError("MarketCone: generator size mismatch");
      bool zero = std::all_of(g.values().begin(), g.values().end(), [](double v) { return v == 0.0; });
      if (zero) continue;
      if (std::find(generators_.begin(), generators_.end(), g) != generators_.end()) continue;
      generators_.push_back(std::move(g));
    }
  }

  /// M = L- (no traded instruments).
  static MarketCone frictionless(Space space) { return MarketCone(std::move(space), {}); }

  const Space& space() const noexcept { return space_; }
  const std::vector<Claim>& generators() const noexcept { return generators_; }
  std::size_t dim() const noexcept { return space_.size(); }

  /// sum_j lambda_j g_j
  Claim combine(std::span<const double> lambda) const {
    if (lambda.size() != generators_.size()) throw DimensionError("MarketCone: weight count mismatch");
    std::vector<double> v(dim(), 0.0);
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      for (std::size_t i = 0; i < dim(); ++i) v[i] += lambda[j] * generators_[j][i];
    }
    return Claim(std::move(v));
  }

 private:
  Space space_;
  std::vector<Claim> generators_;
};

/// {q >= 0, sum q = 1, q . h <= 0 for every constraint h}.
class MeasurePolytope {
 public:
  MeasurePolytope(Space space, std::vector<std::vector<double>> constraints)
      : space_(std::move(space)), constraints_(std::move(constraints)) {
    for (const auto& h : constraints_) {
      if (h.size() != space_.size()) throw DimensionError("MeasurePolytope: constraint width mismatch");
    }
    empty_ = !find_point().has_value();
    if (!empty_ && space_.size() <= kVertexEnumerationCap) {
      auto rays = cone_extreme_rays(space_.size(), constraints_);
      std::vector<Measure> vs;
      for (auto& r : rays) vs.push_back(Measure::from_solver(std::move(r)));
      vertices_ = std::move(vs);
    } else if (empty_) {
      vertices_ = std::vector<Measure>{};
    }
  }

  /// The whole probability simplex.
  static MeasurePolytope simplex(Space space) { return MeasurePolytope(std::move(space), {}); }

  const Space& space() const noexcept { return space_; }
  std::size_t dim() const noexcept { return space_.size(); }
  const std::vector<std::vector<double>>& constraints() const noexcept { return constraints_; }
  bool empty() const noexcept { return empty_; }
  const std::optional<std::vector<Measure>>& cached_vertices() const noexcept { return vertices_; }

  bool contains(const Measure& q, double tol = Tolerances::feasibility) const {
    return max_violation(q.weights()) <= tol;
  }

  double max_violation(std::span<const double> q) const {
    if (q.size() != dim()) throw DimensionError("MeasurePolytope: measure size mismatch");
    double v = std::abs(detail::sum(q) - 1.0);
    for (double x : q) v = std::max(v, -x);
    for (const auto& h : constraints_) v = std::max(v, detail::dot(h, q));
    return v;
  }

  MeasurePolytope intersect(const MeasurePolytope& other) const {
    if (!(other.space_ == space_)) throw DimensionError("MeasurePolytope: different spaces");
    auto c = constraints_;
    c.insert(c.end(), other.constraints_.begin(), other.constraints_.end());
    return MeasurePolytope(space_, std::move(c));
  }

  /// LP over the polytope: maximize objective . q. Empty polytope -> nullopt.
  std::optional<std::pair<Measure, double>> maximize(std::span<const double> objective) const {
    if (objective.size() != dim()) throw DimensionError("MeasurePolytope: objective size mismatch");
    auto lp = base_lp();
    lp.objective.assign(objective.begin(), objective.end());
    auto out = optim::solve_lp(lp);
    if (out.status == optim::LpStatus::infeasible) return std::nullopt;
    if (!out.optimal()) throw SolverError("MeasurePolytope: bounded LP reported unbounded");
    return std::make_pair(Measure::from_solver(out.primal), out.value);
  }

  /// The LP rows describing the polytope over variables q (n of them).
  optim::LinearProgram base_lp() const {
    optim::LinearProgram lp(dim());
    lp.add_eq(std::vector<double>(dim(), 1.0), 1.0);
    for (const auto& h : constraints_) lp.add_le(h, 0.0);
    return lp;
  }

 private:
  std::optional<std::vector<double>> find_point() const {
    auto out = optim::solve_lp(base_lp());
    if (!out.optimal()) return std::nullopt;
    return out.primal;
  }

  Space space_;
  std::vector<std::vector<double>> constraints_;
  bool empty_ = true;
  std::optional<std::vector<Measure>> vertices_;
};

/// True iff some lambda >= 0 has sum_j lambda_j g_j >= x - tol componentwise.
inline bool cone_contains(const MarketCone& market, const Claim& x, double tol = Tolerances::feasibility) {
  if (x.size() != market.dim()) throw DimensionError("cone_contains: claim/space size mismatch");
  const auto& gens = market.generators();
  optim::LinearProgram lp(gens.size());
  for (std::size_t i = 0; i < market.dim(); ++i) {
    std::vector<double> row(gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) row[j] = gens[j][i];
    lp.add_ge(std::move(row), x[i] - tol);
  }
  return optim::solve_lp(lp).status != optim::LpStatus::infeasible;
}

/// H-representation of the consistent pricing measures of the market.
inline MeasurePolytope consistent_set(const MarketCone& market) {
  std::vector<std::vector<double>> rows;
  for (const auto& g : market.generators()) rows.push_back(g.values());
  return MeasurePolytope(market.space(), std::move(rows));
}

/// Exact vertex list. Throws PreconditionError above the enumeration cap,
/// in which case callers use the polytope's LP oracle instead.
inline std::vector<Measure> vertices(const MeasurePolytope& q) {
  if (!q.cached_vertices()) {
    throw PreconditionError("vertices: " + std::to_string(q.dim()) + " atoms exceeds enumeration cap " +
                            std::to_string(kVertexEnumerationCap));
  }
  return *q.cached_vertices();
}

/// Measure of the polytope maximizing its smallest weight; present iff that
/// smallest weight is > 0, i.e. iff an equivalent consistent measure exists.
inline std::optional<Measure> has_equivalent_measure(const MeasurePolytope& q) {
  if (q.empty()) return std::nullopt;
  const std::size_t n = q.dim();
  // variables: q_1..q_n >= 0, t free; maximize t s.t. t - q_i <= 0
  optim::LinearProgram lp(n + 1);
  lp.lower[n] = std::nullopt;
  lp.objective[n] = 1.0;
  std::vector<double> norm(n + 1, 1.0);
  norm[n] = 0.0;
  lp.add_eq(std::move(norm), 1.0);
  for (const auto& h : q.constraints()) {
    std::vector<double> row(h);
    row.push_back(0.0);
    lp.add_le(std::move(row), 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n + 1, 0.0);
    row[i] = -1.0;
    row[n] = 1.0;
    lp.add_le(std::move(row), 0.0);
  }
  auto out = optim::solve_lp(lp);
  if (!out.optimal() || out.value <= Tolerances::feasibility) return std::nullopt;
  std::vector<double> w(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(n));
  return Measure::from_solver(std::move(w));
}

}  // namespace gdv

#endif  // GDV_MARKET_HPP
