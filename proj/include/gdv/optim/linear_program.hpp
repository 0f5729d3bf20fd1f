#ifndef GDV_OPTIM_LINEAR_PROGRAM_HPP
#define GDV_OPTIM_LINEAR_PROGRAM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gdv/core.hpp"
#include "gdv/optim/dense_lu.hpp"

namespace gdv::optim {

/// maximize  objective . x
/// s.t.      a_ub x <= b_ub,   a_eq x = b_eq,   x_j >= lower_j  (when set)
///
/// A variable whose lower bound is std::nullopt is free.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<std::optional<double>> lower;

  LinearProgram() = default;

  /// n variables, all nonnegative, zero objective.
  explicit LinearProgram(std::size_t n) : objective(n, 0.0), lower(n, 0.0) {}

  std::size_t num_vars() const { return objective.size(); }

  void add_le(std::vector<double> row, double rhs) {
    a_ub.push_back(std::move(row));
    b_ub.push_back(rhs);
  }
  void add_ge(std::vector<double> row, double rhs) {
    for (double& v : row) v = -v;
    add_le(std::move(row), -rhs);
  }
  void add_eq(std::vector<double> row, double rhs) {
    a_eq.push_back(std::move(row));
    b_eq.push_back(rhs);
  }

  void validate() const {
    const std::size_t n = objective.size();
    if (lower.size() != n) throw DimensionError("LinearProgram: lower bound count mismatch");
    if (a_ub.size() != b_ub.size() || a_eq.size() != b_eq.size()) {
      throw DimensionError("LinearProgram: row/rhs count mismatch");
    }
    for (const auto& r : a_ub) {
      if (r.size() != n) throw DimensionError("LinearProgram: inequality row width mismatch");
      if (!detail::all_finite(r)) throw InvalidArgument("LinearProgram: non-finite coefficient");
    }
    for (const auto& r : a_eq) {
      if (r.size() != n) throw DimensionError("LinearProgram: equality row width mismatch");
      if (!detail::all_finite(r)) throw InvalidArgument("LinearProgram: non-finite coefficient");
    }
    if (!detail::all_finite(objective) || !detail::all_finite(b_ub) || !detail::all_finite(b_eq)) {
      throw InvalidArgument("LinearProgram: non-finite coefficient");
    }
    for (const auto& l : lower) {
      if (l && !std::isfinite(*l)) throw InvalidArgument("LinearProgram: non-finite bound");
    }
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

/// Result of solve_lp.
///
/// optimal:    primal, value, and multipliers (dual_ub >= 0, dual_eq free,
///             reduced >= 0 on bounded variables) with
///             dual_value = dual_ub.b_ub + dual_eq.b_eq - reduced.lower.
/// infeasible: Farkas multipliers over the rows (a_ub; a_eq; -I on bounded
///             variables) that combine to the zero row with negative rhs.
/// unbounded:  primal is a feasible point and ray an improving direction.
struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  double dual_value = 0.0;
  std::vector<double> primal;
  std::vector<double> dual_ub;
  std::vector<double> dual_eq;
  std::vector<double> reduced;
  std::vector<double> farkas_ub;
  std::vector<double> farkas_eq;
  std::vector<double> farkas_lower;
  std::vector<double> ray;

  bool optimal() const { return status == LpStatus::optimal; }
};

namespace detail {

/// Dense tableau simplex on  A z = b, z >= 0, b >= 0, maximize c.z.
/// Largest-coefficient pricing with a switch to Bland's rule after a run
/// of degenerate pivots. Ratio-test ties go to the smallest basic index.
class Tableau {
 public:
  static constexpr double kPivotEps = 1e-11;
  static constexpr double kCostEps = 1e-10;

  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_(m * (n + 1), 0.0), basis_(m) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }

  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / at(r, s);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) *= inv;
    at(r, s) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, s);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, s) = 0.0;
    }
    basis_[r] = s;
  }

  enum class Result { optimal, unbounded };

  /// Runs primal simplex for cost c; columns with allowed[j] == false
  /// never enter. On unbounded, *entering receives the offending column.
  Result run(const std::vector<double>& c, const std::vector<bool>& allowed,
             std::size_t* entering, std::size_t budget) {
    std::size_t degenerate_run = 0;
    bool bland = false;
    for (std::size_t iter = 0; iter < budget; ++iter) {
      // reduced profits d_j = c_j - c_B . column_j
      std::size_t s = n_;
      double best = kCostEps;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed[j]) continue;
        double d = c[j];
        for (std::size_t i = 0; i < m_; ++i) d -= c[basis_[i]] * at(i, j);
        if (d > kCostEps) {
          if (bland) {
            s = j;
            break;
          }
          if (d > best) {
            best = d;
            s = j;
          }
        }
      }
      if (s == n_) return Result::optimal;

      std::size_t r = m_;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, s);
        if (a <= kPivotEps) continue;
        const double q = std::max(rhs(i), 0.0) / a;
        if (q < ratio - 1e-13 || (std::abs(q - ratio) <= 1e-13 && r < m_ && basis_[i] < basis_[r])) {
          ratio = q;
          r = i;
        }
      }
      if (r == m_) {
        *entering = s;
        return Result::unbounded;
      }
      if (ratio <= 1e-13) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(r, s);
    }
    throw SolverError("simplex: iteration budget exhausted");
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Solves a dense linear program by a two-phase tableau simplex and returns
/// status together with the matching certificate. Throws SolverError if
/// the pivot budget runs out or the final basis is numerically singular.
inline LpOutcome solve_lp(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  const std::size_t mu = lp.a_ub.size();
  const std::size_t me = lp.a_eq.size();
  const std::size_t m = mu + me;

  // Standard-form columns: one per bounded variable, two per free variable,
  // one slack per inequality row, then one artificial per row.
  struct Col {
    std::size_t var;
    double sign;
  };
  std::vector<Col> var_cols;
  std::vector<std::size_t> first_col(n);
  for (std::size_t j = 0; j < n; ++j) {
    first_col[j] = var_cols.size();
    var_cols.push_back({j, 1.0});
    if (!lp.lower[j]) var_cols.push_back({j, -1.0});
  }
  const std::size_t nv = var_cols.size();
  const std::size_t slack0 = nv;
  const std::size_t art0 = nv + mu;
  const std::size_t ncols = art0 + m;

  auto row_coeff = [&](std::size_t i, std::size_t j) -> double {
    return i < mu ? lp.a_ub[i][j] : lp.a_eq[i - mu][j];
  };
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    double b = i < mu ? lp.b_ub[i] : lp.b_eq[i - mu];
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.lower[j]) b -= row_coeff(i, j) * *lp.lower[j];
    }
    rhs[i] = b;
  }
  std::vector<double> flip(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) flip[i] = -1.0;
  }
  // Standard-form matrix column accessor (after row flips).
  auto std_coeff = [&](std::size_t i, std::size_t c) -> double {
    if (c < nv) return flip[i] * var_cols[c].sign * row_coeff(i, var_cols[c].var);
    if (c < art0) return (c - slack0 == i) ? flip[i] : 0.0;
    return (c - art0 == i) ? 1.0 : 0.0;
  };

  detail::Tableau tab(m, ncols);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < ncols; ++c) tab.at(i, c) = std_coeff(i, c);
    tab.rhs(i) = flip[i] * rhs[i];
    tab.basis()[i] = art0 + i;
  }
  const std::size_t budget = 200 * (m + ncols) + 2000;
  double scale = 1.0;
  for (double b : rhs) scale = std::max(scale, std::abs(b));

  auto basis_matrix = [&]() {
    std::vector<double> bm(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) bm[i * m + k] = std_coeff(i, tab.basis()[k]);
    }
    auto lu = DenseLu::factor(std::move(bm), m);
    if (!lu) throw SolverError("simplex: singular basis");
    return *lu;
  };

  LpOutcome out;

  // Phase 1: maximize -sum(artificials).
  std::vector<double> c1(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) c1[art0 + i] = -1.0;
  std::vector<bool> allowed1(ncols, true);
  std::size_t entering = 0;
  if (m > 0) {
    tab.run(c1, allowed1, &entering, budget);  // bounded below by zero
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] >= art0) infeas += std::max(tab.rhs(i), 0.0);
    }
    if (infeas > Tolerances::feasibility * scale) {
      auto lu = basis_matrix();
      std::vector<double> cb(m);
      for (std::size_t i = 0; i < m; ++i) cb[i] = c1[tab.basis()[i]];
      const std::vector<double> pi = lu.solve_transposed(cb);
      out.status = LpStatus::infeasible;
      out.farkas_ub.assign(mu, 0.0);
      out.farkas_eq.assign(me, 0.0);
      out.farkas_lower.assign(n, 0.0);
      std::vector<double> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = flip[i] * pi[i];
      for (std::size_t i = 0; i < mu; ++i) out.farkas_ub[i] = std::max(w[i], 0.0);
      for (std::size_t i = 0; i < me; ++i) out.farkas_eq[i] = w[mu + i];
      for (std::size_t j = 0; j < n; ++j) {
        if (!lp.lower[j]) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w[i] * row_coeff(i, j);
        out.farkas_lower[j] = std::max(s, 0.0);
      }
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < art0) continue;
      std::size_t best = ncols;
      double mag = 1e-9;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(tab.at(i, c)) > mag) {
          mag = std::abs(tab.at(i, c));
          best = c;
        }
      }
      if (best < ncols) tab.pivot(i, best);
    }
  }

  // Phase 2.
  std::vector<double> c2(ncols, 0.0);
  for (std::size_t c = 0; c < nv; ++c) c2[c] = var_cols[c].sign * lp.objective[var_cols[c].var];
  std::vector<bool> allowed2(ncols, true);
  for (std::size_t c = art0; c < ncols; ++c) allowed2[c] = false;
  const auto res = tab.run(c2, allowed2, &entering, budget);

  auto to_primal = [&](const std::vector<double>& z) {
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) x[j] = lp.lower[j] ? *lp.lower[j] : 0.0;
    for (std::size_t c = 0; c < nv; ++c) x[var_cols[c].var] += var_cols[c].sign * z[c];
    return x;
  };

  std::vector<double> z(ncols, 0.0);
  {
    auto lu = basis_matrix();
    std::vector<double> b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = flip[i] * rhs[i];
    const std::vector<double> zb = lu.solve(b);
    for (std::size_t i = 0; i < m; ++i) z[tab.basis()[i]] = std::max(zb[i], 0.0);

    if (res == detail::Tableau::Result::optimal) {
      std::vector<double> cb(m);
      for (std::size_t i = 0; i < m; ++i) cb[i] = c2[tab.basis()[i]];
      const std::vector<double> pi = lu.solve_transposed(cb);
      out.dual_ub.assign(mu, 0.0);
      out.dual_eq.assign(me, 0.0);
      std::vector<double> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = flip[i] * pi[i];
      for (std::size_t i = 0; i < mu; ++i) out.dual_ub[i] = std::max(w[i], 0.0);
      for (std::size_t i = 0; i < me; ++i) out.dual_eq[i] = w[mu + i];
      for (std::size_t i = 0; i < mu; ++i) w[i] = out.dual_ub[i];
      out.reduced.assign(n, 0.0);
      double dv = 0.0;
      for (std::size_t i = 0; i < m; ++i) dv += w[i] * (i < mu ? lp.b_ub[i] : lp.b_eq[i - mu]);
      for (std::size_t j = 0; j < n; ++j) {
        if (!lp.lower[j]) continue;
        double s = -lp.objective[j];
        for (std::size_t i = 0; i < m; ++i) s += w[i] * row_coeff(i, j);
        out.reduced[j] = std::max(s, 0.0);
        dv -= out.reduced[j] * *lp.lower[j];
      }
      out.dual_value = dv;
    }
  }
  out.primal = to_primal(z);

  if (res == detail::Tableau::Result::unbounded) {
    std::vector<double> dz(ncols, 0.0);
    dz[entering] = 1.0;
    for (std::size_t i = 0; i < m; ++i) dz[tab.basis()[i]] = -tab.at(i, entering);
    std::vector<double> d(n, 0.0);
    for (std::size_t c = 0; c < nv; ++c) d[var_cols[c].var] += var_cols[c].sign * dz[c];
    out.status = LpStatus::unbounded;
    out.ray = std::move(d);
    return out;
  }

  out.status = LpStatus::optimal;
  out.value = gdv::detail::dot(lp.objective, out.primal);
  return out;
}

}  // namespace gdv::optim

#endif  // GDV_OPTIM_LINEAR_PROGRAM_HPP
