#ifndef GDV_OPTIM_DENSE_LU_HPP
#define GDV_OPTIM_DENSE_LU_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace gdv::optim {

/// Row-major square matrix factorized with partial pivoting. Used to
/// recompute basic solutions and multipliers from scratch once the
/// simplex method has settled on a basis.
class DenseLu {
 public:
  static std::optional<DenseLu> factor(std::vector<double> a, std::size_t n) {
    DenseLu lu;
    lu.n_ = n;
    lu.a_ = std::move(a);
    lu.perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) lu.perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::abs(lu.at(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        if (std::abs(lu.at(i, k)) > best) {
          best = std::abs(lu.at(i, k));
          piv = i;
        }
      }
      if (best < 1e-14) return std::nullopt;
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu.at(k, j), lu.at(piv, j));
        std::swap(lu.perm_[k], lu.perm_[piv]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        double f = lu.at(i, k) / lu.at(k, k);
        lu.at(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu.at(i, j) -= f * lu.at(k, j);
      }
    }
    return lu;
  }

  /// Solves A x = b.
  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) x[i] -= at(i, j) * x[j];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) x[i] -= at(i, j) * x[j];
      x[i] /= at(i, i);
    }
    return x;
  }

  /// Solves A^T y = c.
  std::vector<double> solve_transposed(const std::vector<double>& c) const {
    // A = P^T L U, so A^T y = U^T L^T P y = c.
    std::vector<double> w(c);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) w[i] -= at(j, i) * w[j];
      w[i] /= at(i, i);
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) w[i] -= at(j, i) * w[j];
    }
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = w[i];
    return y;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::size_t n_ = 0;
  std::vector<double> a_;
  std::vector<std::size_t> perm_;
};

}  // namespace gdv::optim

#endif  // GDV_OPTIM_DENSE_LU_HPP
