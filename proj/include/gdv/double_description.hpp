#ifndef GDV_DOUBLE_DESCRIPTION_HPP
#define GDV_DOUBLE_DESCRIPTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gdv/core.hpp"

namespace gdv {

/// Extreme rays of the pointed cone { q in R^n : q >= 0, h_k . q <= 0 }.
///
/// Double description: start from the orthant's rays e_1..e_n and add the
/// halfspaces one at a time. A new ray is created on every edge joining a
/// ray strictly inside the halfspace to one strictly outside; adjacency is
/// decided by the combinatorial test (no third ray is tight on every
/// constraint the pair shares). Rays are returned normalized to sum 1, so
/// they are exactly the vertices of the polytope obtained by adding
/// sum(q) = 1.
inline std::vector<std::vector<double>> cone_extreme_rays(
    std::size_t n, std::span<const std::vector<double>> halfspaces, double tol = 1e-12) {
  struct Ray {
    std::vector<double> v;
    std::vector<bool> tight;  // over orthant facets then processed halfspaces
  };
  const std::size_t total = n + halfspaces.size();

  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double& x : v) {
      if (x < 0.0) x = 0.0;
      s += x;
    }
    if (s > 0.0) {
      for (double& x : v) x /= s;
    }
  };

  std::vector<Ray> rays;
  for (std::size_t i = 0; i < n; ++i) {
    Ray r;
    r.v.assign(n, 0.0);
    r.v[i] = 1.0;
    r.tight.assign(total, false);
    for (std::size_t j = 0; j < n; ++j) r.tight[j] = (j != i);
    rays.push_back(std::move(r));
  }

  for (std::size_t k = 0; k < halfspaces.size(); ++k) {
    const auto& h = halfspaces[k];
    if (h.size() != n) throw DimensionError("cone_extreme_rays: halfspace width mismatch");
    const double hscale = std::max(1.0, detail::max_abs(h));
    const std::size_t row = n + k;

    std::vector<double> val(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = detail::dot(h, rays[r].v);
      if (val[r] > tol * hscale) {
        pos.push_back(r);
      } else if (val[r] < -tol * hscale) {
        neg.push_back(r);
      } else {
        zero.push_back(r);
      }
    }
    if (pos.empty()) {
      for (std::size_t r : zero) rays[r].tight[row] = true;
      continue;
    }

    std::vector<Ray> next;
    for (std::size_t r : neg) next.push_back(rays[r]);
    for (std::size_t r : zero) {
      next.push_back(rays[r]);
      next.back().tight[row] = true;
    }

    for (std::size_t a : pos) {
      for (std::size_t b : neg) {
        // Common tight set over constraints processed so far.
        std::size_t common = 0;
        std::vector<bool> both(total, false);
        for (std::size_t c = 0; c < row; ++c) {
          if (rays[a].tight[c] && rays[b].tight[c]) {
            both[c] = true;
            ++common;
          }
        }
        if (n >= 2 && common + 2 < n) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == a || o == b) continue;
          bool covers = true;
          for (std::size_t c = 0; c < row; ++c) {
            if (both[c] && !rays[o].tight[c]) {
              covers = false;
              break;
            }
          }
          if (covers) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr;
        nr.v.resize(n);
        const double wa = -val[b], wb = val[a];
        for (std::size_t i = 0; i < n; ++i) nr.v[i] = wa * rays[a].v[i] + wb * rays[b].v[i];
        normalize(nr.v);
        nr.tight = both;
        nr.tight[row] = true;
        for (std::size_t i = 0; i < n; ++i) {
          if (nr.v[i] <= tol) {
            nr.v[i] = 0.0;
            nr.tight[i] = true;
          }
        }
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
  }

  std::vector<std::vector<double>> out;
  for (auto& r : rays) {
    normalize(r.v);
    bool dup = false;
    for (const auto& o : out) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(o[i] - r.v[i]));
      if (d <= 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(r.v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gdv

#endif  // GDV_DOUBLE_DESCRIPTION_HPP
