#ifndef GDV_OPTIM_BISECT_HPP
#define GDV_OPTIM_BISECT_HPP

#include <cmath>
#include <concepts>

#include "gdv/core.hpp"

namespace gdv::optim {

/// Threshold of a monotone predicate (false below, true above).
///
/// If the predicate already holds at lo, lo is returned. If it fails at hi,
/// the bracket is widened upward by doubling its width, at most
/// max_expansions times, before giving up with SolverError. The result is
/// the upper end of the final bracket, so it always satisfies the predicate
/// and lies within tol of the threshold.
template <class Pred>
  requires std::predicate<Pred, double>
double bisect(Pred pred, double lo, double hi, double tol, int max_expansions = 60) {
  if (!(lo <= hi)) throw InvalidArgument("bisect: lo must not exceed hi");
  if (!(tol > 0.0)) throw InvalidArgument("bisect: tol must be positive");
  if (pred(lo)) return lo;
  double width = std::max(hi - lo, tol);
  int expansions = 0;
  while (!pred(hi)) {
    if (++expansions > max_expansions) throw SolverError("bisect: bracket expansion failed");
    lo = hi;
    width *= 2.0;
    hi = lo + width;
  }
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace gdv::optim

#endif  // GDV_OPTIM_BISECT_HPP
