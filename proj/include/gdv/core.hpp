#ifndef GDV_CORE_HPP
#define GDV_CORE_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdv {

/// Tolerances shared across the library. Comparisons are always made
/// against one of these, never by exact floating equality.
struct Tolerances {
  static constexpr double feasibility = 1e-9;
  static constexpr double probability = 1e-12;
  static constexpr double duality_gap = 1e-8;
};

/// Vertex enumeration is attempted only up to this many atoms; larger
/// spaces fall back to LP oracles.
inline constexpr std::size_t kVertexEnumerationCap = 12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown of an iterative solver (pivot or iteration budget).
class SolverError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A real number or one of the two infinities, kept as an explicit tag.
/// There is no arithmetic on this type: callers must branch on the tag,
/// and value() throws when the value is infinite.
namespace detail {
/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}
}  // namespace detail

class Extended {
 public:
  enum class Kind { finite, minus_infinity, plus_infinity };

  static Extended finite(double v) { return Extended(Kind::finite, v); }
  static Extended minus_infinity() { return Extended(Kind::minus_infinity, 0.0); }
  static Extended plus_infinity() { return Extended(Kind::plus_infinity, 0.0); }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::finite; }
  bool is_minus_infinity() const noexcept { return kind_ == Kind::minus_infinity; }
  bool is_plus_infinity() const noexcept { return kind_ == Kind::plus_infinity; }

  double value() const {
    if (kind_ != Kind::finite) {
      throw Error(std::string("arithmetic on infinite sentinel (") + to_string() + ")");
    }
    return value_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::minus_infinity: return "-inf";
      case Kind::plus_infinity: return "+inf";
      default: return detail::format_double(value_);
    }
  }

 private:
  Extended(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

namespace detail {


inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double sum(std::span<const double> a) {
  return std::accumulate(a.begin(), a.end(), 0.0);
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace detail
}  // namespace gdv

#endif  // GDV_CORE_HPP
