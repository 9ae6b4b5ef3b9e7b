#ifndef CHRONOSQUEEZE_INTERPOLATION_H_
#define CHRONOSQUEEZE_INTERPOLATION_H_

#include <cstddef>
#include <span>
#include <vector>

namespace chronosqueeze {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slope limiting.
///
/// Node derivatives are either supplied by the caller (e.g. exact slopes of a
/// flow map) or estimated with the Fritsch-Butland harmonic mean.  In both
/// cases they are limited so that the interpolant is monotone on every
/// interval where the data are monotone.  With exact derivatives of a smooth
/// monotone function the limiter is inactive and the error is O(h^4).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  MonotoneCubic(std::vector<double> x, std::vector<double> y,
                std::vector<double> dydx);

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;

  /// Solves value(x) == y for strictly increasing data.  Newton steps are
  /// safeguarded by bisection inside the bracketing interval; the result
  /// satisfies |value(x) - y| <= tol.
  double inverse(double y, double tol = 1e-13) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool contains(double x) const { return x >= x_.front() && x <= x_.back(); }
  std::span<const double> nodes() const { return x_; }
  std::span<const double> values() const { return y_; }
  std::span<const double> slopes() const { return d_; }

 private:
  std::size_t interval(double x) const;
  void limit_slopes();

  std::vector<double> x_, y_, d_;
};

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_INTERPOLATION_H_
