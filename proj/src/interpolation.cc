#include "chronosqueeze/interpolation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

void check_nodes(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size()) {
    throw InvalidArgumentError("interpolation needs >= 2 matching (x, y) nodes");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw InvalidArgumentError("interpolation nodes must be strictly increasing (index " +
                                 std::to_string(i) + ")");
    }
  }
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_nodes(x_, y_);
  const std::size_t n = x_.size();
  d_.assign(n, 0.0);
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  // Fritsch-Butland weighted harmonic mean in the interior.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) continue;
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double w0 = 2.0 * h1 + h0;
    const double w1 = h1 + 2.0 * h0;
    d_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
  }
  // One-sided three-point ends, clipped to keep the sign of the secant.
  auto end_slope = [](double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) return 0.0;
    if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3.0 * m0)) return 3.0 * m0;
    return d;
  };
  d_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], delta[n - 2],
                        delta[n - 3]);
  limit_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> dydx)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(dydx)) {
  check_nodes(x_, y_);
  if (d_.size() != x_.size()) {
    throw InvalidArgumentError("derivative count does not match node count");
  }
  limit_slopes();
}

void MonotoneCubic::limit_slopes() {
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    const double delta = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    if (delta == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    double a = d_[i] / delta;
    double b = d_[i + 1] / delta;
    if (a < 0.0) d_[i] = a = 0.0;
    if (b < 0.0) d_[i + 1] = b = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      d_[i] = t * a * delta;
      d_[i + 1] = t * b * delta;
    }
  }
}

std::size_t MonotoneCubic::interval(double x) const {
  if (!contains(x)) {
    throw OutOfRangeError("interpolation argument " + std::to_string(x) + " outside [" +
                          std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * d_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) / h * y_[i] + (3 * t2 - 4 * t + 1) * d_[i] +
         (-6 * t2 + 6 * t) / h * y_[i + 1] + (3 * t2 - 2 * t) * d_[i + 1];
}

double MonotoneCubic::inverse(double y, double tol) const {
  if (!(y >= y_.front() && y <= y_.back())) {
    throw OutOfRangeError("inverse target " + std::to_string(y) + " outside tabulated range [" +
                          std::to_string(y_.front()) + ", " + std::to_string(y_.back()) + "]");
  }
  auto it = std::upper_bound(y_.begin(), y_.end(), y);
  std::size_t i = static_cast<std::size_t>(it - y_.begin());
  i = (i == 0) ? 0 : std::min(i - 1, y_.size() - 2);
  if (y == y_[i]) return x_[i];
  double lo = x_[i], hi = x_[i + 1];
  // Secant start, then safeguarded Newton.
  double x = lo + (y - y_[i]) / (y_[i + 1] - y_[i]) * (hi - lo);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = value(x) - y;
    if (std::abs(f) <= tol) return x;
    if (f > 0) hi = x; else lo = x;
    const double df = derivative(x);
    double next = (df > 0) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace chronosqueeze
