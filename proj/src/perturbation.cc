#include "chronosqueeze/perturbation.h"

#include <cmath>
#include <numbers>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

double scan_peak(const DrivingPulse& unit) {
  constexpr double kSpan = 40.0;
  constexpr int kSteps = 8000;
  double best_x = 0.0, best = 0.0;
  for (int i = 0; i <= kSteps; ++i) {
    const double x = -kSpan + 2.0 * kSpan * i / kSteps;
    const double v = std::abs(unit.third_derivative(x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // Golden-section polish around the best grid point.
  const double h = 2.0 * kSpan / kSteps;
  double a = best_x - h, b = best_x + h;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  auto f = [&](double x) { return std::abs(unit.third_derivative(x)); };
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && b - a > 1e-14; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a); fd = f(d);
    }
  }
  return std::max(best, std::max(fc, fd));
}

}  // namespace

std::complex<double> xi_sym(double omega, double omega1, const DrivingPulse& pulse) {
  if (pulse.shape() != PulseShape::HalfCycleSech) {
    throw UnsupportedShapeError("the squeezing kernel needs the analytic sech spectrum");
  }
  const double prod = omega * omega1;
  if (prod == 0.0) return {0.0, 0.0};
  const double mag = pulse.r() * std::sqrt(std::abs(prod)) *
                     pulse_spectrum_sech(omega + omega1);
  const double sign = (prod > 0.0 ? 1.0 : -1.0) * sign_of(pulse.polarity());
  return {0.0, -sign * mag};
}

double pt_variance_sech(double theta, double r, Polarity s) {
  const double t = std::tanh(theta);
  const double c = 1.0 / std::cosh(theta);
  return sign_of(s) * (r / 6.0) * (t * t * t * c - 5.0 * t * c * c * c);
}

double third_derivative_peak(PulseShape shape) {
  switch (shape) {
    case PulseShape::HalfCycleSech: {
      static const double peak = scan_peak(DrivingPulse::half_cycle_sech(1.0));
      return peak;
    }
    case PulseShape::RealisticHalfCycle: {
      static const double peak = scan_peak(DrivingPulse::realistic_half_cycle(1.0));
      return peak;
    }
    case PulseShape::SingleCycle: {
      static const double peak = scan_peak(DrivingPulse::single_cycle(1.0));
      return peak;
    }
    case PulseShape::Sampled: break;
  }
  throw UnsupportedShapeError("limit shape needs an analytic pulse");
}

double pt_rdv_shape(const DrivingPulse& pulse, double theta) {
  return -sign_of(pulse.polarity()) * pulse.third_derivative(theta) /
         third_derivative_peak(pulse.shape());
}

}  // namespace chronosqueeze
