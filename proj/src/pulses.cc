#include "chronosqueeze/pulses.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

double sech_d1(double x) { return -std::tanh(x) * sech(x); }

double sech_d3(double x) {
  const double t = std::tanh(x);
  const double s = sech(x);
  return -(t * t * t * s - 5.0 * t * s * s * s);
}

// e(x) = (exp(-x^2) - 1) / x = sum_{k>=1} (-1)^k x^(2k-1) / k!
double single_cycle_e(double x) {
  if (std::abs(x) < 1e-4) return -x + 0.5 * x * x * x;
  return std::expm1(-x * x) / x;
}

double single_cycle_d1(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 0.1) {
    double sum = 0.0, pow = 1.0, fact = 1.0;
    for (int k = 1; k <= 12; ++k) {
      fact *= k;
      sum += ((k % 2) ? -1.0 : 1.0) * (2 * k - 1) * pow / fact;
      pow *= x2;
    }
    return sum;
  }
  return -2.0 * std::exp(-x2) - std::expm1(-x2) / x2;
}

double single_cycle_d3(double x) {
  const double x2 = x * x;
  if (std::abs(x) < 0.5) {
    double sum = 0.0, pow = 1.0, fact = 1.0;
    for (int k = 1; k <= 30; ++k) {
      fact *= k;
      if (k < 2) continue;
      const double term = ((k % 2) ? -1.0 : 1.0) * (2 * k - 1) * (2 * k - 2) * (2 * k - 3) * pow / fact;
      sum += term;
      pow *= x2;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  const double e = std::exp(-x2);
  return -8.0 * x2 * e - 6.0 * e / x2 - 6.0 * std::expm1(-x2) / (x2 * x2);
}

constexpr double kRealisticWeight = 0.1;
constexpr double kRealisticStretch = 10.0;

}  // namespace

std::string to_string(PulseShape shape) {
  switch (shape) {
    case PulseShape::HalfCycleSech: return "half_cycle";
    case PulseShape::RealisticHalfCycle: return "realistic_half_cycle";
    case PulseShape::SingleCycle: return "single_cycle";
    case PulseShape::Sampled: return "sampled";
  }
  return "unknown";
}

std::string to_string(Polarity s) { return s == Polarity::Positive ? "+1" : "-1"; }

PulseShape parse_pulse_shape(const std::string& name) {
  if (name == "half_cycle" || name == "sech" || name == "half_cycle_sech") {
    return PulseShape::HalfCycleSech;
  }
  if (name == "realistic_half_cycle" || name == "realistic") return PulseShape::RealisticHalfCycle;
  if (name == "single_cycle") return PulseShape::SingleCycle;
  if (name == "sampled") return PulseShape::Sampled;
  throw InvalidArgumentError("unknown pulse shape '" + name + "'");
}

Polarity parse_polarity(const std::string& name) {
  if (name == "+1" || name == "1" || name == "+" || name == "positive") return Polarity::Positive;
  if (name == "-1" || name == "-" || name == "negative") return Polarity::Negative;
  throw InvalidArgumentError("unknown polarity '" + name + "'");
}

DrivingPulse::DrivingPulse(PulseShape shape, double r, Polarity s) : shape_(shape), r_(r), s_(s) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgumentError("squeezing strength must be finite and >= 0");
  }
}

DrivingPulse DrivingPulse::half_cycle_sech(double r, Polarity s) {
  return DrivingPulse(PulseShape::HalfCycleSech, r, s);
}

DrivingPulse DrivingPulse::realistic_half_cycle(double r, Polarity s) {
  return DrivingPulse(PulseShape::RealisticHalfCycle, r, s);
}

DrivingPulse DrivingPulse::single_cycle(double r, Polarity s) {
  return DrivingPulse(PulseShape::SingleCycle, r, s);
}

DrivingPulse DrivingPulse::sampled(std::vector<double> theta, std::vector<double> e, double r,
                                   Polarity s) {
  DrivingPulse pulse(PulseShape::Sampled, r, s);
  pulse.samples_ = std::make_shared<const MonotoneCubic>(std::move(theta), std::move(e));
  return pulse;
}

DrivingPulse DrivingPulse::of_shape(PulseShape shape, double r, Polarity s) {
  if (shape == PulseShape::Sampled) {
    throw UnsupportedShapeError("sampled pulses need data; use DrivingPulse::sampled");
  }
  return DrivingPulse(shape, r, s);
}

Parity DrivingPulse::parity() const {
  switch (shape_) {
    case PulseShape::HalfCycleSech:
    case PulseShape::RealisticHalfCycle: return Parity::Even;
    case PulseShape::SingleCycle: return Parity::Odd;
    case PulseShape::Sampled: return Parity::None;
  }
  return Parity::None;
}

DrivingPulse DrivingPulse::with_strength(double r) const {
  DrivingPulse copy = *this;
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgumentError("squeezing strength must be finite and >= 0");
  }
  copy.r_ = r;
  return copy;
}

DrivingPulse DrivingPulse::with_polarity(Polarity s) const {
  DrivingPulse copy = *this;
  copy.s_ = s;
  return copy;
}

double DrivingPulse::eval(double theta) const {
  switch (shape_) {
    case PulseShape::HalfCycleSech: return sech(theta);
    case PulseShape::RealisticHalfCycle:
      return sech(theta) - kRealisticWeight * sech(theta / kRealisticStretch);
    case PulseShape::SingleCycle: return single_cycle_e(theta);
    case PulseShape::Sampled: return samples_->value(theta);
  }
  return 0.0;
}

double DrivingPulse::derivative(double theta) const {
  switch (shape_) {
    case PulseShape::HalfCycleSech: return sech_d1(theta);
    case PulseShape::RealisticHalfCycle:
      return sech_d1(theta) -
             kRealisticWeight / kRealisticStretch * sech_d1(theta / kRealisticStretch);
    case PulseShape::SingleCycle: return single_cycle_d1(theta);
    case PulseShape::Sampled: return samples_->derivative(theta);
  }
  return 0.0;
}

double DrivingPulse::third_derivative(double theta) const {
  constexpr double k3 = kRealisticStretch * kRealisticStretch * kRealisticStretch;
  switch (shape_) {
    case PulseShape::HalfCycleSech: return sech_d3(theta);
    case PulseShape::RealisticHalfCycle:
      return sech_d3(theta) - kRealisticWeight / k3 * sech_d3(theta / kRealisticStretch);
    case PulseShape::SingleCycle: return single_cycle_d3(theta);
    case PulseShape::Sampled: break;
  }
  throw UnsupportedShapeError("third derivative is only available for analytic pulse shapes");
}

double DrivingPulse::theta_min() const {
  return samples_ ? samples_->x_min() : -std::numeric_limits<double>::infinity();
}

double DrivingPulse::theta_max() const {
  return samples_ ? samples_->x_max() : std::numeric_limits<double>::infinity();
}

double eval_pulse(const DrivingPulse& pulse, double theta) { return pulse.eval(theta); }

double pulse_third_derivative(const DrivingPulse& pulse, double theta) {
  return pulse.third_derivative(theta);
}

double pulse_spectrum_sech(double omega) { return 0.5 * sech(0.5 * std::numbers::pi * omega); }

DrivingPulse load_sampled_pulse_csv(const std::filesystem::path& path, double r, Polarity s) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open pulse file " + path.string());
  std::string line;
  bool header_seen = false;
  std::vector<double> theta, e;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a, b;
    const bool numeric = static_cast<bool>(fields >> a >> b);
    if (!header_seen) {
      if (numeric) {
        throw InvalidArgumentError(path.string() + ": header line required before samples");
      }
      header_seen = true;
      continue;
    }
    if (!numeric) {
      throw InvalidArgumentError(path.string() + ":" + std::to_string(line_no) +
                                 ": expected two numeric columns");
    }
    theta.push_back(a);
    e.push_back(b);
  }
  if (theta.size() < 3) throw InvalidArgumentError(path.string() + ": need at least 3 samples");
  return DrivingPulse::sampled(std::move(theta), std::move(e), r, s);
}

}  // namespace chronosqueeze
