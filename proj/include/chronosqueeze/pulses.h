#ifndef CHRONOSQUEEZE_PULSES_H_
#define CHRONOSQUEEZE_PULSES_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "chronosqueeze/interpolation.h"

namespace chronosqueeze {

// All waveforms live in dimensionless retarded time theta = Gamma0 * t'.

enum class PulseShape { HalfCycleSech, RealisticHalfCycle, SingleCycle, Sampled };
enum class Parity { Even, Odd, None };

/// Sign of the product E0 * d.
enum class Polarity : int { Positive = 1, Negative = -1 };

inline int sign_of(Polarity s) { return static_cast<int>(s); }
inline Polarity flipped(Polarity s) {
  return s == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

std::string to_string(PulseShape shape);
std::string to_string(Polarity s);
PulseShape parse_pulse_shape(const std::string& name);
Polarity parse_polarity(const std::string& name);

/// Driving field e(theta) together with its squeezing strength
/// r = |E0 d| Gamma0 l / (n c0) and polarity s = sign(E0 d).
///
/// eval() and the derivative accessors return the unit-amplitude waveform;
/// r and s enter only through the characteristic flow.
class DrivingPulse {
 public:
  static DrivingPulse half_cycle_sech(double r = 0.0, Polarity s = Polarity::Positive);
  static DrivingPulse realistic_half_cycle(double r = 0.0, Polarity s = Polarity::Positive);
  static DrivingPulse single_cycle(double r = 0.0, Polarity s = Polarity::Positive);
  /// Tabulated waveform; theta must be strictly increasing.
  static DrivingPulse sampled(std::vector<double> theta, std::vector<double> e, double r = 0.0,
                              Polarity s = Polarity::Positive);
  static DrivingPulse of_shape(PulseShape shape, double r = 0.0,
                               Polarity s = Polarity::Positive);

  PulseShape shape() const { return shape_; }
  Parity parity() const;
  double r() const { return r_; }
  Polarity polarity() const { return s_; }
  int sign() const { return sign_of(s_); }
  bool is_analytic() const { return shape_ != PulseShape::Sampled; }

  DrivingPulse with_strength(double r) const;
  DrivingPulse with_polarity(Polarity s) const;

  double eval(double theta) const;
  double derivative(double theta) const;
  /// Throws UnsupportedShapeError for Sampled pulses.
  double third_derivative(double theta) const;

  /// Interval on which eval() is defined; infinite for analytic shapes.
  double theta_min() const;
  double theta_max() const;

 private:
  DrivingPulse(PulseShape shape, double r, Polarity s);

  PulseShape shape_;
  double r_;
  Polarity s_;
  std::shared_ptr<const MonotoneCubic> samples_;
};

double eval_pulse(const DrivingPulse& pulse, double theta);
double pulse_third_derivative(const DrivingPulse& pulse, double theta);

/// Fourier transform of sech in units of E0 / Gamma0, using the
/// (1/2pi) * integral of e(theta) exp(i w theta) convention: sech(pi w / 2) / 2.
double pulse_spectrum_sech(double omega);

/// Reads a two-column (theta, e) CSV with a mandatory header line.
DrivingPulse load_sampled_pulse_csv(const std::filesystem::path& path, double r = 0.0,
                                    Polarity s = Polarity::Positive);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_PULSES_H_
