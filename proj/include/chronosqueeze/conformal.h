#ifndef CHRONOSQUEEZE_CONFORMAL_H_
#define CHRONOSQUEEZE_CONFORMAL_H_

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chronosqueeze/interpolation.h"
#include "chronosqueeze/pulses.h"

namespace chronosqueeze {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Linear, dispersionless nonlinear crystal.
struct CrystalConfig {
  double n = 2.57;           // refractive index
  double length = 15e-6;     // m
  double gamma0 = 2.0 * std::numbers::pi * 26e12;  // rad/s, sets the theta <-> time scale
  double c0 = kSpeedOfLight;

  /// ZnTe, 15 um, Gamma0 / 2pi = 26 THz.
  static CrystalConfig znte() { return {}; }

  void validate() const;
  /// Gamma0 * l / c0, the dimensionless vacuum transit time.
  double transit() const { return gamma0 * length / c0; }
};

/// n Gamma0 l / c0; the broadband SVAA holds for r well below this.
double svaa_rmax(const CrystalConfig& crystal);
/// (n - 1) Gamma0 l / c0; upper limit for g(r).
double causality_budget(const CrystalConfig& crystal);

/// Closed-form conformal time for the sech drive after a fraction z_frac of
/// the crystal: asinh(sinh(theta) + s r z_frac).
double sech_conformal_closed(double theta, double r, Polarity s, double z_frac = 1.0);

struct StepControl {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  double initial_step = 1e-3;
};

/// World line of one characteristic, entered at conformal time entrance_tau.
struct CharacteristicPath {
  double entrance_tau = 0.0;
  std::vector<double> z_frac;  // accepted integrator steps, starting at 0
  std::vector<double> theta;
  double exit_theta() const { return theta.back(); }
};

/// Integrates d theta / d z_frac = -s r e(theta) from the crystal entrance
/// (theta = theta_in) to z_frac_target.  Throws IntegrationError when the
/// step size collapses.
CharacteristicPath integrate_characteristic(const DrivingPulse& pulse, double theta_in,
                                            double z_frac_target = 1.0,
                                            const StepControl& control = {});

struct FlowPoint {
  double tau = 0.0;    // Gamma0 tau'(z_frac, theta)
  double slope = 1.0;  // d tau' / d theta
};

/// Follows the characteristic through (z_frac, theta) back to the entrance.
/// The slope is carried by the variational equation, so it stays regular at
/// zeros of the driving field.
FlowPoint trace_to_entrance(const DrivingPulse& pulse, double theta, double z_frac = 1.0,
                            const StepControl& control = {});

struct MapGridSpec {
  double theta_min = -60.0;
  double theta_max = 60.0;
  std::size_t points = 16385;
  StepControl step;
  /// Sech drives use the closed form unless this is cleared.
  bool closed_form = true;
};

/// Exit conformal time tau'_out(theta) tabulated on a uniform retarded-time
/// grid.  Immutable once built and safe to share between threads.
class ConformalMap {
 public:
  std::span<const double> theta_grid() const { return theta_; }
  std::span<const double> tau_out() const { return tau_; }
  std::span<const double> slope() const { return slope_; }
  const DrivingPulse& pulse() const { return pulse_; }
  const CrystalConfig& crystal() const { return crystal_; }

  /// True when tau_at/slope_at/inverse evaluate the sech closed form instead
  /// of the Hermite table.
  bool closed_form() const { return closed_form_; }

  double theta_min() const { return theta_.front(); }
  double theta_max() const { return theta_.back(); }
  double tau_min() const { return tau_.front(); }
  double tau_max() const { return tau_.back(); }

  double tau_at(double theta) const;
  double slope_at(double theta) const;
  /// theta with tau_at(theta) == tau to within 1e-10.
  double inverse(double tau) const;

 private:
  friend ConformalMap build_conformal_map(const DrivingPulse&, const CrystalConfig&,
                                          const MapGridSpec&);
  ConformalMap(DrivingPulse pulse, CrystalConfig crystal) : pulse_(std::move(pulse)), crystal_(crystal) {}

  DrivingPulse pulse_;
  CrystalConfig crystal_;
  bool closed_form_ = false;
  std::vector<double> theta_, tau_, slope_;
  MonotoneCubic table_;
};

ConformalMap build_conformal_map(const DrivingPulse& pulse, const CrystalConfig& crystal,
                                 const MapGridSpec& grid = {});

double invert_map(const ConformalMap& map, double tau_target);

struct WorldLine {
  double entrance_tau = 0.0;
  std::vector<double> z_frac;
  std::vector<double> theta;
  std::vector<double> z_m;  // lab position, -l/2 .. l/2
};

/// Characteristics launched at the given entrance times, sampled at z_samples
/// (fractions of the crystal length, ascending within [0, 1]).
std::vector<WorldLine> worldline_bundle(const DrivingPulse& pulse, const CrystalConfig& crystal,
                                        std::span<const double> entrance_times,
                                        std::span<const double> z_samples,
                                        const StepControl& control = {});

/// max over theta of tau'_out(theta) - theta.
double causality_g(const ConformalMap& map);
double causality_g(const DrivingPulse& pulse, double r,
                   const MapGridSpec& grid = {-30.0, 30.0, 4097, {}});

struct ValidityReport {
  double r = 0.0;
  double r_max = 0.0;
  double budget = 0.0;
  double g = 0.0;
  bool within_svaa = true;  // r < r_max / 2
  bool causal = true;       // g <= budget
  std::vector<std::string> warnings;
  /// Hard gate: causal and r below the SVAA limit itself.
  bool ok() const { return causal && r < r_max; }
};

ValidityReport check_validity(const DrivingPulse& pulse, const CrystalConfig& crystal,
                              const MapGridSpec& grid = {-30.0, 30.0, 4097, {}});
/// Throws ValidityError when the report fails the hard gate.
void enforce_validity(const ValidityReport& report);

/// Lab-frame exit conformal time tau_out(t) in seconds, for lab time t (s).
double lab_tau_out(const ConformalMap& map, double t_lab);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_CONFORMAL_H_
