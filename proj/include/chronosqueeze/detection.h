#ifndef CHRONOSQUEEZE_DETECTION_H_
#define CHRONOSQUEEZE_DETECTION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chronosqueeze/conformal.h"

namespace chronosqueeze {

/// Normalized Gaussian gate R(t) = (2 sqrt(ln2) / (sqrt(pi) t_p)) exp(-4 ln2 t^2 / t_p^2).
///
/// The FWHM is given in whatever time unit the caller works in; the
/// detection routines expect dimensionless theta units (Gamma0 * t).
class ProbeKernel {
 public:
  explicit ProbeKernel(double fwhm);
  static ProbeKernel from_fs(double fwhm_fs, double gamma0);

  double fwhm() const { return fwhm_; }
  double normalization() const { return norm_; }
  double operator()(double t) const;
  /// Fourier transform with R~(0) = 1.
  double spectrum(double omega) const;

 private:
  double fwhm_;
  double norm_;
};

/// Vacuum variance, integral over Omega > 0 of Omega |R~(Omega)|^2, by
/// quadrature on the default spectral grid.
double vacuum_variance(const ProbeKernel& probe);
/// Closed form 4 ln2 / t_p^2.
double vacuum_variance_analytic(const ProbeKernel& probe);

struct DetectionSettings {
  std::size_t omega_points = 4096;
  /// Omega_max * t_p * s_min, with s_min the smallest map slope in the window.
  double omega_cutoff = 14.9;
  /// Half-width of the probe window in units of t_p.
  double window = 6.0;
  /// Kernel sampling step in units of t_p * s_min.
  double time_step = 0.15;
};

struct VarianceSample {
  double V = 0.0;
  /// Vacuum variance evaluated with the same spectral grid as V.
  double V_vac = 0.0;
  double rdv() const { return (V - V_vac) / V_vac; }
};

/// Detected variance at delay t_d for the remapped vacuum.  The effective
/// kernel K(u) = R(t_d - tau_out^{-1}(u)) is sampled on a uniform grid,
/// transformed, and Omega |K~|^2 is integrated with an endpoint-corrected
/// trapezoid rule.
VarianceSample sample_variance(const ConformalMap& map, const ProbeKernel& probe, double t_d,
                               const DetectionSettings& settings = {});

double detected_variance(const ConformalMap& map, const ProbeKernel& probe, double t_d,
                         const DetectionSettings& settings = {});

struct VarianceTrace {
  std::vector<double> t_d;  // dimensionless delay
  std::vector<double> V;
  std::vector<double> rdv;
  std::vector<double> rdv_simplified;
  std::vector<std::optional<double>> degree_pct;
  double V_vac = 0.0;

  std::size_t size() const { return t_d.size(); }
};

VarianceTrace rdv_trace(const ConformalMap& map, const ProbeKernel& probe,
                        std::span<const double> t_d, const DetectionSettings& settings = {});

/// Simplified picture: slope^2 - 1 at each time.
std::vector<double> simplified_rdv(const ConformalMap& map, std::span<const double> t);
/// -(slope^2 - 1) in percent.
std::vector<double> simplified_degree_pct(const ConformalMap& map, std::span<const double> t);

/// (sqrt(V) - sqrt(V_vac)) sqrt(V_vac) / shot_noise_var.
double rdn_from_variance(double V, double V_vac, double shot_noise_var);
std::vector<double> rdn_from_variance(std::span<const double> V, double V_vac,
                                      double shot_noise_var);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_DETECTION_H_
