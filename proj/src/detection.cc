#include "chronosqueeze/detection.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <sstream>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/fft.h"

namespace chronosqueeze {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Trapezoid rule for f(Omega) = Omega g(Omega) on [0, Omega_max] plus the
// first Euler-Maclaurin correction at Omega = 0, where f'(0) = g(0).  The
// integrand is negligible at Omega_max.
double spectral_integral(std::span<const double> g, double h) {
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < g.size(); ++k) sum += static_cast<double>(k) * h * g[k];
  sum += 0.5 * static_cast<double>(g.size() - 1) * h * g.back();
  return h * sum + h * h / 12.0 * g.front();
}

struct SpectralGrid {
  double omega_max;
  double h;
};

SpectralGrid spectral_grid(double fwhm, double s_min, const DetectionSettings& settings) {
  if (settings.omega_points < 16) throw InvalidArgumentError("need at least 16 spectral points");
  const double omega_max = settings.omega_cutoff / (fwhm * s_min);
  return {omega_max, omega_max / static_cast<double>(settings.omega_points - 1)};
}

double vacuum_on_grid(const ProbeKernel& probe, const SpectralGrid& grid, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double r = probe.spectrum(static_cast<double>(k) * grid.h);
    g[k] = r * r;
  }
  return spectral_integral(g, grid.h);
}

}  // namespace

ProbeKernel::ProbeKernel(double fwhm) : fwhm_(fwhm) {
  if (!(fwhm > 0.0) || !std::isfinite(fwhm)) {
    throw InvalidArgumentError("invalid probe: FWHM must be positive and finite");
  }
  norm_ = 2.0 * std::sqrt(kLn2) / (std::sqrt(std::numbers::pi) * fwhm);
}

ProbeKernel ProbeKernel::from_fs(double fwhm_fs, double gamma0) {
  return ProbeKernel(fwhm_fs * 1e-15 * gamma0);
}

double ProbeKernel::operator()(double t) const {
  return norm_ * std::exp(-4.0 * kLn2 * t * t / (fwhm_ * fwhm_));
}

double ProbeKernel::spectrum(double omega) const {
  return std::exp(-omega * omega * fwhm_ * fwhm_ / (16.0 * kLn2));
}

double vacuum_variance(const ProbeKernel& probe) {
  const DetectionSettings settings;
  return vacuum_on_grid(probe, spectral_grid(probe.fwhm(), 1.0, settings), settings.omega_points);
}

double vacuum_variance_analytic(const ProbeKernel& probe) {
  return 4.0 * kLn2 / (probe.fwhm() * probe.fwhm());
}

VarianceSample sample_variance(const ConformalMap& map, const ProbeKernel& probe, double t_d,
                               const DetectionSettings& settings) {
  const double tp = probe.fwhm();
  const double theta_lo = t_d - settings.window * tp;
  const double theta_hi = t_d + settings.window * tp;
  if (theta_lo < map.theta_min() || theta_hi > map.theta_max()) {
    std::ostringstream msg;
    msg << "probe window [" << theta_lo << ", " << theta_hi << "] exceeds the conformal map grid ["
        << map.theta_min() << ", " << map.theta_max() << "]; widen the map grid";
    throw WindowError(msg.str());
  }

  // Slope range over the window sets both the bandwidth and the sampling step.
  double s_min = std::numeric_limits<double>::infinity();
  double s_max = 0.0;
  constexpr int kSlopeProbes = 256;
  for (int i = 0; i <= kSlopeProbes; ++i) {
    const double th = theta_lo + (theta_hi - theta_lo) * i / kSlopeProbes;
    const double s = map.slope_at(th);
    s_min = std::min(s_min, s);
    s_max = std::max(s_max, s);
  }
  const auto grid_theta = map.theta_grid();
  const auto grid_slope = map.slope();
  auto first = std::lower_bound(grid_theta.begin(), grid_theta.end(), theta_lo);
  for (auto it = first; it != grid_theta.end() && *it <= theta_hi; ++it) {
    const double s = grid_slope[static_cast<std::size_t>(it - grid_theta.begin())];
    s_min = std::min(s_min, s);
    s_max = std::max(s_max, s);
  }

  const SpectralGrid spec = spectral_grid(tp, s_min, settings);
  const double du_max = settings.time_step * tp * s_min;
  const double period = 2.0 * std::numbers::pi / spec.h;  // N * du
  const auto n_min = static_cast<std::size_t>(std::ceil(period / du_max));
  const std::size_t n = std::bit_ceil(std::max<std::size_t>(n_min, 2 * settings.omega_points));
  const double du = period / static_cast<double>(n);

  const double u_lo = map.tau_at(theta_lo);
  const double u_hi = map.tau_at(theta_hi);
  const auto samples = static_cast<std::size_t>(std::floor((u_hi - u_lo) / du)) + 1;
  if (samples > n) {
    throw WindowError("kernel support does not fit the transform buffer; raise omega_points");
  }
  std::vector<double> kernel(n, 0.0);
  for (std::size_t j = 0; j < samples; ++j) {
    const double u = std::min(u_lo + du * static_cast<double>(j), u_hi);
    kernel[j] = probe(t_d - map.inverse(u));
  }

  std::vector<std::complex<double>> spectrum(n / 2 + 1);
  real_fft(kernel, spectrum);
  std::vector<double> power(settings.omega_points);
  for (std::size_t k = 0; k < settings.omega_points; ++k) power[k] = du * du * std::norm(spectrum[k]);

  VarianceSample out;
  out.V = spectral_integral(power, spec.h);
  out.V_vac = vacuum_on_grid(probe, spec, settings.omega_points);
  return out;
}

double detected_variance(const ConformalMap& map, const ProbeKernel& probe, double t_d,
                         const DetectionSettings& settings) {
  return sample_variance(map, probe, t_d, settings).V;
}

VarianceTrace rdv_trace(const ConformalMap& map, const ProbeKernel& probe,
                        std::span<const double> t_d, const DetectionSettings& settings) {
  VarianceTrace trace;
  const std::size_t n = t_d.size();
  trace.t_d.assign(t_d.begin(), t_d.end());
  trace.V.resize(n);
  trace.rdv.resize(n);
  trace.degree_pct.assign(n, std::nullopt);
  trace.V_vac = vacuum_variance_analytic(probe);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const VarianceSample s = sample_variance(map, probe, t_d[i], settings);
      trace.V[i] = s.V;
      trace.rdv[i] = s.rdv();
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  trace.rdv_simplified = simplified_rdv(map, t_d);
  return trace;
}

std::vector<double> simplified_rdv(const ConformalMap& map, std::span<const double> t) {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = map.slope_at(t[i]);
    out[i] = s * s - 1.0;
  }
  return out;
}

std::vector<double> simplified_degree_pct(const ConformalMap& map, std::span<const double> t) {
  std::vector<double> out = simplified_rdv(map, t);
  for (double& v : out) v = -100.0 * v;
  return out;
}

double rdn_from_variance(double V, double V_vac, double shot_noise_var) {
  if (!(V >= 0.0) || !(V_vac > 0.0) || !(shot_noise_var > 0.0)) {
    throw OutOfRangeError("RDN needs V >= 0, V_vac > 0 and a positive shot-noise variance");
  }
  const double vac = std::sqrt(V_vac);
  return (std::sqrt(V) - vac) * vac / shot_noise_var;
}

std::vector<double> rdn_from_variance(std::span<const double> V, double V_vac,
                                      double shot_noise_var) {
  std::vector<double> out(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) out[i] = rdn_from_variance(V[i], V_vac, shot_noise_var);
  return out;
}

}  // namespace chronosqueeze
