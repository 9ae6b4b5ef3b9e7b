#include "chronosqueeze/conformal.h"

#include <array>
#include <cmath>
#include <exception>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

namespace odeint = boost::numeric::odeint;

using Scalar = std::array<double, 1>;
using Augmented = std::array<double, 2>;  // theta, log(d tau / d theta)

constexpr std::size_t kMaxSteps = 2'000'000;

struct StepBudget {
  std::size_t steps = 0;
  void tick() {
    if (++steps > kMaxSteps) {
      throw IntegrationError("characteristic integration exceeded " + std::to_string(kMaxSteps) +
                             " steps (step size collapsed)");
    }
  }
};

template <class State, class System, class Observer>
void integrate(System system, State& state, double span, const StepControl& control,
               Observer observer) {
  if (!(control.rel_tol > 0.0) || !(control.abs_tol > 0.0) || !(control.initial_step > 0.0)) {
    throw InvalidArgumentError("step control tolerances must be positive");
  }
  auto stepper = odeint::make_controlled(control.abs_tol, control.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_adaptive(stepper, system, state, 0.0, span,
                               std::min(control.initial_step, span), observer);
  } catch (const odeint::odeint_error& e) {
    throw IntegrationError(std::string("characteristic integration failed: ") + e.what());
  }
}

double golden_max(auto f, double lo, double hi, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max({f(0.5 * (a + b)), fc, fd});
}

}  // namespace

void CrystalConfig::validate() const {
  if (!(n > 1.0)) throw InvalidArgumentError("crystal refractive index must exceed 1");
  if (!(length > 0.0)) throw InvalidArgumentError("crystal length must be positive");
  if (!(gamma0 > 0.0)) throw InvalidArgumentError("Gamma0 must be positive");
  if (!(c0 > 0.0)) throw InvalidArgumentError("c0 must be positive");
}

double svaa_rmax(const CrystalConfig& crystal) {
  crystal.validate();
  return crystal.n * crystal.transit();
}

double causality_budget(const CrystalConfig& crystal) {
  crystal.validate();
  return (crystal.n - 1.0) * crystal.transit();
}

double sech_conformal_closed(double theta, double r, Polarity s, double z_frac) {
  return std::asinh(std::sinh(theta) + sign_of(s) * r * z_frac);
}

CharacteristicPath integrate_characteristic(const DrivingPulse& pulse, double theta_in,
                                            double z_frac_target, const StepControl& control) {
  if (!std::isfinite(theta_in)) throw InvalidArgumentError("entrance time must be finite");
  if (!(z_frac_target >= 0.0 && z_frac_target <= 1.0)) {
    throw InvalidArgumentError("z_frac must lie in [0, 1]");
  }
  CharacteristicPath path;
  path.entrance_tau = theta_in;
  path.z_frac.push_back(0.0);
  path.theta.push_back(theta_in);
  if (pulse.r() == 0.0 || z_frac_target == 0.0) {
    if (z_frac_target > 0.0) {
      path.z_frac.push_back(z_frac_target);
      path.theta.push_back(theta_in);
    }
    return path;
  }
  const double rate = -pulse.sign() * pulse.r();
  auto system = [&](const Scalar& x, Scalar& dxdz, double) { dxdz[0] = rate * pulse.eval(x[0]); };
  Scalar x{theta_in};
  StepBudget budget;
  path.z_frac.clear();
  path.theta.clear();
  integrate(system, x, z_frac_target, control, [&](const Scalar& state, double z) {
    budget.tick();
    path.z_frac.push_back(z);
    path.theta.push_back(state[0]);
  });
  return path;
}

FlowPoint trace_to_entrance(const DrivingPulse& pulse, double theta, double z_frac,
                            const StepControl& control) {
  if (!std::isfinite(theta)) throw InvalidArgumentError("retarded time must be finite");
  if (!(z_frac >= 0.0 && z_frac <= 1.0)) throw InvalidArgumentError("z_frac must lie in [0, 1]");
  if (pulse.r() == 0.0 || z_frac == 0.0) return {theta, 1.0};
  const double rate = pulse.sign() * pulse.r();
  auto system = [&](const Augmented& x, Augmented& dxdz, double) {
    dxdz[0] = rate * pulse.eval(x[0]);
    dxdz[1] = rate * pulse.derivative(x[0]);
  };
  Augmented x{theta, 0.0};
  StepBudget budget;
  integrate(system, x, z_frac, control, [&](const Augmented&, double) { budget.tick(); });
  return {x[0], std::exp(x[1])};
}

double ConformalMap::tau_at(double theta) const {
  if (closed_form_) {
    if (!(theta >= theta_min() && theta <= theta_max())) {
      throw OutOfRangeError("theta " + std::to_string(theta) + " outside conformal map grid");
    }
    return sech_conformal_closed(theta, pulse_.r(), pulse_.polarity());
  }
  return table_.value(theta);
}

double ConformalMap::slope_at(double theta) const {
  if (closed_form_) {
    if (!(theta >= theta_min() && theta <= theta_max())) {
      throw OutOfRangeError("theta " + std::to_string(theta) + " outside conformal map grid");
    }
    const double shifted = std::sinh(theta) + pulse_.sign() * pulse_.r();
    return std::cosh(theta) / std::sqrt(1.0 + shifted * shifted);
  }
  return table_.derivative(theta);
}

double ConformalMap::inverse(double tau) const {
  if (!(tau >= tau_min() && tau <= tau_max())) {
    throw OutOfRangeError("conformal time " + std::to_string(tau) + " outside tabulated range [" +
                          std::to_string(tau_min()) + ", " + std::to_string(tau_max()) + "]");
  }
  if (closed_form_) {
    const double theta = std::asinh(std::sinh(tau) - pulse_.sign() * pulse_.r());
    return std::clamp(theta, theta_min(), theta_max());
  }
  return table_.inverse(tau, 1e-12);
}

ConformalMap build_conformal_map(const DrivingPulse& pulse, const CrystalConfig& crystal,
                                 const MapGridSpec& grid) {
  crystal.validate();
  if (grid.points < 3 || !(grid.theta_max > grid.theta_min)) {
    throw InvalidArgumentError("conformal map grid needs >= 3 points on a non-empty interval");
  }
  if (grid.theta_min < pulse.theta_min() || grid.theta_max > pulse.theta_max()) {
    throw OutOfRangeError("conformal map grid exceeds the sampled pulse domain");
  }
  ConformalMap map(pulse, crystal);
  const std::size_t n = grid.points;
  const double h = (grid.theta_max - grid.theta_min) / static_cast<double>(n - 1);
  map.theta_.resize(n);
  map.tau_.resize(n);
  map.slope_.resize(n);
  for (std::size_t i = 0; i < n; ++i) map.theta_[i] = grid.theta_min + h * static_cast<double>(i);
  map.theta_.back() = grid.theta_max;

  if (grid.closed_form && pulse.shape() == PulseShape::HalfCycleSech) {
    map.closed_form_ = true;
    for (std::size_t i = 0; i < n; ++i) {
      map.tau_[i] = map.tau_at(map.theta_[i]);
      map.slope_[i] = map.slope_at(map.theta_[i]);
    }
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < n; ++i) {
      try {
        const FlowPoint p = trace_to_entrance(pulse, map.theta_[i], 1.0, grid.step);
        map.tau_[i] = p.tau;
        map.slope_[i] = p.slope;
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!(map.slope_[i] > 0.0) || (i > 0 && !(map.tau_[i] > map.tau_[i - 1]))) {
      std::ostringstream msg;
      msg << "conformal flow is not strictly monotone near theta = " << map.theta_[i]
          << " (slope " << map.slope_[i] << ")";
      throw InvalidRegimeError(msg.str());
    }
  }
  if (!map.closed_form_) map.table_ = MonotoneCubic(map.theta_, map.tau_, map.slope_);
  return map;
}

double invert_map(const ConformalMap& map, double tau_target) { return map.inverse(tau_target); }

std::vector<WorldLine> worldline_bundle(const DrivingPulse& pulse, const CrystalConfig& crystal,
                                        std::span<const double> entrance_times,
                                        std::span<const double> z_samples,
                                        const StepControl& control) {
  crystal.validate();
  for (std::size_t k = 0; k < z_samples.size(); ++k) {
    if (!(z_samples[k] >= 0.0 && z_samples[k] <= 1.0) ||
        (k > 0 && !(z_samples[k] > z_samples[k - 1]))) {
      throw InvalidArgumentError("z samples must be ascending within [0, 1]");
    }
  }
  std::vector<WorldLine> lines(entrance_times.size());
  for (std::size_t j = 0; j < entrance_times.size(); ++j) {
    WorldLine& line = lines[j];
    line.entrance_tau = entrance_times[j];
    // Integrating segment by segment keeps every sample on the accepted path.
    double theta = entrance_times[j];
    double z = 0.0;
    for (double target : z_samples) {
      if (target > z) {
        theta = integrate_characteristic(pulse, theta, target - z, control).exit_theta();
        z = target;
      }
      line.z_frac.push_back(target);
      line.theta.push_back(theta);
      line.z_m.push_back((target - 0.5) * crystal.length);
    }
  }
  return lines;
}

double causality_g(const ConformalMap& map) {
  const auto theta = map.theta_grid();
  const auto tau = map.tau_out();
  std::size_t best = 0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    if (tau[i] - theta[i] > tau[best] - theta[best]) best = i;
  }
  if (best == 0 || best + 1 == theta.size()) return tau[best] - theta[best];
  auto advance = [&](double x) { return map.tau_at(x) - x; };
  return golden_max(advance, theta[best - 1], theta[best + 1]);
}

double causality_g(const DrivingPulse& pulse, double r, const MapGridSpec& grid) {
  return causality_g(build_conformal_map(pulse.with_strength(r), CrystalConfig{}, grid));
}

ValidityReport check_validity(const DrivingPulse& pulse, const CrystalConfig& crystal,
                              const MapGridSpec& grid) {
  ValidityReport report;
  report.r = pulse.r();
  report.r_max = svaa_rmax(crystal);
  report.budget = causality_budget(crystal);
  report.g = causality_g(build_conformal_map(pulse, crystal, grid));
  report.within_svaa = report.r < 0.5 * report.r_max;
  report.causal = report.g <= report.budget;
  std::ostringstream msg;
  if (!report.within_svaa) {
    msg << "r = " << report.r << " is not small against the SVAA limit " << report.r_max;
    report.warnings.push_back(msg.str());
    msg.str("");
  }
  if (!report.causal) {
    msg << "g(r) = " << report.g << " exceeds the causality budget " << report.budget;
    report.warnings.push_back(msg.str());
  }
  return report;
}

void enforce_validity(const ValidityReport& report) {
  if (!(report.r < report.r_max)) {
    std::ostringstream msg;
    msg << "r = " << report.r << " reaches the SVAA limit n Gamma0 l / c0 = " << report.r_max;
    throw ValidityError(msg.str());
  }
  if (!report.causal) {
    std::ostringstream msg;
    msg << "causality violated: g(r) = " << report.g << " > (n-1) Gamma0 l / c0 = "
        << report.budget << " at r = " << report.r;
    throw ValidityError(msg.str());
  }
}

double lab_tau_out(const ConformalMap& map, double t_lab) {
  const CrystalConfig& c = map.crystal();
  const double half_delay = c.n * c.length / (2.0 * c.c0);
  const double theta = c.gamma0 * (t_lab - half_delay);
  return map.tau_at(theta) / c.gamma0 - half_delay;
}

}  // namespace chronosqueeze
