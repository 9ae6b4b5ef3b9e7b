#ifndef CHRONOSQUEEZE_PERTURBATION_H_
#define CHRONOSQUEEZE_PERTURBATION_H_

#include <complex>

#include "chronosqueeze/pulses.h"

namespace chronosqueeze {

/// First-order two-mode kernel for the sech drive in dimensionless
/// frequencies: -i s r sign(w w1) sqrt|w w1| sech(pi (w + w1) / 2) / 2.
/// Throws UnsupportedShapeError for other shapes.
std::complex<double> xi_sym(double omega, double omega1, const DrivingPulse& pulse);

/// First-order normally ordered variance for the sech drive,
/// s (r/6) [tanh^3 sech - 5 tanh sech^3] at theta.
double pt_variance_sech(double theta, double r, Polarity s = Polarity::Positive);

/// Limit shape -s e'''(theta) scaled so that its largest magnitude is 1.
double pt_rdv_shape(const DrivingPulse& pulse, double theta);

/// max over theta of |e'''(theta)| for an analytic shape.
double third_derivative_peak(PulseShape shape);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_PERTURBATION_H_
