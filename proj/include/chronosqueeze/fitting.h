#ifndef CHRONOSQUEEZE_FITTING_H_
#define CHRONOSQUEEZE_FITTING_H_

#include <span>
#include <string>
#include <vector>

#include "chronosqueeze/conformal.h"
#include "chronosqueeze/detection.h"

namespace chronosqueeze {

/// Squeezing fits h-(r) = A1 [exp(-A2 r) - 1]; AntiSqueezing fits h+(r) = A1 [exp(A2 r) - 1].
enum class Branch { Squeezing, AntiSqueezing };

std::string to_string(Branch b);
Branch parse_branch(const std::string& name);

struct FitResult {
  double A1 = 0.0;
  double A2 = 0.0;
  double residual_rms = 0.0;
  Branch branch = Branch::Squeezing;
  int iterations = 0;
  std::vector<double> r_values;

  double model(double r) const;
};

struct ExtremumPoint {
  double r = 0.0;
  double t_d = 0.0;  // dimensionless delay of the extremum
  double rdv = 0.0;
};

struct ExtremaOptions {
  MapGridSpec map_grid{-40.0, 40.0, 8193, {}};
  DetectionSettings detection;
  /// Half-width of the delay search for shapes without a pinned extremum.
  double search_span = 8.0;
};

/// RDV extremum for every r in r_values.  Single-cycle drives are read at
/// t_d = 0; other shapes use the global minimum (Squeezing) or maximum
/// (AntiSqueezing) over delay.
std::vector<ExtremumPoint> extrema_vs_r(const DrivingPulse& pulse_template,
                                        const CrystalConfig& crystal, const ProbeKernel& probe,
                                        std::span<const double> r_values, Polarity polarity,
                                        Branch branch, const ExtremaOptions& options = {});

/// Levenberg-Marquardt fit in log-parameters.  Needs at least 3 points with
/// r > 0.  Throws FitError on degenerate data or non-convergence.
FitResult fit_exponential(std::span<const double> r, std::span<const double> values, Branch branch);
FitResult fit_exponential(std::span<const ExtremumPoint> points, Branch branch);

/// -rdv / A1; positive means squeezing.
double degree_from_fit(double rdv, const FitResult& fit);

/// Fills trace.degree_pct with 100 * degree_from_fit.
void apply_degree(VarianceTrace& trace, const FitResult& fit);

/// 16 equally spaced strengths on (0, 0.5].
std::vector<double> default_fit_grid();

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_FITTING_H_
