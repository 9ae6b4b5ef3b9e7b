#include "chronosqueeze/fitting.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kGradientTol = 1e-12;

double branch_sign(Branch b) { return b == Branch::Squeezing ? -1.0 : 1.0; }

struct Residuals {
  std::vector<double> res;
  double cost = 0.0;  // 0.5 * sum res^2
};

Residuals residuals(std::span<const double> r, std::span<const double> y, double a1, double a2,
                    double sigma) {
  Residuals out;
  out.res.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.res[i] = a1 * std::expm1(sigma * a2 * r[i]) - y[i];
    out.cost += 0.5 * out.res[i] * out.res[i];
  }
  return out;
}

// Solves for A2 from the ratio of two samples of A1 [exp(sigma A2 r) - 1].
double initial_rate(double r_i, double y_i, double r_j, double y_j, double sigma) {
  const double target = std::log(y_j / y_i);
  auto f = [&](double log_a2) {
    const double a2 = std::exp(log_a2);
    return std::log(std::expm1(sigma * a2 * r_j) / std::expm1(sigma * a2 * r_i)) - target;
  };
  double lo = std::log(1e-6), hi = std::log(1e3);
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(fhi)) fhi = sigma > 0 ? 1.0 : -1.0;
  // f is monotone in A2; out-of-range ratios fall back to the nearer end.
  if (flo * fhi > 0.0) return std::abs(flo) < std::abs(fhi) ? 1e-2 : 10.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (!std::isfinite(fm) || (fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = std::isfinite(fm) ? fm : fhi;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

std::string to_string(Branch b) {
  return b == Branch::Squeezing ? "squeezing" : "anti_squeezing";
}

Branch parse_branch(const std::string& name) {
  if (name == "squeezing" || name == "minus" || name == "-") return Branch::Squeezing;
  if (name == "anti_squeezing" || name == "antisqueezing" || name == "plus" || name == "+") {
    return Branch::AntiSqueezing;
  }
  throw InvalidArgumentError("unknown fit branch '" + name + "'");
}

double FitResult::model(double r) const { return A1 * std::expm1(branch_sign(branch) * A2 * r); }

std::vector<ExtremumPoint> extrema_vs_r(const DrivingPulse& pulse_template,
                                        const CrystalConfig& crystal, const ProbeKernel& probe,
                                        std::span<const double> r_values, Polarity polarity,
                                        Branch branch, const ExtremaOptions& options) {
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    if (!(r_values[i] >= 0.0) || (i > 0 && !(r_values[i] > r_values[i - 1]))) {
      throw InvalidArgumentError("r values must be non-negative and strictly ascending");
    }
  }
  const bool pinned = pulse_template.shape() == PulseShape::SingleCycle;
  const double orient = branch == Branch::Squeezing ? -1.0 : 1.0;  // maximize orient * rdv
  std::vector<ExtremumPoint> out(r_values.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    try {
      const DrivingPulse pulse =
          pulse_template.with_strength(r_values[i]).with_polarity(polarity);
      const ConformalMap map = build_conformal_map(pulse, crystal, options.map_grid);
      auto rdv_at = [&](double t) {
        return sample_variance(map, probe, t, options.detection).rdv();
      };
      ExtremumPoint p{r_values[i], 0.0, 0.0};
      if (pinned) {
        p.rdv = rdv_at(0.0);
      } else {
        const double step = std::max(0.02, 0.25 * probe.fwhm());
        const int n = static_cast<int>(std::ceil(2.0 * options.search_span / step));
        double best_t = 0.0, best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k <= n; ++k) {
          const double t = -options.search_span + 2.0 * options.search_span * k / n;
          const double v = orient * rdv_at(t);
          if (v > best) {
            best = v;
            best_t = t;
          }
        }
        const double h = 2.0 * options.search_span / n;
        double a = best_t - h, b = best_t + h;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = orient * rdv_at(c), fd = orient * rdv_at(d);
        for (int it = 0; it < 60 && b - a > 1e-9; ++it) {
          if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = orient * rdv_at(c);
          } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = orient * rdv_at(d);
          }
        }
        p.t_d = best_t;
        if (fc > best) { p.t_d = c; best = fc; }
        if (fd > best) { p.t_d = d; best = fd; }
        p.rdv = orient * best;
      }
      out[i] = p;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

FitResult fit_exponential(std::span<const double> r, std::span<const double> y, Branch branch) {
  if (r.size() != y.size()) throw InvalidArgumentError("fit needs equally many r and values");
  if (r.size() < 3) throw InvalidArgumentError("fit needs at least 3 points");
  for (double v : r) {
    if (!(v > 0.0)) throw InvalidArgumentError("fit needs r > 0");
  }
  if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) {
    throw FitError("degenerate fit data: all values are zero", 0.0);
  }
  const double sigma = branch_sign(branch);
  const std::size_t first = 0, last = r.size() - 1;
  if (!(y[first] * sigma > 0.0) || !(y[last] * sigma > 0.0)) {
    std::ostringstream msg;
    msg << "data sign does not match the " << to_string(branch) << " branch";
    throw FitError(msg.str(), 0.0);
  }

  double a2 = initial_rate(r[first], y[first], r[last], y[last], sigma);
  double a1 = y[first] / std::expm1(sigma * a2 * r[first]);
  double p0 = std::log(a1), p1 = std::log(a2);
  Residuals cur = residuals(r, y, a1, a2, sigma);
  double lambda = 1e-3;

  FitResult fit;
  fit.branch = branch;
  fit.r_values.assign(r.begin(), r.end());
  bool converged = false;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, g0 = 0.0, g1 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double ex = std::exp(sigma * a2 * r[i]);
      const double j0 = a1 * (ex - 1.0);
      const double j1 = a1 * sigma * a2 * r[i] * ex;
      jtj00 += j0 * j0;
      jtj01 += j0 * j1;
      jtj11 += j1 * j1;
      g0 += j0 * cur.res[i];
      g1 += j1 * cur.res[i];
    }
    if (std::hypot(g0, g1) < kGradientTol) {
      converged = true;
      break;
    }
    bool accepted = false;
    while (lambda < 1e16) {
      const double m00 = jtj00 * (1.0 + lambda), m11 = jtj11 * (1.0 + lambda);
      const double det = m00 * m11 - jtj01 * jtj01;
      const double d0 = -(m11 * g0 - jtj01 * g1) / det;
      const double d1 = -(m00 * g1 - jtj01 * g0) / det;
      const double q0 = p0 + d0, q1 = p1 + d1;
      const Residuals trial = residuals(r, y, std::exp(q0), std::exp(q1), sigma);
      if (std::isfinite(trial.cost) && trial.cost <= cur.cost) {
        const bool stalled = std::abs(d0) + std::abs(d1) < 1e-15 * (1.0 + std::abs(p0) + std::abs(p1));
        p0 = q0;
        p1 = q1;
        a1 = std::exp(p0);
        a2 = std::exp(p1);
        cur = trial;
        lambda = std::max(lambda * 0.1, 1e-12);
        accepted = true;
        if (stalled) converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (converged) break;
    if (!accepted) {
      // No descent direction left: the iterate sits at the noise floor of the cost.
      converged = std::hypot(g0, g1) < 1e-8 * std::sqrt(2.0 * cur.cost + 1e-300) + kGradientTol;
      break;
    }
  }
  fit.A1 = a1;
  fit.A2 = a2;
  fit.iterations = it;
  fit.residual_rms = std::sqrt(2.0 * cur.cost / static_cast<double>(r.size()));
  if (!converged) {
    std::ostringstream msg;
    msg << "exponential fit did not converge after " << it << " iterations (residual rms "
        << fit.residual_rms << ")";
    throw FitError(msg.str(), fit.residual_rms);
  }
  return fit;
}

FitResult fit_exponential(std::span<const ExtremumPoint> points, Branch branch) {
  std::vector<double> r, y;
  for (const auto& p : points) {
    r.push_back(p.r);
    y.push_back(p.rdv);
  }
  return fit_exponential(r, y, branch);
}

double degree_from_fit(double rdv, const FitResult& fit) {
  if (!(fit.A1 > 0.0)) throw InvalidArgumentError("fit amplitude A1 must be positive");
  return -rdv / fit.A1;
}

void apply_degree(VarianceTrace& trace, const FitResult& fit) {
  trace.degree_pct.resize(trace.rdv.size());
  for (std::size_t i = 0; i < trace.rdv.size(); ++i) {
    trace.degree_pct[i] = 100.0 * degree_from_fit(trace.rdv[i], fit);
  }
}

std::vector<double> default_fit_grid() {
  std::vector<double> r(16);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.5 * static_cast<double>(i + 1) / 16.0;
  return r;
}

}  // namespace chronosqueeze
