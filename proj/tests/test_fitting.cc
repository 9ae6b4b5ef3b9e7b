#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/fitting.h"

namespace cs = chronosqueeze;

namespace {

std::vector<double> synthetic(const std::vector<double>& r, double a1, double a2, cs::Branch b) {
  const double sign = b == cs::Branch::Squeezing ? -1.0 : 1.0;
  std::vector<double> y;
  for (double x : r) y.push_back(a1 * std::expm1(sign * a2 * x));
  return y;
}

const cs::CrystalConfig kZnTe = cs::CrystalConfig::znte();

}  // namespace

TEST(Fit, NoiselessRoundTrip) {
  const auto r = cs::default_fit_grid();
  for (auto b : {cs::Branch::Squeezing, cs::Branch::AntiSqueezing}) {
    for (auto [a1, a2] : {std::pair{0.05, 1.4}, std::pair{0.09, 1.38}, std::pair{1.2, 0.3}}) {
      const auto fit = cs::fit_exponential(r, synthetic(r, a1, a2, b), b);
      EXPECT_NEAR(fit.A1, a1, 1e-10 * a1);
      EXPECT_NEAR(fit.A2, a2, 1e-10 * a2);
      EXPECT_LT(fit.residual_rms, 1e-12);
      EXPECT_EQ(fit.branch, b);
    }
  }
}

TEST(Fit, RoundTripOnWideGrid) {
  std::vector<double> r;
  for (int i = 0; i < 16; ++i) r.push_back(0.05 + i * (2.0 - 0.05) / 15);
  const auto fit = cs::fit_exponential(r, synthetic(r, 0.05, 1.4, cs::Branch::AntiSqueezing),
                                       cs::Branch::AntiSqueezing);
  EXPECT_NEAR(fit.A1, 0.05, 1e-12);
  EXPECT_NEAR(fit.A2, 1.4, 1e-10);
}

TEST(Fit, NoisyDataStillConverges) {
  const auto r = cs::default_fit_grid();
  auto y = synthetic(r, 0.1, 1.0, cs::Branch::Squeezing);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= 1.0 + 0.01 * ((i % 3) - 1.0);
  const auto fit = cs::fit_exponential(r, y, cs::Branch::Squeezing);
  EXPECT_NEAR(fit.A1, 0.1, 0.02);
  EXPECT_GT(fit.residual_rms, 0.0);
}

TEST(Fit, RejectsBadData) {
  const std::vector<double> r{0.1, 0.2, 0.3};
  EXPECT_THROW(cs::fit_exponential(r, std::vector<double>{0, 0, 0}, cs::Branch::Squeezing), cs::FitError);
  EXPECT_THROW(cs::fit_exponential(std::vector<double>{0.1, 0.2}, std::vector<double>{-0.1, -0.2},
                                   cs::Branch::Squeezing),
               cs::InvalidArgumentError);
  EXPECT_THROW(cs::fit_exponential(r, std::vector<double>{0.1, 0.2, 0.3}, cs::Branch::Squeezing), cs::FitError);
  EXPECT_THROW(cs::fit_exponential(std::vector<double>{0.0, 0.2, 0.3}, std::vector<double>{-0.1, -0.2, -0.3},
                                   cs::Branch::Squeezing),
               cs::InvalidArgumentError);
}

TEST(Degree, Definition) {
  cs::FitResult fit;
  fit.A1 = 0.05;
  EXPECT_EQ(cs::degree_from_fit(0.0, fit), 0.0);
  EXPECT_NEAR(cs::degree_from_fit(-0.02, fit), 0.40, 1e-15);
  fit.A1 = 0.0;
  EXPECT_THROW(cs::degree_from_fit(-0.02, fit), cs::InvalidArgumentError);
}

TEST(Degree, AppliedTraceKeepsZeroCrossings) {
  cs::VarianceTrace trace;
  trace.t_d = {0, 1, 2, 3};
  trace.rdv = {-0.01, 0.0, 0.02, -0.03};
  trace.V = trace.rdv;
  trace.rdv_simplified = trace.rdv;
  cs::FitResult fit;
  fit.A1 = 0.1;
  cs::apply_degree(trace, fit);
  for (std::size_t i = 0; i < trace.rdv.size(); ++i) {
    ASSERT_TRUE(trace.degree_pct[i].has_value());
    EXPECT_EQ(*trace.degree_pct[i] > 0, trace.rdv[i] < 0);
    EXPECT_EQ(*trace.degree_pct[i] == 0, trace.rdv[i] == 0);
  }
}

TEST(Extrema, ZeroStrengthIsVacuum) {
  const std::vector<double> r{0.0};
  const auto probe = cs::ProbeKernel::from_fs(5.9, kZnTe.gamma0);
  const auto pts = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                    cs::Polarity::Positive, cs::Branch::Squeezing);
  EXPECT_LT(std::abs(pts[0].rdv), 1e-10);
}

TEST(Extrema, SmallStrengthBranchesAreAntisymmetric) {
  const std::vector<double> r{0.02, 0.05};
  const auto probe = cs::ProbeKernel::from_fs(5.9, kZnTe.gamma0);
  const auto sq = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                   cs::Polarity::Positive, cs::Branch::Squeezing);
  const auto an = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                   cs::Polarity::Negative, cs::Branch::AntiSqueezing);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_LT(sq[i].rdv, 0.0);
    EXPECT_GT(an[i].rdv, 0.0);
    // Equal magnitudes at first order; the ratio drifts by O(r).
    EXPECT_NEAR(an[i].rdv / -sq[i].rdv, 1.0, 2.0 * r[i]);
  }
}

TEST(Extrema, AntiSqueezingGrowsFaster) {
  const std::vector<double> r{0.5, 1.0, 2.0};
  const auto probe = cs::ProbeKernel::from_fs(5.9, kZnTe.gamma0);
  const auto sq = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                   cs::Polarity::Positive, cs::Branch::Squeezing);
  const auto an = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                   cs::Polarity::Negative, cs::Branch::AntiSqueezing);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_GT(an[i].rdv, -sq[i].rdv);
    EXPECT_GT(sq[i].rdv, -1.0);
  }
}

TEST(Extrema, GlobalSearchForHalfCycle) {
  const std::vector<double> r{1.0};
  const auto probe = cs::ProbeKernel::from_fs(0.49, kZnTe.gamma0);
  const auto sq = cs::extrema_vs_r(cs::DrivingPulse::half_cycle_sech(), kZnTe, probe, r,
                                   cs::Polarity::Positive, cs::Branch::Squeezing);
  const auto map = cs::build_conformal_map(cs::DrivingPulse::half_cycle_sech(1.0), kZnTe);
  double lowest = 0.0;
  for (double t = -4; t <= 4; t += 0.01) {
    lowest = std::min(lowest, cs::sample_variance(map, probe, t).rdv());
  }
  EXPECT_LE(sq[0].rdv, lowest + 1e-12);
  EXPECT_NEAR(sq[0].rdv, lowest, 1e-3 * std::abs(lowest));
}

TEST(Extrema, RejectsUnsortedStrengths) {
  const std::vector<double> r{0.5, 0.2};
  const auto probe = cs::ProbeKernel::from_fs(5.9, kZnTe.gamma0);
  EXPECT_THROW(cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                cs::Polarity::Positive, cs::Branch::Squeezing),
               cs::InvalidArgumentError);
}

TEST(Branch, Names) {
  EXPECT_EQ(cs::parse_branch(cs::to_string(cs::Branch::Squeezing)), cs::Branch::Squeezing);
  EXPECT_EQ(cs::parse_branch(cs::to_string(cs::Branch::AntiSqueezing)), cs::Branch::AntiSqueezing);
  EXPECT_THROW(cs::parse_branch("sideways"), cs::InvalidArgumentError);
}

namespace {

struct BranchFits {
  cs::FitResult squeeze, anti;
  double degree_at_half = 0.0;  // squeezing degree at r = 0.5 from the squeezing fit
};

BranchFits fit_both(double t_p_fs) {
  const auto r = cs::default_fit_grid();
  const auto probe = cs::ProbeKernel::from_fs(t_p_fs, kZnTe.gamma0);
  const auto sq = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                   cs::Polarity::Positive, cs::Branch::Squeezing);
  const auto an = cs::extrema_vs_r(cs::DrivingPulse::single_cycle(), kZnTe, probe, r,
                                   cs::Polarity::Negative, cs::Branch::AntiSqueezing);
  BranchFits out{cs::fit_exponential(sq, cs::Branch::Squeezing),
                 cs::fit_exponential(an, cs::Branch::AntiSqueezing)};
  out.degree_at_half = cs::degree_from_fit(sq.back().rdv, out.squeeze);
  return out;
}

}  // namespace

TEST(Fit, BranchRatesAgreeForShortProbe) {
  const auto fits = fit_both(0.49);
  EXPECT_NEAR(fits.anti.A2 / fits.squeeze.A2, 1.0, 0.15);
}

TEST(Fit, ShortProbeDegreeApproachesSimplifiedPicture) {
  const double simplified = 1.0 - std::exp(-2.0 * 0.5);
  const auto short_probe = fit_both(0.49);
  const auto long_probe = fit_both(5.9);
  EXPECT_LT(std::abs(short_probe.degree_at_half - simplified),
            std::abs(long_probe.degree_at_half - simplified));
}
