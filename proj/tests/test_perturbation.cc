#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "chronosqueeze/errors.h"
#include "chronosqueeze/perturbation.h"
#include "oracles.h"

namespace cs = chronosqueeze;

TEST(XiSym, VanishesOnAxes) {
  const auto p = cs::DrivingPulse::half_cycle_sech(0.3);
  EXPECT_EQ(cs::xi_sym(0.0, 1.2, p), std::complex<double>(0.0, 0.0));
  EXPECT_EQ(cs::xi_sym(-2.0, 0.0, p), std::complex<double>(0.0, 0.0));
}

TEST(XiSym, ValueAtUnitFrequencies) {
  for (double r : {0.1, 1.0}) {
    const auto p = cs::DrivingPulse::half_cycle_sech(r);
    const auto xi = cs::xi_sym(1.0, 1.0, p);
    EXPECT_NEAR(std::abs(xi), r / (2.0 * std::cosh(std::numbers::pi)), 1e-15);
    EXPECT_NEAR(std::abs(xi), 0.043134 * r, 1e-6 * r);
    EXPECT_EQ(xi.real(), 0.0);
    EXPECT_LT(xi.imag(), 0.0);
  }
}

TEST(XiSym, ExchangeSymmetryAndLinearity) {
  const auto p1 = cs::DrivingPulse::half_cycle_sech(0.2, cs::Polarity::Negative);
  const auto p2 = p1.with_strength(0.6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pick(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double a = pick(rng), b = pick(rng);
    EXPECT_EQ(cs::xi_sym(a, b, p1), cs::xi_sym(b, a, p1));
    EXPECT_NEAR(std::abs(cs::xi_sym(a, b, p2)), 3.0 * std::abs(cs::xi_sym(a, b, p1)), 1e-14);
  }
}

TEST(XiSym, OnlySech) {
  EXPECT_THROW(cs::xi_sym(1.0, 1.0, cs::DrivingPulse::single_cycle(0.1)), cs::UnsupportedShapeError);
}

TEST(PtVariance, ReferenceValues) {
  EXPECT_EQ(cs::pt_variance_sech(0.0, 0.3), 0.0);
  EXPECT_NEAR(cs::pt_variance_sech(1.0, 0.1), -0.012503, 1e-6);
}

TEST(PtVariance, EqualsScaledThirdDerivative) {
  const auto sech = cs::DrivingPulse::half_cycle_sech();
  for (double t = -8.0; t <= 8.0; t += 0.01) {
    EXPECT_NEAR(cs::pt_variance_sech(t, 0.7), -(0.7 / 6.0) * cs::pulse_third_derivative(sech, t), 1e-12);
  }
}

TEST(PtVariance, OddAndLinear) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pick(-6.0, 6.0);
  for (int i = 0; i < 500; ++i) {
    const double t = pick(rng);
    EXPECT_DOUBLE_EQ(cs::pt_variance_sech(-t, 0.1), -cs::pt_variance_sech(t, 0.1));
    EXPECT_NEAR(cs::pt_variance_sech(t, 0.4), 4.0 * cs::pt_variance_sech(t, 0.1), 1e-15);
    EXPECT_DOUBLE_EQ(cs::pt_variance_sech(t, 0.1, cs::Polarity::Negative), -cs::pt_variance_sech(t, 0.1));
  }
}

TEST(PtShape, UnitPeakAndSechConsistency) {
  const auto sech = cs::DrivingPulse::half_cycle_sech(0.1);
  double peak = 0.0, peak_pt = 0.0;
  for (double t = -10.0; t <= 10.0; t += 1e-4) {
    peak = std::max(peak, std::abs(cs::pt_rdv_shape(sech, t)));
    peak_pt = std::max(peak_pt, std::abs(cs::pt_variance_sech(t, 0.1)));
  }
  EXPECT_NEAR(peak, 1.0, 1e-7);
  for (double t : {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0}) {
    EXPECT_NEAR(cs::pt_rdv_shape(sech, t), cs::pt_variance_sech(t, 0.1) / peak_pt, 1e-7);
  }
  EXPECT_EQ(cs::pt_rdv_shape(sech, 0.0), 0.0);
}

TEST(PtShape, PeaksFromOracle) {
  for (auto pulse : {cs::DrivingPulse::half_cycle_sech(), cs::DrivingPulse::single_cycle(),
                     cs::DrivingPulse::realistic_half_cycle()}) {
    auto f = [&](double t) { return std::abs(pulse.third_derivative(t)); };
    double best_t = 0.0, best = 0.0;
    for (double t = -10.0; t <= 10.0; t += 0.01) {
      if (f(t) > best) { best = f(t); best_t = t; }
    }
    const double arg = oracle::golden_section_argmax(f, best_t - 0.01, best_t + 0.01);
    EXPECT_NEAR(cs::third_derivative_peak(pulse.shape()), f(arg), 1e-12);
  }
  EXPECT_DOUBLE_EQ(cs::third_derivative_peak(cs::PulseShape::SingleCycle), 3.0);
}
