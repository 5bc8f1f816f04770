#include "inext/diagnostics.hpp"
#include "inext/simulation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace inext;

namespace {

struct Fixture {
  ModeBasis basis{6, 1.0};
  ModeSamples samples{basis, QuadratureGrid::simpson(1.0, 4096)};
  TensorSet t = assemble_tensors(basis, samples, 1.0);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

Trajectory synthetic(double (*w)(double), double t_end = 50.0, double dt = 0.01) {
  Trajectory tr;
  for (double t = 0.0; t <= t_end + 1e-9; t += dt) {
    tr.times.push_back(t);
    tr.q.push_back(Eigen::VectorXd::Constant(1, w(t)));
    tr.qdot.push_back(Eigen::VectorXd::Zero(1));
    tr.work.push_back(0.0);
    DiagnosticRow d;
    d.wL = w(t);
    d.E_total = w(t) * w(t) + 1.0;
    tr.diagnostics.push_back(d);
  }
  return tr;
}

}  // namespace

TEST(Energy, ZeroState) {
  const auto e = energy(Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6), fx().t, 1.0, 1, 1);
  EXPECT_EQ(e.total, 0.0);
}

TEST(Energy, LinearWhenFlagsOff) {
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(6, 0.1, 0.6), v = Eigen::VectorXd::LinSpaced(6, -1, 1);
  const auto e = energy(q, v, fx().t, 1.0, 0, 0);
  const double expect = 0.5 * (v.squaredNorm() + q.dot(fx().t.stiffness_diag.cwiseProduct(q)));
  EXPECT_NEAR(e.total, expect, 1e-12 * expect);
  EXPECT_EQ(e.nl_stiff, 0.0);
  EXPECT_EQ(e.nl_inertia, 0.0);
}

TEST(Energy, DecompositionsAgree) {
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(6, 0.3, -0.2), v = Eigen::VectorXd::LinSpaced(6, 1, 0);
  const auto e = energy(q, v, fx().t, 1.0, 1, 1);
  EXPECT_NEAR(e.kinetic + e.potential, e.total, 1e-12 * e.total);
  EXPECT_NEAR(e.linear + e.nl_stiff + e.nl_inertia, e.total, 1e-12 * e.total);
  EXPECT_GE(e.nl_stiff, 0.0);
  EXPECT_GE(e.nl_inertia, 0.0);
}

TEST(Energy, FirstModeStiffnessPart) {
  const auto e = energy(Eigen::VectorXd::Unit(6, 0), Eigen::VectorXd::Zero(6), fx().t, 1.0, 1, 0);
  const oracle::Mode m(1, 1.0L);
  const auto ref = oracle::trapezoid([&](long double x) { return std::pow(m(x, 1) * m(x, 2), 2); }, 0, 1, 1000000);
  EXPECT_NEAR(e.nl_stiff, 0.5 * static_cast<double>(ref), 1e-7 * e.nl_stiff);
}

TEST(ArcLength, UndeflectedIsLength) {
  EXPECT_NEAR(arc_length(Eigen::VectorXd::Zero(6), fx().samples), 1.0, 1e-14);
}

TEST(ArcLength, FourthOrderInAmplitude) {
  auto dev = [](double eps) {
    return arc_length(eps * Eigen::VectorXd::Unit(6, 0), fx().samples) - 1.0;
  };
  const double r = dev(0.02) / dev(0.01);
  EXPECT_NEAR(std::log2(r), 4.0, 0.05);
}

TEST(Reconstruct, SignsAndEnds) {
  EXPECT_EQ(reconstruct_u(Eigen::VectorXd::Zero(6), fx().samples).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(6, 0.2, -0.1);
  const Eigen::VectorXd u = reconstruct_u(q, fx().samples);
  EXPECT_EQ(u[0], 0.0);
  EXPECT_LE(u.maxCoeff(), 0.0);
  Eigen::VectorXd x(3);
  x << 0.0, 0.5, 1.0;
  const Eigen::VectorXd ux = reconstruct_u(q, fx().samples, x);
  EXPECT_EQ(ux[0], 0.0);
  EXPECT_NEAR(ux[2], u[u.size() - 1], 1e-15);
}

TEST(Diagnose, ConstraintExitFlag) {
  const auto small = diagnose(0.01 * Eigen::VectorXd::Unit(6, 0), Eigen::VectorXd::Zero(6), fx().t,
                              fx().samples, 1.0, 1, 1);
  const auto large = diagnose(2.0 * Eigen::VectorXd::Unit(6, 0), Eigen::VectorXd::Zero(6), fx().t,
                              fx().samples, 1.0, 1, 1);
  EXPECT_FALSE(small.constraint_exit);
  EXPECT_TRUE(large.constraint_exit);
  EXPECT_NEAR(large.wL, -4.0, 1e-9);
}

TEST(Classify, SteadyDecayLcoGrowth) {
  const Trajectory lco = synthetic([](double t) { return 0.3 * std::sin(2 * M_PI * t / 0.7); });
  const auto c = classify_longtime(lco);
  EXPECT_EQ(c.regime, Regime::LCO) << c.detail;
  EXPECT_NEAR(c.amplitude, 0.3, 0.01);
  EXPECT_NEAR(c.period, 0.7, 0.01);

  Trajectory steady = synthetic([](double t) { return 0.4 - 0.4 * std::exp(-t); });
  for (std::size_t s = 0; s < steady.size(); ++s)
    steady.qdot[s][0] = 0.4 * std::exp(-steady.times[s]);
  const auto cs = classify_longtime(steady);
  EXPECT_EQ(cs.regime, Regime::SteadyState) << cs.detail;
  EXPECT_NEAR(cs.q_terminal[0], 0.4, 1e-6);

  Trajectory decay = synthetic([](double t) { return std::exp(-t) * std::cos(5 * t); });
  for (std::size_t s = 0; s < decay.size(); ++s) {
    decay.qdot[s][0] = std::exp(-decay.times[s]);
    decay.diagnostics[s].E_total = std::exp(-2 * decay.times[s]);
  }
  EXPECT_EQ(classify_longtime(decay).regime, Regime::Decay);

  Trajectory grow = synthetic([](double t) { return std::exp(0.2 * t) * std::sin(5 * t); });
  for (std::size_t s = 0; s < grow.size(); ++s) grow.diagnostics[s].E_total = std::exp(0.4 * grow.times[s]);
  EXPECT_EQ(classify_longtime(grow).regime, Regime::Growth);

  Trajectory tripped = synthetic([](double t) { return t; }, 0.5);
  tripped.status = RunStatus::GuardTripped;
  EXPECT_EQ(classify_longtime(tripped).regime, Regime::Growth);
}

TEST(Classify, TooFewSamples) {
  EXPECT_EQ(classify_longtime(synthetic([](double) { return 0.0; }, 0.5)).regime, Regime::Indeterminate);
}

TEST(Classify, RegimeNames) {
  EXPECT_EQ(to_string(Regime::SteadyState), "steady_state");
  EXPECT_EQ(to_string(Regime::LCO), "LCO");
  EXPECT_EQ(to_string(Regime::Indeterminate), "indeterminate");
}
