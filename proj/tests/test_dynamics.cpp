#include "inext/config_io.hpp"
#include "inext/diagnostics.hpp"
#include "inext/dynamics.hpp"
#include "inext/simulation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

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

PhysicalParams vacuum(int sigma, int iota) {
  PhysicalParams p;
  p.beta = 0.0;
  p.sigma = sigma;
  p.iota = iota;
  return p;
}

Eigen::VectorXd random_vector(std::mt19937& rng, int n, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

SimConfig base(int N, double t_end) {
  SimConfig c;
  c.numerical.N = N;
  c.numerical.t_end = t_end;
  return c;
}

}  // namespace

TEST(Initial, ModePresetsAreUnitVectors) {
  InitialData d;
  d.preset = InitialPreset::FirstMode;
  auto [q, v] = project_initial(d, fx().basis, fx().samples);
  EXPECT_EQ(q, Eigen::VectorXd::Unit(6, 0));
  EXPECT_EQ(v, Eigen::VectorXd::Zero(6));
  d.preset = InitialPreset::SecondMode;
  q = project_initial(d, fx().basis, fx().samples).first;
  EXPECT_EQ(q, Eigen::VectorXd::Unit(6, 1));
}

TEST(Initial, LinearVelocityProjection) {
  const double golden[] = {-0.568825743709911, -0.090766786886387, -0.0324163743697444,
                           -0.0165423350208506, -0.0100070284305739, -0.00669892128113404};
  InitialData d;
  d.a = 2.0;
  const auto [q, v] = project_initial(d, fx().basis, fx().samples);
  EXPECT_EQ(q, Eigen::VectorXd::Zero(6));
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(v[j], 2.0 * golden[j], 1e-10);
}

TEST(Initial, PolynomialProjection) {
  const double golden[] = {-0.715128242885899, -0.232017504242816, -0.0199743394282711,
                           -0.00393664165526538, -0.00115477476805101, -0.000431413065816873};
  InitialData d;
  d.preset = InitialPreset::Polynomial;
  d.scale = 0.5;
  const auto q = project_initial(d, fx().basis, fx().samples).first;
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(q[j], 0.5 * golden[j], 1e-10);
}

TEST(Mass, IdentityCases) {
  const Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(6, -1, 1);
  EXPECT_EQ(assemble_mass(Eigen::VectorXd::Zero(6), fx().t.inertia, 1), Eigen::MatrixXd::Identity(6, 6));
  EXPECT_EQ(assemble_mass(q, fx().t.inertia, 0), Eigen::MatrixXd::Identity(6, 6));
}

TEST(Mass, GramExcessIsPositiveSemidefinite) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd q = random_vector(rng, 6, 2.0);
    const Eigen::MatrixXd M = assemble_mass(q, fx().t.inertia, 1);
    EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-10 * M.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M - Eigen::MatrixXd::Identity(6, 6));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9 * es.eigenvalues().cwiseAbs().maxCoeff());
    EXPECT_EQ(M.llt().info(), Eigen::Success);
  }
}

TEST(Forces, PureLinearBeam) {
  std::mt19937 rng(3);
  const Eigen::VectorXd q = random_vector(rng, 6, 1.0), v = random_vector(rng, 6, 1.0);
  const Eigen::VectorXd F = assemble_forces(q, v, fx().t, vacuum(0, 0), Eigen::VectorXd::Zero(6));
  EXPECT_LT((F + fx().t.stiffness_diag.cwiseProduct(q)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Forces, CubicHomogeneity) {
  const double eps = 0.01;
  auto cubic = [&](double e) {
    const Eigen::VectorXd q = e * Eigen::VectorXd::Unit(6, 0);
    return assemble_forces(q, Eigen::VectorXd::Zero(6), fx().t, vacuum(1, 0), Eigen::VectorXd::Zero(6)) +
           fx().t.stiffness_diag.cwiseProduct(q);
  };
  const Eigen::VectorXd a = cubic(eps), b = cubic(eps / 2);
  for (int l = 0; l < 6; ++l)
    if (std::abs(a[l]) > 1e-14) EXPECT_NEAR(a[l] / b[l], 8.0, 1e-6);
}

TEST(Forces, SingleModeCollapse) {
  const ModeBasis b1(1, 1.0);
  const ModeSamples s1(b1, QuadratureGrid::simpson(1.0, 4096));
  const TensorSet t1 = assemble_tensors(b1, s1, 1.0);
  PhysicalParams p;
  p.beta = 0.7;
  p.U = 3.0;
  p.k0 = 0.2;
  p.k2 = 0.01;
  const double q = 0.3, v = -0.8, a = 0.4;
  const Eigen::VectorXd Q = Eigen::VectorXd::Constant(1, q), V = Eigen::VectorXd::Constant(1, v);
  const double S = t1.stiffness(0, 0, 0, 0), I = t1.inertia(0, 0, 0, 0), k4 = t1.h2_diag[0];
  // a (1 + q^2 I) + v^2 q I + (beta + k0 + k2 k^4) v + D k^4 q + 2 D q^3 S + beta U C q = 0
  const double lhs = a * (1 + q * q * I) + v * v * q * I + (p.beta + p.k0 + p.k2 * k4) * v + k4 * q +
                     2 * q * q * q * S + p.beta * p.U * t1.convection(0, 0) * q;
  const double M = assemble_mass(Q, t1.inertia, 1)(0, 0);
  const double F = assemble_forces(Q, V, t1, p, Eigen::VectorXd::Zero(1))[0];
  EXPECT_NEAR(M * a - F, lhs, 1e-12 * std::abs(k4));
}

TEST(Forces, MassDerivativeMatchesDifferences) {
  PhysicalParams p;
  const ModalSystem sys(fx().t, p, {});
  std::mt19937 rng(5);
  const Eigen::VectorXd q = random_vector(rng, 6, 0.5), a = random_vector(rng, 6, 1.0);
  const Eigen::MatrixXd J = sys.mass_derivative_times(q, a);
  for (int m = 0; m < 6; ++m) {
    const double h = 1e-6;
    Eigen::VectorXd qp = q, qm = q;
    qp[m] += h;
    qm[m] -= h;
    const Eigen::VectorXd fd = (sys.mass(qp) * a - sys.mass(qm) * a) / (2 * h);
    EXPECT_LT((J.col(m) - fd).cwiseAbs().maxCoeff(), 1e-6 * (1 + fd.norm()));
  }
}

TEST(Forces, PowerIsEnergyRate) {
  // dE/dt along q' = v, v' = M^{-1} F must equal the pressure/damping power.
  PhysicalParams p;
  p.U = 40.0;
  p.k0 = 0.3;
  p.k2 = 0.01;
  const ModalSystem sys(fx().t, p, {});
  std::mt19937 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd q = random_vector(rng, 6, 0.3), v = random_vector(rng, 6, 0.5);
    const Eigen::VectorXd acc = sys.acceleration(q, v);
    // E along the tangent line is a quartic in h, so the five-point stencil is exact.
    const auto E = [&](double h) { return energy(q + h * v, v + h * acc, fx().t, 1.0, 1, 1).total; };
    const double h = 1e-3;
    const double rate = (-E(2 * h) + 8 * E(h) - 8 * E(-h) + E(-2 * h)) / (12 * h);
    EXPECT_NEAR(rate, sys.power(q, v), 1e-5 * (1 + std::abs(rate)));
  }
}

TEST(Simulate, LinearOscillatorIsCosine) {
  SimConfig c = base(1, 10.0);
  c.physical.beta = 0.0;
  c.physical.sigma = c.physical.iota = 0;
  c.initial.preset = InitialPreset::FirstMode;
  const Trajectory tr = simulate(c);
  ASSERT_EQ(tr.status, RunStatus::Completed);
  const double w = std::pow(1.8751040687119611, 2);
  double err = 0.0;
  for (std::size_t s = 0; s < tr.size(); ++s) err = std::max(err, std::abs(tr.q[s][0] - std::cos(w * tr.times[s])));
  EXPECT_LT(err, 1e-6);
  EXPECT_NEAR(tr.times.back(), 10.0, 1e-12);
  EXPECT_EQ(tr.size(), 1001u);
}

TEST(Simulate, ZeroHorizonIsSingleRow) {
  SimConfig c = base(3, 0.0);
  const Trajectory tr = simulate(c);
  EXPECT_EQ(tr.size(), 1u);
  EXPECT_EQ(classify_longtime(tr).regime, Regime::Indeterminate);
}

TEST(Simulate, FlagsOffMatchDirectLinearOscillator) {
  SimConfig c = base(4, 2.0);
  c.physical.U = 60.0;
  c.physical.sigma = c.physical.iota = 0;
  c.numerical.quad_points = 1024;
  const auto ctx = SimulationContext::build(c);
  const Trajectory tr = simulate(c, ctx);
  // Classical RK4 on q'' = -beta q' - K q - beta U C q with a tiny fixed step.
  const auto& t = ctx.tensors;
  auto [q, v] = project_initial(c.initial, ctx.basis, ctx.samples);
  const Eigen::MatrixXd A = t.stiffness_diag.asDiagonal().toDenseMatrix() + 60.0 * t.convection;
  auto f = [&](const Eigen::VectorXd& Q, const Eigen::VectorXd& V) -> Eigen::VectorXd { return -V - A * Q; };
  const int steps = 200000;
  const double h = 2.0 / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1q = v, k1v = f(q, v);
    const Eigen::VectorXd k2q = v + 0.5 * h * k1v, k2v = f(q + 0.5 * h * k1q, v + 0.5 * h * k1v);
    const Eigen::VectorXd k3q = v + 0.5 * h * k2v, k3v = f(q + 0.5 * h * k2q, v + 0.5 * h * k2v);
    const Eigen::VectorXd k4q = v + h * k3v, k4v = f(q + h * k3q, v + h * k3v);
    q += h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  EXPECT_LT((tr.q.back() - q).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Simulate, ImplicitAgreesWithExplicit) {
  SimConfig c = base(3, 2.0);
  c.physical.U = 50.0;
  c.physical.k2 = 0.001;
  c.numerical.quad_points = 1024;
  c.initial.preset = InitialPreset::Polynomial;
  c.initial.scale = 0.3;
  const auto ctx = SimulationContext::build(c);
  const Trajectory ex = simulate(c, ctx);
  c.numerical.integrator = IntegratorKind::ImplicitBdf2;
  c.numerical.rel_tol = 1e-8;
  c.numerical.abs_tol = 1e-10;
  const Trajectory im = simulate(c, ctx);
  ASSERT_EQ(im.status, RunStatus::Completed) << im.message;
  ASSERT_EQ(im.size(), ex.size());
  EXPECT_LT((im.q.back() - ex.q.back()).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Simulate, TighterToleranceConverges) {
  SimConfig c = base(4, 3.0);
  c.physical.U = 30.0;
  c.numerical.quad_points = 1024;
  c.numerical.rel_tol = 1e-7;
  c.numerical.abs_tol = 1e-9;
  const auto ctx = SimulationContext::build(c);
  const Trajectory coarse = simulate(c, ctx);
  c.numerical.rel_tol = 1e-10;
  c.numerical.abs_tol = 1e-12;
  const Trajectory fine = simulate(c, ctx);
  const double diff = (coarse.q.back() - fine.q.back()).cwiseAbs().maxCoeff();
  EXPECT_LT(diff, 1e-4);
}

TEST(Simulate, LinearRegimeMatchesFlutterSign) {
  const ModeBasis b(6, 1.0);
  const ModeSamples s(b, QuadratureGrid::simpson(1.0, 4096));
  const auto ops = assemble_linear(b, s, 1.0);
  const double uc = *find_ucrit(FlutterParams{}, ops, 100, 160);
  for (double U : {uc - 5, uc + 5}) {
    SimConfig c = base(6, 15.0);
    c.physical.U = U;
    c.initial.scale = 1e-6;
    const Trajectory tr = simulate(c);
    const double late = tr.diagnostics.back().E_total, early = tr.diagnostics[300].E_total;
    FlutterParams fp;
    fp.U = U;
    const double rate = max_growth_rate(solve_growth_rates(fp, ops));
    EXPECT_EQ(late > early, rate > 0) << U;
  }
}

TEST(Simulate, GuardTripIsGrowth) {
  SimConfig c = base(4, 20.0);
  c.physical.U = 200.0;
  c.physical.sigma = c.physical.iota = 0;
  c.numerical.blowup_guard = 100.0;
  c.numerical.quad_points = 1024;
  const Trajectory tr = simulate(c);
  EXPECT_EQ(tr.status, RunStatus::GuardTripped);
  EXPECT_LT(tr.t_reached(), 20.0);
  EXPECT_EQ(classify_longtime(tr).regime, Regime::Growth);
}

TEST(Simulate, StepFailureReportsTime) {
  SimConfig c = base(4, 1.0);
  c.numerical.dt_min = 0.05;
  c.numerical.dt_init = 0.1;
  c.numerical.quad_points = 1024;
  for (auto kind : {IntegratorKind::AdaptiveExplicit, IntegratorKind::ImplicitBdf2}) {
    c.numerical.integrator = kind;
    const Trajectory tr = simulate(c);
    EXPECT_EQ(tr.status, RunStatus::StepFailure);
    EXPECT_NE(tr.message.find("step failure at t"), std::string::npos) << tr.message;
    EXPECT_GE(tr.size(), 1u);
  }
}

TEST(Simulate, ConfigValidation) {
  SimConfig c;
  c.physical.sigma = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.initial.a = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SimConfig{};
  c.numerical.rel_tol = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Sweep, RowsInOrderAndEmptyGrid) {
  SimConfig c = base(3, 1.0);
  c.numerical.quad_points = 512;
  EXPECT_TRUE(sweep(c, SweepParameter::U, {}).empty());
  const auto rows = sweep(c, SweepParameter::a, {0.5, 1.0, 2.0}, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].value, 0.5);
  EXPECT_EQ(rows[2].value, 2.0);
  EXPECT_LT(rows[0].E_max, rows[1].E_max);
  EXPECT_LT(rows[1].E_max, rows[2].E_max);
  const auto bad = sweep(c, SweepParameter::a, {-1.0});
  ASSERT_TRUE(bad[0].error.has_value());
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  SimConfig c = base(3, 1.0);
  c.numerical.quad_points = 512;
  const std::vector<double> us{10, 20, 30, 40};
  const auto one = sweep(c, SweepParameter::U, us, 1);
  const auto four = sweep(c, SweepParameter::U, us, 4);
  for (std::size_t i = 0; i < us.size(); ++i) {
    EXPECT_EQ(one[i].q_final, four[i].q_final);
    EXPECT_EQ(one[i].E_max, four[i].E_max);
  }
}

TEST(Sweep, ModeCountParameter) {
  SimConfig c = base(3, 0.5);
  c.numerical.quad_points = 512;
  const auto rows = sweep(c, SweepParameter::N, {2, 3}, 2);
  EXPECT_EQ(rows[0].q_final.size(), 2);
  EXPECT_EQ(rows[1].q_final.size(), 3);
  EXPECT_TRUE(sweep(c, SweepParameter::N, {2.5})[0].error.has_value());
}
