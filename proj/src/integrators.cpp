#include "inext/simulation.hpp"
#include "inext/tensor_cache.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace inext {

namespace {

// Sample times 0, dt, 2 dt, ... and t_end.
std::vector<double> sample_times(double t_end, double dt) {
  std::vector<double> ts{0.0};
  if (t_end <= 0.0) return ts;
  const auto count = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  for (std::size_t k = 1; k <= count; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t < t_end - 1e-12 * std::max(1.0, t_end)) ts.push_back(t);
  }
  ts.push_back(t_end);
  return ts;
}

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                  double rtol, double atol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

bool exceeds(const Eigen::VectorXd& y, Eigen::Index count, double guard) {
  for (Eigen::Index i = 0; i < count; ++i)
    if (!(std::abs(y[i]) <= guard)) return true;
  return false;
}

std::string at_time(const char* what, double t) {
  std::ostringstream os;
  os << what << " at t = " << t;
  return os.str();
}

}  // namespace

IntegrationResult integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXd y, const StepOptions& opts,
                                   Eigen::Index guarded, const Observer& observe) {
  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegrationResult res;
  const auto samples = sample_times(opts.t_end, opts.sample_dt);
  double t = 0.0;
  observe(t, y);
  std::size_t next = 1;
  double h = std::min(opts.dt_init, opts.t_end);
  Eigen::VectorXd k1 = rhs(t, y), k2, k3, k4, k5, k6, k7, ynew, err;

  while (next < samples.size()) {
    if (res.accepted + res.rejected >= opts.max_steps) {
      res.status = RunStatus::StepFailure;
      res.message = at_time("step budget exhausted", t);
      break;
    }
    const double target = samples[next];
    const bool clipped = t + h >= target - 1e-14 * std::max(1.0, target);
    const double step = clipped ? target - t : h;

    bool ok = true;
    try {
      k2 = rhs(t + c2 * step, y + step * (a21 * k1));
      k3 = rhs(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
      k4 = rhs(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = rhs(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = rhs(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(t + step, ynew);
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      ok = ynew.allFinite() && k7.allFinite();
    } catch (const std::runtime_error&) {
      ok = false;
    }
    const double en = ok ? error_norm(err, y, ynew, opts.rel_tol, opts.abs_tol) : 1e10;

    if (en <= 1.0) {
      t = clipped ? target : t + step;
      y = ynew;
      k1 = k7;
      ++res.accepted;
      const double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
      // Do not let a clipped step shrink the controller's step.
      h = std::max(h, step) * std::clamp(fac, 0.2, 5.0);
      if (clipped) {
        observe(t, y);
        ++next;
      }
      if (exceeds(y, guarded, opts.guard)) {
        if (!clipped) observe(t, y);
        res.status = RunStatus::GuardTripped;
        res.message = at_time("blow-up guard tripped", t);
        break;
      }
    } else {
      ++res.rejected;
      h = step * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.5);
      if (h < opts.dt_min) {
        observe(t, y);
        res.status = RunStatus::StepFailure;
        res.message = at_time("step failure", t);
        break;
      }
    }
  }
  res.t = t;
  return res;
}

IntegrationResult integrate_bdf2(const ModalSystem& sys, const Eigen::VectorXd& q0,
                                 const Eigen::VectorXd& qdot0, const StepOptions& opts,
                                 const Observer& observe) {
  const int N = sys.size();
  constexpr int kMaxNewton = 25;
  // Newton update bound relative to the local error tolerance.
  constexpr double kNewtonTol = 1e-2;

  auto pack = [N](const Eigen::VectorXd& q, const Eigen::VectorXd& v, double w) {
    Eigen::VectorXd y(2 * N + 1);
    y << q, v, w;
    return y;
  };

  struct Point {
    double t;
    Eigen::VectorXd q, v;
  };
  std::vector<Point> hist;  // up to three most recent accepted points
  hist.push_back({0.0, q0, qdot0});
  double work = 0.0;
  double power = sys.power(q0, qdot0);

  IntegrationResult res;
  const auto samples = sample_times(opts.t_end, opts.sample_dt);
  observe(0.0, pack(q0, qdot0, 0.0));
  std::size_t next = 1;
  double h = std::min(opts.dt_init, opts.t_end);
  double t = 0.0;

  // Newton on x = q_{n+1} with v = a0 x + hq and q'' = a0 v + hv. The
  // residual carries a factor a0^2, so convergence is judged on the update
  // (q and v parts) in the step-control norm, not on the residual.
  auto solve = [&](double a0, const Eigen::VectorXd& hq, const Eigen::VectorXd& hv,
                   Eigen::VectorXd& x) -> bool {
    Eigen::VectorXd upd(2 * N), ref(2 * N);
    double prev = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
      const Eigen::VectorXd v = a0 * x + hq;
      const Eigen::VectorXd acc = a0 * v + hv;
      const Eigen::VectorXd F = sys.forces(x, v);
      const Eigen::VectorXd R = sys.mass(x) * acc - F;
      if (!R.allFinite()) return false;

      Eigen::MatrixXd J = a0 * a0 * sys.mass(x) + sys.mass_derivative_times(x, acc);
      for (int m = 0; m < N; ++m) {
        const double eps = 1e-7 * (1.0 + std::abs(x[m]));
        Eigen::VectorXd xp = x;
        xp[m] += eps;
        J.col(m) -= (sys.forces(xp, a0 * xp + hq) - F) / eps;
      }
      const Eigen::VectorXd dx = J.partialPivLu().solve(-R);
      if (!dx.allFinite()) return false;
      x += dx;
      upd << dx, a0 * dx;
      ref << x, a0 * x + hq;
      const double un = error_norm(upd, ref, ref, opts.rel_tol, opts.abs_tol);
      if (un <= kNewtonTol) return true;
      // At tiny steps a0 * dx cannot drop below a0 * eps * |x|; stop there.
      if (dx.cwiseAbs().maxCoeff() <= 4.0 * std::numeric_limits<double>::epsilon() * x.cwiseAbs().maxCoeff())
        return true;
      // Give up on divergence or slow contraction.
      if (it > 0 && un > 0.9 * prev) return false;
      prev = un;
    }
    return false;
  };

  while (next < samples.size()) {
    if (res.accepted + res.rejected >= opts.max_steps) {
      res.status = RunStatus::StepFailure;
      res.message = at_time("step budget exhausted", t);
      break;
    }
    const double target = samples[next];
    const bool clipped = t + h >= target - 1e-14 * std::max(1.0, target);
    const double step = clipped ? target - t : h;
    const Point& cur = hist.back();

    double a0;
    Eigen::VectorXd hq, hv, qpred, vpred;
    if (hist.size() < 2) {
      // Backward Euler start.
      a0 = 1.0 / step;
      hq = -cur.q / step;
      hv = -cur.v / step;
      qpred = cur.q + step * cur.v;
      vpred = cur.v + step * sys.acceleration(cur.q, cur.v);
    } else {
      const Point& prev = hist[hist.size() - 2];
      const double hp = cur.t - prev.t;
      const double w = step / hp;
      a0 = (1.0 + 2.0 * w) / ((1.0 + w) * step);
      hq = (-(1.0 + w) * cur.q + (w * w / (1.0 + w)) * prev.q) / step;
      hv = (-(1.0 + w) * cur.v + (w * w / (1.0 + w)) * prev.v) / step;
      // Lagrange extrapolation through the stored points.
      const double tn = cur.t + step;
      qpred = Eigen::VectorXd::Zero(N);
      vpred = Eigen::VectorXd::Zero(N);
      for (std::size_t i = 0; i < hist.size(); ++i) {
        double li = 1.0;
        for (std::size_t j = 0; j < hist.size(); ++j)
          if (j != i) li *= (tn - hist[j].t) / (hist[i].t - hist[j].t);
        qpred += li * hist[i].q;
        vpred += li * hist[i].v;
      }
    }

    Eigen::VectorXd x = qpred;
    bool converged = false;
    try {
      converged = solve(a0, hq, hv, x);
    } catch (const std::runtime_error&) {
      converged = false;
    }
    double en = 1e10;
    Eigen::VectorXd vnew;
    if (converged) {
      vnew = a0 * x + hq;
      Eigen::VectorXd diff(2 * N), ynew(2 * N), yold(2 * N);
      diff << x - qpred, vnew - vpred;
      ynew << x, vnew;
      yold << cur.q, cur.v;
      // BDF2 with a cubic-error predictor: LTE ~ 2/11 (corrector - predictor);
      // backward Euler against its explicit predictor: LTE ~ 1/2 difference.
      const double c = hist.size() >= 3 ? 2.0 / 11.0 : 0.5;
      en = error_norm(c * diff, yold, ynew, opts.rel_tol, opts.abs_tol);
    }

    if (converged && en <= 1.0) {
      const double p1 = sys.power(x, vnew);
      work += 0.5 * step * (power + p1);
      power = p1;
      t = clipped ? target : t + step;
      hist.push_back({t, x, vnew});
      if (hist.size() > 3) hist.erase(hist.begin());
      ++res.accepted;
      const double order = hist.size() >= 3 ? 3.0 : 2.0;
      const double fac = en > 0.0 ? 0.9 * std::pow(en, -1.0 / order) : 2.0;
      h = std::max(h, step) * std::clamp(fac, 0.2, 2.0);
      if (clipped) {
        observe(t, pack(x, vnew, work));
        ++next;
      }
      if (exceeds(x, N, opts.guard) || exceeds(vnew, N, opts.guard)) {
        if (!clipped) observe(t, pack(x, vnew, work));
        res.status = RunStatus::GuardTripped;
        res.message = at_time("blow-up guard tripped", t);
        break;
      }
    } else {
      ++res.rejected;
      h = converged ? step * std::clamp(0.9 * std::pow(en, -1.0 / 3.0), 0.1, 0.5) : 0.5 * step;
      if (h < opts.dt_min) {
        const Point& last = hist.back();
        observe(t, pack(last.q, last.v, work));
        res.status = RunStatus::StepFailure;
        res.message = at_time(converged ? "step failure" : "step failure (Newton)", t);
        break;
      }
    }
  }
  res.t = t;
  return res;
}

QuadratureGrid make_grid(const NumericalParams& num, double length) {
  return num.quad_rule == QuadratureRule::Simpson ? QuadratureGrid::simpson(length, num.quad_points)
                                                  : QuadratureGrid::gauss_legendre(length, num.quad_points);
}

SimulationContext SimulationContext::build(const SimConfig& cfg, const std::filesystem::path& cache_dir) {
  ModeBasis basis(cfg.numerical.N, cfg.physical.L);
  ModeSamples samples(basis, make_grid(cfg.numerical, cfg.physical.L));
  TensorSet tensors = load_or_assemble(basis, samples, cfg.physical.D, cache_dir);
  return {std::move(basis), std::move(samples), std::move(tensors)};
}

Trajectory simulate(const SimConfig& cfg, const SimulationContext& ctx) {
  cfg.validate();
  if (ctx.basis.size() != cfg.numerical.N) throw std::invalid_argument("simulate: context has wrong N");
  const auto& phys = cfg.physical;
  const auto& num = cfg.numerical;
  const int N = num.N;
  const ModalSystem sys(ctx.tensors, phys, static_load_vector(phys.p0, ctx.samples));
  const auto [q0, qd0] = project_initial(cfg.initial, ctx.basis, ctx.samples);

  Trajectory traj;
  auto observe = [&](double t, const Eigen::VectorXd& y) {
    if (!traj.times.empty() && t <= traj.times.back()) return;
    traj.times.push_back(t);
    traj.q.push_back(y.head(N));
    traj.qdot.push_back(y.segment(N, N));
    traj.work.push_back(y[2 * N]);
    traj.diagnostics.push_back(
        diagnose(traj.q.back(), traj.qdot.back(), ctx.tensors, ctx.samples, phys.D, phys.sigma, phys.iota));
  };

  StepOptions opts;
  opts.t_end = num.t_end;
  opts.dt_init = num.dt_init;
  opts.dt_min = num.dt_min;
  opts.rel_tol = num.rel_tol;
  opts.abs_tol = num.abs_tol;
  opts.sample_dt = num.sample_dt;
  opts.guard = num.blowup_guard;

  IntegrationResult res;
  if (num.integrator == IntegratorKind::AdaptiveExplicit) {
    Eigen::VectorXd y0(2 * N + 1);
    y0 << q0, qd0, 0.0;
    auto rhs = [&sys, N](double, const Eigen::VectorXd& y) {
      const Eigen::VectorXd q = y.head(N), v = y.segment(N, N);
      Eigen::VectorXd dy(2 * N + 1);
      dy << v, sys.acceleration(q, v), sys.power(q, v);
      return dy;
    };
    res = integrate_dopri5(rhs, y0, opts, 2 * N, observe);
  } else {
    res = integrate_bdf2(sys, q0, qd0, opts, observe);
  }
  traj.status = res.status;
  traj.message = res.message;
  traj.accepted_steps = res.accepted;
  traj.rejected_steps = res.rejected;
  return traj;
}

Trajectory simulate(const SimConfig& cfg) {
  cfg.validate();
  return simulate(cfg, SimulationContext::build(cfg));
}

}  // namespace inext
