#include "inext/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace inext {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXd outer_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size();
  Eigen::VectorXd v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v.segment(i * n, n) = a[i] * b;
  return v;
}

}  // namespace

EnergyParts energy(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot, const TensorSet& t,
                   double D, int sigma, int iota) {
  const int N = t.N;
  EnergyParts e;
  const double kin_lin = 0.5 * qdot.squaredNorm();
  const double pot_lin = 0.5 * D * q.dot(t.h2_diag.cwiseProduct(q));
  e.linear = kin_lin + pot_lin;
  if (sigma != 0) {
    // sum q_i q_j q_k q_l S(j, l, i, k) = int (w_xx)^2 (w_x)^2
    const Eigen::Map<const RowMat> S(t.stiffness.data(), N * N, N * N);
    const Eigen::VectorXd qq = outer_vec(q, q);
    e.nl_stiff = 0.5 * sigma * D * qq.dot(S * qq);
  }
  if (iota != 0) {
    const Eigen::Map<const RowMat> I(t.inertia.data(), N * N, N * N);
    const Eigen::VectorXd qv = outer_vec(q, qdot);
    e.nl_inertia = 0.5 * iota * qv.dot(I * qv);
  }
  e.kinetic = kin_lin + e.nl_inertia;
  e.potential = pot_lin + e.nl_stiff;
  e.total = e.linear + e.nl_stiff + e.nl_inertia;
  return e;
}

double arc_length(const Eigen::VectorXd& q, const ModeSamples& samples) {
  const Eigen::VectorXd wx = samples.d[1].transpose() * q;
  const Eigen::VectorXd integrand = wx.unaryExpr([](double s) {
    const double a = 1.0 - 0.5 * s * s;
    return std::sqrt(a * a + s * s);
  });
  return samples.grid.integrate(integrand);
}

Eigen::VectorXd reconstruct_u(const Eigen::VectorXd& q, const ModeSamples& samples) {
  const Eigen::VectorXd wx = samples.d[1].transpose() * q;
  return -0.5 * samples.grid.cumulative_integral(wx.cwiseAbs2());
}

Eigen::VectorXd reconstruct_u(const Eigen::VectorXd& q, const ModeSamples& samples,
                              const Eigen::VectorXd& x) {
  const Eigen::VectorXd u = reconstruct_u(q, samples);
  const Eigen::VectorXd& nodes = samples.grid.nodes();
  const double total = -0.5 * samples.grid.integrate((samples.d[1].transpose() * q).cwiseAbs2());
  const double L = samples.grid.length();
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (!(xi >= 0.0 && xi <= L)) throw std::domain_error("reconstruct_u: x outside [0, L]");
    // Anchor the interpolation at u(0) = 0 and u(L) = total.
    const auto it = std::lower_bound(nodes.data(), nodes.data() + nodes.size(), xi);
    const Eigen::Index k = it - nodes.data();
    double x0, u0, x1, u1;
    if (k == 0) { x0 = 0.0; u0 = 0.0; } else { x0 = nodes[k - 1]; u0 = u[k - 1]; }
    if (k == nodes.size()) { x1 = L; u1 = total; } else { x1 = nodes[k]; u1 = u[k]; }
    out[i] = x1 > x0 ? u0 + (u1 - u0) * (xi - x0) / (x1 - x0) : u1;
  }
  return out;
}

DiagnosticRow diagnose(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot, const TensorSet& t,
                       const ModeSamples& samples, double D, int sigma, int iota) {
  DiagnosticRow row;
  const EnergyParts e = energy(q, qdot, t, D, sigma, iota);
  row.E_total = e.total;
  row.E_lin = e.linear;
  row.E_nl_stiff = e.nl_stiff;
  row.E_nl_inertia = e.nl_inertia;
  row.E_kin = e.kinetic;
  row.E_pot = e.potential;

  const Eigen::VectorXd wx = samples.d[1].transpose() * q;
  const Eigen::VectorXd integrand = wx.unaryExpr([](double s) {
    const double a = 1.0 - 0.5 * s * s;
    return std::sqrt(a * a + s * s);
  });
  row.arc_length = samples.grid.integrate(integrand);
  row.uL = -0.5 * samples.grid.integrate(wx.cwiseAbs2());
  row.wL = samples.tip.dot(q);
  row.max_slope = wx.cwiseAbs().maxCoeff();
  row.constraint_exit = row.max_slope >= 1.0;
  return row;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::GuardTripped: return "guard-tripped";
    case RunStatus::StepFailure: return "step-failure";
  }
  return "?";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Decay: return "decay";
    case Regime::SteadyState: return "steady_state";
    case Regime::LCO: return "LCO";
    case Regime::Growth: return "growth";
    case Regime::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

// Maxima of E over `blocks` equal blocks of [begin, end).
std::vector<double> block_maxima(const std::vector<DiagnosticRow>& rows, std::size_t begin,
                                 std::size_t end, int blocks) {
  std::vector<double> out;
  const std::size_t n = end - begin;
  for (int b = 0; b < blocks; ++b) {
    const std::size_t lo = begin + n * b / blocks;
    const std::size_t hi = begin + n * (b + 1) / blocks;
    double m = -1.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, rows[i].E_total);
    out.push_back(m);
  }
  return out;
}

struct CycleStats {
  int cycles = 0;
  double amplitude = 0.0;
  double amplitude_spread = 0.0;
  double period = 0.0;
  double period_spread = 0.0;
};

// Cycles delimited by upward crossings of the window mean.
CycleStats cycle_stats(const std::vector<double>& t, const std::vector<double>& w) {
  CycleStats st;
  if (w.size() < 3) return st;
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(w.size());
  std::vector<double> crossings;
  std::vector<std::size_t> crossing_idx;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double a = w[i - 1] - mean, b = w[i] - mean;
    if (a < 0.0 && b >= 0.0) {
      crossings.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-a) / (b - a));
      crossing_idx.push_back(i);
    }
  }
  if (crossings.size() < 2) return st;
  std::vector<double> amps, periods;
  for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
    double hi = -1e300, lo = 1e300;
    for (std::size_t i = crossing_idx[c]; i < crossing_idx[c + 1]; ++i) {
      hi = std::max(hi, w[i]);
      lo = std::min(lo, w[i]);
    }
    amps.push_back(0.5 * (hi - lo));
    periods.push_back(crossings[c + 1] - crossings[c]);
  }
  auto spread = [](const std::vector<double>& v, double& mean_out) {
    double sum = 0.0;
    for (double x : v) sum += x;
    mean_out = sum / static_cast<double>(v.size());
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return mean_out > 0.0 ? (*mx - *mn) / mean_out : 1e300;
  };
  st.cycles = static_cast<int>(amps.size());
  st.amplitude_spread = spread(amps, st.amplitude);
  st.period_spread = spread(periods, st.period);
  return st;
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Classification classify_longtime(const Trajectory& traj, const ClassifyOptions& opts) {
  Classification c;
  const std::size_t n = traj.size();
  if (n > 0) c.q_terminal = traj.q.back();
  std::ostringstream detail;

  if (traj.status == RunStatus::GuardTripped) {
    c.regime = Regime::Growth;
    c.detail = "blow-up guard tripped at t = " + std::to_string(traj.t_reached());
    return c;
  }
  if (n < opts.min_samples || traj.diagnostics.size() != n) {
    c.detail = "too few samples (" + std::to_string(n) + ")";
    return c;
  }

  const std::size_t window = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::ceil(opts.window_fraction * static_cast<double>(n))));
  const std::size_t begin = n - std::min(window, n);
  const auto& rows = traj.diagnostics;

  const auto blocks = block_maxima(rows, begin, n, 4);
  const double E0 = rows.front().E_total;
  double E_peak = 0.0;
  for (const auto& r : rows) E_peak = std::max(E_peak, r.E_total);
  const bool rising = std::is_sorted(blocks.begin(), blocks.end(), std::less_equal<>()) &&
                      blocks.front() < blocks.back();
  if (rising && blocks.back() > opts.growth_factor * E0) {
    c.regime = Regime::Growth;
    c.detail = "energy rising monotonically to " + std::to_string(blocks.back() / E0) + " x E(0)";
    return c;
  }

  double vmax_all = 0.0, vmax_window = 0.0, qdrift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = inf_norm(traj.qdot[i]);
    vmax_all = std::max(vmax_all, v);
    if (i >= begin) {
      vmax_window = std::max(vmax_window, v);
      qdrift = std::max(qdrift, inf_norm(traj.q[i] - c.q_terminal));
    }
  }
  const double qinf = inf_norm(c.q_terminal);
  if (vmax_window < opts.steady_velocity_ratio * vmax_all && qdrift <= 1e-6 + 1e-3 * qinf) {
    c.regime = qinf < opts.decay_amplitude ? Regime::Decay : Regime::SteadyState;
    detail << "max |q'| in window = " << vmax_window << ", |q_inf| = " << qinf;
    c.detail = detail.str();
    return c;
  }

  const bool falling = std::is_sorted(blocks.rbegin(), blocks.rend(), std::less_equal<>()) &&
                       blocks.back() < blocks.front();
  if (falling && rows.back().E_total < opts.decay_energy_ratio * E_peak) {
    c.regime = Regime::Decay;
    detail << "energy fell to " << rows.back().E_total / E_peak << " x peak";
    c.detail = detail.str();
    return c;
  }

  std::vector<double> t(traj.times.begin() + static_cast<std::ptrdiff_t>(begin), traj.times.end());
  std::vector<double> w;
  w.reserve(n - begin);
  for (std::size_t i = begin; i < n; ++i) w.push_back(rows[i].wL);
  const CycleStats st = cycle_stats(t, w);
  detail << st.cycles << " cycles, amplitude " << st.amplitude << " (spread " << st.amplitude_spread
         << "), period " << st.period << " (spread " << st.period_spread << ")";
  c.detail = detail.str();
  if (st.cycles >= opts.lco_min_cycles && st.amplitude > 0.0 &&
      st.amplitude_spread < opts.lco_tolerance && st.period_spread < opts.lco_tolerance) {
    c.regime = Regime::LCO;
    c.amplitude = st.amplitude;
    c.period = st.period;
  }
  return c;
}

}  // namespace inext
