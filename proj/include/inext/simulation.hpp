#ifndef INEXT_SIMULATION_HPP
#define INEXT_SIMULATION_HPP

#include "inext/diagnostics.hpp"
#include "inext/dynamics.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace inext {

struct StepOptions {
  double t_end = 0.0;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  /// Observer sample spacing; steps are clipped to land on sample times.
  double sample_dt = 0.01;
  /// Stop when any guarded component exceeds this in magnitude.
  double guard = 1e6;
  std::size_t max_steps = 100'000'000;
};

struct IntegrationResult {
  RunStatus status = RunStatus::Completed;
  std::string message;
  double t = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Called at t = 0, every sample time, and at the final (possibly early) time.
using Observer = std::function<void(double t, const Eigen::VectorXd& y)>;
using OdeRhs = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& y)>;

/// Dormand-Prince 5(4) with per-step error control on all components and
/// the blow-up guard applied to the first `guarded` components.
IntegrationResult integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXd y, const StepOptions& opts,
                                   Eigen::Index guarded, const Observer& observe);

/// Variable-step BDF2 on the fully implicit residual M(q) q'' - F(q, q') = 0,
/// solved for q_{n+1} by damped Newton (analytic mass derivative,
/// finite-difference force Jacobian). The observed state is [q, q', work].
IntegrationResult integrate_bdf2(const ModalSystem& system, const Eigen::VectorXd& q0,
                                 const Eigen::VectorXd& qdot0, const StepOptions& opts,
                                 const Observer& observe);

/// Basis, grid samples and tensors for one (N, L, quadrature) combination.
/// Immutable once built; share across concurrent runs.
struct SimulationContext {
  ModeBasis basis;
  ModeSamples samples;
  TensorSet tensors;

  static SimulationContext build(const SimConfig& cfg, const std::filesystem::path& cache_dir = {});
};

QuadratureGrid make_grid(const NumericalParams& num, double length);

Trajectory simulate(const SimConfig& cfg, const SimulationContext& ctx);
Trajectory simulate(const SimConfig& cfg);

/// Template fields a sweep can vary.
enum class SweepParameter { U, a, N, beta, k0, k2 };
std::string to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(const std::string& s);
void apply_parameter(SimConfig& cfg, SweepParameter p, double value);

struct SweepRow {
  double value = 0.0;
  RunStatus status = RunStatus::Completed;
  Classification classification;
  double t_reached = 0.0;
  double E_max = 0.0;
  double E_final = 0.0;
  double wL_final = 0.0;
  double arc_dev_max = 0.0;
  Eigen::VectorXd q_final;
  std::optional<std::string> error;
};

SweepRow summarize(double value, const Trajectory& traj, double length,
                   const ClassifyOptions& classify = {});

/// One simulate() per value on up to `threads` workers; failures are
/// recorded per row. Rows come back in input order.
std::vector<SweepRow> sweep(const SimConfig& tmpl, SweepParameter param,
                            const std::vector<double>& values, int threads = 1,
                            const std::filesystem::path& cache_dir = {},
                            const ClassifyOptions& classify = {});

}  // namespace inext

#endif  // INEXT_SIMULATION_HPP
