#ifndef INEXT_DIAGNOSTICS_HPP
#define INEXT_DIAGNOSTICS_HPP

#include "inext/assembly.hpp"
#include "inext/beam_modes.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace inext {

struct EnergyParts {
  double total = 0.0;
  /// 1/2 |w_t|^2 + D/2 |w_xx|^2
  double linear = 0.0;
  /// sigma D/2 |w_x w_xx|^2
  double nl_stiff = 0.0;
  /// iota/2 |int_0^x w_x w_xt|^2
  double nl_inertia = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
};

EnergyParts energy(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot, const TensorSet& tensors,
                   double D, int sigma, int iota);

/// int_0^L sqrt((1 - w_x^2/2)^2 + w_x^2) dx, i.e. the arc length of the
/// (x + u, w) curve with u_x = -w_x^2 / 2.
double arc_length(const Eigen::VectorXd& q, const ModeSamples& samples);

/// u(x) = -1/2 int_0^x w_x^2 at every grid node.
Eigen::VectorXd reconstruct_u(const Eigen::VectorXd& q, const ModeSamples& samples);

/// u at arbitrary points in [0, L] (linear interpolation of the node values).
Eigen::VectorXd reconstruct_u(const Eigen::VectorXd& q, const ModeSamples& samples,
                              const Eigen::VectorXd& x);

struct DiagnosticRow {
  double E_total = 0.0;
  double E_lin = 0.0;
  double E_nl_stiff = 0.0;
  double E_nl_inertia = 0.0;
  double E_kin = 0.0;
  double E_pot = 0.0;
  double arc_length = 0.0;
  double wL = 0.0;
  double uL = 0.0;
  double max_slope = 0.0;
  /// max |w_x| >= 1: outside the small-slope regime the model assumes.
  bool constraint_exit = false;
};

DiagnosticRow diagnose(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot, const TensorSet& tensors,
                       const ModeSamples& samples, double D, int sigma, int iota);

enum class RunStatus { Completed, GuardTripped, StepFailure };
std::string to_string(RunStatus s);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::VectorXd> qdot;
  /// Accumulated work of pressure and damping, int_0^t power.
  std::vector<double> work;
  std::vector<DiagnosticRow> diagnostics;
  RunStatus status = RunStatus::Completed;
  std::string message;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const { return times.size(); }
  double t_reached() const { return times.empty() ? 0.0 : times.back(); }
};

enum class Regime { Decay, SteadyState, LCO, Growth, Indeterminate };
std::string to_string(Regime r);

struct Classification {
  Regime regime = Regime::Indeterminate;
  Eigen::VectorXd q_terminal;
  double amplitude = 0.0;
  double period = 0.0;
  std::string detail;
};

struct ClassifyOptions {
  double window_fraction = 0.25;
  std::size_t min_samples = 100;
  double growth_factor = 10.0;
  double steady_velocity_ratio = 1e-5;
  double decay_amplitude = 1e-6;
  double decay_energy_ratio = 1e-6;
  double lco_tolerance = 0.05;
  int lco_min_cycles = 3;
};

/// Long-time behaviour over the trailing window, checked in this order:
///   growth        guard tripped, or the window's energy block maxima rise
///                 monotonically to more than growth_factor x E(0)
///   steady/decay  max |q'| in the window < ratio x max |q'| over the run and
///                 q settles; decay when |q_inf| < decay_amplitude
///   decay         window energy block maxima fall monotonically and the
///                 final energy is below decay_energy_ratio x peak energy
///   LCO           >= lco_min_cycles full cycles of w(L, t) whose half
///                 peak-to-peak amplitudes and periods vary < lco_tolerance
/// and indeterminate otherwise.
Classification classify_longtime(const Trajectory& traj, const ClassifyOptions& opts = {});

}  // namespace inext

#endif  // INEXT_DIAGNOSTICS_HPP
