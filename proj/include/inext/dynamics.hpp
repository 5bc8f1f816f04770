#ifndef INEXT_DYNAMICS_HPP
#define INEXT_DYNAMICS_HPP

#include "inext/assembly.hpp"
#include "inext/beam_modes.hpp"
#include "inext/quadrature.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace inext {

enum class InitialPreset { FirstMode, SecondMode, Polynomial, LinearIV };
enum class IntegratorKind { AdaptiveExplicit, ImplicitBdf2 };

std::string to_string(InitialPreset p);
InitialPreset initial_preset_from_string(const std::string& s);
std::string to_string(IntegratorKind k);
IntegratorKind integrator_from_string(const std::string& s);

/// w0/w1 presets:
///   FirstMode   w0 = s_1,                       w1 = 0
///   SecondMode  w0 = s_2,                       w1 = 0
///   Polynomial  w0 = -4x^5 + 15x^4 - 20x^3 + 10x^2, w1 = 0
///   LinearIV    w0 = 0,                         w1 = a x
/// Both fields are multiplied by `scale`.
struct InitialData {
  InitialPreset preset = InitialPreset::LinearIV;
  double a = 1.0;
  double scale = 1.0;
};

struct PhysicalParams {
  double D = 1.0;
  double L = 1.0;
  double beta = 1.0;
  double U = 0.0;
  double k0 = 0.0;
  double k2 = 0.0;
  int sigma = 1;
  int iota = 1;
  /// Static pressure p0 tabulated at uniform points on [0, L] (linear
  /// interpolation); empty means p0 = 0.
  std::vector<double> p0;
};

struct NumericalParams {
  int N = 6;
  double t_end = 20.0;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  IntegratorKind integrator = IntegratorKind::AdaptiveExplicit;
  /// Spacing of trajectory samples in time.
  double sample_dt = 0.01;
  /// Runs whose max |q|, |q'| exceed this stop and classify as growth.
  double blowup_guard = 1e6;
  QuadratureRule quad_rule = QuadratureRule::Simpson;
  int quad_points = 4096;
};

struct OutputParams {
  /// Write every stride-th sample to the trajectory CSV.
  int stride = 1;
  std::string trajectory_csv = "trajectory.csv";
  std::string summary_json = "summary.json";
  std::string manifest_json = "manifest.json";
};

struct SimConfig {
  int schema_version = 1;
  std::string name;
  PhysicalParams physical;
  NumericalParams numerical;
  InitialData initial;
  OutputParams output;

  void validate() const;
};

/// Coefficients of w0 and w1 in the mode basis by L^2 projection.
std::pair<Eigen::VectorXd, Eigen::VectorXd> project_initial(const InitialData& init,
                                                            const ModeBasis& basis,
                                                            const ModeSamples& samples);

/// M(q)_{lj} = delta_{lj} + iota sum_{ik} q_i q_k I_{ijkl}.
Eigen::MatrixXd assemble_mass(const Eigen::VectorXd& q, const Tensor4<double>& inertia, int iota);

/// Right-hand side F of M(q) q'' = F:
///   F_l = -(beta + k0) q'_l - k2 kappa_l^4 q'_l - D kappa_l^4 q_l
///         - beta U sum_j C_{lj} q_j + (p0, s_l)
///         - sigma D sum_{ijk} q_i q_j q_k (S_{ikjl} + S_{iljk})
///         - iota sum_{ijk} q'_i q'_j q_k I_{ijkl}
Eigen::VectorXd assemble_forces(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot,
                                const TensorSet& tensors, const PhysicalParams& params,
                                const Eigen::VectorXd& static_load);

/// The truncated modal system with everything precomputed for one run.
class ModalSystem {
 public:
  ModalSystem(const TensorSet& tensors, const PhysicalParams& params, Eigen::VectorXd static_load);

  int size() const { return tensors_.N; }
  const TensorSet& tensors() const { return tensors_; }
  const PhysicalParams& params() const { return params_; }

  Eigen::MatrixXd mass(const Eigen::VectorXd& q) const;
  Eigen::VectorXd forces(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const;
  /// q'' = M(q)^{-1} F via Cholesky; throws if M is not positive definite.
  Eigen::VectorXd acceleration(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const;
  /// d/dq_m of M(q) a, as an N x N matrix (column m).
  Eigen::MatrixXd mass_derivative_times(const Eigen::VectorXd& q, const Eigen::VectorXd& a) const;
  /// Rate of work of pressure and damping: q'.(p, s) - k0 |q'|^2 - k2 sum kappa^4 q'^2.
  /// Equals dE/dt along exact solutions.
  double power(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const;

 private:
  const TensorSet& tensors_;
  PhysicalParams params_;
  Eigen::VectorXd static_load_;
};

/// (p0, s_l) for a tabulated p0.
Eigen::VectorXd static_load_vector(const std::vector<double>& p0, const ModeSamples& samples);

}  // namespace inext

#endif  // INEXT_DYNAMICS_HPP
