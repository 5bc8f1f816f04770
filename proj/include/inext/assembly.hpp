#ifndef INEXT_ASSEMBLY_HPP
#define INEXT_ASSEMBLY_HPP

#include "inext/beam_modes.hpp"
#include "inext/quadrature.hpp"
#include "inext/tensor4.hpp"

#include <Eigen/Dense>

namespace inext {

/// Galerkin operators of the truncated cantilever model.
struct TensorSet {
  int N = 0;
  /// D kappa_n^4: linear stiffness eigenvalues.
  Eigen::VectorXd stiffness_diag;
  /// kappa_n^4: Kelvin-Voigt weights and H^2 contractions.
  Eigen::VectorXd h2_diag;
  /// convection(m, n) = (s_n', s_m).
  Eigen::MatrixXd convection;
  /// S(i,j,k,l) = int s_i'' s_j'' s_k' s_l' dx.
  Tensor4<double> stiffness;
  /// I(i,j,k,l) = int g_ij g_kl dx, g_ij(x) = int_0^x s_i' s_j'.
  Tensor4<double> inertia;
};

struct LinearOperators {
  Eigen::VectorXd stiffness_diag;
  Eigen::VectorXd h2_diag;
  Eigen::MatrixXd convection;
};

LinearOperators assemble_linear(const ModeBasis& basis, const ModeSamples& samples, double D);

/// Computes the reduced index set (i <= j, k <= l) and mirrors.
Tensor4<double> assemble_stiffness_tensor(const ModeSamples& samples);

/// Running integrals g_ij for i <= j, then I = integrate(g_ij g_kl) over
/// pairs (ij) <= (kl), mirrored into all eight symmetric positions.
Tensor4<double> assemble_inertia_tensor(const ModeSamples& samples);

/// g_ij(x) = int_0^x s_i' s_j' at every node, for all ordered pairs.
/// Row (i * N + j) of the result.
Eigen::MatrixXd running_slope_products(const ModeSamples& samples);

TensorSet assemble_tensors(const ModeBasis& basis, const ModeSamples& samples, double D);

}  // namespace inext

#endif  // INEXT_ASSEMBLY_HPP
