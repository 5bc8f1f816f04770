#ifndef INEXT_FLUTTER_HPP
#define INEXT_FLUTTER_HPP

#include "inext/assembly.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace inext {

struct FlutterParams {
  double D = 1.0;
  double L = 1.0;
  double beta = 1.0;
  double k0 = 0.0;
  double U = 0.0;
  int N = 6;
  /// Keep the diagonal convection entries (s_n', s_n) = s_n(L)^2 / 2 in the
  /// coupling. Off reproduces the off-diagonal-only flutter matrix.
  bool diagonal_convection = true;

  void validate() const;
};

/// Flow-coupling matrix beta U (s_n', s_m) actually used by the analysis.
Eigen::MatrixXd flutter_coupling(const FlutterParams& params, const LinearOperators& ops);

/// A(w) with diagonal -w^2 - i (beta + k0) w + D kappa_j^4 and coupling
/// beta U (s_n', s_m) in entry (m, n); harmonic ansatz e^{-i w t}.
Eigen::MatrixXcd build_flutter_matrix(std::complex<double> omega, const FlutterParams& params,
                                      const LinearOperators& ops);

/// All 2N growth rates lambda (modal factor e^{lambda t}, lambda = -i w) of
///   lambda^2 q + (beta + k0) lambda q + (K + beta U C) q = 0,
/// from the 2N x 2N companion matrix. Sorted by (imag, real).
Eigen::VectorXcd solve_growth_rates(const FlutterParams& params, const LinearOperators& ops);

double max_growth_rate(const Eigen::VectorXcd& roots);

/// sigma_min / sigma_max of A(i lambda); zero at an exact root.
double determinant_residual(std::complex<double> lambda, const FlutterParams& params,
                            const LinearOperators& ops);

/// Bisection on U -> max Re(lambda). Empty when max Re(lambda) does not
/// change sign strictly between U_lo and U_hi.
std::optional<double> find_ucrit(FlutterParams params, const LinearOperators& ops, double U_lo,
                                 double U_hi, double tol = 1e-6);

struct BranchTable {
  std::vector<double> speeds;
  /// roots[u][b]: branch b at speeds[u], ordered consistently along the sweep.
  std::vector<Eigen::VectorXcd> roots;
};

/// Growth rates at each speed, with branches matched greedily to their
/// nearest neighbours from the previous speed.
BranchTable sweep_branches(FlutterParams params, const LinearOperators& ops,
                           const std::vector<double>& speeds);

}  // namespace inext

#endif  // INEXT_FLUTTER_HPP
