#ifndef INEXT_BEAM_MODES_HPP
#define INEXT_BEAM_MODES_HPP

#include "inext/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace inext {

/// cos(z) + sech(z): the clamped-free characteristic function
/// cos(z)cosh(z) + 1 divided by cosh(z). Same roots, no overflow.
double characteristic_residual(double z);

/// First `count` positive roots of cos(z)cosh(z) = -1 (the mode numbers
/// kappa_n * L), each to absolute tolerance 1e-12 or better.
Eigen::VectorXd solve_mode_numbers(int count, double length);

/// Shape coefficient C = (cos z + cosh z) / (sin z + sinh z) for a mode
/// number z, written so that s(x) ~ (cos - cosh)(kx) - C (sin - sinh)(kx).
template <typename Scalar>
Scalar shape_coefficient(Scalar z) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar e = exp(-z);
  return (Scalar(2) * cos(z) * e + Scalar(1) + e * e) / (Scalar(2) * sin(z) * e + Scalar(1) - e * e);
}

/// d-th x-derivative of the unnormalized cantilever shape
///   (cos(kx) - cosh(kx)) - C (sin(kx) - sinh(kx)),   k = z / L.
/// The hyperbolic part is evaluated as P e^{kx} + Q e^{-kx} with P folded
/// against e^{-z}, so large mode numbers do not cancel catastrophically.
template <typename Scalar>
Scalar unnormalized_mode(Scalar z, Scalar length, Scalar x, int d) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar k = z / length;
  const Scalar y = k * x;
  const Scalar C = shape_coefficient(z);
  const Scalar ez = exp(-z);
  const Scalar denom = Scalar(2) * sin(z) * ez + Scalar(1) - ez * ez;
  // 0.5 (1 - C) e^{y} and 0.5 (1 + C) e^{-y}.
  const Scalar grow = exp(y - z) * (sin(z) - cos(z) - ez) / denom;
  const Scalar decay = Scalar(0.5) * (Scalar(1) + C) * exp(-y);

  Scalar c = cos(y), s = sin(y);
  Scalar trig = 0;
  switch (d % 4) {
    case 0: trig = c - C * s; break;
    case 1: trig = -s - C * c; break;
    case 2: trig = -c + C * s; break;
    default: trig = s + C * c; break;
  }
  const Scalar hyp = grow + (d % 2 == 0 ? decay : -decay);
  Scalar scale = 1;
  for (int i = 0; i < d; ++i) scale *= k;
  return scale * (trig - hyp);
}

/// Normalization c > 0 making the unnormalized shape unit in L^2(0, L),
/// computed by a high-order Gauss rule independent of any assembly grid.
double normalization_constant(double kappa_l, double length);

/// In-vacuo Euler-Bernoulli clamped-free eigenfunctions
///   s_n(x) = c_n [ (cos - cosh)(k_n x) - C_n (sin - sinh)(k_n x) ].
/// Indices are zero based: n = 0 is the fundamental mode. Immutable.
class ModeBasis {
 public:
  ModeBasis(int count, double length);

  int size() const { return static_cast<int>(kappa_l_.size()); }
  double length() const { return length_; }

  const Eigen::VectorXd& kappa_l() const { return kappa_l_; }
  Eigen::VectorXd kappa() const { return kappa_l_ / length_; }
  /// kappa_n^4, the eigenvalues of d^4/dx^4 under clamped-free conditions.
  Eigen::VectorXd kappa4() const { return kappa().array().pow(4).matrix(); }
  const Eigen::VectorXd& shape_coefficients() const { return shape_; }
  const Eigen::VectorXd& normalization() const { return norm_; }

  /// Exact d-th derivative (0 <= d <= 4) of s_n at x in [0, L].
  double value(int n, double x, int derivative = 0) const;

  /// Row n holds s_n^{(derivative)} at every grid node.
  Eigen::MatrixXd sample(const QuadratureGrid& grid, int derivative) const;

 private:
  double length_;
  Eigen::VectorXd kappa_l_;
  Eigen::VectorXd shape_;
  Eigen::VectorXd norm_;
};

/// Modes and their first two derivatives on one grid, computed once and
/// shared by assembly and diagnostics.
struct ModeSamples {
  ModeSamples(const ModeBasis& basis, const QuadratureGrid& grid);

  QuadratureGrid grid;
  std::array<Eigen::MatrixXd, 3> d;  // d[k](n, i) = s_n^{(k)}(x_i)
  Eigen::VectorXd tip;               // s_n(L)
};

}  // namespace inext

#endif  // INEXT_BEAM_MODES_HPP
