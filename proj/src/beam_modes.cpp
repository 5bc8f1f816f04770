#include "inext/beam_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace inext {

double characteristic_residual(double z) { return std::cos(z) + 1.0 / std::cosh(z); }

namespace {

double characteristic_slope(double z) {
  const double sech = 1.0 / std::cosh(z);
  return -std::sin(z) - sech * std::tanh(z);
}

// Bisection down to a narrow bracket, then safeguarded Newton.
double refine_root(double lo, double hi) {
  double flo = characteristic_residual(lo);
  const double fhi = characteristic_residual(hi);
  if (flo * fhi > 0.0) throw std::runtime_error("mode numbers: bracket has no sign change");
  for (int it = 0; it < 60 && hi - lo > 1e-4; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = characteristic_residual(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double f = characteristic_residual(z);
    if (f == 0.0) return z;
    if ((f > 0.0) == (flo > 0.0)) lo = z; else hi = z;
    double next = z - f / characteristic_slope(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) < 1e-15 * std::max(1.0, z)) return next;
    z = next;
  }
  if (hi - lo < 1e-12) return z;
  throw std::runtime_error("mode numbers: root finder did not converge");
}

}  // namespace

Eigen::VectorXd solve_mode_numbers(int count, double length) {
  if (count < 1) throw std::invalid_argument("mode count must be >= 1");
  if (!(length > 0.0)) throw std::invalid_argument("beam length must be positive");
  Eigen::VectorXd roots(count);
  for (int n = 1; n <= count; ++n) {
    const double guess = (n - 0.5) * std::numbers::pi;
    roots[n - 1] = refine_root(guess - 0.5, guess + 0.5);
  }
  return roots;
}

double normalization_constant(double kappa_l, double length) {
  Eigen::VectorXd t, w;
  gauss_legendre_rule(16, t, w);
  const int panels = 64 + 8 * static_cast<int>(kappa_l);
  const double H = length / panels;
  double acc = 0.0;
  for (int q = 0; q < panels; ++q) {
    for (int k = 0; k < t.size(); ++k) {
      const double x = q * H + 0.5 * (t[k] + 1.0) * H;
      const double s = unnormalized_mode(kappa_l, length, x, 0);
      acc += 0.5 * H * w[k] * s * s;
    }
  }
  return 1.0 / std::sqrt(acc);
}

ModeBasis::ModeBasis(int count, double length)
    : length_(length), kappa_l_(solve_mode_numbers(count, length)) {
  shape_.resize(count);
  norm_.resize(count);
  for (int n = 0; n < count; ++n) {
    shape_[n] = shape_coefficient(kappa_l_[n]);
    norm_[n] = normalization_constant(kappa_l_[n], length_);
  }
}

double ModeBasis::value(int n, double x, int derivative) const {
  if (n < 0 || n >= size()) throw std::out_of_range("mode index out of range");
  if (derivative < 0 || derivative > 4) throw std::invalid_argument("derivative order must be 0..4");
  // Tolerate round-off at the ends of the interval.
  const double slack = 1e-12 * length_;
  if (!(x >= -slack && x <= length_ + slack))
    throw std::domain_error("mode evaluation outside [0, L]: x = " + std::to_string(x));
  x = std::clamp(x, 0.0, length_);
  return norm_[n] * unnormalized_mode(kappa_l_[n], length_, x, derivative);
}

Eigen::MatrixXd ModeBasis::sample(const QuadratureGrid& grid, int derivative) const {
  Eigen::MatrixXd out(size(), grid.size());
  for (int n = 0; n < size(); ++n)
    for (Eigen::Index i = 0; i < grid.size(); ++i) out(n, i) = value(n, grid.nodes()[i], derivative);
  return out;
}

ModeSamples::ModeSamples(const ModeBasis& basis, const QuadratureGrid& g) : grid(g) {
  if (std::abs(g.length() - basis.length()) > 1e-14 * basis.length())
    throw std::invalid_argument("mode samples: grid and basis lengths differ");
  for (int k = 0; k < 3; ++k) d[k] = basis.sample(grid, k);
  tip.resize(basis.size());
  for (int n = 0; n < basis.size(); ++n) tip[n] = basis.value(n, basis.length(), 0);
}

}  // namespace inext
