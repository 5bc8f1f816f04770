#include "inext/flutter.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <stdexcept>

namespace inext {

void FlutterParams::validate() const {
  if (!(D > 0.0)) throw std::invalid_argument("flutter: D must be positive");
  if (!(L > 0.0)) throw std::invalid_argument("flutter: L must be positive");
  if (!(beta >= 0.0)) throw std::invalid_argument("flutter: beta must be >= 0");
  if (!(k0 >= 0.0)) throw std::invalid_argument("flutter: k0 must be >= 0");
  if (N < 1) throw std::invalid_argument("flutter: N must be >= 1");
}

Eigen::MatrixXd flutter_coupling(const FlutterParams& p, const LinearOperators& ops) {
  if (ops.convection.rows() < p.N) throw std::invalid_argument("flutter: operators smaller than N");
  Eigen::MatrixXd C = ops.convection.topLeftCorner(p.N, p.N);
  if (!p.diagonal_convection) C.diagonal().setZero();
  return p.beta * p.U * C;
}

Eigen::MatrixXcd build_flutter_matrix(std::complex<double> omega, const FlutterParams& p,
                                      const LinearOperators& ops) {
  p.validate();
  const std::complex<double> i(0.0, 1.0);
  Eigen::MatrixXcd A = flutter_coupling(p, ops).cast<std::complex<double>>();
  const Eigen::VectorXd k4 = ops.h2_diag.head(p.N);
  for (int j = 0; j < p.N; ++j)
    A(j, j) += -omega * omega - i * (p.beta + p.k0) * omega + p.D * k4[j];
  return A;
}

Eigen::VectorXcd solve_growth_rates(const FlutterParams& p, const LinearOperators& ops) {
  p.validate();
  const int N = p.N;
  Eigen::MatrixXd K = flutter_coupling(p, ops);
  K.diagonal() += p.D * ops.h2_diag.head(N);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  companion.topRightCorner(N, N).setIdentity();
  companion.bottomLeftCorner(N, N) = -K;
  companion.bottomRightCorner(N, N).diagonal().setConstant(-(p.beta + p.k0));

  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("flutter: companion eigensolve failed");
  Eigen::VectorXcd roots = es.eigenvalues();
  std::sort(roots.data(), roots.data() + roots.size(), [](auto a, auto b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  return roots;
}

double max_growth_rate(const Eigen::VectorXcd& roots) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : roots) m = std::max(m, r.real());
  return m;
}

double determinant_residual(std::complex<double> lambda, const FlutterParams& p,
                            const LinearOperators& ops) {
  const std::complex<double> omega = std::complex<double>(0.0, 1.0) * lambda;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(build_flutter_matrix(omega, p, ops));
  const auto& sv = svd.singularValues();
  return sv[sv.size() - 1] / sv[0];
}

namespace {

// Sign of max Re(lambda) with a dead band for roots sitting on the axis.
int growth_sign(const FlutterParams& p, const LinearOperators& ops) {
  const Eigen::VectorXcd roots = solve_growth_rates(p, ops);
  const double scale = roots.cwiseAbs().maxCoeff();
  const double m = max_growth_rate(roots);
  const double band = 1e-10 * std::max(1.0, scale);
  return m > band ? 1 : (m < -band ? -1 : 0);
}

}  // namespace

std::optional<double> find_ucrit(FlutterParams p, const LinearOperators& ops, double U_lo,
                                 double U_hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_ucrit: tol must be positive");
  p.U = U_lo;
  const int s_lo = growth_sign(p, ops);
  p.U = U_hi;
  const int s_hi = growth_sign(p, ops);
  if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) return std::nullopt;
  double lo = U_lo, hi = U_hi;
  while (std::abs(hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    p.U = mid;
    const int s = growth_sign(p, ops);
    if (s == s_lo) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

BranchTable sweep_branches(FlutterParams p, const LinearOperators& ops,
                           const std::vector<double>& speeds) {
  BranchTable table;
  table.speeds = speeds;
  table.roots.reserve(speeds.size());
  for (double U : speeds) {
    p.U = U;
    Eigen::VectorXcd roots = solve_growth_rates(p, ops);
    if (!table.roots.empty()) {
      const Eigen::VectorXcd& prev = table.roots.back();
      const Eigen::Index n = roots.size();
      // Greedy matching: closest (previous branch, new root) pair first.
      std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> pairs;
      pairs.reserve(n * n);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) pairs.emplace_back(std::abs(prev[a] - roots[b]), a, b);
      std::sort(pairs.begin(), pairs.end());
      std::vector<bool> used_prev(n, false), used_new(n, false);
      Eigen::VectorXcd ordered(n);
      for (const auto& [d, a, b] : pairs) {
        if (used_prev[a] || used_new[b]) continue;
        ordered[a] = roots[b];
        used_prev[a] = used_new[b] = true;
      }
      roots = ordered;
    }
    table.roots.push_back(std::move(roots));
  }
  return table;
}

}  // namespace inext
