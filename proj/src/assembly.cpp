#include "inext/assembly.hpp"

namespace inext {

LinearOperators assemble_linear(const ModeBasis& basis, const ModeSamples& samples, double D) {
  const int N = basis.size();
  LinearOperators ops;
  ops.h2_diag = basis.kappa4();
  ops.stiffness_diag = D * ops.h2_diag;
  ops.convection.resize(N, N);
  const auto& s0 = samples.d[0];
  const auto& s1 = samples.d[1];
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      ops.convection(m, n) = samples.grid.integrate(s1.row(n).cwiseProduct(s0.row(m)).transpose());
  return ops;
}

Tensor4<double> assemble_stiffness_tensor(const ModeSamples& samples) {
  const auto& s1 = samples.d[1];
  const auto& s2 = samples.d[2];
  const int N = static_cast<int>(s1.rows());
  Tensor4<double> S(N);
  Eigen::VectorXd curv(s1.cols()), prod(s1.cols());
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      curv = s2.row(i).cwiseProduct(s2.row(j)).transpose();
      for (int k = 0; k < N; ++k) {
        for (int l = k; l < N; ++l) {
          prod = curv.cwiseProduct(s1.row(k).cwiseProduct(s1.row(l)).transpose());
          const double v = samples.grid.integrate(prod);
          S(i, j, k, l) = S(j, i, k, l) = S(i, j, l, k) = S(j, i, l, k) = v;
        }
      }
    }
  }
  return S;
}

Eigen::MatrixXd running_slope_products(const ModeSamples& samples) {
  const auto& s1 = samples.d[1];
  const int N = static_cast<int>(s1.rows());
  Eigen::MatrixXd g(N * N, s1.cols());
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      g.row(i * N + j) =
          samples.grid.cumulative_integral(s1.row(i).cwiseProduct(s1.row(j)).transpose()).transpose();
      g.row(j * N + i) = g.row(i * N + j);
    }
  }
  return g;
}

Tensor4<double> assemble_inertia_tensor(const ModeSamples& samples) {
  const int N = static_cast<int>(samples.d[1].rows());
  const Eigen::MatrixXd g = running_slope_products(samples);
  Tensor4<double> I(N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      const int a = i * N + j;
      for (int k = 0; k < N; ++k) {
        for (int l = k; l < N; ++l) {
          const int b = k * N + l;
          if (b < a) continue;
          const double v = samples.grid.integrate(g.row(a).cwiseProduct(g.row(b)).transpose());
          I(i, j, k, l) = I(j, i, k, l) = I(i, j, l, k) = I(j, i, l, k) = v;
          I(k, l, i, j) = I(l, k, i, j) = I(k, l, j, i) = I(l, k, j, i) = v;
        }
      }
    }
  }
  return I;
}

TensorSet assemble_tensors(const ModeBasis& basis, const ModeSamples& samples, double D) {
  TensorSet t;
  t.N = basis.size();
  auto lin = assemble_linear(basis, samples, D);
  t.stiffness_diag = std::move(lin.stiffness_diag);
  t.h2_diag = std::move(lin.h2_diag);
  t.convection = std::move(lin.convection);
  t.stiffness = assemble_stiffness_tensor(samples);
  t.inertia = assemble_inertia_tensor(samples);
  return t;
}

}  // namespace inext
