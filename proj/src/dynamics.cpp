#include "inext/dynamics.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace inext {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// (ij) x (kl) view of a four-tensor.
Eigen::Map<const RowMat> pair_view(const Tensor4<double>& t) {
  const int n = t.dimension();
  return {t.data(), n * n, n * n};
}

// vec(a b^T) with row-major (i, j) -> i * N + j.
Eigen::VectorXd outer_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size();
  Eigen::VectorXd v(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v.segment(i * n, n) = a[i] * b;
  return v;
}

}  // namespace

std::string to_string(InitialPreset p) {
  switch (p) {
    case InitialPreset::FirstMode: return "first-mode";
    case InitialPreset::SecondMode: return "second-mode";
    case InitialPreset::Polynomial: return "polynomial";
    case InitialPreset::LinearIV: return "linear-iv";
  }
  return "?";
}

InitialPreset initial_preset_from_string(const std::string& s) {
  if (s == "first-mode") return InitialPreset::FirstMode;
  if (s == "second-mode") return InitialPreset::SecondMode;
  if (s == "polynomial") return InitialPreset::Polynomial;
  if (s == "linear-iv") return InitialPreset::LinearIV;
  throw std::invalid_argument("unknown initial preset: " + s);
}

std::string to_string(IntegratorKind k) {
  return k == IntegratorKind::AdaptiveExplicit ? "adaptive-explicit" : "implicit-bdf2";
}

IntegratorKind integrator_from_string(const std::string& s) {
  if (s == "adaptive-explicit") return IntegratorKind::AdaptiveExplicit;
  if (s == "implicit-bdf2" || s == "implicit-second-order") return IntegratorKind::ImplicitBdf2;
  throw std::invalid_argument("unknown integrator: " + s);
}

void SimConfig::validate() const {
  const auto& p = physical;
  const auto& n = numerical;
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(schema_version == 1, "unsupported schema_version");
  require(p.D > 0.0, "D must be positive");
  require(p.L > 0.0, "L must be positive");
  require(p.beta >= 0.0, "beta must be >= 0");
  require(p.k0 >= 0.0, "k0 must be >= 0");
  require(p.k2 >= 0.0, "k2 must be >= 0");
  require(p.sigma == 0 || p.sigma == 1, "sigma must be 0 or 1");
  require(p.iota == 0 || p.iota == 1, "iota must be 0 or 1");
  require(std::isfinite(p.U), "U must be finite");
  require(p.p0.empty() || p.p0.size() >= 2, "p0 table needs at least two points");
  require(n.N >= 1, "N must be >= 1");
  require(n.t_end >= 0.0, "t_end must be >= 0");
  require(n.dt_init > 0.0 && n.dt_min > 0.0, "step sizes must be positive");
  require(n.rel_tol > 0.0 && n.abs_tol > 0.0, "tolerances must be positive");
  require(n.sample_dt > 0.0, "sample_dt must be positive");
  require(n.blowup_guard > 0.0, "blowup_guard must be positive");
  require(n.quad_points >= 2, "quad_points must be >= 2");
  require(n.quad_rule != QuadratureRule::Simpson || n.quad_points % 2 == 0,
          "Simpson quad_points must be even");
  require(initial.preset != InitialPreset::LinearIV || initial.a > 0.0, "LinearIV needs a > 0");
  require(initial.preset != InitialPreset::SecondMode || n.N >= 2, "second-mode data needs N >= 2");
  require(output.stride >= 1, "output stride must be >= 1");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> project_initial(const InitialData& init,
                                                            const ModeBasis& basis,
                                                            const ModeSamples& samples) {
  const int N = basis.size();
  const auto& grid = samples.grid;
  const Eigen::VectorXd& x = grid.nodes();
  Eigen::VectorXd w0 = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd w1 = Eigen::VectorXd::Zero(x.size());
  switch (init.preset) {
    case InitialPreset::FirstMode: w0 = samples.d[0].row(0).transpose(); break;
    case InitialPreset::SecondMode:
      if (N < 2) throw std::invalid_argument("second-mode data needs N >= 2");
      w0 = samples.d[0].row(1).transpose();
      break;
    case InitialPreset::Polynomial:
      w0 = x.unaryExpr([](double s) {
        return ((((-4.0 * s + 15.0) * s - 20.0) * s + 10.0) * s) * s;
      });
      break;
    case InitialPreset::LinearIV: w1 = init.a * x; break;
  }
  Eigen::VectorXd q0(N), qd0(N);
  for (int j = 0; j < N; ++j) {
    q0[j] = grid.integrate(w0.cwiseProduct(samples.d[0].row(j).transpose()));
    qd0[j] = grid.integrate(w1.cwiseProduct(samples.d[0].row(j).transpose()));
  }
  // Exact for the mode presets; the quadrature value differs by round-off only.
  if (init.preset == InitialPreset::FirstMode) q0 = Eigen::VectorXd::Unit(N, 0);
  if (init.preset == InitialPreset::SecondMode) q0 = Eigen::VectorXd::Unit(N, 1);
  return {init.scale * q0, init.scale * qd0};
}

Eigen::MatrixXd assemble_mass(const Eigen::VectorXd& q, const Tensor4<double>& inertia, int iota) {
  const int N = static_cast<int>(q.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N);
  if (iota == 0) return M;
  // X(j, k, l) = sum_i q_i I(i, j, k, l)
  const Eigen::Map<const RowMat> flat(inertia.data(), N, N * N * N);
  const Eigen::RowVectorXd X = q.transpose() * flat;
  for (int l = 0; l < N; ++l)
    for (int j = 0; j < N; ++j) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += q[k] * X[(j * N + k) * N + l];
      M(l, j) += acc;
    }
  return M;
}

Eigen::VectorXd assemble_forces(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot,
                                const TensorSet& t, const PhysicalParams& p,
                                const Eigen::VectorXd& static_load) {
  const int N = t.N;
  Eigen::VectorXd F = -(p.beta + p.k0) * qdot - p.k2 * t.h2_diag.cwiseProduct(qdot) -
                      p.D * t.h2_diag.cwiseProduct(q) - p.beta * p.U * (t.convection * q);
  if (static_load.size() == N) F += static_load;

  if (p.sigma != 0) {
    const auto S = pair_view(t.stiffness);
    const Eigen::VectorXd qq = outer_vec(q, q);
    // A(j, l) = sum_{ik} q_i q_k S(i, k, j, l);  B(i, l) = sum_{jk} S(i, l, j, k) q_j q_k
    const Eigen::VectorXd A = S.transpose() * qq;
    const Eigen::VectorXd B = S * qq;
    const Eigen::Map<const RowMat> Am(A.data(), N, N), Bm(B.data(), N, N);
    F -= p.sigma * p.D * (Am.transpose() * q + Bm.transpose() * q);
  }
  if (p.iota != 0) {
    const auto I = pair_view(t.inertia);
    const Eigen::VectorXd vv = outer_vec(qdot, qdot);
    // C(k, l) = sum_{ij} q'_i q'_j I(i, j, k, l)
    const Eigen::VectorXd C = I.transpose() * vv;
    const Eigen::Map<const RowMat> Cm(C.data(), N, N);
    F -= p.iota * (Cm.transpose() * q);
  }
  return F;
}

Eigen::VectorXd static_load_vector(const std::vector<double>& p0, const ModeSamples& samples) {
  const auto& grid = samples.grid;
  const Eigen::Index N = samples.d[0].rows();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(N);
  if (p0.empty()) return load;
  const double L = grid.length();
  const double h = L / static_cast<double>(p0.size() - 1);
  Eigen::VectorXd values(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double s = std::clamp(grid.nodes()[i] / h, 0.0, static_cast<double>(p0.size() - 1));
    const auto k = std::min(static_cast<std::size_t>(s), p0.size() - 2);
    const double frac = s - static_cast<double>(k);
    values[i] = (1.0 - frac) * p0[k] + frac * p0[k + 1];
  }
  for (Eigen::Index n = 0; n < N; ++n)
    load[n] = grid.integrate(values.cwiseProduct(samples.d[0].row(n).transpose()));
  return load;
}

ModalSystem::ModalSystem(const TensorSet& tensors, const PhysicalParams& params,
                         Eigen::VectorXd static_load)
    : tensors_(tensors), params_(params), static_load_(std::move(static_load)) {
  if (static_load_.size() == 0) static_load_ = Eigen::VectorXd::Zero(tensors.N);
  if (static_load_.size() != tensors.N) throw std::invalid_argument("static load has wrong size");
}

Eigen::MatrixXd ModalSystem::mass(const Eigen::VectorXd& q) const {
  return assemble_mass(q, tensors_.inertia, params_.iota);
}

Eigen::VectorXd ModalSystem::forces(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const {
  return assemble_forces(q, qdot, tensors_, params_, static_load_);
}

Eigen::VectorXd ModalSystem::acceleration(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const {
  const Eigen::VectorXd F = forces(q, qdot);
  if (params_.iota == 0) return F;
  Eigen::LLT<Eigen::MatrixXd> llt(mass(q));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mass matrix is not positive definite");
  return llt.solve(F);
}

Eigen::MatrixXd ModalSystem::mass_derivative_times(const Eigen::VectorXd& q,
                                                   const Eigen::VectorXd& a) const {
  const int N = size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);
  if (params_.iota == 0) return J;
  const auto& I = tensors_.inertia;
  // d/dq_m sum_j a_j sum_{ik} q_i q_k I(i,j,k,l)
  //   = sum_{jk} a_j q_k I(m,j,k,l) + sum_{ij} a_j q_i I(i,j,m,l)
  for (int l = 0; l < N; ++l)
    for (int m = 0; m < N; ++m) {
      double acc = 0.0;
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) acc += a[j] * q[k] * (I(m, j, k, l) + I(k, j, m, l));
      J(l, m) = acc;
    }
  return J;
}

double ModalSystem::power(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot) const {
  const auto& p = params_;
  const Eigen::VectorXd pressure =
      static_load_ - p.beta * qdot - p.beta * p.U * (tensors_.convection * q);
  return qdot.dot(pressure) - p.k0 * qdot.squaredNorm() -
         p.k2 * qdot.dot(tensors_.h2_diag.cwiseProduct(qdot));
}

}  // namespace inext
