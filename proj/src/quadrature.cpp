#include "inext/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace inext {

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::Simpson ? "simpson" : "gauss";
}

QuadratureRule quadrature_rule_from_string(std::string_view name) {
  if (name == "simpson") return QuadratureRule::Simpson;
  if (name == "gauss" || name == "gauss-legendre") return QuadratureRule::GaussLegendrePanels;
  throw std::invalid_argument("unknown quadrature rule: " + std::string(name));
}

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void gauss_legendre_rule(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureGrid QuadratureGrid::simpson(double length, int intervals) {
  if (!(length > 0.0)) throw std::invalid_argument("quadrature: length must be positive");
  if (intervals < 2 || intervals % 2 != 0)
    throw std::invalid_argument("quadrature: Simpson needs an even number of intervals >= 2");
  QuadratureGrid g;
  g.rule_ = QuadratureRule::Simpson;
  g.resolution_ = intervals;
  g.points_per_panel_ = 3;
  g.length_ = length;
  const double h = length / intervals;
  g.nodes_.resize(intervals + 1);
  g.weights_.resize(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    g.nodes_[i] = i == intervals ? length : i * h;
    g.weights_[i] = (i == 0 || i == intervals) ? h / 3.0 : (i % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  }
  return g;
}

QuadratureGrid QuadratureGrid::gauss_legendre(double length, int panels, int points_per_panel) {
  if (!(length > 0.0)) throw std::invalid_argument("quadrature: length must be positive");
  if (panels < 1 || points_per_panel < 1)
    throw std::invalid_argument("quadrature: Gauss grid needs panels >= 1 and points >= 1");
  QuadratureGrid g;
  g.rule_ = QuadratureRule::GaussLegendrePanels;
  g.resolution_ = panels;
  g.points_per_panel_ = points_per_panel;
  g.length_ = length;

  Eigen::VectorXd t, w;
  gauss_legendre_rule(points_per_panel, t, w);
  g.ref_weights_ = w;

  // ref_partial_(k, j) = int_{-1}^{t_k} l_j(s) ds for the Lagrange basis on t.
  const int p = points_per_panel;
  g.ref_partial_.resize(p, p);
  for (int k = 0; k < p; ++k) {
    const double half = 0.5 * (t[k] + 1.0);
    for (int j = 0; j < p; ++j) {
      double acc = 0.0;
      for (int m = 0; m < p; ++m) {
        const double tau = -1.0 + half * (t[m] + 1.0);
        double lj = 1.0;
        for (int r = 0; r < p; ++r)
          if (r != j) lj *= (tau - t[r]) / (t[j] - t[r]);
        acc += w[m] * lj;
      }
      g.ref_partial_(k, j) = half * acc;
    }
  }

  const double H = length / panels;
  g.nodes_.resize(static_cast<Eigen::Index>(panels) * p);
  g.weights_.resize(g.nodes_.size());
  for (int q = 0; q < panels; ++q) {
    for (int k = 0; k < p; ++k) {
      g.nodes_[q * p + k] = q * H + 0.5 * (t[k] + 1.0) * H;
      g.weights_[q * p + k] = 0.5 * H * w[k];
    }
  }
  return g;
}

double QuadratureGrid::panel_integral(const Eigen::Ref<const Eigen::VectorXd>& f,
                                      Eigen::Index panel) const {
  if (rule_ == QuadratureRule::Simpson) {
    const double h = length_ / resolution_;
    const Eigen::Index i = 2 * panel;
    return h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  }
  const Eigen::Index p = points_per_panel_;
  const double H = length_ / resolution_;
  return 0.5 * H * ref_weights_.dot(f.segment(panel * p, p));
}

double QuadratureGrid::integrate(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != nodes_.size()) throw std::invalid_argument("integrate: sample count mismatch");
  const Eigen::Index npanels = rule_ == QuadratureRule::Simpson ? resolution_ / 2 : resolution_;
  double acc = 0.0;
  for (Eigen::Index q = 0; q < npanels; ++q) acc += panel_integral(f, q);
  return acc;
}

Eigen::VectorXd QuadratureGrid::cumulative_integral(const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != nodes_.size())
    throw std::invalid_argument("cumulative_integral: sample count mismatch");
  Eigen::VectorXd F(nodes_.size());
  double acc = 0.0;
  if (rule_ == QuadratureRule::Simpson) {
    const double h = length_ / resolution_;
    F[0] = 0.0;
    for (Eigen::Index q = 0; q < resolution_ / 2; ++q) {
      const Eigen::Index i = 2 * q;
      // Midpoint value from the panel's interpolating parabola.
      F[i + 1] = acc + h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
      acc += panel_integral(f, q);
      F[i + 2] = acc;
    }
    return F;
  }
  const Eigen::Index p = points_per_panel_;
  const double H = length_ / resolution_;
  for (Eigen::Index q = 0; q < resolution_; ++q) {
    const auto fp = f.segment(q * p, p);
    F.segment(q * p, p) = Eigen::VectorXd::Constant(p, acc) + 0.5 * H * (ref_partial_ * fp);
    acc += panel_integral(f, q);
  }
  return F;
}

std::uint64_t QuadratureGrid::hash() const {
  std::uint64_t h = fnv1a(&rule_, sizeof(rule_));
  h = fnv1a(&resolution_, sizeof(resolution_), h);
  h = fnv1a(&points_per_panel_, sizeof(points_per_panel_), h);
  h = fnv1a(&length_, sizeof(length_), h);
  h = fnv1a(nodes_.data(), sizeof(double) * nodes_.size(), h);
  h = fnv1a(weights_.data(), sizeof(double) * weights_.size(), h);
  return h;
}

}  // namespace inext
