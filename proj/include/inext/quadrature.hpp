#ifndef INEXT_QUADRATURE_HPP
#define INEXT_QUADRATURE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>

namespace inext {

enum class QuadratureRule { Simpson, GaussLegendrePanels };

std::string to_string(QuadratureRule rule);
QuadratureRule quadrature_rule_from_string(std::string_view name);

/// Fixed 1-D quadrature grid on [0, L].
///
/// Simpson grids use M uniform sub-intervals (M even, M + 1 nodes, both
/// endpoints included). Gauss grids use M uniform panels with
/// `points_per_panel` Legendre nodes each (endpoints excluded). Every inner
/// product and running integral in the library is computed on one of these.
class QuadratureGrid {
 public:
  static QuadratureGrid simpson(double length, int intervals);
  static QuadratureGrid gauss_legendre(double length, int panels,
                                       int points_per_panel = 8);

  QuadratureRule rule() const { return rule_; }
  /// M: sub-intervals (Simpson) or panels (Gauss).
  int resolution() const { return resolution_; }
  int points_per_panel() const { return points_per_panel_; }
  double length() const { return length_; }
  Eigen::Index size() const { return nodes_.size(); }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Integral over [0, L] of a function sampled at the nodes.
  double integrate(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  /// Running integral F(x_i) = int_0^{x_i} f at every node, accumulated
  /// panel by panel with the same order as the rule. For Simpson grids the
  /// last entry equals integrate(f) bit for bit.
  Eigen::VectorXd cumulative_integral(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  /// Stable 64-bit hash of (rule, panels, points, length, nodes, weights).
  std::uint64_t hash() const;

 private:
  QuadratureGrid() = default;

  double panel_integral(const Eigen::Ref<const Eigen::VectorXd>& f, Eigen::Index panel) const;

  QuadratureRule rule_ = QuadratureRule::Simpson;
  int resolution_ = 0;
  int points_per_panel_ = 0;
  double length_ = 0.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  // Gauss only: reference weights and partial-integration matrix on [-1, 1].
  Eigen::VectorXd ref_weights_;
  Eigen::MatrixXd ref_partial_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], Newton on P_n.
void gauss_legendre_rule(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// FNV-1a over raw bytes; shared by grid hashing and the tensor cache.
std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace inext

#endif  // INEXT_QUADRATURE_HPP
