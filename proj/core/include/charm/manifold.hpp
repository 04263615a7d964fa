#pragma once

#include "charm/fields.hpp"

#include <variant>

namespace charm::geom {

/// Axis-aligned chart domain. Evaluation points are expected to stay inside
/// the margin band so that stencils and series remain well conditioned.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  double margin = 0.1;

  int dim() const { return static_cast<int>(lo.size()); }
  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
  bool contains_with_margin(const Eigen::VectorXd& x) const;
  /// Uniform draws in the margin-shrunk interior, one column per point.
  Eigen::MatrixXd sample(int count, std::uint64_t seed) const;

  static Box cube(int dim, double lo, double hi, double margin = 0.1);
};

/// Chart with metric components given directly.
struct IntrinsicChart {
  FieldBundle metric;  // dim*dim components, row-major
};

/// Chart realized by a parametrization into Euclidean space; the metric is
/// the pullback of the ambient dot product.
struct EmbeddedPatch {
  int ambient_dim = 0;
  FieldBundle map;  // ambient_dim components
};

class ManifoldModel {
public:
  ManifoldModel() = default;
  ManifoldModel(IntrinsicChart chart, Box box);
  ManifoldModel(EmbeddedPatch patch, Box box);

  int dim() const { return m_box.dim(); }
  const Box& box() const { return m_box; }
  bool is_embedded() const { return std::holds_alternative<EmbeddedPatch>(m_backend); }
  const EmbeddedPatch& patch() const { return std::get<EmbeddedPatch>(m_backend); }

  /// Metric component bundle (dim*dim outputs). For embedded patches this is
  /// the derived pullback bundle; its jets carry one order less than the
  /// parametrization.
  const FieldBundle& metric_bundle() const { return m_metric; }

private:
  std::variant<IntrinsicChart, EmbeddedPatch> m_backend;
  FieldBundle m_metric;
  Box m_box;
};

/// Pullback metric bundle of an immersion into a Riemannian chart:
/// g_ij = g_amb(dh(e_i), dh(e_j)) evaluated along h.
FieldBundle pullback_metric_bundle(FieldBundle immersion, FieldBundle ambient_metric);

/// Euclidean specialization used by embedded patches.
FieldBundle euclidean_pullback_metric_bundle(FieldBundle map);

} // namespace charm::geom
