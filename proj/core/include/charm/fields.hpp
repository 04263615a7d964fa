#pragma once

#include "charm/jet.hpp"

#include <functional>
#include <memory>

namespace charm::geom {

/// A family of scalar fields on a chart, evaluated jointly on jet-valued
/// coordinates. Passing the output jets of one bundle as the coordinates of
/// another composes the two maps, so fields can be pulled back along
/// immersions without any extra machinery.
class FieldBundle {
public:
  using Fn = std::function<std::vector<Jet>(std::span<const Jet>)>;

  FieldBundle() = default;
  FieldBundle(int arity, int count, Fn fn);

  int arity() const { return m_arity; }
  int count() const { return m_count; }
  bool valid() const { return static_cast<bool>(m_fn); }

  std::vector<Jet> operator()(std::span<const Jet> coords) const;
  std::vector<Jet> at_point(const Eigen::VectorXd& x, int order = 3) const;

  static FieldBundle constants(int arity, Eigen::VectorXd values);

private:
  int m_arity = 0;
  int m_count = 0;
  std::shared_ptr<const Fn> m_fn;
};

/// Partial derivatives of bundle components with respect to the bundle's own
/// chart variables, valid even when the input coordinates are jets of some
/// other parameter space. Computed by evaluating on coordinates augmented
/// with one auxiliary variable per chart direction and extracting those
/// slots, so the results are exact jets one order below the inputs.
struct BundleJacobian {
  std::vector<Jet> value;                 // count entries
  std::vector<std::vector<Jet>> partial;  // [chart dir][component]
};

BundleJacobian eval_with_chart_partials(const FieldBundle& f,
                                        std::span<const Jet> coords);

/// Single scalar field; a one-component view used where the interface calls
/// for an individual function on the chart.
class ScalarField {
public:
  ScalarField() = default;
  ScalarField(FieldBundle bundle, int component);
  explicit ScalarField(FieldBundle bundle);

  int arity() const { return m_bundle.arity(); }
  Jet operator()(std::span<const Jet> coords) const;
  Jet at_point(const Eigen::VectorXd& x, int order = 3) const;

private:
  FieldBundle m_bundle;
  int m_component = 0;
};

struct TensorValence {
  int up = 0;    // contravariant slots
  int down = 0;  // covariant slots
  int rank() const { return up + down; }
  bool operator==(const TensorValence&) const = default;
};

/// Tensor field on a chart: component functions bundled together, indexed
/// row-major with contravariant slots first.
class TensorField {
public:
  TensorField() = default;
  TensorField(TensorValence valence, int dim, FieldBundle comps);

  TensorValence valence() const { return m_valence; }
  int dim() const { return m_dim; }
  const FieldBundle& components() const { return m_comps; }

private:
  TensorValence m_valence;
  int m_dim = 0;
  FieldBundle m_comps;
};

} // namespace charm::geom
