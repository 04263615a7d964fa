#include "charm/fields.hpp"

namespace charm::geom {

FieldBundle::FieldBundle(int arity, int count, Fn fn)
    : m_arity(arity), m_count(count), m_fn(std::make_shared<const Fn>(std::move(fn))) {}

std::vector<Jet> FieldBundle::operator()(std::span<const Jet> coords) const {
  if (!m_fn) throw std::logic_error("evaluating an empty field bundle");
  if (static_cast<int>(coords.size()) != m_arity)
    throw std::invalid_argument("field bundle arity mismatch");
  std::vector<Jet> out = (*m_fn)(coords);
  if (static_cast<int>(out.size()) != m_count)
    throw std::logic_error("field bundle produced the wrong component count");
  return out;
}

std::vector<Jet> FieldBundle::at_point(const Eigen::VectorXd& x, int order) const {
  if (x.size() != m_arity)
    throw std::invalid_argument("field bundle point dimension mismatch");
  return (*this)(seed_point(x, order));
}

FieldBundle FieldBundle::constants(int arity, Eigen::VectorXd values) {
  const int count = static_cast<int>(values.size());
  return FieldBundle(arity, count,
                     [values = std::move(values)](std::span<const Jet> x) {
                       const int n = x.empty() ? 0 : x[0].nvars();
                       const int order = x.empty() ? 3 : x[0].order();
                       std::vector<Jet> out;
                       out.reserve(static_cast<size_t>(values.size()));
                       for (int c = 0; c < values.size(); ++c)
                         out.push_back(Jet::constant(values[c], n, order));
                       return out;
                     });
}

BundleJacobian eval_with_chart_partials(const FieldBundle& f,
                                        std::span<const Jet> coords) {
  const int m = f.arity();
  const int d = coords.empty() ? 0 : coords[0].nvars();
  std::vector<Jet> augmented;
  augmented.reserve(static_cast<size_t>(m));
  for (int c = 0; c < m; ++c) {
    Jet lifted = coords[c].extended(d + m);
    lifted.d1ref(d + c) += 1.0;
    augmented.push_back(std::move(lifted));
  }
  std::vector<Jet> raw = f(augmented);

  BundleJacobian result;
  result.value.reserve(raw.size());
  for (const Jet& j : raw) result.value.push_back(j.restricted(d));
  result.partial.resize(static_cast<size_t>(m));
  for (int c = 0; c < m; ++c) {
    result.partial[c].reserve(raw.size());
    for (const Jet& j : raw)
      result.partial[c].push_back(j.derivative(d + c).restricted(d));
  }
  return result;
}

ScalarField::ScalarField(FieldBundle bundle, int component)
    : m_bundle(std::move(bundle)), m_component(component) {
  if (m_component < 0 || m_component >= m_bundle.count())
    throw std::invalid_argument("scalar field component out of range");
}

ScalarField::ScalarField(FieldBundle bundle) : ScalarField(std::move(bundle), 0) {}

Jet ScalarField::operator()(std::span<const Jet> coords) const {
  return m_bundle(coords)[static_cast<size_t>(m_component)];
}

Jet ScalarField::at_point(const Eigen::VectorXd& x, int order) const {
  return m_bundle.at_point(x, order)[static_cast<size_t>(m_component)];
}

TensorField::TensorField(TensorValence valence, int dim, FieldBundle comps)
    : m_valence(valence), m_dim(dim), m_comps(std::move(comps)) {
  int expected = 1;
  for (int r = 0; r < valence.rank(); ++r) expected *= dim;
  if (m_comps.count() != expected)
    throw std::invalid_argument("tensor field component count does not match valence");
}

} // namespace charm::geom
