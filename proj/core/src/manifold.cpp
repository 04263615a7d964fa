#include "charm/manifold.hpp"

#include <random>

namespace charm::geom {

bool Box::contains_with_margin(const Eigen::VectorXd& x) const {
  if (x.size() != lo.size()) return false;
  for (int i = 0; i < x.size(); ++i) {
    const double pad = margin * (hi[i] - lo[i]);
    if (x[i] < lo[i] + pad || x[i] > hi[i] - pad) return false;
  }
  return true;
}

Eigen::MatrixXd Box::sample(int count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd points(dim(), count);
  for (int c = 0; c < count; ++c)
    for (int i = 0; i < dim(); ++i) {
      const double pad = margin * (hi[i] - lo[i]);
      points(i, c) = lo[i] + pad + (hi[i] - lo[i] - 2.0 * pad) * unit(rng);
    }
  return points;
}

Box Box::cube(int dim, double lo, double hi, double margin) {
  Box b;
  b.lo = Eigen::VectorXd::Constant(dim, lo);
  b.hi = Eigen::VectorXd::Constant(dim, hi);
  b.margin = margin;
  return b;
}

ManifoldModel::ManifoldModel(IntrinsicChart chart, Box box)
    : m_backend(chart), m_metric(chart.metric), m_box(std::move(box)) {
  if (m_metric.arity() != m_box.dim() || m_metric.count() != m_box.dim() * m_box.dim())
    throw std::invalid_argument("intrinsic chart metric bundle has the wrong shape");
}

ManifoldModel::ManifoldModel(EmbeddedPatch patch, Box box)
    : m_backend(patch), m_box(std::move(box)) {
  if (patch.map.arity() != m_box.dim() || patch.map.count() != patch.ambient_dim)
    throw std::invalid_argument("embedded patch map bundle has the wrong shape");
  m_metric = euclidean_pullback_metric_bundle(patch.map);
}

FieldBundle euclidean_pullback_metric_bundle(FieldBundle map) {
  const int m = map.arity();
  const int n = map.count();
  return FieldBundle(m, m * m, [map = std::move(map), m, n](std::span<const Jet> x) {
    BundleJacobian jac = eval_with_chart_partials(map, x);
    std::vector<Jet> g(static_cast<size_t>(m * m));
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        Jet s = jac.partial[i][0] * jac.partial[j][0];
        for (int a = 1; a < n; ++a) s += jac.partial[i][a] * jac.partial[j][a];
        g[static_cast<size_t>(i * m + j)] = s;
        if (i != j) g[static_cast<size_t>(j * m + i)] = s;
      }
    return g;
  });
}

FieldBundle pullback_metric_bundle(FieldBundle immersion, FieldBundle ambient_metric) {
  const int m = immersion.arity();
  const int n = immersion.count();
  if (ambient_metric.arity() != n || ambient_metric.count() != n * n)
    throw std::invalid_argument("ambient metric bundle has the wrong shape");
  return FieldBundle(
      m, m * m,
      [immersion = std::move(immersion), ambient_metric = std::move(ambient_metric), m,
       n](std::span<const Jet> x) {
        BundleJacobian jac = eval_with_chart_partials(immersion, x);
        std::vector<Jet> gamb = ambient_metric(jac.value);
        std::vector<Jet> g(static_cast<size_t>(m * m));
        for (int i = 0; i < m; ++i)
          for (int j = i; j < m; ++j) {
            Jet s = Jet::constant(0.0, jac.value[0].nvars(), jac.value[0].order());
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b)
                s += gamb[static_cast<size_t>(a * n + b)] * jac.partial[i][a] *
                     jac.partial[j][b];
            g[static_cast<size_t>(i * m + j)] = s;
            if (i != j) g[static_cast<size_t>(j * m + i)] = s;
          }
        return g;
      });
}

} // namespace charm::geom
