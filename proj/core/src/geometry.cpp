#include "charm/geometry.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace charm::geom {

MultiArray::MultiArray(std::vector<int> dims) : m_dims(std::move(dims)) {
  size_t n = 1;
  for (int d : m_dims) n *= static_cast<size_t>(d);
  m_data.assign(n, 0.0);
}

size_t MultiArray::offset(std::initializer_list<int> idx) const {
  size_t off = 0;
  int slot = 0;
  for (int i : idx) {
    off = off * static_cast<size_t>(m_dims[slot]) + static_cast<size_t>(i);
    ++slot;
  }
  return off;
}

double MultiArray::max_abs() const {
  double m = 0.0;
  for (double v : m_data) m = std::max(m, std::abs(v));
  return m;
}

MultiArray JetTensor::values() const {
  MultiArray out(std::vector<int>(static_cast<size_t>(valence.rank()), dim));
  for (size_t i = 0; i < comp.size(); ++i) out.raw()[i] = comp[i].value();
  return out;
}

Eigen::MatrixXd JetTensor::value_matrix() const {
  if (valence.rank() != 2) throw std::logic_error("value_matrix needs a rank two tensor");
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = c(i, j).value();
  return m;
}

Eigen::VectorXd JetTensor::value_vector() const {
  if (valence.rank() != 1) throw std::logic_error("value_vector needs a rank one tensor");
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = c(i).value();
  return v;
}

JetMatrix::JetMatrix(int rows, int cols, int nvars, int order)
    : m_rows(rows), m_cols(cols),
      m_data(static_cast<size_t>(rows * cols), Jet::constant(0.0, nvars, order)) {}

JetMatrix JetMatrix::from_flat(int rows, int cols, std::vector<Jet> flat) {
  if (static_cast<int>(flat.size()) != rows * cols)
    throw std::invalid_argument("jet matrix shape mismatch");
  JetMatrix m;
  m.m_rows = rows;
  m.m_cols = cols;
  m.m_data = std::move(flat);
  return m;
}

Eigen::MatrixXd JetMatrix::values() const {
  Eigen::MatrixXd v(m_rows, m_cols);
  for (int i = 0; i < m_rows; ++i)
    for (int j = 0; j < m_cols; ++j) v(i, j) = at(i, j).value();
  return v;
}

JetMatrix jet_solve(JetMatrix a, JetMatrix b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw std::invalid_argument("jet_solve shape mismatch");
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a.at(r, c).value()) > std::abs(a.at(pivot, c).value())) pivot = r;
    if (std::abs(a.at(pivot, c).value()) < 1e-14)
      throw std::domain_error("jet_solve hit a singular matrix");
    if (pivot != c) {
      for (int j = 0; j < n; ++j) std::swap(a.at(c, j), a.at(pivot, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b.at(c, j), b.at(pivot, j));
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      Jet factor = a.at(r, c) / a.at(c, c);
      for (int j = c; j < n; ++j) a.at(r, j) -= factor * a.at(c, j);
      for (int j = 0; j < b.cols(); ++j) b.at(r, j) -= factor * b.at(c, j);
    }
  }
  JetMatrix x(n, b.cols(), b.at(0, 0).nvars(), b.at(0, 0).order());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < b.cols(); ++j) x.at(i, j) = b.at(i, j) / a.at(i, i);
  return x;
}

JetMatrix jet_inverse(const JetMatrix& a) {
  const int n = a.rows();
  const Jet& probe = a.at(0, 0);
  JetMatrix eye(n, n, probe.nvars(), probe.order());
  for (int i = 0; i < n; ++i) eye.at(i, i) += 1.0;
  return jet_solve(a, eye);
}

JetMatrix jet_matmul(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("jet_matmul shape mismatch");
  JetMatrix r(a.rows(), b.cols(), a.at(0, 0).nvars(), a.at(0, 0).order());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Jet s = a.at(i, 0) * b.at(0, j);
      for (int k = 1; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Jet jet_det(const JetMatrix& a) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jet_det needs a square matrix");
  if (n == 1) return a.at(0, 0);
  if (n == 2) return a.at(0, 0) * a.at(1, 1) - a.at(1, 0) * a.at(0, 1);
  const Jet& probe = a.at(0, 0);
  Jet det = Jet::constant(0.0, probe.nvars(), probe.order());
  for (int i = 0; i < n; ++i) {
    JetMatrix minor(n - 1, n - 1, probe.nvars(), probe.order());
    for (int r = 0, rm = 0; r < n; ++r) {
      if (r == i) continue;
      for (int c = 1; c < n; ++c) minor.at(rm, c - 1) = a.at(r, c);
      ++rm;
    }
    Jet term = a.at(i, 0) * jet_det(minor);
    if (i % 2 == 0)
      det += term;
    else
      det -= term;
  }
  return det;
}

GeometryContext::GeometryContext(const ManifoldModel& model, const Eigen::VectorXd& x,
                                 Backend backend)
    : m_model(&model), m_x(x), m_backend(backend), m_dim(model.dim()) {
  if (!model.box().contains_with_margin(x))
    throw std::invalid_argument("evaluation point leaves the chart margin band");
  m_g = backend == Backend::fd ? fd_bundle_jets(model.metric_bundle(), x)
                               : model.metric_bundle().at_point(x, 3);
  build_from_metric_jets();
}

GeometryContext::GeometryContext(const ManifoldModel& model, const Eigen::VectorXd& x,
                                 std::vector<Jet> metric_jets, Backend backend)
    : m_model(&model), m_x(x), m_backend(backend), m_dim(model.dim()),
      m_g(std::move(metric_jets)) {
  build_from_metric_jets();
}

void GeometryContext::build_from_metric_jets() {
  const int m = m_dim;
  m_g0.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) m_g0(i, j) = m_g[static_cast<size_t>(i * m + j)].value();

  Eigen::LLT<Eigen::MatrixXd> llt(m_g0);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("metric is not positive definite at the sample point");
  m_sqrt_det = std::sqrt(m_g0.determinant());

  JetMatrix gj = JetMatrix::from_flat(m, m, m_g);
  JetMatrix ginv = jet_inverse(gj);
  m_ginv = ginv.flat();
  m_ginv0 = ginv.values();

  // Christoffel symbols of the Levi-Civita connection.
  m_gamma.assign(static_cast<size_t>(m * m * m),
                 Jet::constant(0.0, m_g[0].nvars(), 0));
  m_gamma_v = MultiArray({m, m, m});
  std::vector<Jet> dg(static_cast<size_t>(m * m * m));  // [i][j][c] = d_c g_ij
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int c = 0; c < m; ++c)
        dg[static_cast<size_t>((i * m + j) * m + c)] =
            m_g[static_cast<size_t>(i * m + j)].derivative(c);
  auto dgr = [&](int i, int j, int c) -> const Jet& {
    return dg[static_cast<size_t>((i * m + j) * m + c)];
  };
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        Jet s = Jet::constant(0.0, m_g[0].nvars(), dg[0].order());
        for (int l = 0; l < m; ++l)
          s += m_ginv[static_cast<size_t>(k * m + l)] *
               (dgr(j, l, i) + dgr(i, l, j) - dgr(i, j, l));
        s *= 0.5;
        m_gamma[static_cast<size_t>((k * m + i) * m + j)] = s;
        m_gamma[static_cast<size_t>((k * m + j) * m + i)] = s;
        m_gamma_v.at(k, i, j) = s.value();
        m_gamma_v.at(k, j, i) = s.value();
      }

  // R^l_{kij} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik}
  m_riem = MultiArray({m, m, m, m});
  m_riem4 = MultiArray({m, m, m, m});
  auto gam = [&](int k, int i, int j) -> const Jet& {
    return m_gamma[static_cast<size_t>((k * m + i) * m + j)];
  };
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (j < i) {
            m_riem.at(l, k, i, j) = -m_riem.at(l, k, j, i);
            continue;
          }
          if (i == j) continue;  // zero by antisymmetry
          double v = gam(l, j, k).derivative(i).value() -
                     gam(l, i, k).derivative(j).value();
          for (int mm = 0; mm < m; ++mm)
            v += gam(l, i, mm).value() * gam(mm, j, k).value() -
                 gam(l, j, mm).value() * gam(mm, i, k).value();
          m_riem.at(l, k, i, j) = v;
        }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = 0.0;
          for (int e = 0; e < m; ++e) v += m_g0(l, e) * m_riem.at(e, k, i, j);
          m_riem4.at(i, j, k, l) = v;
        }
}

Eigen::MatrixXd GeometryContext::ricci() const {
  const int m = m_dim;
  Eigen::MatrixXd ric(m, m);
  for (int x = 0; x < m; ++x)
    for (int k = 0; k < m; ++k) {
      double v = 0.0;
      for (int l = 0; l < m; ++l) v += m_riem.at(l, k, l, x);
      ric(x, k) = v;
    }
  return ric;
}

Eigen::MatrixXd GeometryContext::ricci_endomorphism() const {
  return m_ginv0 * ricci();
}

double GeometryContext::scalar_curvature() const {
  return (m_ginv0 * ricci()).trace();
}

Eigen::VectorXd GeometryContext::curvature_action(const Eigen::VectorXd& X,
                                                  const Eigen::VectorXd& Y,
                                                  const Eigen::VectorXd& Z) const {
  const int m = m_dim;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          out[l] += m_riem.at(l, k, i, j) * X[i] * Y[j] * Z[k];
  return out;
}

JetTensor GeometryContext::evaluate(const TensorField& field) const {
  if (field.dim() != m_dim)
    throw std::invalid_argument("tensor field dimension does not match the chart");
  return evaluate(field.components(), field.valence());
}

JetTensor GeometryContext::evaluate(const FieldBundle& comps, TensorValence valence) const {
  JetTensor t;
  t.valence = valence;
  t.dim = m_dim;
  t.comp = m_backend == Backend::fd ? fd_bundle_jets(comps, m_x)
                                    : comps.at_point(m_x, 3);
  int expected = 1;
  for (int r = 0; r < valence.rank(); ++r) expected *= m_dim;
  if (static_cast<int>(t.comp.size()) != expected)
    throw std::invalid_argument("tensor component count does not match valence");
  return t;
}

JetTensor GeometryContext::covariant_derivative(const JetTensor& t) const {
  const int m = m_dim;
  const int rank = t.valence.rank();
  size_t total = t.comp.size();
  JetTensor out;
  out.valence = {t.valence.up, t.valence.down + 1};
  out.dim = m;
  out.comp.resize(total * static_cast<size_t>(m));

  std::vector<int> digits(static_cast<size_t>(rank));
  auto gam = [&](int k, int i, int j) -> const Jet& {
    return m_gamma[static_cast<size_t>((k * m + i) * m + j)];
  };
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rest = flat;
    for (int r = rank - 1; r >= 0; --r) {
      digits[static_cast<size_t>(r)] = static_cast<int>(rest % static_cast<size_t>(m));
      rest /= static_cast<size_t>(m);
    }
    for (int c = 0; c < m; ++c) {
      Jet s = t.comp[flat].derivative(c);
      size_t stride = 1;
      for (int slot = rank - 1; slot >= 0; --slot) {
        const int d = digits[static_cast<size_t>(slot)];
        const size_t base = flat - static_cast<size_t>(d) * stride;
        if (slot < t.valence.up) {
          for (int mm = 0; mm < m; ++mm)
            s += gam(d, c, mm) * t.comp[base + static_cast<size_t>(mm) * stride];
        } else {
          for (int mm = 0; mm < m; ++mm)
            s -= gam(mm, c, d) * t.comp[base + static_cast<size_t>(mm) * stride];
        }
        stride *= static_cast<size_t>(m);
      }
      out.comp[flat * static_cast<size_t>(m) + static_cast<size_t>(c)] = s;
    }
  }
  return out;
}

JetTensor GeometryContext::second_covariant_derivative(const JetTensor& t) const {
  return covariant_derivative(covariant_derivative(t));
}

double GeometryContext::norm2(const JetTensor& t) const {
  return norm2(t.values(), t.valence);
}

double GeometryContext::norm2(const MultiArray& values, TensorValence valence) const {
  return tensor_inner(values, values, valence);
}

double GeometryContext::tensor_inner(const MultiArray& a, const MultiArray& b,
                                     TensorValence valence) const {
  const int m = m_dim;
  const int rank = valence.rank();
  const std::vector<double>& data = b.raw();
  // Dual components of b: lower the contravariant slots, raise the covariant
  // ones, one slot at a time.
  std::vector<double> dual(data);
  std::vector<double> next(data.size());
  size_t total = data.size();
  for (int slot = 0; slot < rank; ++slot) {
    size_t stride = 1;
    for (int s = rank - 1; s > slot; --s) stride *= static_cast<size_t>(m);
    const Eigen::MatrixXd& metric = slot < valence.up ? m_g0 : m_ginv0;
    for (size_t flat = 0; flat < total; ++flat) {
      const int d = static_cast<int>((flat / stride) % static_cast<size_t>(m));
      const size_t base = flat - static_cast<size_t>(d) * stride;
      double v = 0.0;
      for (int mm = 0; mm < m; ++mm)
        v += metric(d, mm) * dual[base + static_cast<size_t>(mm) * stride];
      next[flat] = v;
    }
    std::swap(dual, next);
  }
  double out = 0.0;
  for (size_t i = 0; i < total; ++i) out += a.raw()[i] * dual[i];
  return out;
}

Jet GeometryContext::tensor_inner(const std::vector<Jet>& a, const std::vector<Jet>& b,
                                  TensorValence valence) const {
  const int m = m_dim;
  const int rank = valence.rank();
  if (a.size() != b.size())
    throw std::invalid_argument("tensor_inner operands differ in size");
  std::vector<Jet> dual(b);
  std::vector<Jet> next(b.size(), Jet::constant(0.0, b[0].nvars(), b[0].order()));
  size_t total = b.size();
  for (int slot = 0; slot < rank; ++slot) {
    size_t stride = 1;
    for (int s = rank - 1; s > slot; --s) stride *= static_cast<size_t>(m);
    const std::vector<Jet>& metric = slot < valence.up ? m_g : m_ginv;
    for (size_t flat = 0; flat < total; ++flat) {
      const int d = static_cast<int>((flat / stride) % static_cast<size_t>(m));
      const size_t base = flat - static_cast<size_t>(d) * stride;
      Jet v = metric[static_cast<size_t>(d * m)] * dual[base];
      for (int mm = 1; mm < m; ++mm)
        v += metric[static_cast<size_t>(d * m + mm)] *
             dual[base + static_cast<size_t>(mm) * stride];
      next[flat] = v;
    }
    std::swap(dual, next);
  }
  Jet out = a[0] * dual[0];
  for (size_t i = 1; i < total; ++i) out += a[i] * dual[i];
  return out;
}

MetricData metric_at(const ManifoldModel& model, const Eigen::VectorXd& x, Backend backend) {
  GeometryContext ctx(model, x, backend);
  return MetricData{ctx.metric(), ctx.metric_inverse(), ctx.sqrt_det()};
}

Eigen::VectorXd r_operator(const Eigen::MatrixXd& g, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return v.dot(g * w) * u - u.dot(g * w) * v;
}

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g,
                                  const std::optional<Eigen::VectorXd>& distinguished) {
  const int m = static_cast<int>(g.rows());
  std::vector<Eigen::VectorXd> frame;
  frame.reserve(static_cast<size_t>(m));
  auto inner = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(g * b);
  };
  auto residual = [&](Eigen::VectorXd v) {
    for (const Eigen::VectorXd& f : frame) v -= inner(f, v) * f;
    return v;
  };
  if (distinguished) {
    Eigen::VectorXd v = *distinguished;
    const double n2 = inner(v, v);
    if (n2 < 1e-12)
      throw std::invalid_argument("distinguished frame vector is numerically zero");
    frame.push_back(v / std::sqrt(n2));
  }
  std::vector<bool> used(static_cast<size_t>(m), false);
  while (static_cast<int>(frame.size()) < m) {
    int best = -1;
    double best_n2 = 0.0;
    Eigen::VectorXd best_res;
    for (int c = 0; c < m; ++c) {
      if (used[static_cast<size_t>(c)]) continue;
      Eigen::VectorXd res = residual(Eigen::VectorXd::Unit(m, c));
      const double n2 = inner(res, res);
      if (n2 > best_n2) {
        best_n2 = n2;
        best = c;
        best_res = res;
      }
    }
    if (best < 0 || best_n2 < 1e-12)
      throw std::domain_error("orthonormal frame construction degenerated");
    used[static_cast<size_t>(best)] = true;
    frame.push_back(best_res / std::sqrt(best_n2));
  }
  Eigen::MatrixXd out(m, m);
  if (distinguished) {
    for (int c = 1; c < m; ++c) out.col(c - 1) = frame[static_cast<size_t>(c)];
    out.col(m - 1) = frame[0];
  } else {
    for (int c = 0; c < m; ++c) out.col(c) = frame[static_cast<size_t>(c)];
  }
  return out;
}

Eigen::MatrixXd curvature_two_form_image(const GeometryContext& ctx,
                                         const Eigen::MatrixXd& phi) {
  const int m = ctx.dim();
  const Eigen::MatrixXd& ginv = ctx.metric_inverse();
  Eigen::MatrixXd out(m, m);
  for (int c = 0; c < m; ++c)
    for (int d = 0; d < m; ++d) {
      double v = 0.0;
      for (int k = 0; k < m; ++k)
        for (int s = 0; s < m; ++s) {
          double rphi = 0.0;
          for (int l = 0; l < m; ++l) rphi += ctx.riemann_low(c, d, k, l) * phi(l, s);
          v += ginv(k, s) * rphi;
        }
      out(c, d) = -0.5 * v;
    }
  return out;
}

std::vector<Jet> fd_bundle_jets(const FieldBundle& f, const Eigen::VectorXd& x, double step) {
  const int m = f.arity();
  const int count = f.count();
  auto value = [&](const Eigen::VectorXd& y) {
    std::vector<Jet> jets = f.at_point(y, 1);
    Eigen::VectorXd v(count);
    for (int c = 0; c < count; ++c) v[c] = jets[static_cast<size_t>(c)].value();
    return v;
  };

  const Eigen::VectorXd f0 = value(x);
  std::vector<Jet> out(static_cast<size_t>(count), Jet::constant(0.0, m, 2));
  for (int c = 0; c < count; ++c) {
    Jet j = Jet::constant(f0[c], m, 2);
    out[static_cast<size_t>(c)] = j;
  }

  auto shifted = [&](int i, double s) {
    Eigen::VectorXd y = x;
    y[i] += s;
    return value(y);
  };
  auto shifted2 = [&](int i, double si, int j, double sj) {
    Eigen::VectorXd y = x;
    y[i] += si;
    y[j] += sj;
    return value(y);
  };

  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd p1 = shifted(i, step), m1 = shifted(i, -step);
    const Eigen::VectorXd p2 = shifted(i, 2.0 * step), m2 = shifted(i, -2.0 * step);
    for (int c = 0; c < count; ++c) {
      const double d_h = (p1[c] - m1[c]) / (2.0 * step);
      const double d_2h = (p2[c] - m2[c]) / (4.0 * step);
      out[static_cast<size_t>(c)].d1ref(i) = (4.0 * d_h - d_2h) / 3.0;
      const double dd_h = (p1[c] - 2.0 * f0[c] + m1[c]) / (step * step);
      const double dd_2h = (p2[c] - 2.0 * f0[c] + m2[c]) / (4.0 * step * step);
      out[static_cast<size_t>(c)].d2ref(i, i) = (4.0 * dd_h - dd_2h) / 3.0;
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      auto cross = [&](double s) {
        const Eigen::VectorXd pp = shifted2(i, s, j, s);
        const Eigen::VectorXd pm = shifted2(i, s, j, -s);
        const Eigen::VectorXd mp = shifted2(i, -s, j, s);
        const Eigen::VectorXd mm = shifted2(i, -s, j, -s);
        return Eigen::VectorXd((pp - pm - mp + mm) / (4.0 * s * s));
      };
      const Eigen::VectorXd c_h = cross(step);
      const Eigen::VectorXd c_2h = cross(2.0 * step);
      for (int c = 0; c < count; ++c)
        out[static_cast<size_t>(c)].d2ref(i, j) = (4.0 * c_h[c] - c_2h[c]) / 3.0;
    }
  return out;
}

} // namespace charm::geom
