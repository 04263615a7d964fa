#include "charm/jet.hpp"

#include <algorithm>
#include <cmath>

namespace charm::geom {

namespace {

inline void sort2(int& i, int& j) {
  if (i > j) std::swap(i, j);
}

inline void sort3(int& i, int& j, int& k) {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
}

} // namespace

int Jet::idx2(int i, int j) { return tri(j) + i; }

int Jet::idx3(int i, int j, int k) { return tet(k) + tri(j) + i; }

Jet Jet::constant(double value, int nvars, int order) {
  Jet r;
  r.m_nvars = nvars;
  r.m_order = order;
  r.m_value = value;
  r.m_d1 = Eigen::VectorXd::Zero(nvars);
  r.m_d2 = Eigen::VectorXd::Zero(tri(nvars));
  r.m_d3 = Eigen::VectorXd::Zero(tet(nvars));
  return r;
}

Jet Jet::variable(double value, int index, int nvars, int order) {
  Jet r = constant(value, nvars, order);
  if (index < 0 || index >= nvars)
    throw std::invalid_argument("jet variable index out of range");
  if (order >= 1) r.m_d1[index] = 1.0;
  return r;
}

double Jet::d2(int i, int j) const {
  sort2(i, j);
  return m_d2[idx2(i, j)];
}

double Jet::d3(int i, int j, int k) const {
  sort3(i, j, k);
  return m_d3[idx3(i, j, k)];
}

double& Jet::d2ref(int i, int j) {
  sort2(i, j);
  return m_d2[idx2(i, j)];
}

double& Jet::d3ref(int i, int j, int k) {
  sort3(i, j, k);
  return m_d3[idx3(i, j, k)];
}

Jet Jet::derivative(int v) const {
  if (m_order < 1)
    throw JetOrderError("jet derivative order exhausted; deepen the source expansion");
  Jet r = constant(m_d1[v], m_nvars, m_order - 1);
  if (r.m_order >= 1) {
    for (int i = 0; i < m_nvars; ++i) r.m_d1[i] = d2(i, v);
  }
  if (r.m_order >= 2) {
    for (int j = 0; j < m_nvars; ++j)
      for (int i = 0; i <= j; ++i) r.m_d2[idx2(i, j)] = d3(i, j, v);
  }
  return r;
}

Jet Jet::extended(int nvars_new) const {
  if (nvars_new < m_nvars)
    throw std::invalid_argument("jet extension must not shrink the variable space");
  Jet r = constant(m_value, nvars_new, m_order);
  r.m_d1.head(m_nvars) = m_d1;
  for (int j = 0; j < m_nvars; ++j)
    for (int i = 0; i <= j; ++i) r.m_d2[idx2(i, j)] = m_d2[idx2(i, j)];
  for (int k = 0; k < m_nvars; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i) r.m_d3[idx3(i, j, k)] = m_d3[idx3(i, j, k)];
  return r;
}

Jet Jet::restricted(int nvars_new) const {
  if (nvars_new > m_nvars)
    throw std::invalid_argument("jet restriction must not grow the variable space");
  Jet r = constant(m_value, nvars_new, m_order);
  r.m_d1 = m_d1.head(nvars_new);
  for (int j = 0; j < nvars_new; ++j)
    for (int i = 0; i <= j; ++i) r.m_d2[idx2(i, j)] = m_d2[idx2(i, j)];
  for (int k = 0; k < nvars_new; ++k)
    for (int j = 0; j <= k; ++j)
      for (int i = 0; i <= j; ++i) r.m_d3[idx3(i, j, k)] = m_d3[idx3(i, j, k)];
  return r;
}

Jet Jet::truncated(int order_new) const {
  Jet r = *this;
  r.m_order = std::min(m_order, order_new);
  if (r.m_order < 1) r.m_d1.setZero();
  if (r.m_order < 2) r.m_d2.setZero();
  if (r.m_order < 3) r.m_d3.setZero();
  return r;
}

void Jet::require_same_space(const Jet& o) const {
  if (m_nvars != o.m_nvars)
    throw std::invalid_argument("jet operands live in different variable spaces");
}

Jet Jet::operator-() const {
  Jet r = *this;
  r.m_value = -r.m_value;
  r.m_d1 = -r.m_d1;
  r.m_d2 = -r.m_d2;
  r.m_d3 = -r.m_d3;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same_space(o);
  m_order = std::min(m_order, o.m_order);
  m_value += o.m_value;
  m_d1 += o.m_d1;
  m_d2 += o.m_d2;
  m_d3 += o.m_d3;
  if (m_order < 1) m_d1.setZero();
  if (m_order < 2) m_d2.setZero();
  if (m_order < 3) m_d3.setZero();
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same_space(o);
  m_order = std::min(m_order, o.m_order);
  m_value -= o.m_value;
  m_d1 -= o.m_d1;
  m_d2 -= o.m_d2;
  m_d3 -= o.m_d3;
  if (m_order < 1) m_d1.setZero();
  if (m_order < 2) m_d2.setZero();
  if (m_order < 3) m_d3.setZero();
  return *this;
}

Jet& Jet::operator*=(double c) {
  m_value *= c;
  m_d1 *= c;
  m_d2 *= c;
  m_d3 *= c;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same_space(b);
  const int n = a.m_nvars;
  const int order = std::min(a.m_order, b.m_order);
  Jet r = Jet::constant(a.m_value * b.m_value, n, order);
  if (order >= 1) r.m_d1 = a.m_value * b.m_d1 + b.m_value * a.m_d1;
  if (order >= 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        const int ij = Jet::idx2(i, j);
        r.m_d2[ij] = a.m_value * b.m_d2[ij] + b.m_value * a.m_d2[ij] +
                     a.m_d1[i] * b.m_d1[j] + a.m_d1[j] * b.m_d1[i];
      }
  }
  if (order >= 3) {
    for (int k = 0; k < n; ++k)
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= j; ++i) {
          const int ijk = Jet::idx3(i, j, k);
          const int ij = Jet::idx2(i, j);
          const int ik = Jet::idx2(i, k);
          const int jk = Jet::idx2(j, k);
          r.m_d3[ijk] = a.m_value * b.m_d3[ijk] + b.m_value * a.m_d3[ijk] +
                        a.m_d1[i] * b.m_d2[jk] + a.m_d1[j] * b.m_d2[ik] +
                        a.m_d1[k] * b.m_d2[ij] + b.m_d1[i] * a.m_d2[jk] +
                        b.m_d1[j] * a.m_d2[ik] + b.m_d1[k] * a.m_d2[ij];
        }
  }
  return r;
}

Jet Jet::compose(double f0, double f1, double f2, double f3) const {
  const int n = m_nvars;
  Jet r = constant(f0, n, m_order);
  if (m_order >= 1) r.m_d1 = f1 * m_d1;
  if (m_order >= 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) {
        const int ij = idx2(i, j);
        r.m_d2[ij] = f1 * m_d2[ij] + f2 * m_d1[i] * m_d1[j];
      }
  }
  if (m_order >= 3) {
    for (int k = 0; k < n; ++k)
      for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= j; ++i) {
          const int ijk = idx3(i, j, k);
          r.m_d3[ijk] = f1 * m_d3[ijk] +
                        f2 * (m_d1[i] * m_d2[idx2(j, k)] +
                              m_d1[j] * m_d2[idx2(i, k)] +
                              m_d1[k] * m_d2[idx2(i, j)]) +
                        f3 * m_d1[i] * m_d1[j] * m_d1[k];
        }
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const double v = b.value();
  if (v == 0.0) throw std::domain_error("jet division by zero value");
  const double iv = 1.0 / v;
  return a * b.compose(iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
}

Jet operator/(double c, const Jet& b) {
  const double v = b.value();
  if (v == 0.0) throw std::domain_error("jet division by zero value");
  const double iv = 1.0 / v;
  return c * b.compose(iv, -iv * iv, 2.0 * iv * iv * iv, -6.0 * iv * iv * iv * iv);
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (v <= 0.0) throw std::domain_error("jet sqrt needs a positive value");
  const double s = std::sqrt(v);
  return a.compose(s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (v <= 0.0) throw std::domain_error("jet log needs a positive value");
  const double iv = 1.0 / v;
  return a.compose(std::log(v), iv, -iv * iv, 2.0 * iv * iv * iv);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

Jet pow(const Jet& a, int n) {
  if (n < 0) return 1.0 / pow(a, -n);
  Jet r = Jet::constant(1.0, a.nvars(), a.order());
  Jet base = a;
  int e = n;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

std::vector<Jet> seed_point(const Eigen::VectorXd& x, int order) {
  std::vector<Jet> seeds;
  seeds.reserve(static_cast<size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i)
    seeds.push_back(Jet::variable(x[i], i, static_cast<int>(x.size()), order));
  return seeds;
}

} // namespace charm::geom
