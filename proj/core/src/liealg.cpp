#include "charm/liealg.hpp"

#include <stdexcept>

namespace charm::liealg {

namespace {

int infer_k(const Eigen::MatrixXd& a) {
  const int m = static_cast<int>(a.rows());
  if (a.cols() != m || m < 3 || m % 2 == 0)
    throw std::invalid_argument("expected a square matrix of odd size at least three");
  return (m - 1) / 2;
}

Eigen::MatrixXd pad(const Eigen::MatrixXd& top, int k) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * k + 1, 2 * k + 1);
  out.topLeftCorner(2 * k, 2 * k) = top;
  return out;
}

std::vector<Eigen::MatrixXd> skew_basis(int k) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(k, k);
      e(i, j) = 1.0;
      e(j, i) = -1.0;
      out.push_back(e);
    }
  return out;
}

std::vector<Eigen::MatrixXd> sym_basis(int k) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(k, k);
      e(i, j) += 1.0;
      e(j, i) += 1.0;
      out.push_back(e);
    }
  return out;
}

} // namespace

Eigen::MatrixXd model_phi(int k) {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(2 * k + 1, 2 * k + 1);
  phi.block(0, k, k, k) = -Eigen::MatrixXd::Identity(k, k);
  phi.block(k, 0, k, k) = Eigen::MatrixXd::Identity(k, k);
  return phi;
}

Eigen::VectorXd model_xi(int k) { return Eigen::VectorXd::Unit(2 * k + 1, 2 * k); }

Eigen::MatrixXd reeb_projector(int k) {
  const Eigen::VectorXd xi = model_xi(k);
  return xi * xi.transpose();
}

double trace_form(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return -(a * b).trace();
}

Eigen::MatrixXd bracket(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b - b * a;
}

bool is_skew(const Eigen::MatrixXd& a, double tol) {
  return (a + a.transpose()).norm() <= tol;
}

SkewDecomposition decompose(const Eigen::MatrixXd& a) {
  const int k = infer_k(a);
  if (!is_skew(a, 1e-10 * (1.0 + a.norm())))
    throw std::invalid_argument("decompose expects a skew matrix");
  const Eigen::MatrixXd phi = model_phi(k);
  const Eigen::MatrixXd e = reeb_projector(k);

  SkewDecomposition d;
  d.m2 = a * e + e * a;
  const Eigen::MatrixXd rest = a - d.m2;
  const Eigen::MatrixXd conj = phi * a * phi;
  d.h = 0.5 * (rest - conj);
  d.m1 = 0.5 * (rest + conj);
  return d;
}

Eigen::MatrixXd hat(const Eigen::MatrixXd& a) {
  const int k = infer_k(a);
  return a.topLeftCorner(2 * k, 2 * k);
}

Eigen::VectorXd hat2(const Eigen::MatrixXd& a2) {
  const int k = infer_k(a2);
  return (a2 * model_xi(k)).head(2 * k);
}

Eigen::MatrixXd m2_element(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("m2 vector length must be even and positive");
  const int k = n / 2;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(2 * k + 1);
  w.head(n) = v;
  const Eigen::VectorXd xi = model_xi(k);
  return w * xi.transpose() - xi * w.transpose();
}

double h_defect(const Eigen::MatrixXd& a) { return (a - decompose(a).h).norm(); }
double m1_defect(const Eigen::MatrixXd& a) { return (a - decompose(a).m1).norm(); }
double m2_defect(const Eigen::MatrixXd& a) { return (a - decompose(a).m2).norm(); }

std::vector<Eigen::MatrixXd> h_basis(int k) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<size_t>(h_dim(k)));
  for (const Eigen::MatrixXd& a : skew_basis(k)) {
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    top.topLeftCorner(k, k) = a;
    top.bottomRightCorner(k, k) = a;
    out.push_back(pad(top, k));
  }
  for (const Eigen::MatrixXd& b : sym_basis(k)) {
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    top.topRightCorner(k, k) = -b;
    top.bottomLeftCorner(k, k) = b;
    out.push_back(pad(top, k));
  }
  return out;
}

std::vector<Eigen::MatrixXd> m1_basis(int k) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<size_t>(m1_dim(k)));
  for (const Eigen::MatrixXd& p : skew_basis(k)) {
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    top.topLeftCorner(k, k) = p;
    top.bottomRightCorner(k, k) = -p;
    out.push_back(pad(top, k));
  }
  for (const Eigen::MatrixXd& q : skew_basis(k)) {
    Eigen::MatrixXd top = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    top.topRightCorner(k, k) = q;
    top.bottomLeftCorner(k, k) = q;
    out.push_back(pad(top, k));
  }
  return out;
}

std::vector<Eigen::MatrixXd> m2_basis(int k) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<size_t>(m2_dim(k)));
  for (int i = 0; i < 2 * k; ++i)
    out.push_back(m2_element(Eigen::VectorXd::Unit(2 * k, i)));
  return out;
}

double bracket_inclusion_defect(int k) {
  const auto hb = h_basis(k);
  const auto m1b = m1_basis(k);
  const auto m2b = m2_basis(k);
  double worst = 0.0;
  auto track = [&worst](double v) { worst = std::max(worst, v); };

  for (const auto& x : hb)
    for (const auto& y : hb) track((bracket(x, y) - decompose(bracket(x, y)).h).norm());
  for (const auto& x : hb) {
    for (const auto& y : m1b) track(m1_defect(bracket(x, y)));
    for (const auto& y : m2b) track(m2_defect(bracket(x, y)));
  }
  for (const auto& x : m1b) {
    for (const auto& y : m1b) track(h_defect(bracket(x, y)));
    for (const auto& y : m2b) track(m2_defect(bracket(x, y)));
  }
  for (const auto& x : m2b)
    for (const auto& y : m2b) {
      const SkewDecomposition d = decompose(bracket(x, y));
      track(d.m2.norm());
    }
  return worst;
}

double decomposition_defect(const Eigen::MatrixXd& a) {
  const int k = infer_k(a);
  const Eigen::MatrixXd phi = model_phi(k);
  const Eigen::VectorXd xi = model_xi(k);
  const SkewDecomposition d = decompose(a);

  double worst = (a - d.h - d.m1 - d.m2).norm();
  auto track = [&worst](double v) { worst = std::max(worst, v); };

  track((d.h + d.h.transpose()).norm());
  track((d.m1 + d.m1.transpose()).norm());
  track((d.m2 + d.m2.transpose()).norm());

  track(bracket(d.h, phi).norm());
  track((d.h * xi).norm());
  track((phi * d.m1 * phi - d.m1).norm());
  track((d.m1 * xi).norm());
  track((d.m2 - m2_element(hat2(d.m2))).norm());

  track(std::abs(trace_form(d.h, d.m1)));
  track(std::abs(trace_form(d.h, d.m2)));
  track(std::abs(trace_form(d.m1, d.m2)));
  return worst;
}

} // namespace charm::liealg
