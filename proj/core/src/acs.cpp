#include "charm/acs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace charm::acs {

using namespace charm::geom;

AlmostContactStructure::AlmostContactStructure(ManifoldModel model, FieldBundle joint)
    : m_model(std::move(model)), m_joint(std::move(joint)) {
  const int m = m_model.dim();
  if (m % 2 == 0 || m < 3)
    throw std::invalid_argument("structure dimension must be odd and at least three");
  if (m_joint.arity() != m || m_joint.count() != m * m + 2 * m)
    throw std::invalid_argument("joint structure bundle has the wrong shape");
}

namespace {

FieldBundle slice_bundle(const FieldBundle& joint, int begin, int count) {
  return FieldBundle(joint.arity(), count, [joint, begin, count](std::span<const Jet> c) {
    std::vector<Jet> all = joint(c);
    return std::vector<Jet>(all.begin() + begin, all.begin() + begin + count);
  });
}

} // namespace

TensorField AlmostContactStructure::phi() const {
  const int m = dim();
  return TensorField({1, 1}, m, slice_bundle(m_joint, 0, m * m));
}

TensorField AlmostContactStructure::xi() const {
  const int m = dim();
  return TensorField({1, 0}, m, slice_bundle(m_joint, m * m, m));
}

TensorField AlmostContactStructure::eta() const {
  const int m = dim();
  return TensorField({0, 1}, m, slice_bundle(m_joint, m * m + m, m));
}

PointData analyze(const AlmostContactStructure& s, const Eigen::VectorXd& x,
                  Backend backend) {
  const int m = s.dim();
  PointData pd{GeometryContext(s.model(), x, backend)};
  pd.n = s.n();

  std::vector<Jet> all = backend == Backend::fd ? fd_bundle_jets(s.joint(), x)
                                                : s.joint().at_point(x, 3);
  pd.phi = JetTensor{{1, 1}, m, {all.begin(), all.begin() + m * m}};
  pd.xi = JetTensor{{1, 0}, m, {all.begin() + m * m, all.begin() + m * m + m}};
  pd.eta = JetTensor{{0, 1}, m, {all.begin() + m * m + m, all.end()}};
  pd.phi_v = pd.phi.value_matrix();
  pd.xi_v = pd.xi.value_vector();
  pd.eta_v = pd.eta.value_vector();
  pd.proj = Eigen::MatrixXd::Identity(m, m) - pd.xi_v * pd.eta_v.transpose();

  pd.dphi = pd.geo.covariant_derivative(pd.phi);
  pd.dxi = pd.geo.covariant_derivative(pd.xi);
  pd.ddxi = pd.geo.covariant_derivative(pd.dxi);
  pd.dphi_v = pd.dphi.values();
  pd.ddxi_v = pd.ddxi.values();
  pd.dxi_v = pd.dxi.value_matrix();

  // projector jets, then B = P (nabla phi) P over image and argument slots
  std::vector<Jet> pj(static_cast<size_t>(m * m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet t = pd.xi.c(i) * pd.eta.c(j) * -1.0;
      if (i == j) t += 1.0;
      pj[static_cast<size_t>(i * m + j)] = t;
    }
  auto P = [&](int i, int j) -> const Jet& { return pj[static_cast<size_t>(i * m + j)]; };

  std::vector<Jet> q(static_cast<size_t>(m * m * m), pj[0] * 0.0);
  for (int i = 0; i < m; ++i)
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < m; ++k) {
        Jet t = P(i, 0) * pd.dphi.c(0, b, k);
        for (int a = 1; a < m; ++a) t += P(i, a) * pd.dphi.c(a, b, k);
        q[static_cast<size_t>((i * m + b) * m + k)] = t;
      }
  std::vector<Jet> bc(static_cast<size_t>(m * m * m), pj[0] * 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Jet t = q[static_cast<size_t>((i * m + 0) * m + k)] * P(0, j);
        for (int b = 1; b < m; ++b)
          t += q[static_cast<size_t>((i * m + b) * m + k)] * P(b, j);
        bc[static_cast<size_t>((i * m + j) * m + k)] = t;
      }
  pd.bbar = JetTensor{{1, 2}, m, std::move(bc)};
  pd.bbar_v = pd.bbar.values();
  pd.dbbar_v = pd.geo.covariant_derivative(pd.bbar).values();

  pd.frame = orthonormal_frame(pd.geo.metric(), pd.xi_v);
  pd.dxi_norm2 = pd.geo.norm2(pd.dxi);
  return pd;
}

double ValidationReport::max() const {
  double m = phi_square;
  for (double v : {eta_xi, phi_xi, eta_phi, compatibility, xi_unit, eta_dual})
    m = std::max(m, v);
  return m;
}

ValidationReport validate(const AlmostContactStructure& s, const Eigen::MatrixXd& points,
                          Backend backend) {
  const int m = s.dim();
  ValidationReport r;
  for (int p = 0; p < points.cols(); ++p) {
    PointData pd = analyze(s, points.col(p), backend);
    const Eigen::MatrixXd& g = pd.geo.metric();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);

    r.phi_square = std::max(
        r.phi_square,
        (pd.phi_v * pd.phi_v + eye - pd.xi_v * pd.eta_v.transpose()).cwiseAbs().maxCoeff());
    r.eta_xi = std::max(r.eta_xi, std::abs(pd.eta_v.dot(pd.xi_v) - 1.0));
    r.phi_xi = std::max(r.phi_xi, (pd.phi_v * pd.xi_v).cwiseAbs().maxCoeff());
    r.eta_phi =
        std::max(r.eta_phi, (pd.eta_v.transpose() * pd.phi_v).cwiseAbs().maxCoeff());
    r.compatibility = std::max(
        r.compatibility,
        (pd.phi_v.transpose() * g * pd.phi_v - g + pd.eta_v * pd.eta_v.transpose())
            .cwiseAbs()
            .maxCoeff());
    r.xi_unit = std::max(r.xi_unit, std::abs(pd.xi_v.dot(g * pd.xi_v) - 1.0));
    r.eta_dual = std::max(r.eta_dual, (pd.eta_v - g * pd.xi_v).cwiseAbs().maxCoeff());
  }
  return r;
}

Eigen::MatrixXd fundamental_form(const PointData& pd) {
  return pd.geo.metric() * pd.phi_v;
}

Eigen::MatrixXd eta_exterior_derivative(const PointData& pd) {
  const int m = pd.dim();
  Eigen::MatrixXd d(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      d(i, j) = 0.5 * (pd.eta.c(j).d1(i) - pd.eta.c(i).d1(j));
  return d;
}

TransSasakianFit fit_trans_sasakian(const PointData& pd) {
  const int m = pd.dim();
  const std::vector<Jet>& g = pd.geo.metric_jets();
  auto gj = [&](int i, int j) -> const Jet& { return g[static_cast<size_t>(i * m + j)]; };

  std::vector<Jet> m1(static_cast<size_t>(m * m * m), gj(0, 0) * 0.0);
  std::vector<Jet> m2(m1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Jet t1 = gj(k, j) * pd.xi.c(i);
        if (i == k) t1 -= pd.eta.c(j);
        Jet gphi = gj(j, 0) * pd.phi.c(0, k);
        for (int l = 1; l < m; ++l) gphi += gj(j, l) * pd.phi.c(l, k);
        Jet t2 = gphi * pd.xi.c(i) - pd.eta.c(j) * pd.phi.c(i, k);
        m1[static_cast<size_t>((i * m + j) * m + k)] = t1;
        m2[static_cast<size_t>((i * m + j) * m + k)] = t2;
      }

  const TensorValence v{1, 2};
  Jet a11 = pd.geo.tensor_inner(m1, m1, v);
  Jet a12 = pd.geo.tensor_inner(m1, m2, v);
  Jet a22 = pd.geo.tensor_inner(m2, m2, v);
  Jet b1 = pd.geo.tensor_inner(pd.dphi.comp, m1, v);
  Jet b2 = pd.geo.tensor_inner(pd.dphi.comp, m2, v);
  Jet det = a11 * a22 - a12 * a12;

  TransSasakianFit fit{gj(0, 0) * 0.0, gj(0, 0) * 0.0};
  fit.dphi_norm = std::sqrt(std::max(0.0, pd.geo.norm2(pd.dphi)));
  if (std::abs(det.value()) < 1e-12) {
    fit.residual = fit.dphi_norm;
    return fit;
  }
  fit.alpha = (b1 * a22 - b2 * a12) / det;
  fit.beta = (a11 * b2 - a12 * b1) / det;

  MultiArray res({m, m, m});
  const double a0 = fit.alpha.value(), b0 = fit.beta.value();
  for (size_t idx = 0; idx < m1.size(); ++idx)
    res.raw()[idx] = pd.dphi.comp[idx].value() - a0 * m1[idx].value() - b0 * m2[idx].value();
  fit.residual = std::sqrt(std::max(0.0, pd.geo.norm2(res, v)));
  return fit;
}

namespace {

Eigen::VectorXd gradient_vector(const PointData& pd, const Jet& f) {
  const int m = pd.dim();
  Eigen::VectorXd df(m);
  for (int i = 0; i < m; ++i) df[i] = f.d1(i);
  return pd.geo.metric_inverse() * df;
}

double nearly_cosymplectic_defect(const PointData& pd, std::mt19937_64& rng) {
  const int m = pd.dim();
  const Eigen::MatrixXd& g = pd.geo.metric();
  std::normal_distribution<double> dist(0.0, 1.0);
  double worst = 0.0;
  auto probe = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) out[i] += pd.dphi_v.at(i, j, k) * x[j] * x[k];
    worst = std::max(worst, std::sqrt(out.dot(g * out)));
  };
  for (int c = 0; c < m; ++c) probe(pd.frame.col(c));
  for (int trial = 0; trial < 16; ++trial) {
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x[i] = dist(rng);
    x /= std::sqrt(x.dot(g * x));
    probe(x);
  }
  return worst;
}

double nearly_sasakian_defect(const PointData& pd) {
  const int m = pd.dim();
  const Eigen::MatrixXd& g = pd.geo.metric();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double lhs = pd.dphi_v.at(i, j, k) + pd.dphi_v.at(i, k, j);
        double rhs = 2.0 * g(j, k) * pd.xi_v[i];
        if (i == k) rhs -= pd.eta_v[j];
        if (i == j) rhs -= pd.eta_v[k];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

} // namespace

StructureClassification classify(const AlmostContactStructure& s,
                                 const Eigen::MatrixXd& points, double tol,
                                 Backend backend) {
  const int count = static_cast<int>(points.cols());
  StructureClassification c;
  c.tol = tol;
  c.alpha.resize(count);
  c.beta.resize(count);
  c.fit_residual.resize(count);

  std::mt19937_64 rng(4242);
  bool fit_ok = true, dphi_zero = true, contact = true, killing = true;
  bool nearly_cos = true, nearly_sas = true;
  double max_alpha_err = 0.0, max_beta = 0.0, max_alpha = 0.0;

  for (int p = 0; p < count; ++p) {
    PointData pd = analyze(s, points.col(p), backend);
    TransSasakianFit fit = fit_trans_sasakian(pd);
    c.alpha[p] = fit.alpha.value();
    c.beta[p] = fit.beta.value();
    c.fit_residual[p] = fit.residual;

    fit_ok = fit_ok && fit.residual < tol * (1.0 + fit.dphi_norm);
    dphi_zero = dphi_zero && fit.dphi_norm < tol;
    max_alpha = std::max(max_alpha, std::abs(c.alpha[p]));
    max_beta = std::max(max_beta, std::abs(c.beta[p]));
    max_alpha_err = std::max(max_alpha_err, std::abs(c.alpha[p] - 1.0));

    const double deta_gap =
        (eta_exterior_derivative(pd) - fundamental_form(pd)).cwiseAbs().maxCoeff();
    contact = contact && deta_gap < 1e-8;

    const Eigen::MatrixXd low = pd.geo.metric() * pd.dxi_v;
    killing = killing && 0.5 * (low + low.transpose()).cwiseAbs().maxCoeff() < tol;

    nearly_cos = nearly_cos && nearly_cosymplectic_defect(pd, rng) < 1e-8;
    nearly_sas = nearly_sas && nearly_sasakian_defect(pd) < tol;
  }

  c.trans_sasakian = fit_ok;
  c.cosymplectic = dphi_zero;
  c.alpha_sasakian = fit_ok && max_beta < tol;
  c.beta_kenmotsu = fit_ok && max_alpha < tol;
  c.sasakian = fit_ok && max_alpha_err < tol && max_beta < tol;
  c.contact_metric = contact;
  c.k_contact = contact && killing;
  c.nearly_cosymplectic = nearly_cos;
  c.nearly_sasakian = nearly_sas;
  return c;
}

double TransSasakianReport::max() const {
  double m = grad_xi;
  for (double v : {curvature_xi, ricci_xi, two_form_a, two_form_b, alpha_xi,
                   laplacian_trace, alpha_beta, grad_alpha})
    m = std::max(m, v);
  return m;
}

Eigen::MatrixXd curvature_form_sharp(const PointData& pd) {
  const Eigen::MatrixXd form = curvature_two_form_image(pd.geo, pd.phi_v);
  return pd.geo.metric_inverse() * form.transpose();
}

Eigen::MatrixXd star_ricci(const PointData& pd) {
  return curvature_two_form_image(pd.geo, pd.phi_v) * pd.phi_v;
}

TransSasakianReport trans_sasakian_identities(const AlmostContactStructure& s,
                                              const Eigen::MatrixXd& points,
                                              Backend backend) {
  const int m = s.dim();
  const int n = s.n();
  TransSasakianReport r;

  for (int p = 0; p < points.cols(); ++p) {
    PointData pd = analyze(s, points.col(p), backend);
    TransSasakianFit fit = fit_trans_sasakian(pd);
    const double a0 = fit.alpha.value(), b0 = fit.beta.value();
    r.fit_residual = std::max(r.fit_residual, fit.residual);

    const Eigen::MatrixXd& g = pd.geo.metric();
    const Eigen::MatrixXd phi2 = pd.phi_v * pd.phi_v;
    const Eigen::VectorXd grad_a = gradient_vector(pd, fit.alpha);
    const Eigen::VectorXd grad_b = gradient_vector(pd, fit.beta);

    // gradient of xi: nabla_X xi = -alpha phi X - beta phi^2 X
    r.grad_xi = std::max(
        r.grad_xi, (pd.dxi_v + a0 * pd.phi_v + b0 * phi2).cwiseAbs().maxCoeff());

    // curvature applied to xi against the four-term closed form
    const Eigen::VectorXd ga_low = g * grad_a;
    const Eigen::VectorXd gb_low = g * grad_b;
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double lhs = 0.0;
          for (int k = 0; k < m; ++k) lhs += pd.geo.riemann(i, k, a, b) * pd.xi_v[k];
          double rhs = pd.phi_v(i, a) * ga_low[b] - pd.phi_v(i, b) * ga_low[a];
          rhs += phi2(i, a) * gb_low[b] - phi2(i, b) * gb_low[a];
          double t3 = (a0 * a0 - b0 * b0);
          rhs += t3 * ((i == a ? pd.eta_v[b] : 0.0) - (i == b ? pd.eta_v[a] : 0.0));
          rhs += 2.0 * a0 * b0 *
                 (pd.phi_v(i, a) * pd.eta_v[b] - pd.phi_v(i, b) * pd.eta_v[a]);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    r.curvature_xi = std::max(r.curvature_xi, worst);

    // Ricci endomorphism on xi
    const Eigen::VectorXd ric_xi = pd.geo.ricci_endomorphism() * pd.xi_v;
    const Eigen::VectorXd ric_rhs = pd.phi_v * grad_a - phi2 * grad_b -
                                    2.0 * n * grad_b +
                                    2.0 * n * (a0 * a0 - b0 * b0) * pd.xi_v;
    r.ricci_xi = std::max(r.ricci_xi, (ric_xi - ric_rhs).cwiseAbs().maxCoeff());

    // both closed forms of the curvature-operator image of xi
    const Eigen::VectorXd sharp_xi = curvature_form_sharp(pd) * pd.xi_v;
    const Eigen::VectorXd rhs_a = phi2 * grad_a - pd.phi_v * grad_b;
    const Eigen::VectorXd rhs_b = -phi2 * grad_a - pd.phi_v * grad_b -
                                  2.0 * n * grad_a - 4.0 * n * a0 * b0 * pd.xi_v;
    r.two_form_a = std::max(r.two_form_a, (sharp_xi - rhs_a).cwiseAbs().maxCoeff());
    r.two_form_b = std::max(r.two_form_b, (sharp_xi - rhs_b).cwiseAbs().maxCoeff());

    // d alpha (xi) = -2 alpha beta
    double da_xi = 0.0;
    for (int i = 0; i < m; ++i) da_xi += fit.alpha.d1(i) * pd.xi_v[i];
    r.alpha_xi = std::max(r.alpha_xi, std::abs(da_xi + 2.0 * a0 * b0));

    // rough Laplacian trace formula
    const Eigen::MatrixXd& ginv = pd.geo.metric_inverse();
    Eigen::VectorXd lap = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) lap[i] -= ginv(j, k) * pd.ddxi_v.at(i, j, k);
    const Eigen::VectorXd lap_rhs = pd.phi_v * grad_a + phi2 * grad_b +
                                    2.0 * n * (a0 * a0 + b0 * b0) * pd.xi_v;
    r.laplacian_trace =
        std::max(r.laplacian_trace, (lap - lap_rhs).cwiseAbs().maxCoeff());

    if (m >= 5) {
      r.alpha_beta = std::max(r.alpha_beta, std::abs(a0 * b0));
      r.grad_alpha =
          std::max(r.grad_alpha, std::sqrt(std::max(0.0, grad_a.dot(g * grad_a))));
    }
  }
  return r;
}

} // namespace charm::acs
