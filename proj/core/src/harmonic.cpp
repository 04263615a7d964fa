#include "charm/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace charm::harmonic {

using namespace charm::geom;
using acs::PointData;

PsiComponents psi_components(const PointData& pd) {
  const int m = pd.dim();
  PsiComponents out;
  out.psi1 = MultiArray({m, m, m});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double v = 0.0;
        for (int a = 0; a < m; ++a) v += pd.phi_v(i, a) * pd.bbar_v.at(a, j, k);
        out.psi1.at(i, j, k) = 0.5 * v;
      }
  out.psi2 = pd.dxi_v;
  return out;
}

Eigen::VectorXd rough_laplacian_xi(const PointData& pd) {
  const int m = pd.dim();
  const Eigen::MatrixXd& ginv = pd.geo.metric_inverse();
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) lap[i] -= ginv(j, k) * pd.ddxi_v.at(i, j, k);
  return lap;
}

Eigen::VectorXd xi_harmonic_residual(const PointData& pd) {
  return rough_laplacian_xi(pd) - pd.dxi_norm2 * pd.xi_v;
}

Eigen::MatrixXd rough_laplacian_j(const PointData& pd) {
  const int m = pd.dim();
  const Eigen::MatrixXd& ginv = pd.geo.metric_inverse();
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double v = 0.0;
      for (int k = 0; k < m; ++k)
        for (int c = 0; c < m; ++c) v -= ginv(k, c) * pd.dbbar_v.at(i, j, k, c);
      raw(i, j) = v;
    }
  return pd.proj * raw * pd.proj;
}

Eigen::MatrixXd tau_bar(const PointData& pd) {
  const Eigen::MatrixXd lap = rough_laplacian_j(pd);
  return 0.25 * (lap * pd.phi_v - pd.phi_v * lap);
}

Eigen::VectorXd t_phi(const PointData& pd) {
  const int m = pd.dim();
  const Eigen::MatrixXd& ginv = pd.geo.metric_inverse();
  Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          t[i] += ginv(k, l) * pd.bbar_v.at(i, j, k) * pd.dxi_v(j, l);
  return t;
}

Eigen::VectorXd section_residual(const PointData& pd) {
  return xi_harmonic_residual(pd) + 0.5 * pd.phi_v * t_phi(pd);
}

namespace {

// Common contraction behind the obstruction and twistor 1-forms: pairs a
// curvature-type field A(e_a, e_c) against phi B(., b) over a frame of the
// distribution, with the (a, b) slots traced by the inverse metric.
Eigen::VectorXd paired_form(const PointData& pd, bool projected_connection) {
  const int m = pd.dim();
  const Eigen::MatrixXd& g = pd.geo.metric();
  const Eigen::MatrixXd& ginv = pd.geo.metric_inverse();
  const Eigen::MatrixXd disc = ginv - pd.xi_v * pd.xi_v.transpose();

  // phiB^l_{sb} and its lowered first slot
  MultiArray phib({m, m, m});
  for (int l = 0; l < m; ++l)
    for (int s = 0; s < m; ++s)
      for (int b = 0; b < m; ++b) {
        double v = 0.0;
        for (int i = 0; i < m; ++i) v += pd.phi_v(l, i) * pd.bbar_v.at(i, s, b);
        phib.at(l, s, b) = v;
      }

  const Eigen::MatrixXd dxi_low = g * pd.dxi_v;  // <nabla_j xi, .> rows lowered

  Eigen::VectorXd form = Eigen::VectorXd::Zero(m);
  for (int c = 0; c < m; ++c) {
    double acc = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (ginv(a, b) == 0.0) continue;
        double inner = 0.0;
        for (int k = 0; k < m; ++k)
          for (int s = 0; s < m; ++s) {
            if (disc(k, s) == 0.0) continue;
            double lhs = 0.0;
            for (int l = 0; l < m; ++l)
              lhs += pd.geo.riemann_low(a, c, k, l) * phib.at(l, s, b);
            if (projected_connection) {
              // r(nabla_a xi, nabla_c xi) e_k paired with phiB(e_s, b)
              double ua = 0.0, uc = 0.0;
              for (int l = 0; l < m; ++l) {
                ua += dxi_low(l, a) * phib.at(l, s, b);
                uc += dxi_low(l, c) * phib.at(l, s, b);
              }
              lhs += dxi_low(k, c) * ua - dxi_low(k, a) * uc;
            }
            inner += disc(k, s) * lhs;
          }
        acc += ginv(a, b) * inner;
      }
    form[c] = 0.25 * acc;
  }
  return form;
}

} // namespace

Eigen::VectorXd form1(const PointData& pd) { return paired_form(pd, false); }

Eigen::VectorXd twistor_form(const PointData& pd) { return paired_form(pd, true); }

Eigen::VectorXd form2(const PointData& pd) {
  const int m = pd.dim();
  const Eigen::MatrixXd& ginv = pd.geo.metric_inverse();
  Eigen::VectorXd form = Eigen::VectorXd::Zero(m);
  for (int c = 0; c < m; ++c) {
    double acc = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (ginv(a, b) == 0.0) continue;
        double inner = 0.0;
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            inner += pd.xi_v[k] * pd.geo.riemann_low(a, c, k, l) * pd.dxi_v(l, b);
        acc += ginv(a, b) * inner;
      }
    form[c] = acc;
  }
  return form;
}

double twistor_identity_residual(const PointData& pd) {
  const Eigen::VectorXd lhs = form1(pd);
  const Eigen::VectorXd tw = twistor_form(pd);
  const Eigen::VectorXd jt = pd.phi_v * t_phi(pd);
  const Eigen::VectorXd correction =
      0.5 * pd.dxi_v.transpose() * pd.geo.metric() * jt;
  return (lhs - tw - correction).cwiseAbs().maxCoeff();
}

double kahler_defect(const PointData& pd) {
  const int m = pd.dim();
  double worst = 0.0;
  for (int f = 0; f < m; ++f) {
    MultiArray slice({m, m});
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double v = 0.0;
        for (int k = 0; k < m; ++k) v += pd.bbar_v.at(i, j, k) * pd.frame(k, f);
        slice.at(i, j) = v;
      }
    worst = std::max(worst, std::sqrt(std::max(0.0, pd.geo.norm2(slice, {1, 1}))));
  }
  return worst;
}

namespace {

double endo_norm(const PointData& pd, const Eigen::MatrixXd& a) {
  const int m = pd.dim();
  MultiArray arr({m, m});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) arr.at(i, j) = a(i, j);
  return std::sqrt(std::max(0.0, pd.geo.norm2(arr, {1, 1})));
}

double vec_norm(const PointData& pd, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, pd.geo.inner(v, v)));
}

double form_norm(const PointData& pd, const Eigen::VectorXd& w) {
  return std::sqrt(std::max(0.0, w.dot(pd.geo.metric_inverse() * w)));
}

HarmonicityReport build_report(const acs::AlmostContactStructure& s,
                               const Eigen::MatrixXd& points, double tol,
                               Backend backend, bool with_forms) {
  HarmonicityReport rep;
  rep.tol = tol;
  rep.forms_evaluated = with_forms;

  bool xi_ok = true, j_ok = true, section_ok = true, forms_ok = true;
  for (int p = 0; p < points.cols(); ++p) {
    PointData pd = acs::analyze(s, points.col(p), backend);
    HarmonicPointRecord rec;
    rec.x = points.col(p);
    rec.xi_residual_norm = vec_norm(pd, xi_harmonic_residual(pd));
    rec.tau_bar_norm = endo_norm(pd, tau_bar(pd));
    rec.t_phi_norm = vec_norm(pd, t_phi(pd));
    rec.section_residual_norm = vec_norm(pd, section_residual(pd));
    rec.kahler_defect = kahler_defect(pd);
    const double dphi_bar2 = pd.geo.norm2(pd.bbar);
    rec.tol_scale = 1.0 + pd.dxi_norm2 + dphi_bar2;
    if (with_forms) {
      rec.form1_norm = form_norm(pd, form1(pd));
      rec.form2_norm = form_norm(pd, form2(pd));
    }

    const double eff = tol * rec.tol_scale;
    xi_ok = xi_ok && rec.xi_residual_norm < eff;
    j_ok = j_ok && rec.tau_bar_norm < eff;
    section_ok = section_ok && rec.tau_bar_norm < eff &&
                 rec.section_residual_norm < eff;
    forms_ok = forms_ok && rec.form1_norm < eff && rec.form2_norm < eff;

    rep.max_xi_residual = std::max(rep.max_xi_residual, rec.xi_residual_norm);
    rep.max_tau_bar = std::max(rep.max_tau_bar, rec.tau_bar_norm);
    rep.max_t_phi = std::max(rep.max_t_phi, rec.t_phi_norm);
    rep.max_section_residual =
        std::max(rep.max_section_residual, rec.section_residual_norm);
    rep.max_form1 = std::max(rep.max_form1, rec.form1_norm);
    rep.max_form2 = std::max(rep.max_form2, rec.form2_norm);
    rep.max_kahler_defect = std::max(rep.max_kahler_defect, rec.kahler_defect);
    rep.points.push_back(std::move(rec));
  }

  rep.xi_harmonic = xi_ok;
  rep.j_harmonic = j_ok;
  rep.harmonic_section = section_ok;
  rep.harmonic_map = with_forms && section_ok && forms_ok;
  return rep;
}

} // namespace

HarmonicityReport harmonic_section_residuals(const acs::AlmostContactStructure& s,
                                             const Eigen::MatrixXd& points, double tol,
                                             Backend backend) {
  return build_report(s, points, tol, backend, false);
}

HarmonicityReport harmonic_map_forms(const acs::AlmostContactStructure& s,
                                     const Eigen::MatrixXd& points, double tol,
                                     Backend backend) {
  return build_report(s, points, tol, backend, true);
}

double kahler_bundle_check(const acs::AlmostContactStructure& s,
                           const Eigen::MatrixXd& points, Backend backend) {
  double worst = 0.0;
  for (int p = 0; p < points.cols(); ++p) {
    PointData pd = acs::analyze(s, points.col(p), backend);
    worst = std::max(worst, kahler_defect(pd));
  }
  return worst;
}

} // namespace charm::harmonic
