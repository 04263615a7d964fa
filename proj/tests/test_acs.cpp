#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "charm/acs.hpp"

#include "test_models.hpp"

#include <cmath>

using namespace charm::geom;
using namespace charm::acs;
using namespace testmodels;

TEST_CASE("structure equations hold on the model families") {
  for (const AlmostContactStructure& s :
       {flat_structure(1), flat_structure(2), warped_structure(1, false),
        warped_structure(2, true), nil3_structure()}) {
    Eigen::MatrixXd pts = s.model().box().sample(6, 42);
    ValidationReport r = validate(s, pts);
    CAPTURE(s.dim());
    CHECK(r.max() < 1e-12);
  }
}

TEST_CASE("validation flags a corrupted phi component") {
  AlmostContactStructure s = corrupted_structure(1);
  Eigen::MatrixXd pts = s.model().box().sample(6, 42);
  ValidationReport r = validate(s, pts);
  CHECK(r.max() > 1e-4);
  CHECK(r.max() < 1e-2);
  CHECK(r.phi_square > 1e-4);
}

TEST_CASE("tensor slices of the joint bundle agree with the point data") {
  AlmostContactStructure s = nil3_structure();
  Eigen::VectorXd x(3);
  x << 0.3, -0.4, 0.1;
  PointData pd = analyze(s, x);
  JetTensor phi = pd.geo.evaluate(s.phi());
  JetTensor xi = pd.geo.evaluate(s.xi());
  JetTensor eta = pd.geo.evaluate(s.eta());
  CHECK((phi.value_matrix() - pd.phi_v).cwiseAbs().maxCoeff() == 0.0);
  CHECK((xi.value_vector() - pd.xi_v).cwiseAbs().maxCoeff() == 0.0);
  CHECK((eta.value_vector() - pd.eta_v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flat structure classifies as parallel") {
  AlmostContactStructure s = flat_structure(2);
  Eigen::MatrixXd pts = s.model().box().sample(5, 7);
  StructureClassification c = classify(s, pts);
  CHECK(c.cosymplectic);
  CHECK(c.trans_sasakian);
  CHECK(c.nearly_cosymplectic);
  CHECK_FALSE(c.contact_metric);
  CHECK_FALSE(c.k_contact);
  CHECK_FALSE(c.sasakian);
  CHECK_FALSE(c.nearly_sasakian);
  CHECK(c.alpha.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(c.beta.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exponential warped product fits alpha zero, beta one") {
  for (int n : {1, 2}) {
    AlmostContactStructure s = warped_structure(n, false);
    Eigen::MatrixXd pts = s.model().box().sample(5, 11);
    StructureClassification c = classify(s, pts);
    CAPTURE(n);
    CHECK(c.trans_sasakian);
    CHECK(c.beta_kenmotsu);
    CHECK_FALSE(c.alpha_sasakian);
    CHECK_FALSE(c.cosymplectic);
    CHECK_FALSE(c.sasakian);
    CHECK_FALSE(c.contact_metric);
    CHECK_FALSE(c.nearly_cosymplectic);
    CHECK_FALSE(c.nearly_sasakian);
    CHECK(c.alpha.cwiseAbs().maxCoeff() < 1e-9);
    CHECK((c.beta.array() - 1.0).abs().maxCoeff() < 1e-9);
    CHECK(c.fit_residual.maxCoeff() < 1e-9);
  }
}

TEST_CASE("cosh warped product fits a varying coefficient") {
  AlmostContactStructure s = warped_structure(2, true);
  Eigen::MatrixXd pts = s.model().box().sample(5, 13);
  StructureClassification c = classify(s, pts);
  CHECK(c.trans_sasakian);
  CHECK(c.beta_kenmotsu);
  CHECK(c.alpha.cwiseAbs().maxCoeff() < 1e-9);
  for (int p = 0; p < pts.cols(); ++p)
    CHECK(c.beta[p] == doctest::Approx(std::tanh(pts(4, p))).epsilon(1e-10));

  PointData pd = analyze(s, pts.col(0));
  TransSasakianFit fit = fit_trans_sasakian(pd);
  const double t = pts(4, 0);
  const double sech2 = 1.0 - std::tanh(t) * std::tanh(t);
  CHECK(fit.beta.d1(4) == doctest::Approx(sech2).epsilon(1e-9));
  CHECK(std::abs(fit.beta.d1(0)) < 1e-10);
}

TEST_CASE("heisenberg structure is alpha sasakian with alpha one half") {
  AlmostContactStructure s = nil3_structure();
  Eigen::MatrixXd pts = s.model().box().sample(6, 17);
  StructureClassification c = classify(s, pts);
  CHECK(c.trans_sasakian);
  CHECK(c.alpha_sasakian);
  CHECK_FALSE(c.beta_kenmotsu);
  CHECK_FALSE(c.cosymplectic);
  CHECK_FALSE(c.sasakian);
  CHECK_FALSE(c.contact_metric);
  CHECK_FALSE(c.nearly_cosymplectic);
  CHECK_FALSE(c.nearly_sasakian);
  CHECK((c.alpha.array() - 0.5).abs().maxCoeff() < 1e-9);
  CHECK(c.beta.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("exterior derivative of eta has the half convention") {
  AlmostContactStructure s = nil3_structure();
  Eigen::VectorXd x(3);
  x << 0.2, 0.5, -0.3;
  PointData pd = analyze(s, x);
  Eigen::MatrixXd deta = eta_exterior_derivative(pd);
  Eigen::MatrixXd form = fundamental_form(pd);
  CHECK((deta - 0.5 * form).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((form + form.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trans sasakian consequences hold on the warped products") {
  for (int n : {1, 2}) {
    AlmostContactStructure s = warped_structure(n, false);
    TransSasakianReport r =
        trans_sasakian_identities(s, s.model().box().sample(4, 19));
    CAPTURE(n);
    CHECK(r.max() < 1e-8);
  }
  AlmostContactStructure s = warped_structure(2, true);
  TransSasakianReport r =
      trans_sasakian_identities(s, s.model().box().sample(4, 23));
  CHECK(r.max() < 1e-8);
}

TEST_CASE("trans sasakian consequences hold on the heisenberg group") {
  AlmostContactStructure s = nil3_structure();
  TransSasakianReport r =
      trans_sasakian_identities(s, s.model().box().sample(6, 29));
  CHECK(r.max() < 1e-9);
  CHECK(r.fit_residual < 1e-10);
}

TEST_CASE("cosh warped product has ricci eigenvalue minus two n on the reeb field") {
  AlmostContactStructure s = warped_structure(2, true);
  Eigen::MatrixXd pts = s.model().box().sample(4, 31);
  for (int p = 0; p < pts.cols(); ++p) {
    PointData pd = analyze(s, pts.col(p));
    Eigen::VectorXd lhs = pd.geo.ricci_endomorphism() * pd.xi_v;
    CHECK((lhs + 4.0 * pd.xi_v).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("star ricci vanishes on the flat structure") {
  AlmostContactStructure s = flat_structure(2);
  PointData pd = analyze(s, s.model().box().center());
  CHECK(star_ricci(pd).cwiseAbs().maxCoeff() == 0.0);
  CHECK(curvature_form_sharp(pd).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fit is invariant under a linear change of chart") {
  AlmostContactStructure s = warped_structure(1, true);
  Eigen::Matrix3d L;
  L << 1.0, 0.3, -0.2, 0.0, 1.1, 0.4, 0.2, 0.0, 0.9;
  Eigen::Matrix3d Linv = L.inverse();

  FieldBundle gm = s.model().metric_bundle();
  FieldBundle joint = s.joint();
  const int m = 3;

  auto push = [L, m](std::span<const Jet> c) {
    std::vector<Jet> u(static_cast<size_t>(m), czero(c));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) u[static_cast<size_t>(i)] += L(i, j) * c[static_cast<size_t>(j)];
    return u;
  };

  FieldBundle gm2(m, m * m, [gm, push, L, m](std::span<const Jet> c) {
    std::vector<Jet> u = push(c);
    std::vector<Jet> G = gm(u);
    std::vector<Jet> out(static_cast<size_t>(m * m), czero(c));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            out[static_cast<size_t>(i * m + j)] +=
                L(a, i) * G[static_cast<size_t>(a * m + b)] * L(b, j);
    return out;
  });
  FieldBundle joint2(m, m * m + 2 * m,
                     [joint, push, L, Linv, m](std::span<const Jet> c) {
    std::vector<Jet> u = push(c);
    std::vector<Jet> f = joint(u);
    std::vector<Jet> out(static_cast<size_t>(m * m + 2 * m), czero(c));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet& t = out[static_cast<size_t>(i * m + j)];
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            t += Linv(i, a) * f[static_cast<size_t>(a * m + b)] * L(b, j);
      }
    for (int i = 0; i < m; ++i) {
      Jet& xi = out[static_cast<size_t>(m * m + i)];
      Jet& eta = out[static_cast<size_t>(m * m + m + i)];
      for (int a = 0; a < m; ++a) {
        xi += Linv(i, a) * f[static_cast<size_t>(m * m + a)];
        eta += f[static_cast<size_t>(m * m + m + a)] * L(a, i);
      }
    }
    return out;
  });

  Eigen::VectorXd x(3);
  x << 0.4, -0.3, 0.25;
  Eigen::VectorXd v = Linv * x;
  Eigen::VectorXd lo = v.array() - 0.1, hi = v.array() + 0.1;
  AlmostContactStructure s2(ManifoldModel(IntrinsicChart{gm2}, Box{lo, hi, 0.0}),
                            joint2);

  CHECK(validate(s2, v).max() < 1e-12);
  TransSasakianFit f1 = fit_trans_sasakian(analyze(s, x));
  TransSasakianFit f2 = fit_trans_sasakian(analyze(s2, v));
  CHECK(f2.alpha.value() == doctest::Approx(f1.alpha.value()).epsilon(1e-10));
  CHECK(f2.beta.value() == doctest::Approx(f1.beta.value()).epsilon(1e-10));
  CHECK(std::abs(f2.residual - f1.residual) < 1e-9);
  CHECK(f2.dphi_norm == doctest::Approx(f1.dphi_norm).epsilon(1e-9));
}

TEST_CASE("finite difference backend reproduces the jet classification") {
  AlmostContactStructure s = warped_structure(1, true);
  Eigen::MatrixXd pts = s.model().box().sample(3, 37);
  StructureClassification cj = classify(s, pts, 1e-6, Backend::jet);
  StructureClassification cf = classify(s, pts, 5e-3, Backend::fd);
  CHECK(cf.trans_sasakian);
  CHECK(cf.beta_kenmotsu);
  CHECK((cf.alpha - cj.alpha).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((cf.beta - cj.beta).cwiseAbs().maxCoeff() < 1e-6);

  ValidationReport rf = validate(s, pts, Backend::fd);
  CHECK(rf.max() < 1e-10);

  AlmostContactStructure nil = nil3_structure();
  TransSasakianReport rep =
      trans_sasakian_identities(nil, nil.model().box().sample(3, 41), Backend::fd);
  CHECK(rep.max() < 5e-3);
}
