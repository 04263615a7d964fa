#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "charm/geometry.hpp"

#include <cmath>

using namespace charm::geom;

namespace {

// Round two-sphere in polar coordinates, ds^2 = dt^2 + sin(t)^2 dp^2.
ManifoldModel polar_sphere() {
  FieldBundle metric(2, 4, [](std::span<const Jet> c) {
    Jet zero = Jet::constant(0.0, c[0].nvars(), c[0].order());
    Jet s = sin(c[0]);
    return std::vector<Jet>{zero + 1.0, zero, zero, s * s};
  });
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.2, -3.0;
  hi << 3.0, 3.0;
  return ManifoldModel(IntrinsicChart{metric}, Box{lo, hi});
}

// Unit two-sphere, stereographic parametrization into R^3.
ManifoldModel stereographic_sphere() {
  FieldBundle map(2, 3, [](std::span<const Jet> c) {
    Jet r2 = c[0] * c[0] + c[1] * c[1];
    Jet denom = r2 + 1.0;
    return std::vector<Jet>{2.0 * c[0] / denom, 2.0 * c[1] / denom,
                            (r2 - 1.0) / denom};
  });
  return ManifoldModel(EmbeddedPatch{3, map}, Box::cube(2, -0.9, 0.9));
}

} // namespace

TEST_CASE("flat metric has vanishing connection and curvature") {
  Eigen::VectorXd gflat(9);
  gflat << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  ManifoldModel model(IntrinsicChart{FieldBundle::constants(3, gflat)},
                      Box::cube(3, -1.0, 1.0));
  Eigen::VectorXd x(3);
  x << 0.3, -0.2, 0.5;
  GeometryContext ctx(model, x);
  CHECK(ctx.christoffels().max_abs() == 0.0);
  CHECK(ctx.riemann_tensor().max_abs() == 0.0);
  CHECK(ctx.scalar_curvature() == 0.0);
  CHECK(ctx.sqrt_det() == doctest::Approx(1.0));
}

TEST_CASE("polar sphere connection and curvature match the closed form") {
  ManifoldModel model = polar_sphere();
  const double t = M_PI / 4.0;
  Eigen::VectorXd x(2);
  x << t, 0.6;
  GeometryContext ctx(model, x);

  CHECK(ctx.christoffel(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(ctx.christoffel(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ctx.christoffel(0, 0, 0) == doctest::Approx(0.0));
  CHECK(ctx.christoffel(1, 1, 1) == doctest::Approx(0.0));

  // <R(dt,dp)dp,dt> = sin(t)^2 for curvature one
  CHECK(ctx.riemann_low(0, 1, 1, 0) ==
        doctest::Approx(std::sin(t) * std::sin(t)).epsilon(1e-12));
  CHECK(ctx.scalar_curvature() == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::MatrixXd ric = ctx.ricci();
  CHECK((ric - ctx.metric()).norm() < 1e-12);
}

TEST_CASE("stereographic sphere is a curvature one space form") {
  ManifoldModel model = stereographic_sphere();
  Eigen::MatrixXd pts = model.box().sample(6, 11);
  for (int p = 0; p < pts.cols(); ++p) {
    GeometryContext ctx(model, pts.col(p));
    CHECK(ctx.scalar_curvature() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK((ctx.ricci() - ctx.metric()).norm() < 1e-9);

    // sectional curvature via the lowered tensor
    const Eigen::MatrixXd& g = ctx.metric();
    double denom = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    CHECK(ctx.riemann_low(0, 1, 1, 0) / denom == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("metric is parallel and its norm counts the dimension") {
  ManifoldModel model = stereographic_sphere();
  Eigen::VectorXd x(2);
  x << 0.31, -0.44;
  GeometryContext ctx(model, x);

  JetTensor g = ctx.evaluate(model.metric_bundle(), TensorValence{0, 2});
  JetTensor dg = ctx.covariant_derivative(g);
  CHECK(dg.values().max_abs() < 1e-11);

  CHECK(ctx.norm2(g) == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::VectorXd idv(4);
  idv << 1, 0, 0, 1;
  JetTensor id = ctx.evaluate(FieldBundle::constants(2, idv), TensorValence{1, 1});
  CHECK(ctx.norm2(id) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("second covariant derivatives commute up to curvature") {
  ManifoldModel model = polar_sphere();
  Eigen::VectorXd x(2);
  x << 0.9, -0.8;
  GeometryContext ctx(model, x);

  FieldBundle wb(2, 2, [](std::span<const Jet> c) {
    return std::vector<Jet>{c[0] * c[0], c[0] * c[1]};
  });
  JetTensor w = ctx.evaluate(wb, TensorValence{1, 0});
  JetTensor ww = ctx.second_covariant_derivative(w);

  for (int l = 0; l < 2; ++l)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double lhs = ww.c(l, j, k).value() - ww.c(l, k, j).value();
        double rhs = 0.0;
        for (int m = 0; m < 2; ++m) rhs += ctx.riemann(l, m, k, j) * w.c(m).value();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
      }
}

TEST_CASE("curvature action and the space form operator agree on the sphere") {
  ManifoldModel model = stereographic_sphere();
  Eigen::VectorXd x(2);
  x << -0.25, 0.4;
  GeometryContext ctx(model, x);

  Eigen::VectorXd X(2), Y(2), Z(2);
  X << 1.0, 0.3;
  Y << -0.2, 0.8;
  Z << 0.5, -0.6;
  Eigen::VectorXd lhs = ctx.curvature_action(X, Y, Z);
  Eigen::VectorXd rhs = r_operator(ctx.metric(), X, Y, Z);
  CHECK((lhs - rhs).norm() < 1e-9);
}

TEST_CASE("finite difference backend reproduces the series geometry") {
  ManifoldModel model = stereographic_sphere();
  Eigen::VectorXd x(2);
  x << 0.37, -0.52;
  GeometryContext jet_ctx(model, x, Backend::jet);
  GeometryContext fd_ctx(model, x, Backend::fd);

  CHECK((jet_ctx.metric() - fd_ctx.metric()).norm() < 1e-10);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(jet_ctx.christoffel(k, i, j) ==
              doctest::Approx(fd_ctx.christoffel(k, i, j)).epsilon(1e-7).scale(1.0));
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(jet_ctx.riemann(l, k, i, j) ==
                doctest::Approx(fd_ctx.riemann(l, k, i, j)).epsilon(1e-5).scale(1.0));
}

TEST_CASE("pullback through a curved ambient composes the chain") {
  ManifoldModel sphere = polar_sphere();
  const double t0 = 1.1;
  FieldBundle circle(1, 2, [=](std::span<const Jet> c) {
    return std::vector<Jet>{Jet::constant(t0, c[0].nvars(), c[0].order()), c[0]};
  });
  FieldBundle induced = pullback_metric_bundle(circle, sphere.metric_bundle());
  ManifoldModel latitude(IntrinsicChart{induced}, Box::cube(1, -1.0, 1.0));

  Eigen::VectorXd u(1);
  u << 0.2;
  GeometryContext ctx(latitude, u);
  CHECK(ctx.metric()(0, 0) == doctest::Approx(std::sin(t0) * std::sin(t0)).epsilon(1e-12));
  CHECK(ctx.christoffels().max_abs() < 1e-12);
}

TEST_CASE("orthonormal frames respect the metric and the distinguished slot") {
  Eigen::MatrixXd a(3, 3);
  a << 0.9, 0.2, -0.1, 0.05, 1.1, 0.3, -0.2, 0.1, 0.8;
  Eigen::MatrixXd g = a * a.transpose() + Eigen::MatrixXd::Identity(3, 3);

  Eigen::MatrixXd f = orthonormal_frame(g);
  CHECK((f.transpose() * g * f - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);

  Eigen::VectorXd v(3);
  v << 0.3, -1.2, 0.5;
  Eigen::MatrixXd fd = orthonormal_frame(g, v);
  CHECK((fd.transpose() * g * fd - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  Eigen::VectorXd unit = v / std::sqrt(v.dot(g * v));
  CHECK((fd.col(2) - unit).norm() < 1e-12);
}

TEST_CASE("curvature two form of a compatible rotation on the sphere") {
  ManifoldModel model = stereographic_sphere();
  Eigen::VectorXd x(2);
  x << 0.15, 0.33;
  GeometryContext ctx(model, x);

  Eigen::MatrixXd J(2, 2);
  J << 0, -1, 1, 0;
  Eigen::MatrixXd out = curvature_two_form_image(ctx, J);
  Eigen::MatrixXd expect = -(ctx.metric() * J);
  CHECK((out - expect).norm() < 1e-9);
}

TEST_CASE("box sampling stays inside the margin band and is reproducible") {
  Box box = Box::cube(3, -2.0, 4.0);
  Eigen::MatrixXd a = box.sample(40, 7);
  Eigen::MatrixXd b = box.sample(40, 7);
  CHECK((a - b).norm() == 0.0);
  REQUIRE(a.cols() == 40);
  for (int p = 0; p < a.cols(); ++p) CHECK(box.contains_with_margin(a.col(p)));
  CHECK(a.minCoeff() >= -2.0 + 0.6);
  CHECK(a.maxCoeff() <= 4.0 - 0.6);
}
