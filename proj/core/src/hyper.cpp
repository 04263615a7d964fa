#include "charm/hyper.hpp"

#include <cmath>
#include <stdexcept>

namespace charm::hyper {

using namespace charm::geom;
using acs::PointData;

namespace {

Jet zero_like(const Jet& probe) {
  return Jet::constant(0.0, probe.nvars(), probe.order());
}

/// Everything the induced structure needs from one evaluation of the
/// immersion, as jets in the hypersurface chart variables. Partials sit one
/// order below the inputs, so order three coordinates give order two
/// structure tensors.
struct InducedJets {
  int m = 0, md = 0;
  std::vector<Jet> image;
  std::vector<std::vector<Jet>> push;  // push[j][a] = P^a_j
  std::vector<Jet> gamb;               // ambient metric at the image
  JetMatrix gamb_inv;
  std::vector<Jet> jamb;               // ambient J at the image
  JetMatrix g;
  JetMatrix ginv;
  std::vector<Jet> nu;
  std::vector<Jet> phi;
  std::vector<Jet> xi;
  std::vector<Jet> eta;
};

InducedJets induced_jets(const AmbientHermitian& amb, const FieldBundle& immersion,
                         double normal_sign, std::span<const Jet> c) {
  InducedJets out;
  out.m = immersion.arity();
  out.md = immersion.count();
  const int m = out.m;
  const int md = out.md;

  BundleJacobian jac = eval_with_chart_partials(immersion, c);
  out.image = std::move(jac.value);
  out.push = std::move(jac.partial);

  out.gamb = amb.base.metric_bundle()(out.image);
  out.jamb = amb.j(out.image);
  out.gamb_inv = jet_inverse(JetMatrix::from_flat(md, md, out.gamb));

  const Jet& pr = out.push[0][0];
  out.g = JetMatrix(m, m, pr.nvars(), pr.order());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet s = zero_like(pr);
      for (int a = 0; a < md; ++a)
        for (int b = 0; b < md; ++b)
          s += out.gamb[static_cast<size_t>(a * md + b)] * out.push[i][a] * out.push[j][b];
      out.g.at(i, j) = s;
    }
  out.ginv = jet_inverse(out.g);

  // Metric complement of the pushforward: signed minors of the differential
  // give a covector annihilating every tangent, which is raised and
  // normalized. The parity is chosen so a graph immersion over the last
  // ambient coordinate gets the positive side.
  std::vector<Jet> w(static_cast<size_t>(md), zero_like(pr));
  for (int b = 0; b < md; ++b) {
    JetMatrix minor(m, m, pr.nvars(), pr.order());
    for (int r = 0, rm = 0; r < md; ++r) {
      if (r == b) continue;
      for (int j = 0; j < m; ++j) minor.at(rm, j) = out.push[j][r];
      ++rm;
    }
    Jet d = jet_det(minor);
    w[static_cast<size_t>(b)] = ((b + m) % 2 == 0) ? d : -d;
  }
  std::vector<Jet> nraw(static_cast<size_t>(md), zero_like(pr));
  for (int a = 0; a < md; ++a) {
    Jet s = zero_like(pr);
    for (int b = 0; b < md; ++b) s += out.gamb_inv.at(a, b) * w[static_cast<size_t>(b)];
    nraw[static_cast<size_t>(a)] = s;
  }
  Jet n2 = zero_like(pr);
  for (int a = 0; a < md; ++a)
    for (int b = 0; b < md; ++b)
      n2 += out.gamb[static_cast<size_t>(a * md + b)] * nraw[static_cast<size_t>(a)] *
            nraw[static_cast<size_t>(b)];
  Jet inv_len = 1.0 / sqrt(n2);
  out.nu.assign(static_cast<size_t>(md), zero_like(pr));
  for (int a = 0; a < md; ++a)
    out.nu[static_cast<size_t>(a)] = normal_sign * (nraw[static_cast<size_t>(a)] * inv_len);

  // xi is -J nu pushed down; eta its metric dual on the tangents.
  std::vector<Jet> xiamb(static_cast<size_t>(md), zero_like(pr));
  for (int a = 0; a < md; ++a) {
    Jet s = zero_like(pr);
    for (int b = 0; b < md; ++b)
      s += out.jamb[static_cast<size_t>(a * md + b)] * out.nu[static_cast<size_t>(b)];
    xiamb[static_cast<size_t>(a)] = -s;
  }
  out.eta.assign(static_cast<size_t>(m), zero_like(pr));
  for (int i = 0; i < m; ++i) {
    Jet s = zero_like(pr);
    for (int a = 0; a < md; ++a)
      for (int b = 0; b < md; ++b)
        s += out.gamb[static_cast<size_t>(a * md + b)] * out.push[i][a] *
             xiamb[static_cast<size_t>(b)];
    out.eta[static_cast<size_t>(i)] = s;
  }
  out.xi.assign(static_cast<size_t>(m), zero_like(pr));
  for (int i = 0; i < m; ++i) {
    Jet s = zero_like(pr);
    for (int k = 0; k < m; ++k) s += out.ginv.at(i, k) * out.eta[static_cast<size_t>(k)];
    out.xi[static_cast<size_t>(i)] = s;
  }

  // phi holds the tangential components of J on pushforwards.
  std::vector<Jet> jp(static_cast<size_t>(m * md), zero_like(pr));
  for (int j = 0; j < m; ++j)
    for (int b = 0; b < md; ++b) {
      Jet s = zero_like(pr);
      for (int a = 0; a < md; ++a)
        s += out.jamb[static_cast<size_t>(b * md + a)] * out.push[j][a];
      jp[static_cast<size_t>(j * md + b)] = s;
    }
  JetMatrix wmat(m, m, pr.nvars(), pr.order());
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      Jet s = zero_like(pr);
      for (int a = 0; a < md; ++a)
        for (int b = 0; b < md; ++b)
          s += out.gamb[static_cast<size_t>(a * md + b)] * out.push[k][a] *
               jp[static_cast<size_t>(j * md + b)];
      wmat.at(k, j) = s;
    }
  JetMatrix phim = jet_matmul(out.ginv, wmat);
  out.phi.assign(phim.flat().begin(), phim.flat().end());
  return out;
}

/// Shape data on top of the induced jets: covariant chart derivatives of the
/// normal against ambient Christoffel jets at the image.
struct ExtrinsicJets {
  InducedJets ind;
  std::vector<Jet> a_op;   // m*m
  std::vector<Jet> alpha;  // m*m, slots down
  Jet h;
};

ExtrinsicJets extrinsic_jets(const AmbientHermitian& amb, const FieldBundle& immersion,
                             double normal_sign, std::span<const Jet> c) {
  ExtrinsicJets ej{induced_jets(amb, immersion, normal_sign, c), {}, {}, zero_like(c[0])};
  const int m = ej.ind.m;
  const int md = ej.ind.md;

  BundleJacobian gj = eval_with_chart_partials(amb.base.metric_bundle(), ej.ind.image);
  auto dg = [&](int a, int b, int cc) -> const Jet& {
    return gj.partial[static_cast<size_t>(a)][static_cast<size_t>(b * md + cc)];
  };
  const Jet& pr = ej.ind.push[0][0];
  std::vector<Jet> gam(static_cast<size_t>(md * md * md), zero_like(pr));
  for (int a = 0; a < md; ++a)
    for (int b = 0; b < md; ++b)
      for (int cc = b; cc < md; ++cc) {
        Jet s = zero_like(pr);
        for (int d = 0; d < md; ++d)
          s += ej.ind.gamb_inv.at(a, d) * (dg(b, cc, d) + dg(cc, b, d) - dg(d, b, cc));
        s = 0.5 * s;
        gam[static_cast<size_t>((a * md + b) * md + cc)] = s;
        gam[static_cast<size_t>((a * md + cc) * md + b)] = s;
      }

  JetMatrix mmat(m, m, pr.nvars(), pr.order());
  for (int j = 0; j < m; ++j) {
    std::vector<Jet> dnu(static_cast<size_t>(md), zero_like(pr));
    for (int a = 0; a < md; ++a) {
      Jet s = ej.ind.nu[static_cast<size_t>(a)].derivative(j);
      for (int b = 0; b < md; ++b)
        for (int cc = 0; cc < md; ++cc)
          s += gam[static_cast<size_t>((a * md + cc) * md + b)] *
               ej.ind.nu[static_cast<size_t>(b)] * ej.ind.push[j][cc];
      dnu[static_cast<size_t>(a)] = s;
    }
    for (int k = 0; k < m; ++k) {
      Jet s = zero_like(pr);
      for (int a = 0; a < md; ++a)
        for (int b = 0; b < md; ++b)
          s += ej.ind.gamb[static_cast<size_t>(a * md + b)] * ej.ind.push[k][a] *
               dnu[static_cast<size_t>(b)];
      mmat.at(k, j) = s;
    }
  }
  JetMatrix sol = jet_solve(ej.ind.g, mmat);
  ej.a_op.assign(static_cast<size_t>(m * m), zero_like(pr));
  ej.alpha.assign(static_cast<size_t>(m * m), zero_like(pr));
  Jet tr = zero_like(pr);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      ej.a_op[static_cast<size_t>(i * m + j)] = -1.0 * sol.at(i, j);
      ej.alpha[static_cast<size_t>(i * m + j)] = -1.0 * mmat.at(i, j);
    }
    tr += ej.a_op[static_cast<size_t>(i * m + i)];
  }
  ej.h = tr / static_cast<double>(m);
  return ej;
}

/// Ambient structure data at one point: value, first and second covariant
/// derivatives of J.
struct AmbientPoint {
  GeometryContext geo;
  Eigen::MatrixXd j_v;
  MultiArray dj;   // (nabla J)^a_{b;c}, direction last
  MultiArray ddj;  // two directions appended
};

AmbientPoint ambient_point(const AmbientHermitian& amb, const Eigen::VectorXd& x,
                           Backend backend) {
  AmbientPoint ap{GeometryContext(amb.base, x, backend), {}, {}, {}};
  JetTensor j = ap.geo.evaluate(amb.j, TensorValence{1, 1});
  JetTensor dj = ap.geo.covariant_derivative(j);
  JetTensor ddj = ap.geo.covariant_derivative(dj);
  ap.j_v = j.value_matrix();
  ap.dj = dj.values();
  ap.ddj = ddj.values();
  return ap;
}

double symmetrized_dj(const AmbientPoint& ap) {
  const int md = ap.geo.dim();
  double worst = 0.0;
  for (int a = 0; a < md; ++a)
    for (int b = 0; b < md; ++b)
      for (int c = 0; c < md; ++c)
        worst = std::max(worst, 0.5 * std::abs(ap.dj.at(a, b, c) + ap.dj.at(a, c, b)));
  return worst;
}

Eigen::MatrixXd tension_of(const AmbientPoint& ap) {
  const int md = ap.geo.dim();
  const Eigen::MatrixXd& ginv = ap.geo.metric_inverse();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(md, md);
  for (int a = 0; a < md; ++a)
    for (int b = 0; b < md; ++b)
      for (int c = 0; c < md; ++c)
        for (int d = 0; d < md; ++d) lap(a, b) -= ginv(c, d) * ap.ddj.at(a, b, c, d);
  return 0.25 * (lap * ap.j_v - ap.j_v * lap);
}

/// Per hypersurface precomputation shared by the report functions.
struct HyperContext {
  acs::AlmostContactStructure induced;
  FieldBundle master;
  int m = 0, md = 0;
  int off_image = 0, off_push = 0, off_nu = 0, off_a = 0, off_alpha = 0, off_h = 0;
};

HyperContext make_context(const HypersurfaceModel& hs) {
  HyperContext hc;
  hc.induced = induce_structure(hs);
  hc.m = hs.immersion.arity();
  hc.md = hs.immersion.count();
  const int m = hc.m, md = hc.md;
  hc.off_image = 0;
  hc.off_push = md;
  hc.off_nu = md + m * md;
  hc.off_a = hc.off_nu + md;
  hc.off_alpha = hc.off_a + m * m;
  hc.off_h = hc.off_alpha + m * m;

  AmbientHermitian amb = hs.ambient;
  FieldBundle immersion = hs.immersion;
  double sign = hs.normal_sign;
  // The shape tensors need chart derivatives of the normal, so coordinates
  // are reseeded from their values; the bundle only makes sense on genuine
  // chart coordinates, which both evaluation backends supply.
  hc.master =
      FieldBundle(m, hc.off_h + 1, [amb, immersion, sign, m, md](std::span<const Jet> c) {
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i) v[i] = c[i].value();
        std::vector<Jet> lc = seed_point(v, 3);
        ExtrinsicJets e = extrinsic_jets(amb, immersion, sign, lc);
        std::vector<Jet> out;
        out.reserve(static_cast<size_t>(md + m * md + md + 2 * m * m + 1));
        for (int a = 0; a < md; ++a) out.push_back(e.ind.image[static_cast<size_t>(a)]);
        for (int j = 0; j < m; ++j)
          for (int a = 0; a < md; ++a) out.push_back(e.ind.push[j][a]);
        for (int a = 0; a < md; ++a) out.push_back(e.ind.nu[static_cast<size_t>(a)]);
        for (auto& j : e.a_op) out.push_back(std::move(j));
        for (auto& j : e.alpha) out.push_back(std::move(j));
        out.push_back(e.h);
        return out;
      });
  return hc;
}

/// Full per-point picture: intrinsic structure data, shape tensors with
/// their divergences, and the ambient derivatives of J at the image.
struct HyperPoint {
  PointData pd;
  AmbientPoint ap;
  Eigen::VectorXd image, nu;
  Eigen::MatrixXd push;  // md x m, one column per chart direction
  Eigen::MatrixXd a_v, alpha_v, gamma1, gamma2;
  double h = 0.0;
  Eigen::VectorXd div_alpha, dh, grad_h;
  double alpha_sym = 0.0;
};

HyperPoint hyper_point(const HyperContext& hc, const AmbientHermitian& amb,
                       const Eigen::VectorXd& x, Backend backend) {
  const int m = hc.m, md = hc.md;
  std::vector<Jet> mj = backend == Backend::fd ? fd_bundle_jets(hc.master, x)
                                               : hc.master.at_point(x, 3);

  Eigen::VectorXd image(md);
  for (int a = 0; a < md; ++a) image[a] = mj[static_cast<size_t>(hc.off_image + a)].value();

  HyperPoint hp{acs::analyze(hc.induced, x, backend), ambient_point(amb, image, backend)};
  hp.image = image;
  hp.push.resize(md, m);
  for (int j = 0; j < m; ++j)
    for (int a = 0; a < md; ++a)
      hp.push(a, j) = mj[static_cast<size_t>(hc.off_push + j * md + a)].value();
  hp.nu.resize(md);
  for (int a = 0; a < md; ++a) hp.nu[a] = mj[static_cast<size_t>(hc.off_nu + a)].value();
  hp.a_v.resize(m, m);
  hp.alpha_v.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      hp.a_v(i, j) = mj[static_cast<size_t>(hc.off_a + i * m + j)].value();
      hp.alpha_v(i, j) = mj[static_cast<size_t>(hc.off_alpha + i * m + j)].value();
    }
  hp.alpha_sym = (hp.alpha_v - hp.alpha_v.transpose()).cwiseAbs().maxCoeff();
  const Jet& hjet = mj[static_cast<size_t>(hc.off_h)];
  hp.h = hjet.value();
  hp.dh.resize(m);
  for (int j = 0; j < m; ++j) hp.dh[j] = hjet.d1(j);
  hp.grad_h = hp.pd.geo.metric_inverse() * hp.dh;

  JetTensor alpha_t{TensorValence{0, 2}, m,
                    std::vector<Jet>(mj.begin() + hc.off_alpha,
                                     mj.begin() + hc.off_alpha + m * m)};
  JetTensor dalpha = hp.pd.geo.covariant_derivative(alpha_t);
  MultiArray da = dalpha.values();
  const Eigen::MatrixXd& ginv = hp.pd.geo.metric_inverse();
  hp.div_alpha = Eigen::VectorXd::Zero(m);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) hp.div_alpha[c] -= ginv(a, b) * da.at(a, c, b);

  const Eigen::MatrixXd& gt = hp.ap.geo.metric();
  Eigen::MatrixXd w1 = Eigen::MatrixXd::Zero(md, md), w2 = Eigen::MatrixXd::Zero(md, md);
  for (int a = 0; a < md; ++a)
    for (int b = 0; b < md; ++b)
      for (int c = 0; c < md; ++c) {
        w1(a, b) += hp.ap.dj.at(a, b, c) * hp.nu[c];
        for (int d = 0; d < md; ++d)
          w2(a, b) += hp.ap.ddj.at(a, b, c, d) * hp.nu[c] * hp.nu[d];
      }
  hp.gamma1 = ginv * (hp.push.transpose() * gt * w1 * hp.push);
  hp.gamma2 = ginv * (hp.push.transpose() * gt * w2 * hp.push);
  return hp;
}

double gnorm(const Eigen::MatrixXd& g, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(g * v));
}

void require_nearly_kahler(const AmbientPoint& ap) {
  if (symmetrized_dj(ap) > 1e-6)
    throw std::domain_error("ambient structure is not nearly Kaehler here");
}

} // namespace

AmbientCheck check_ambient(const AmbientHermitian& amb, const Eigen::VectorXd& x,
                           Backend backend) {
  GeometryContext geo(amb.base, x, backend);
  Eigen::MatrixXd j = geo.evaluate(amb.j, TensorValence{1, 1}).value_matrix();
  const int md = geo.dim();
  AmbientCheck out;
  out.square = (j * j + Eigen::MatrixXd::Identity(md, md)).cwiseAbs().maxCoeff();
  out.compatibility = (j.transpose() * geo.metric() * j - geo.metric()).cwiseAbs().maxCoeff();
  return out;
}

double nearly_kahler_defect(const AmbientHermitian& amb, const Eigen::VectorXd& x,
                            Backend backend) {
  return symmetrized_dj(ambient_point(amb, x, backend));
}

Eigen::MatrixXd ambient_tension(const AmbientHermitian& amb, const Eigen::VectorXd& x,
                                Backend backend) {
  return tension_of(ambient_point(amb, x, backend));
}

Eigen::VectorXd ambient_obstruction_form(const AmbientHermitian& amb,
                                         const Eigen::VectorXd& x, Backend backend) {
  AmbientPoint ap = ambient_point(amb, x, backend);
  const int md = ap.geo.dim();
  const Eigen::MatrixXd& ginv = ap.geo.metric_inverse();
  MultiArray jdj(std::vector<int>{md, md, md});
  for (int l = 0; l < md; ++l)
    for (int s = 0; s < md; ++s)
      for (int b = 0; b < md; ++b) {
        double acc = 0.0;
        for (int k = 0; k < md; ++k) acc += ap.j_v(l, k) * ap.dj.at(k, s, b);
        jdj.at(l, s, b) = acc;
      }
  Eigen::VectorXd form = Eigen::VectorXd::Zero(md);
  for (int c = 0; c < md; ++c) {
    double acc = 0.0;
    for (int a = 0; a < md; ++a)
      for (int b = 0; b < md; ++b)
        for (int j = 0; j < md; ++j)
          for (int s = 0; s < md; ++s)
            for (int l = 0; l < md; ++l)
              acc += ginv(a, b) * ginv(j, s) * ap.geo.riemann_low(a, c, j, l) * jdj.at(l, s, b);
    form[c] = 0.25 * acc;
  }
  return form;
}

acs::AlmostContactStructure induce_structure(const HypersurfaceModel& hs) {
  const int m = hs.immersion.arity();
  AmbientHermitian amb = hs.ambient;
  FieldBundle immersion = hs.immersion;
  double sign = hs.normal_sign;
  FieldBundle joint(m, m * m + 2 * m, [amb, immersion, sign, m](std::span<const Jet> c) {
    InducedJets ij = induced_jets(amb, immersion, sign, c);
    std::vector<Jet> out;
    out.reserve(static_cast<size_t>(m * m + 2 * m));
    for (auto& j : ij.phi) out.push_back(std::move(j));
    for (auto& j : ij.xi) out.push_back(std::move(j));
    for (auto& j : ij.eta) out.push_back(std::move(j));
    return out;
  });
  ManifoldModel model(
      IntrinsicChart{pullback_metric_bundle(hs.immersion, hs.ambient.base.metric_bundle())},
      hs.box);
  return {std::move(model), std::move(joint)};
}

ShapeData shape_data(const HypersurfaceModel& hs, const Eigen::VectorXd& x, Backend backend) {
  HyperContext hc = make_context(hs);
  HyperPoint hp = hyper_point(hc, hs.ambient, x, backend);
  ShapeData out;
  out.image = hp.image;
  out.pushforward = hp.push;
  out.normal = hp.nu;
  out.a_op = hp.a_v;
  out.alpha = hp.alpha_v;
  out.mean_curvature = hp.h;
  out.gamma1 = hp.gamma1;
  out.gamma2 = hp.gamma2;
  out.div_alpha = hp.div_alpha;
  out.grad_h = hp.grad_h;
  out.alpha_symmetry = hp.alpha_sym;
  return out;
}

AmbientHermitian product_with_line(const acs::AlmostContactStructure& s) {
  const int m = s.dim();
  const int md = m + 1;
  FieldBundle base_metric = s.model().metric_bundle();
  FieldBundle joint = s.joint();

  FieldBundle metric(md, md * md, [base_metric, m, md](std::span<const Jet> c) {
    std::vector<Jet> g = base_metric(c.first(static_cast<size_t>(m)));
    std::vector<Jet> out(static_cast<size_t>(md * md), zero_like(c[0]));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out[static_cast<size_t>(i * md + j)] = g[static_cast<size_t>(i * m + j)];
    out[static_cast<size_t>(md * md - 1)] = Jet::constant(1.0, c[0].nvars(), c[0].order());
    return out;
  });

  FieldBundle jb(md, md * md, [joint, m, md](std::span<const Jet> c) {
    std::vector<Jet> v = joint(c.first(static_cast<size_t>(m)));
    std::vector<Jet> out(static_cast<size_t>(md * md), zero_like(c[0]));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j)
        out[static_cast<size_t>(i * md + j)] = v[static_cast<size_t>(i * m + j)];
      out[static_cast<size_t>(i * md + m)] = -v[static_cast<size_t>(m * m + i)];
      out[static_cast<size_t>(m * md + i)] = v[static_cast<size_t>(m * m + m + i)];
    }
    return out;
  });

  const Box& bb = s.model().box();
  Box box;
  box.lo.resize(md);
  box.hi.resize(md);
  box.lo.head(m) = bb.lo;
  box.hi.head(m) = bb.hi;
  box.lo[m] = -1.0;
  box.hi[m] = 1.0;
  box.margin = bb.margin;
  return {ManifoldModel(IntrinsicChart{std::move(metric)}, box), std::move(jb)};
}

DerivativeSplitReport derivative_split(const HypersurfaceModel& hs,
                                       const Eigen::MatrixXd& points, Backend backend) {
  HyperContext hc = make_context(hs);
  const int m = hc.m, md = hc.md;
  DerivativeSplitReport rep;
  for (int p = 0; p < points.cols(); ++p) {
    HyperPoint hp = hyper_point(hc, hs.ambient, points.col(p), backend);
    const Eigen::MatrixXd& gt = hp.ap.geo.metric();
    Eigen::VectorXd xiamb = hp.push * hp.pd.xi_v;
    for (int col = 0; col < m; ++col) {
      Eigen::VectorXd X = hp.pd.frame.col(col);
      Eigen::VectorXd px = hp.push * X;
      Eigen::VectorXd lhs_r = Eigen::VectorXd::Zero(md);
      Eigen::VectorXd lhs_n = Eigen::VectorXd::Zero(md);
      for (int a = 0; a < md; ++a)
        for (int b = 0; b < md; ++b)
          for (int cc = 0; cc < md; ++cc) {
            lhs_r[a] += hp.ap.dj.at(a, b, cc) * xiamb[b] * px[cc];
            lhs_n[a] += hp.ap.dj.at(a, b, cc) * hp.nu[b] * px[cc];
          }
      Eigen::VectorXd dxix = hp.pd.dxi_v * X;
      Eigen::VectorXd rhs_r = hp.push * (hp.pd.phi_v * (hp.pd.phi_v * (hp.a_v * X))) -
                              hp.ap.j_v * (hp.push * dxix);
      Eigen::VectorXd rhs_n = hp.push * (hp.pd.phi_v * (hp.a_v * X) - dxix);
      rep.reeb = std::max(rep.reeb, gnorm(gt, lhs_r - rhs_r));
      rep.normal = std::max(rep.normal, gnorm(gt, lhs_n - rhs_n));
    }
  }
  return rep;
}

TensionCrosscheck tension_crosscheck(const HypersurfaceModel& hs,
                                     const Eigen::MatrixXd& points, Backend backend) {
  HyperContext hc = make_context(hs);
  const int m = hc.m;
  TensionCrosscheck rep;
  for (int p = 0; p < points.cols(); ++p) {
    HyperPoint hp = hyper_point(hc, hs.ambient, points.col(p), backend);
    const Eigen::MatrixXd& g = hp.pd.geo.metric();
    const Eigen::MatrixXd& gt = hp.ap.geo.metric();
    auto ip = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) { return u.dot(g * v); };

    Eigen::MatrixXd tau_amb = tension_of(hp.ap);
    rep.ambient_tau = std::max(rep.ambient_tau, tau_amb.cwiseAbs().maxCoeff());
    Eigen::MatrixXd tbar = harmonic::tau_bar(hp.pd);
    Eigen::VectorXd lxi = harmonic::rough_laplacian_xi(hp.pd);
    Eigen::VectorXd tphi = harmonic::t_phi(hp.pd);
    Eigen::VectorXd xiamb = hp.push * hp.pd.xi_v;
    Eigen::MatrixXd comm2 = hp.gamma2 * hp.pd.phi_v - hp.pd.phi_v * hp.gamma2;
    const Eigen::MatrixXd& a = hp.a_v;
    const Eigen::MatrixXd& dxi = hp.pd.dxi_v;
    const Eigen::MatrixXd& phi = hp.pd.phi_v;

    for (int zi = 0; zi + 1 < m; ++zi) {
      Eigen::VectorXd Z = hp.pd.frame.col(zi);
      for (int wi = 0; wi + 1 < m; ++wi) {
        Eigen::VectorXd W = hp.pd.frame.col(wi);
        double lhs = 2.0 * (tau_amb * (hp.push * Z)).dot(gt * (hp.push * W));
        double rhs = 2.0 * ip(tbar * Z, W) - 0.5 * ip(comm2 * Z, W) +
                     static_cast<double>(m) * hp.h * ip(hp.gamma1 * Z, phi * W) +
                     ip(phi * (dxi * (a * Z)) - dxi * (a * (phi * Z)), W) -
                     ip(phi * (dxi * (a * W)) - dxi * (a * (phi * W)), Z);
        rep.plane = std::max(rep.plane, std::abs(lhs - rhs));
      }
      double lhs = 2.0 * (tau_amb * (hp.push * Z)).dot(gt * xiamb);
      double bsum = 0.0;
      for (int ei = 0; ei < m; ++ei) {
        Eigen::VectorXd E = hp.pd.frame.col(ei);
        Eigen::VectorXd bz = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) bz[i] += hp.pd.bbar_v.at(i, j, k) * Z[j] * E[k];
        bsum += ip(bz, a * E);
      }
      double rhs = hp.div_alpha.dot(phi * Z) - bsum + ip(lxi + phi * tphi, Z) -
                   ip(a * hp.pd.xi_v, a * Z) + 2.0 * ip(dxi * (a * hp.pd.xi_v), phi * Z);
      // Normal-normal derivatives of J drop out for nearly Kaehler ambients
      // and for product slices but not in general.
      Eigen::VectorXd pz = hp.push * Z;
      Eigen::VectorXd nn = Eigen::VectorXd::Zero(hc.md);
      Eigen::VectorXd djz = Eigen::VectorXd::Zero(hc.md);
      Eigen::VectorXd mz = Eigen::VectorXd::Zero(hc.md);
      for (int aa = 0; aa < hc.md; ++aa)
        for (int b = 0; b < hc.md; ++b)
          for (int c = 0; c < hc.md; ++c) {
            nn[aa] += hp.ap.dj.at(aa, b, c) * hp.nu[b] * hp.nu[c];
            djz[aa] += hp.ap.dj.at(aa, b, c) * pz[b] * hp.nu[c];
            for (int d = 0; d < hc.md; ++d)
              mz[aa] += hp.ap.ddj.at(aa, b, c, d) * pz[b] * hp.nu[c] * hp.nu[d];
          }
      rhs += -static_cast<double>(m) * hp.h * nn.dot(gt * pz) - mz.dot(gt * hp.nu) +
             (hp.ap.j_v * djz).dot(gt * nn);
      rep.reeb = std::max(rep.reeb, std::abs(lhs - rhs));
    }
  }
  return rep;
}

InheritedPredicates inherited_predicates(const HypersurfaceModel& hs,
                                         const Eigen::MatrixXd& points, Backend backend) {
  HyperContext hc = make_context(hs);
  const int m = hc.m;
  InheritedPredicates rep;
  for (int p = 0; p < points.cols(); ++p) {
    HyperPoint hp = hyper_point(hc, hs.ambient, points.col(p), backend);
    require_nearly_kahler(hp.ap);
    const Eigen::MatrixXd& g = hp.pd.geo.metric();
    const Eigen::MatrixXd& a = hp.a_v;
    const Eigen::MatrixXd& phi = hp.pd.phi_v;
    const Eigen::MatrixXd& dxi = hp.pd.dxi_v;
    const Eigen::VectorXd& xi = hp.pd.xi_v;

    Eigen::VectorXd axi = a * xi;
    double lam = axi.dot(g * xi);
    rep.geodesic = std::max(rep.geodesic, gnorm(g, dxi * xi));
    rep.principal = std::max(rep.principal, gnorm(g, axi - lam * xi));
    rep.geodesic_identity = std::max(rep.geodesic_identity, gnorm(g, dxi * xi - phi * axi));

    Eigen::MatrixXd low = g * dxi;
    Eigen::MatrixXd sym = low + low.transpose();
    rep.killing = std::max(rep.killing, 0.5 * sym.cwiseAbs().maxCoeff());
    Eigen::MatrixXd comm = phi * a - a * phi;
    rep.shape_commutator = std::max(rep.shape_commutator, comm.cwiseAbs().maxCoeff());
    rep.killing_identity =
        std::max(rep.killing_identity, (sym - (g * comm).transpose()).cwiseAbs().maxCoeff());

    Eigen::MatrixXd deta = acs::eta_exterior_derivative(hp.pd);
    rep.contact =
        std::max(rep.contact, (deta - acs::fundamental_form(hp.pd)).cwiseAbs().maxCoeff());
    Eigen::MatrixXd anti = a * phi + phi * a;
    rep.gamma1_norm = std::max(rep.gamma1_norm, hp.gamma1.cwiseAbs().maxCoeff());
    rep.anticommutator =
        std::max(rep.anticommutator, (anti + 2.0 * phi).cwiseAbs().maxCoeff());
    rep.deta_identity =
        std::max(rep.deta_identity,
                 (2.0 * deta + g * (2.0 * hp.gamma1 + anti)).cwiseAbs().maxCoeff());

    double nc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          nc = std::max(nc,
                        0.5 * std::abs(hp.pd.dphi_v.at(i, j, k) + hp.pd.dphi_v.at(i, k, j)));
    rep.nearly_cosymplectic = std::max(rep.nearly_cosymplectic, nc);
    rep.eta_shape =
        std::max(rep.eta_shape, (hp.alpha_v - a.trace() * (hp.pd.eta_v *
                                                           hp.pd.eta_v.transpose()))
                                    .cwiseAbs()
                                    .maxCoeff());
  }
  return rep;
}

NearlyKahlerReport nearly_kahler_identities(const HypersurfaceModel& hs,
                                            const Eigen::MatrixXd& points, Backend backend) {
  HyperContext hc = make_context(hs);
  const int m = hc.m;
  const int md = hc.md;
  NearlyKahlerReport rep;
  for (int p = 0; p < points.cols(); ++p) {
    HyperPoint hp = hyper_point(hc, hs.ambient, points.col(p), backend);
    rep.ambient_defect = std::max(rep.ambient_defect, symmetrized_dj(hp.ap));
    require_nearly_kahler(hp.ap);
    const Eigen::MatrixXd& g = hp.pd.geo.metric();
    const Eigen::MatrixXd& gt = hp.ap.geo.metric();
    auto ip = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) { return u.dot(g * v); };
    const Eigen::MatrixXd& a = hp.a_v;
    const Eigen::MatrixXd& phi = hp.pd.phi_v;

    rep.gamma1_split = std::max(rep.gamma1_split,
                                (hp.gamma1 - (hp.pd.dxi_v - phi * a)).cwiseAbs().maxCoeff());
    rep.gamma1_anticommute =
        std::max(rep.gamma1_anticommute,
                 (hp.gamma1 * phi + phi * hp.gamma1).cwiseAbs().maxCoeff());
    rep.gamma2_commute = std::max(
        rep.gamma2_commute, (hp.gamma2 * phi - phi * hp.gamma2).cwiseAbs().maxCoeff());
    rep.gamma2_pairing =
        std::max(rep.gamma2_pairing,
                 (hp.gamma2.transpose() * g - (phi * hp.gamma1).transpose() * g * hp.gamma1)
                     .cwiseAbs()
                     .maxCoeff());

    Eigen::VectorXd nn = Eigen::VectorXd::Zero(md);
    for (int aa = 0; aa < md; ++aa)
      for (int b = 0; b < md; ++b)
        for (int c = 0; c < md; ++c) nn[aa] += hp.ap.dj.at(aa, b, c) * hp.nu[b] * hp.nu[c];
    rep.normal_normal = std::max(rep.normal_normal, gnorm(gt, nn));

    Eigen::MatrixXd ric = hp.ap.geo.ricci();
    rep.ricci_invariance =
        std::max(rep.ricci_invariance,
                 (hp.ap.j_v.transpose() * ric * hp.ap.j_v - ric).cwiseAbs().maxCoeff());

    Eigen::MatrixXd tbar = harmonic::tau_bar(hp.pd);
    Eigen::VectorXd lxi = harmonic::rough_laplacian_xi(hp.pd);
    Eigen::VectorXd tphi = harmonic::t_phi(hp.pd);
    Eigen::VectorXd axi = a * hp.pd.xi_v;
    const double mh = static_cast<double>(m) * hp.h;
    Eigen::MatrixXd anti = a * phi + phi * a;
    Eigen::MatrixXd bracket = anti * hp.gamma1 - hp.gamma1 * anti;

    for (int col = 0; col < m; ++col) {
      Eigen::VectorXd Z = hp.pd.frame.col(col);
      double codazzi = hp.div_alpha.dot(Z) - (hp.push * Z).dot(ric * hp.nu) +
                       static_cast<double>(m) * hp.dh.dot(Z);
      rep.codazzi = std::max(rep.codazzi, std::abs(codazzi));
      if (col + 1 == m) continue;
      for (int wi = 0; wi + 1 < m; ++wi) {
        Eigen::VectorXd W = hp.pd.frame.col(wi);
        double lhs = ip(tbar * Z, W);
        double rhs = 0.5 * mh * ip(phi * (hp.gamma1 * Z), W) - 0.5 * ip(bracket * Z, W);
        rep.tension_identity = std::max(rep.tension_identity, std::abs(lhs - rhs));
      }
      double lhs = ip(lxi + phi * tphi, Z);
      double rhs = ip(hp.gamma1 * (phi * Z) - a * Z, axi) - hp.div_alpha.dot(phi * Z);
      rep.reeb_identity = std::max(rep.reeb_identity, std::abs(lhs - rhs));
    }
  }
  return rep;
}

HypersurfaceVerdicts hypersurface_harmonicity(const HypersurfaceModel& hs,
                                              const Eigen::MatrixXd& points, double tol,
                                              Backend backend) {
  HyperContext hc = make_context(hs);
  const int m = hc.m;
  const int n = (m - 1) / 2;
  HypersurfaceVerdicts rep;
  double div_max = 0.0, a_scale = 0.0;
  for (int p = 0; p < points.cols(); ++p) {
    HyperPoint hp = hyper_point(hc, hs.ambient, points.col(p), backend);
    rep.ambient_defect = std::max(rep.ambient_defect, symmetrized_dj(hp.ap));
    require_nearly_kahler(hp.ap);
    const Eigen::MatrixXd& g = hp.pd.geo.metric();
    Eigen::VectorXd axi = hp.a_v * hp.pd.xi_v;
    double lam = axi.dot(g * hp.pd.xi_v);
    rep.gamma1_max = std::max(rep.gamma1_max, hp.gamma1.cwiseAbs().maxCoeff());
    rep.principal_defect =
        std::max(rep.principal_defect, gnorm(g, axi - lam * hp.pd.xi_v));
    rep.umbilic_defect =
        std::max(rep.umbilic_defect, (hp.alpha_v - hp.h * g).cwiseAbs().maxCoeff());
    rep.h_abs_max = std::max(rep.h_abs_max, std::abs(hp.h));
    a_scale = std::max(a_scale, hp.a_v.cwiseAbs().maxCoeff());

    for (int col = 0; col + 1 < m; ++col)
      div_max = std::max(div_max, std::abs(hp.div_alpha.dot(hp.pd.frame.col(col))));

    Eigen::MatrixXd tbar = harmonic::tau_bar(hp.pd);
    double coeff = 0.5 * static_cast<double>(2 * n - 3) * hp.h;
    rep.tension_reduction =
        std::max(rep.tension_reduction,
                 (tbar - coeff * (hp.pd.phi_v * hp.gamma1)).cwiseAbs().maxCoeff());
    Eigen::VectorXd sres = harmonic::section_residual(hp.pd);
    rep.reeb_reduction = std::max(
        rep.reeb_reduction, gnorm(g, sres + hp.pd.phi_v * hp.grad_h));
  }

  harmonic::HarmonicityReport hrep =
      harmonic::harmonic_map_forms(hc.induced, points, tol, backend);
  rep.phi_harmonic = hrep.j_harmonic;
  rep.xi_harmonic = hrep.xi_harmonic;
  rep.div_alpha_characteristic = div_max < tol * (1.0 + a_scale * a_scale);
  rep.reduced_hypotheses = rep.gamma1_max < tol && rep.principal_defect < tol;
  rep.totally_umbilic = rep.umbilic_defect < tol;
  rep.totally_geodesic = rep.totally_umbilic && rep.h_abs_max < tol;
  rep.equivalences_hold = rep.reduced_hypotheses &&
                          rep.phi_harmonic == rep.xi_harmonic &&
                          rep.xi_harmonic == rep.div_alpha_characteristic;
  return rep;
}

} // namespace charm::hyper
