#include "charm/catalog.hpp"
#include "charm/driver.hpp"
#include "charm/harmonic.hpp"
#include "charm/liealg.hpp"

#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <variant>

using namespace charm;

namespace {

int failures = 0;

void criterion(int idx, const char* name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << idx << ". " << name << " (" << detail
            << ")\n";
  if (!pass) ++failures;
}

template <typename F>
void guarded(int idx, const char* name, F body) {
  try {
    auto [pass, detail] = body();
    criterion(idx, name, pass, detail);
  } catch (const std::exception& e) {
    criterion(idx, name, false, std::string("exception: ") + e.what());
  }
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

Eigen::MatrixXd random_skew(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd r(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r(i, j) = dist(rng);
  return r - r.transpose();
}

std::pair<bool, std::string> check_liealg() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  bool dims = true;
  for (int k = 1; k <= 3; ++k) {
    const int m = liealg::structure_dim(k);
    worst = std::max(worst, liealg::bracket_inclusion_defect(k));
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::MatrixXd a = random_skew(m, rng);
      worst = std::max(worst, liealg::decomposition_defect(a));
      liealg::SkewDecomposition d = liealg::decompose(a);
      worst = std::max(worst, liealg::h_defect(d.h));
      worst = std::max(worst, liealg::m1_defect(d.m1));
      worst = std::max(worst, liealg::m2_defect(d.m2));
      worst =
          std::max(worst, (a - d.h - d.m1 - d.m2).cwiseAbs().maxCoeff());
    }
    Eigen::VectorXd v(2 * k);
    for (int i = 0; i < 2 * k; ++i) v[i] = std::cos(1.0 + i);
    worst = std::max(worst,
                     (liealg::hat2(liealg::m2_element(v)) - v).cwiseAbs().maxCoeff());

    const auto hb = liealg::h_basis(k);
    const auto m1b = liealg::m1_basis(k);
    const auto m2b = liealg::m2_basis(k);
    dims = dims && static_cast<int>(hb.size()) == k * k &&
           static_cast<int>(m1b.size()) == k * k - k &&
           static_cast<int>(m2b.size()) == 2 * k;
    const int total = k * k + (k * k - k) + 2 * k;
    dims = dims && total == m * (m - 1) / 2;
    Eigen::MatrixXd stacked(m * m, total);
    int col = 0;
    for (const auto* fam : {&hb, &m1b, &m2b})
      for (const Eigen::MatrixXd& b : *fam)
        stacked.col(col++) = Eigen::Map<const Eigen::VectorXd>(b.data(), m * m);
    dims = dims && Eigen::FullPivLU<Eigen::MatrixXd>(stacked).rank() == total;
  }
  return {worst < 1e-12 && dims,
          "max violation " + sci(worst) + ", dimensions " + (dims ? "ok" : "WRONG")};
}

std::pair<bool, std::string> check_engine() {
  double curv = 0.0, alg = 0.0, par = 0.0, cross = 0.0;
  for (int n : {1, 2}) {
    acs::AlmostContactStructure s =
        catalog::structure_of(catalog::build("sasakian-sphere", {.n = n}));
    const int m = s.dim();
    Eigen::MatrixXd pts = s.model().box().sample(4, 211 + n);
    for (int p = 0; p < pts.cols(); ++p) {
      geom::GeometryContext ctx(s.model(), pts.col(p));
      const Eigen::MatrixXd& g = ctx.metric();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              double r = ctx.riemann_low(i, j, k, l);
              curv = std::max(curv,
                              std::abs(r - (g(i, l) * g(j, k) - g(i, k) * g(j, l))));
              alg = std::max(alg, std::abs(r + ctx.riemann_low(j, i, k, l)));
              alg = std::max(alg, std::abs(r - ctx.riemann_low(k, l, i, j)));
              alg = std::max(alg, std::abs(r + ctx.riemann_low(j, k, i, l) +
                                           ctx.riemann_low(k, i, j, l)));
            }
      geom::JetTensor gt =
          ctx.evaluate(s.model().metric_bundle(), geom::TensorValence{0, 2});
      par = std::max(par, ctx.covariant_derivative(gt).values().max_abs());
    }
    geom::GeometryContext jc(s.model(), pts.col(0), geom::Backend::jet);
    geom::GeometryContext fc(s.model(), pts.col(0), geom::Backend::fd);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          cross = std::max(cross,
                           std::abs(jc.christoffel(a, i, j) - fc.christoffel(a, i, j)));
          for (int k = 0; k < m; ++k)
            cross = std::max(cross,
                             std::abs(jc.riemann(a, k, i, j) - fc.riemann(a, k, i, j)));
        }
  }
  bool pass = curv < 1e-8 && alg < 1e-8 && par < 1e-9 && cross < 5e-5;
  return {pass, "space form " + sci(curv) + ", algebra " + sci(alg) + ", parallel " +
                    sci(par) + ", jet-vs-fd " + sci(cross)};
}

std::pair<bool, std::string> check_sasakian_sphere() {
  acs::AlmostContactStructure s =
      catalog::structure_of(catalog::build("sasakian-sphere", {.n = 2}));
  Eigen::MatrixXd pts = s.model().box().sample(32, 302);
  harmonic::HarmonicityReport rep = harmonic::harmonic_map_forms(s, pts, 1e-6);
  double trace = 0.0;
  for (int p = 0; p < pts.cols(); ++p) {
    acs::PointData pd = acs::analyze(s, pts.col(p));
    trace = std::max(trace, (harmonic::rough_laplacian_xi(pd) - 4.0 * pd.xi_v)
                                .cwiseAbs()
                                .maxCoeff());
  }
  double worst = std::max({rep.max_tau_bar, rep.max_section_residual, rep.max_form1,
                           rep.max_form2});
  bool pass = rep.harmonic_section && rep.harmonic_map && worst < 1e-6 && trace < 1e-6;
  return {pass, "residuals " + sci(worst) + ", reeb laplacian vs 4 xi " + sci(trace)};
}

std::pair<bool, std::string> check_kenmotsu() {
  acs::AlmostContactStructure s =
      catalog::structure_of(catalog::build("kenmotsu-warped", {.n = 1}));
  Eigen::MatrixXd pts = s.model().box().sample(32, 403);
  harmonic::HarmonicityReport rep = harmonic::harmonic_map_forms(s, pts, 1e-6);
  double form_dev = 0.0;
  for (const harmonic::HarmonicPointRecord& r : rep.points)
    form_dev = std::max({form_dev, std::abs(r.form2_norm - 2.0), r.form1_norm});
  bool pass = rep.harmonic_section && !rep.harmonic_map &&
              rep.max_section_residual < 1e-6 && form_dev < 1e-5;
  return {pass, "section residual " + sci(rep.max_section_residual) +
                    ", obstruction norm drift " + sci(form_dev)};
}

std::pair<bool, std::string> check_trans_sasakian() {
  double worst_a = 0.0, worst_c = 0.0, worst_ab = 0.0;
  int hits = 0;
  for (const catalog::CatalogEntry& e : catalog::entries()) {
    if (e.kind == catalog::EntryKind::ambient) continue;
    acs::AlmostContactStructure s = catalog::structure_of(catalog::build(e.id));
    Eigen::MatrixXd pts = s.model().box().sample(8, 505);
    acs::StructureClassification cl = acs::classify(s, pts, 1e-6);
    if (!cl.trans_sasakian) continue;
    ++hits;
    acs::TransSasakianReport tr = acs::trans_sasakian_identities(s, pts);
    worst_a = std::max(worst_a, tr.alpha_xi);
    if (s.dim() >= 5) {
      worst_c = std::max(worst_c, tr.grad_alpha);
      worst_ab = std::max(worst_ab, tr.alpha_beta);
    }
  }
  bool pass = hits > 0 && worst_a < 1e-6 && worst_c < 1e-6 && worst_ab < 1e-8;
  return {pass, std::to_string(hits) + " models, reeb coupling " + sci(worst_a) +
                    ", constancy " + sci(worst_c) + ", product " + sci(worst_ab)};
}

std::pair<bool, std::string> check_nearly_cosymplectic() {
  catalog::Built b = catalog::build("nearly-cosymplectic-s5");
  acs::AlmostContactStructure s = catalog::structure_of(b);
  Eigen::MatrixXd pts = catalog::box_of(b).sample(32, 606);
  harmonic::HarmonicityReport rep = harmonic::harmonic_map_forms(s, pts, 1e-6);
  double worst = std::max({rep.max_tau_bar, rep.max_t_phi, rep.max_section_residual,
                           rep.max_form1, rep.max_form2});
  return {rep.harmonic_map && worst < 1e-6, "residuals " + sci(worst)};
}

std::pair<bool, std::string> check_nearly_sasakian() {
  catalog::Built b = catalog::build("nearly-sasakian-s5");
  acs::AlmostContactStructure s = catalog::structure_of(b);
  Eigen::MatrixXd pts = catalog::box_of(b).sample(32, 707);
  harmonic::HarmonicityReport rep = harmonic::harmonic_map_forms(s, pts, 1e-6);
  double tau_min = 1e30, killing = 0.0;
  for (const harmonic::HarmonicPointRecord& r : rep.points)
    tau_min = std::min(tau_min, r.tau_bar_norm);
  for (int p = 0; p < pts.cols(); ++p) {
    acs::PointData pd = acs::analyze(s, pts.col(p));
    Eigen::MatrixXd low = pd.geo.metric() * pd.dxi_v;
    killing = std::max(killing, 0.5 * (low + low.transpose()).cwiseAbs().maxCoeff());
  }

  cli::RunConfig cfg;
  cfg.command = "verify";
  cfg.id = "nearly-sasakian-s5";
  cfg.points = 32;
  std::ostringstream out, err;
  int code = cli::run(cfg, out, err);

  bool pass = tau_min > 0.1 && killing < 1e-6 && code == 0 && !rep.harmonic_section &&
              !rep.harmonic_map;
  return {pass, "min tension " + sci(tau_min) + ", killing " + sci(killing) +
                    ", verify exit " + std::to_string(code)};
}

double identity_suite(const hyper::HypersurfaceModel& hs, const Eigen::MatrixXd& pts,
                      bool nearly_kahler) {
  double worst = hyper::derivative_split(hs, pts).max();
  worst = std::max(worst, hyper::tension_crosscheck(hs, pts).max());
  if (!nearly_kahler) return worst;
  hyper::InheritedPredicates ip = hyper::inherited_predicates(hs, pts);
  worst = std::max({worst, ip.geodesic_identity, ip.killing_identity, ip.deta_identity});
  hyper::NearlyKahlerReport nk = hyper::nearly_kahler_identities(hs, pts);
  worst = std::max({worst, nk.gamma1_split, nk.gamma1_anticommute, nk.gamma2_commute,
                    nk.gamma2_pairing, nk.normal_normal, nk.codazzi,
                    nk.tension_identity, nk.reeb_identity});
  hyper::HypersurfaceVerdicts hv = hyper::hypersurface_harmonicity(hs, pts);
  if (hv.totally_umbilic)
    worst = std::max({worst, hv.tension_reduction, hv.reeb_reduction});
  return worst;
}

std::pair<bool, std::string> check_identity_suite() {
  double worst = 0.0;
  for (const char* id : {"nearly-cosymplectic-s5", "nearly-sasakian-s5"}) {
    catalog::Built b = catalog::build(id);
    const auto& hs = std::get<hyper::HypersurfaceModel>(b);
    worst = std::max(worst, identity_suite(hs, hs.box.sample(8, 808), true));
  }
  hyper::HypersurfaceModel slice{
      hyper::product_with_line(
          catalog::structure_of(catalog::build("sasakian-sphere", {.n = 1}))),
      geom::FieldBundle(3, 4,
                        [](std::span<const geom::Jet> v) {
                          std::vector<geom::Jet> out(v.begin(), v.end());
                          out.push_back(geom::Jet::constant(0.0, v[0].nvars(),
                                                            v[0].order()));
                          return out;
                        }),
      geom::Box::cube(3, -0.3, 0.3), 1.0};
  worst = std::max(worst, identity_suite(slice, slice.box.sample(8, 809), false));
  return {worst < 1e-5, "max identity residual " + sci(worst)};
}

std::pair<bool, std::string> check_product_obstruction() {
  acs::AlmostContactStructure base =
      catalog::structure_of(catalog::build("kenmotsu-warped", {.n = 1}));
  hyper::AmbientHermitian amb = hyper::product_with_line(base);
  const int m = base.dim();
  Eigen::MatrixXd pts = base.model().box().sample(8, 901);
  double gap = 0.0, scale = 0.0;
  for (int p = 0; p < pts.cols(); ++p) {
    Eigen::VectorXd xp(m + 1);
    xp.head(m) = pts.col(p);
    xp[m] = 0.0;
    Eigen::VectorXd form = hyper::ambient_obstruction_form(amb, xp);
    acs::PointData pd = acs::analyze(base, pts.col(p));
    Eigen::VectorXd expect = harmonic::form1(pd) + 0.5 * harmonic::form2(pd);
    gap = std::max(gap, (form.head(m) - expect).cwiseAbs().maxCoeff());
    gap = std::max(gap, std::abs(form[m]));
    scale = std::max(scale, expect.cwiseAbs().maxCoeff());
  }

  hyper::AmbientHermitian hopf = hyper::product_with_line(
      catalog::structure_of(catalog::build("sasakian-sphere", {.n = 1})));
  Eigen::MatrixXd apts = hopf.base.box().sample(8, 902);
  double tau = 0.0, form = 0.0;
  for (int p = 0; p < apts.cols(); ++p) {
    tau = std::max(tau,
                   hyper::ambient_tension(hopf, apts.col(p)).cwiseAbs().maxCoeff());
    form = std::max(
        form, hyper::ambient_obstruction_form(hopf, apts.col(p)).cwiseAbs().maxCoeff());
  }
  bool pass = gap < 1e-6 && scale > 1e-2 && tau < 1e-6 && form < 1e-6;
  return {pass, "restriction gap " + sci(gap) + ", sphere product tension " +
                    sci(tau) + ", form " + sci(form)};
}

std::pair<bool, std::string> check_parallel_bundle() {
  double defect = 0.0, gap = 0.0;
  for (const char* id : {"nil3", "ellipsoid-c2"}) {
    catalog::Built b = catalog::build(id);
    acs::AlmostContactStructure s = catalog::structure_of(b);
    Eigen::MatrixXd pts = catalog::box_of(b).sample(32, 1001);
    for (int p = 0; p < pts.cols(); ++p) {
      acs::PointData pd = acs::analyze(s, pts.col(p));
      defect = std::max(defect, harmonic::kahler_defect(pd));
      gap = std::max(gap, (harmonic::section_residual(pd) -
                           harmonic::xi_harmonic_residual(pd))
                              .cwiseAbs()
                              .maxCoeff());
    }
  }
  return {defect < 1e-7 && gap < 1e-7,
          "bundle defect " + sci(defect) + ", residual gap " + sci(gap)};
}

} // namespace

int main() {
  guarded(1, "skew algebra split is exact and the components span", check_liealg);
  guarded(2, "curvature engine reproduces round spheres", check_engine);
  guarded(3, "sasakian five-sphere is a harmonic section and map",
          check_sasakian_sphere);
  guarded(4, "warped kenmotsu chart is a harmonic section but not a map",
          check_kenmotsu);
  guarded(5, "trans-sasakian coefficient identities hold on classified models",
          check_trans_sasakian);
  guarded(6, "nearly cosymplectic five-sphere is a harmonic map",
          check_nearly_cosymplectic);
  guarded(7, "nearly sasakian slice fails harmonicity with a Killing reeb field",
          check_nearly_sasakian);
  guarded(8, "extrinsic identity suite holds on the slice and product models",
          check_identity_suite);
  guarded(9, "product ambient obstruction restricts to the intrinsic forms",
          check_product_obstruction);
  guarded(10, "parallel-bundle models reduce the section to the reeb equation",
          check_parallel_bundle);

  if (failures == 0) {
    std::cout << "all acceptance criteria satisfied\n";
    return 0;
  }
  std::cout << failures << " criteria failed\n";
  return 1;
}
