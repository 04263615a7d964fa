#include "charm/driver.hpp"

#include "charm/hyper.hpp"
#include "charm/liealg.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace charm::cli {
namespace {

using nlohmann::json;

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

const char* backend_name(geom::Backend b) {
  return b == geom::Backend::jet ? "jet" : "fd";
}

json config_json(const RunConfig& cfg) {
  return {{"command", cfg.command},
          {"points", cfg.points},
          {"seed", cfg.seed},
          {"tol", cfg.tol},
          {"backend", backend_name(cfg.backend)},
          {"params",
           {{"n", cfg.params.n}, {"a", cfg.params.a}, {"base", cfg.params.base}}}};
}

json expected_json(const catalog::Expectations& e) {
  json out;
  out["classes"] = e.classes;
  out["harmonic_section"] =
      e.harmonic_section ? json(*e.harmonic_section) : json(nullptr);
  out["harmonic_map"] = e.harmonic_map ? json(*e.harmonic_map) : json(nullptr);
  out["section_iff_xi"] = e.section_iff_xi;
  return out;
}

void write_report(const RunConfig& cfg, const json& report, std::ostream& err) {
  if (cfg.json_path.empty()) return;
  std::ofstream f(cfg.json_path);
  if (!f) throw std::invalid_argument("cannot open report path " + cfg.json_path);
  f << report.dump(2) << '\n';
  if (!f) {
    err << "error: short write on " << cfg.json_path << '\n';
  }
}

bool flag_by_name(const acs::StructureClassification& cl, const std::string& name) {
  if (name == "cosymplectic") return cl.cosymplectic;
  if (name == "contact_metric") return cl.contact_metric;
  if (name == "k_contact") return cl.k_contact;
  if (name == "sasakian") return cl.sasakian;
  if (name == "alpha_sasakian") return cl.alpha_sasakian;
  if (name == "beta_kenmotsu") return cl.beta_kenmotsu;
  if (name == "trans_sasakian") return cl.trans_sasakian;
  if (name == "nearly_cosymplectic") return cl.nearly_cosymplectic;
  if (name == "nearly_sasakian") return cl.nearly_sasakian;
  throw std::invalid_argument("unknown structure class " + name);
}

json classification_flags(const acs::StructureClassification& cl) {
  return {{"cosymplectic", cl.cosymplectic},
          {"contact_metric", cl.contact_metric},
          {"k_contact", cl.k_contact},
          {"sasakian", cl.sasakian},
          {"alpha_sasakian", cl.alpha_sasakian},
          {"beta_kenmotsu", cl.beta_kenmotsu},
          {"trans_sasakian", cl.trans_sasakian},
          {"nearly_cosymplectic", cl.nearly_cosymplectic},
          {"nearly_sasakian", cl.nearly_sasakian}};
}

struct ModelRun {
  catalog::CatalogEntry entry;
  catalog::Built built;
  Eigen::MatrixXd pts;
};

ModelRun open_model(const RunConfig& cfg) {
  ModelRun run{catalog::entry(cfg.id), catalog::build(cfg.id, cfg.params), {}};
  run.pts = catalog::box_of(run.built).sample(cfg.points, cfg.seed);
  return run;
}

/// Structure validation is an exactness gate, not a tolerance subject: a
/// catalog model whose tensors fail their algebra is invalid input.
void require_valid(const acs::AlmostContactStructure& s, const Eigen::MatrixXd& pts,
                   geom::Backend backend) {
  acs::ValidationReport v = acs::validate(s, pts, backend);
  if (v.max() < 1e-8) return;
  std::ostringstream msg;
  msg << "structure validation failed: phi_square=" << v.phi_square
      << " compatibility=" << v.compatibility << " eta_dual=" << v.eta_dual
      << " xi_unit=" << v.xi_unit;
  throw std::invalid_argument(msg.str());
}

int run_list(std::ostream& out) {
  for (const catalog::CatalogEntry& e : catalog::entries()) {
    const char* kind = e.kind == catalog::EntryKind::structure ? "structure"
                       : e.kind == catalog::EntryKind::hypersurface ? "hypersurface"
                                                                    : "ambient";
    out << std::left << std::setw(24) << e.id << std::setw(14) << kind
        << std::setw(12) << (e.parameters.empty() ? "-" : e.parameters);
    out << " classes=";
    if (e.expected.classes.empty()) out << "-";
    for (size_t i = 0; i < e.expected.classes.size(); ++i)
      out << (i ? "," : "") << e.expected.classes[i];
    auto verdict = [](const std::optional<bool>& v) {
      return v ? (*v ? "true" : "false") : "open";
    };
    out << " section=" << verdict(e.expected.harmonic_section)
        << " map=" << verdict(e.expected.harmonic_map);
    if (e.expected.section_iff_xi) out << " section_iff_xi";
    out << "  " << e.summary << '\n';
  }
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ModelRun mr = open_model(cfg);
  acs::AlmostContactStructure s = catalog::structure_of(mr.built);
  require_valid(s, mr.pts, cfg.backend);

  harmonic::HarmonicityReport rep =
      harmonic::harmonic_map_forms(s, mr.pts, cfg.tol, cfg.backend);

  const catalog::Expectations& exp = mr.entry.expected;
  bool match = true;
  if (exp.harmonic_section && *exp.harmonic_section != rep.harmonic_section)
    match = false;
  if (exp.harmonic_map && *exp.harmonic_map != rep.harmonic_map) match = false;
  if (exp.section_iff_xi && rep.harmonic_section != rep.xi_harmonic) match = false;

  out << "model " << cfg.id << " at " << cfg.points << " points, tol " << cfg.tol
      << ", backend " << backend_name(cfg.backend) << '\n';
  out << std::scientific << std::setprecision(3);
  out << "  max xi residual       " << rep.max_xi_residual << '\n'
      << "  max tau-bar           " << rep.max_tau_bar << '\n'
      << "  max T(phi)            " << rep.max_t_phi << '\n'
      << "  max section residual  " << rep.max_section_residual << '\n'
      << "  max form1             " << rep.max_form1 << '\n'
      << "  max form2             " << rep.max_form2 << '\n';
  out << "verdicts: xi_harmonic=" << rep.xi_harmonic
      << " j_harmonic=" << rep.j_harmonic
      << " harmonic_section=" << rep.harmonic_section
      << " harmonic_map=" << rep.harmonic_map << '\n';
  out << (match ? "verdicts match the catalog expectations"
                : "verdicts DIFFER from the catalog expectations")
      << '\n';

  json per_point = json::array();
  for (const harmonic::HarmonicPointRecord& r : rep.points)
    per_point.push_back({{"x", to_json(r.x)},
                         {"xi_residual", r.xi_residual_norm},
                         {"tau_bar", r.tau_bar_norm},
                         {"t_phi", r.t_phi_norm},
                         {"section_residual", r.section_residual_norm},
                         {"form1", r.form1_norm},
                         {"form2", r.form2_norm},
                         {"kahler_defect", r.kahler_defect},
                         {"tol_scale", r.tol_scale}});
  json report = {{"model_id", cfg.id},
                 {"config", config_json(cfg)},
                 {"per_point", per_point},
                 {"maxima",
                  {{"xi_residual", rep.max_xi_residual},
                   {"tau_bar", rep.max_tau_bar},
                   {"t_phi", rep.max_t_phi},
                   {"section_residual", rep.max_section_residual},
                   {"form1", rep.max_form1},
                   {"form2", rep.max_form2},
                   {"kahler_defect", rep.max_kahler_defect}}},
                 {"verdicts",
                  {{"xi_harmonic", rep.xi_harmonic},
                   {"j_harmonic", rep.j_harmonic},
                   {"harmonic_section", rep.harmonic_section},
                   {"harmonic_map", rep.harmonic_map}}},
                 {"expected", expected_json(exp)},
                 {"match", match}};
  write_report(cfg, report, err);
  return match ? 0 : 1;
}

int run_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ModelRun mr = open_model(cfg);
  acs::AlmostContactStructure s = catalog::structure_of(mr.built);
  require_valid(s, mr.pts, cfg.backend);

  acs::StructureClassification cl = acs::classify(s, mr.pts, cfg.tol, cfg.backend);
  bool match = true;
  for (const std::string& name : mr.entry.expected.classes)
    if (!flag_by_name(cl, name)) match = false;

  json flags = classification_flags(cl);
  out << "model " << cfg.id << " classification:";
  for (auto it = flags.begin(); it != flags.end(); ++it)
    if (it.value().get<bool>()) out << ' ' << it.key();
  out << '\n';

  double amean = cl.alpha.mean(), bmean = cl.beta.mean();
  double adev = (cl.alpha.array() - amean).abs().maxCoeff();
  double bdev = (cl.beta.array() - bmean).abs().maxCoeff();
  out << std::scientific << std::setprecision(3);
  out << "fitted alpha " << amean << " (spread " << adev << "), beta " << bmean
      << " (spread " << bdev << "), fit residual "
      << cl.fit_residual.maxCoeff() << '\n';
  out << (match ? "expected classes present" : "expected classes MISSING") << '\n';

  json per_point = json::array();
  for (int p = 0; p < mr.pts.cols(); ++p)
    per_point.push_back({{"x", to_json(Eigen::VectorXd(mr.pts.col(p)))},
                         {"alpha", cl.alpha[p]},
                         {"beta", cl.beta[p]},
                         {"fit_residual", cl.fit_residual[p]}});
  json report = {{"model_id", cfg.id},
                 {"config", config_json(cfg)},
                 {"per_point", per_point},
                 {"maxima",
                  {{"alpha_mean", amean},
                   {"alpha_spread", adev},
                   {"beta_mean", bmean},
                   {"beta_spread", bdev},
                   {"fit_residual", cl.fit_residual.maxCoeff()}}},
                 {"verdicts", flags},
                 {"expected", expected_json(mr.entry.expected)},
                 {"match", match}};
  write_report(cfg, report, err);
  return match ? 0 : 1;
}

Eigen::MatrixXd read_square_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read matrix file " + path);
  std::vector<double> vals;
  double v = 0.0;
  while (f >> v) vals.push_back(v);
  if (!f.eof())
    throw std::invalid_argument("matrix file holds non-numeric data: " + path);
  int m = static_cast<int>(std::lround(std::sqrt(double(vals.size()))));
  if (vals.empty() || m * m != static_cast<int>(vals.size()))
    throw std::invalid_argument("matrix file is not square row-major data");
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = vals[i * m + j];
  return a;
}

int run_decompose(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Eigen::MatrixXd a = read_square_matrix(cfg.matrix_file);
  if (a.rows() % 2 == 0)
    throw std::invalid_argument("decomposition needs odd matrix size");
  double skew = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-10) {
    std::ostringstream msg;
    msg << "matrix is not skew, symmetric part " << skew;
    throw std::invalid_argument(msg.str());
  }

  liealg::SkewDecomposition d = liealg::decompose(a);
  double recon = (a - d.h - d.m1 - d.m2).cwiseAbs().maxCoeff();
  out << std::scientific << std::setprecision(3);
  out << "size " << a.rows() << ", component norms h=" << d.h.norm()
      << " m1=" << d.m1.norm() << " m2=" << d.m2.norm()
      << ", reconstruction error " << recon << '\n';

  json report = {{"size", static_cast<int>(a.rows())},
                 {"config", config_json(cfg)},
                 {"components",
                  {{"h", to_json(d.h)}, {"m1", to_json(d.m1)}, {"m2", to_json(d.m2)}}},
                 {"norms", {{"h", d.h.norm()}, {"m1", d.m1.norm()}, {"m2", d.m2.norm()}}},
                 {"defects",
                  {{"h", liealg::h_defect(d.h)},
                   {"m1", liealg::m1_defect(d.m1)},
                   {"m2", liealg::m2_defect(d.m2)}}},
                 {"reconstruction_error", recon}};
  write_report(cfg, report, err);
  return 0;
}

int run_hypersurface(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ModelRun mr = open_model(cfg);
  if (!std::holds_alternative<hyper::HypersurfaceModel>(mr.built))
    throw std::invalid_argument("entry " + cfg.id + " is not a hypersurface");
  const auto& hs = std::get<hyper::HypersurfaceModel>(mr.built);
  require_valid(hyper::induce_structure(hs), mr.pts, cfg.backend);

  out << std::scientific << std::setprecision(3);
  json maxima, verdicts;
  bool pass = true;
  auto gate = [&](const char* name, double residual) {
    maxima[name] = residual;
    if (residual >= cfg.tol) pass = false;
    out << "  " << std::left << std::setw(22) << name << residual << '\n';
  };

  double a_norm = 0.0, g1 = 0.0, g2 = 0.0, tau = 0.0, h_lo = 0.0, h_hi = 0.0;
  json per_point = json::array();
  for (int p = 0; p < mr.pts.cols(); ++p) {
    hyper::ShapeData sd = hyper::shape_data(hs, mr.pts.col(p), cfg.backend);
    double at = hyper::ambient_tension(hs.ambient, sd.image, cfg.backend)
                    .cwiseAbs()
                    .maxCoeff();
    a_norm = std::max(a_norm, sd.a_op.cwiseAbs().maxCoeff());
    g1 = std::max(g1, sd.gamma1.cwiseAbs().maxCoeff());
    g2 = std::max(g2, sd.gamma2.cwiseAbs().maxCoeff());
    tau = std::max(tau, at);
    h_lo = p ? std::min(h_lo, sd.mean_curvature) : sd.mean_curvature;
    h_hi = p ? std::max(h_hi, sd.mean_curvature) : sd.mean_curvature;
    per_point.push_back({{"x", to_json(Eigen::VectorXd(mr.pts.col(p)))},
                         {"mean_curvature", sd.mean_curvature},
                         {"a_norm", sd.a_op.cwiseAbs().maxCoeff()},
                         {"gamma1_norm", sd.gamma1.cwiseAbs().maxCoeff()},
                         {"gamma2_norm", sd.gamma2.cwiseAbs().maxCoeff()},
                         {"ambient_tau_norm", at}});
  }
  out << "model " << cfg.id << " shape data: |A|=" << a_norm << " H in [" << h_lo
      << ", " << h_hi << "] |gamma1|=" << g1 << " |gamma2|=" << g2
      << " |ambient tau|=" << tau << '\n';
  maxima["ambient"] = {{"a_norm", a_norm},
                       {"h_min", h_lo},
                       {"h_max", h_hi},
                       {"gamma1_norm", g1},
                       {"gamma2_norm", g2},
                       {"ambient_tau_norm", tau}};

  hyper::DerivativeSplitReport ds =
      hyper::derivative_split(hs, mr.pts, cfg.backend);
  gate("derivative_split", ds.max());
  hyper::TensionCrosscheck tc = hyper::tension_crosscheck(hs, mr.pts, cfg.backend);
  gate("tension_crosscheck", tc.max());

  bool nearly_kahler = true;
  try {
    hyper::InheritedPredicates ip =
        hyper::inherited_predicates(hs, mr.pts, cfg.backend);
    gate("geodesic_identity", ip.geodesic_identity);
    gate("killing_identity", ip.killing_identity);
    gate("deta_identity", ip.deta_identity);
    maxima["predicates"] = {{"geodesic", ip.geodesic},
                            {"principal", ip.principal},
                            {"killing", ip.killing},
                            {"shape_commutator", ip.shape_commutator},
                            {"contact", ip.contact},
                            {"anticommutator", ip.anticommutator},
                            {"nearly_cosymplectic", ip.nearly_cosymplectic},
                            {"eta_shape", ip.eta_shape}};

    hyper::NearlyKahlerReport nk =
        hyper::nearly_kahler_identities(hs, mr.pts, cfg.backend);
    gate("gamma1_split", nk.gamma1_split);
    gate("gamma1_anticommute", nk.gamma1_anticommute);
    gate("gamma2_commute", nk.gamma2_commute);
    gate("gamma2_pairing", nk.gamma2_pairing);
    gate("normal_normal", nk.normal_normal);
    gate("codazzi", nk.codazzi);
    gate("tension_identity", nk.tension_identity);
    gate("reeb_identity", nk.reeb_identity);

    hyper::HypersurfaceVerdicts hv =
        hyper::hypersurface_harmonicity(hs, mr.pts, cfg.tol, cfg.backend);
    if (hv.totally_umbilic) {
      gate("tension_reduction", hv.tension_reduction);
      gate("reeb_reduction", hv.reeb_reduction);
    }
    verdicts = {{"phi_harmonic", hv.phi_harmonic},
                {"xi_harmonic", hv.xi_harmonic},
                {"div_alpha_characteristic", hv.div_alpha_characteristic},
                {"reduced_hypotheses", hv.reduced_hypotheses},
                {"totally_umbilic", hv.totally_umbilic},
                {"totally_geodesic", hv.totally_geodesic},
                {"equivalences_hold", hv.equivalences_hold}};
    out << "verdicts: phi_harmonic=" << hv.phi_harmonic
        << " xi_harmonic=" << hv.xi_harmonic
        << " div_alpha_characteristic=" << hv.div_alpha_characteristic
        << " umbilic=" << hv.totally_umbilic
        << " geodesic=" << hv.totally_geodesic << '\n';
  } catch (const std::domain_error&) {
    nearly_kahler = false;
    out << "ambient is not nearly Kaehler, identity suites skipped" << '\n';
  }
  verdicts["nearly_kahler_ambient"] = nearly_kahler;
  out << (pass ? "all evaluated identities below tolerance"
               : "identities ABOVE tolerance")
      << '\n';

  json report = {{"model_id", cfg.id},     {"config", config_json(cfg)},
                 {"per_point", per_point}, {"maxima", maxima},
                 {"verdicts", verdicts},   {"expected", expected_json(mr.entry.expected)},
                 {"match", pass}};
  write_report(cfg, report, err);
  return pass ? 0 : 1;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.points < 1) throw std::invalid_argument("points must be at least 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (cfg.command == "list") return run_list(out);
    if (cfg.command == "verify") return run_verify(cfg, out, err);
    if (cfg.command == "classify") return run_classify(cfg, out, err);
    if (cfg.command == "decompose") return run_decompose(cfg, out, err);
    if (cfg.command == "hypersurface") return run_hypersurface(cfg, out, err);
    throw std::invalid_argument("unknown command " + cfg.command);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

} // namespace charm::cli
