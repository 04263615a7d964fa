#include "charm/driver.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace charm;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result drive(const cli::RunConfig& cfg) {
  std::ostringstream out, err;
  int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig base(const std::string& command, const std::string& id = "",
                    int points = 6) {
  cli::RunConfig cfg;
  cfg.command = command;
  cfg.id = id;
  cfg.points = points;
  return cfg;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

json read_json(const std::filesystem::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  return json::parse(f);
}

void write_matrix(const std::filesystem::path& p, const Eigen::MatrixXd& a) {
  std::ofstream f(p);
  f.precision(17);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) f << a(i, j) << ' ';
    f << '\n';
  }
}

} // namespace

TEST_CASE("list prints every catalog entry") {
  Result r = drive(base("list"));
  CHECK(r.code == 0);
  for (const catalog::CatalogEntry& e : catalog::entries())
    CHECK(r.out.find(e.id) != std::string::npos);
}

TEST_CASE("verify matches expectations and honours the tolerance gate") {
  Result ok = drive(base("verify", "sasakian-sphere"));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("verdicts match") != std::string::npos);

  Result neg = drive(base("verify", "nearly-sasakian-s5", 4));
  CHECK(neg.code == 0);
  CHECK(neg.out.find("harmonic_map=0") != std::string::npos);

  cli::RunConfig tight = base("verify", "sasakian-sphere", 4);
  tight.tol = 1e-30;
  CHECK(drive(tight).code == 1);

  Result bad = drive(base("verify", "klein-bottle"));
  CHECK(bad.code == 2);
  CHECK(bad.err.find("klein-bottle") != std::string::npos);

  CHECK(drive(base("verify", "product-line")).code == 2);
  CHECK(drive(base("verify", "ellipsoid-c2", 4)).code == 0);

  cli::RunConfig zero = base("verify", "sasakian-sphere");
  zero.points = 0;
  CHECK(drive(zero).code == 2);
  cli::RunConfig negtol = base("verify", "sasakian-sphere");
  negtol.tol = -1.0;
  CHECK(drive(negtol).code == 2);
  CHECK(drive(base("frobnicate", "nil3")).code == 2);
}

TEST_CASE("verify reports are deterministic JSON with the fixed schema") {
  cli::RunConfig cfg = base("verify", "kenmotsu-warped", 5);
  cfg.json_path = scratch("charm_cli_a.json").string();
  REQUIRE(drive(cfg).code == 0);
  json a = read_json(cfg.json_path);

  for (const char* key :
       {"model_id", "config", "per_point", "maxima", "verdicts", "expected", "match"})
    CHECK(a.contains(key));
  CHECK(a["model_id"] == "kenmotsu-warped");
  CHECK(a["verdicts"]["harmonic_section"] == true);
  CHECK(a["verdicts"]["harmonic_map"] == false);
  CHECK(a["match"] == true);
  CHECK(a["per_point"].size() == 5);
  CHECK(std::abs(a["maxima"]["form2"].get<double>() - 2.0) < 1e-9);
  CHECK(a["expected"]["harmonic_map"] == false);

  cfg.json_path = scratch("charm_cli_b.json").string();
  REQUIRE(drive(cfg).code == 0);
  std::ifstream fa(scratch("charm_cli_a.json")), fb(cfg.json_path);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());

  cli::RunConfig other = cfg;
  other.seed = cfg.seed + 1;
  other.json_path = scratch("charm_cli_c.json").string();
  REQUIRE(drive(other).code == 0);
  json c = read_json(other.json_path);
  CHECK(a["per_point"][0]["x"] != c["per_point"][0]["x"]);
}

TEST_CASE("classify prints flags with fitted coefficients") {
  Result r = drive(base("classify", "nearly-cosymplectic-s5", 4));
  CHECK(r.code == 0);
  CHECK(r.out.find("nearly_cosymplectic") != std::string::npos);
  CHECK(r.out.find("expected classes present") != std::string::npos);

  cli::RunConfig cfg = base("classify", "sasakian-sphere", 4);
  cfg.json_path = scratch("charm_cli_cls.json").string();
  REQUIRE(drive(cfg).code == 0);
  json j = read_json(cfg.json_path);
  CHECK(j["verdicts"]["sasakian"] == true);
  CHECK(j["verdicts"]["beta_kenmotsu"] == false);
  CHECK(std::abs(j["maxima"]["alpha_mean"].get<double>() - 1.0) < 1e-9);
  CHECK(std::abs(j["maxima"]["beta_mean"].get<double>()) < 1e-9);
  CHECK(j["match"] == true);

  CHECK(drive(base("classify", "klein-bottle")).code == 2);
  CHECK(drive(base("classify", "product-line")).code == 2);
}

TEST_CASE("decompose splits skew matrices and rejects bad input") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd r(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) r(i, j) = dist(rng);
  Eigen::MatrixXd skew = r - r.transpose();

  cli::RunConfig cfg = base("decompose");
  cfg.matrix_file = scratch("charm_cli_skew.txt").string();
  cfg.json_path = scratch("charm_cli_skew.json").string();
  write_matrix(cfg.matrix_file, skew);
  REQUIRE(drive(cfg).code == 0);
  json j = read_json(cfg.json_path);
  CHECK(j["reconstruction_error"].get<double>() < 1e-12);
  CHECK(j["defects"]["h"].get<double>() < 1e-12);
  CHECK(j["defects"]["m1"].get<double>() < 1e-12);
  CHECK(j["defects"]["m2"].get<double>() < 1e-12);
  CHECK(j["size"] == 5);

  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(3, 3);
  m2(0, 2) = 1.0;
  m2(2, 0) = -1.0;
  write_matrix(cfg.matrix_file, m2);
  cfg.json_path = scratch("charm_cli_m2.json").string();
  REQUIRE(drive(cfg).code == 0);
  json k = read_json(cfg.json_path);
  CHECK(k["norms"]["h"].get<double>() < 1e-12);
  CHECK(k["norms"]["m1"].get<double>() < 1e-12);
  CHECK(k["norms"]["m2"].get<double>() > 1.0);

  write_matrix(cfg.matrix_file, Eigen::MatrixXd::Zero(4, 4));
  CHECK(drive(cfg).code == 2);
  Eigen::MatrixXd sym = Eigen::MatrixXd::Identity(3, 3);
  write_matrix(cfg.matrix_file, sym);
  CHECK(drive(cfg).code == 2);
  {
    std::ofstream f(cfg.matrix_file);
    f << "1 2 3 4 5 6\n";
  }
  CHECK(drive(cfg).code == 2);
  {
    std::ofstream f(cfg.matrix_file);
    f << "0 x 0 0\n";
  }
  CHECK(drive(cfg).code == 2);
  cfg.matrix_file = scratch("charm_cli_missing.txt").string();
  std::filesystem::remove(cfg.matrix_file);
  CHECK(drive(cfg).code == 2);
}

TEST_CASE("hypersurface command gates the identity suites") {
  cli::RunConfig cfg = base("hypersurface", "nearly-sasakian-s5", 4);
  cfg.tol = 1e-5;
  cfg.json_path = scratch("charm_cli_hyp.json").string();
  REQUIRE(drive(cfg).code == 0);
  json j = read_json(cfg.json_path);
  CHECK(j["verdicts"]["nearly_kahler_ambient"] == true);
  CHECK(j["verdicts"]["totally_umbilic"] == true);
  CHECK(j["verdicts"]["xi_harmonic"] == true);
  CHECK(j["verdicts"]["phi_harmonic"] == false);
  CHECK(j["maxima"]["tension_identity"].get<double>() < 1e-10);
  CHECK(j["maxima"]["tension_reduction"].get<double>() < 1e-10);
  CHECK(std::abs(j["maxima"]["ambient"]["h_max"].get<double>() + 1.0) < 1e-12);

  CHECK(drive(base("hypersurface", "nil3")).code == 2);
  CHECK(drive(base("hypersurface", "sasakian-sphere", 4)).code == 0);
}
