#include "charm/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  charm::cli::RunConfig cfg;
  std::string backend = "jet";

  CLI::App app{"Evaluates harmonic structure residuals on catalog models"};
  app.require_subcommand(1);

  auto add_sampling = [&](CLI::App* cmd) {
    cmd->add_option("--points", cfg.points, "sample points per model")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "sampling seed");
    cmd->add_option("--tol", cfg.tol, "residual tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--backend", backend, "derivative backend")
        ->check(CLI::IsMember({"jet", "fd"}));
    cmd->add_option("--json", cfg.json_path, "write the JSON report here");
  };
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("id", cfg.id, "catalog entry id")->required();
    cmd->add_option("--n", cfg.params.n, "structure rank parameter");
    cmd->add_option("--a", cfg.params.a, "shape parameter");
    cmd->add_option("--base", cfg.params.base, "base entry for product ambients");
    add_sampling(cmd);
  };

  app.add_subcommand("list", "print the catalog");
  add_model(app.add_subcommand("verify", "evaluate harmonicity verdicts"));
  add_model(app.add_subcommand("classify", "fit and name the structure class"));
  add_model(app.add_subcommand(
      "hypersurface", "run the extrinsic identity suites on a hypersurface entry"));
  auto* dec = app.add_subcommand("decompose", "split a skew matrix into h + m1 + m2");
  dec->add_option("--file", cfg.matrix_file, "row-major matrix file")->required();
  dec->add_option("--json", cfg.json_path, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.backend =
      backend == "fd" ? charm::geom::Backend::fd : charm::geom::Backend::jet;
  return charm::cli::run(cfg, std::cout, std::cerr);
}
