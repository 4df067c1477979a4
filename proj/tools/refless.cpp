#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace refless;
  using namespace refless::cli;

  CLI::App app{"Reflectionless potentials and KdV solitons from spectral data"};
  app.require_subcommand(1);

  std::string path, out = "-", outdir = "frames";
  double xmin = -10.0, xmax = 10.0, t0 = 0.0, t1 = 1.0;
  std::size_t n = 401, frames = 11;
  int code = 0;

  auto* validate_cmd = app.add_subcommand("validate", "check a spectral data file");
  validate_cmd->add_option("file", path, "spectral data (kappa, m)")->required();
  validate_cmd->callback([&] { code = cmd_validate(path, std::cout, std::cerr); });

  auto* pot = app.add_subcommand("potential", "sample x, Q(x), q(x) on a grid");
  pot->add_option("file", path)->required();
  pot->add_option("--xmin", xmin);
  pot->add_option("--xmax", xmax);
  pot->add_option("-n", n, "number of grid points");
  pot->add_option("-o,--out", out, "output file, - for stdout");
  pot->callback([&] { code = cmd_potential(path, xmin, xmax, n, out, std::cout, std::cerr); });

  std::string level = "fast";
  auto* ver = app.add_subcommand("verify", "run identity checks (fast) and the scattering oracle (full)");
  ver->add_option("level", level)->required()->check(CLI::IsMember({"fast", "full"}));
  ver->add_option("file", path)->required();
  ver->add_option("-o,--out", out);
  ver->callback([&] {
    code = cmd_verify(path, level == "full" ? VerifyLevel::Full : VerifyLevel::Fast, out, std::cout, std::cerr);
  });

  auto* kdv = app.add_subcommand("kdv", "write frames x,u(x,t) for t in [t0, t1]");
  kdv->add_option("file", path)->required();
  kdv->add_option("--t0", t0);
  kdv->add_option("--t1", t1);
  kdv->add_option("--frames", frames);
  kdv->add_option("--xmin", xmin);
  kdv->add_option("--xmax", xmax);
  kdv->add_option("-n", n);
  kdv->add_option("--outdir", outdir);
  kdv->callback([&] { code = cmd_kdv(path, t0, t1, frames, xmin, xmax, n, outdir, std::cerr); });

  std::string mode;
  auto* spec = app.add_subcommand("spectra", "forward: (kappa, mu) -> m; invert: (kappa, m) -> mu");
  spec->add_option("mode", mode)->required()->check(CLI::IsMember({"forward", "invert"}));
  spec->add_option("file", path)->required();
  spec->add_option("-o,--out", out);
  spec->callback([&] {
    code = cmd_spectra(mode == "forward" ? SpectraMode::Forward : SpectraMode::Invert, path, out, std::cout,
                       std::cerr);
  });

  auto* herg = app.add_subcommand("herglotz", "to-product: (xi, d, d0) -> lambda; to-measure: the reverse");
  herg->add_option("mode", mode)->required()->check(CLI::IsMember({"to-product", "to-measure"}));
  herg->add_option("file", path)->required();
  herg->add_option("-o,--out", out);
  herg->callback([&] {
    code = cmd_herglotz(mode == "to-product" ? HerglotzMode::ToProduct : HerglotzMode::ToMeasure, path, out,
                        std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return code;
}
