// dpsqkd: phase-error bounds and key rates for DPS QKD.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "dpsqkd/commands.hpp"
#include "dpsqkd/errors.hpp"

using namespace dpsqkd;

namespace {

void add_common(CLI::App* sub, RunConfig& c, std::string& format) {
  sub->add_option("--L", c.L, "pulses per block")->check(CLI::Range(3, 1000));
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "accepted for compatibility; all computation is deterministic");
}

void add_model(CLI::App* sub, std::string& model) {
  sub->add_option("--model", model, "comp, sp or both")->check(CLI::IsMember({"comp", "sp", "both"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-error bounds and key rates for differential-phase-shift QKD"};
  app.require_subcommand(1);

  RunConfig c;
  std::string format = "csv", model = "comp", lambda_grid;
  int nu = -1;

  auto* bound = app.add_subcommand("bound", "Omega(lambda) branches over a lambda grid");
  add_common(bound, c, format);
  add_model(bound, model);
  bound->add_option("--nu", nu, "photon number 0, 1 or 2 (default: all)");
  bound->add_option("--lambda-grid", lambda_grid, "log grid lo:hi:n (default 1e-3:30:50)");

  auto* curve = app.add_subcommand("curve", "phase-error boundary over e_b in [0, 1/2]");
  add_common(curve, c, format);
  add_model(curve, model);
  curve->add_option("--nu", nu, "photon number 0, 1 or 2 (default 1)");
  curve->add_option("--eb-points", c.eb_points, "grid points on [0, 1/2]");

  auto* keyrate = app.add_subcommand("keyrate", "key rate per pulse over a distance sweep");
  add_common(keyrate, c, format);
  add_model(keyrate, model);
  keyrate->add_option("--eb", c.e_b, "bit error rate");
  keyrate->add_option("--dist-start", c.dist_start, "first distance in km");
  keyrate->add_option("--dist-end", c.dist_end, "last distance in km");
  keyrate->add_option("--dist-step", c.dist_step, "distance step in km");
  keyrate->add_option("--table-points", c.table_points, "lambda table size for the tabulated boundaries");

  auto* verify = app.add_subcommand("verify", "closed forms against brute-force oracles");
  add_common(verify, c, format);
  verify->add_option("--L-max", c.L_max, "largest block length checked");
  verify->add_option("--lambda-grid", lambda_grid, "log grid lo:hi:n (default 0.1,0.3,1,3,10,30)");
  verify->add_option("--canary-perturb-pi", c.canary, "add this to the diagonal of Pi in the oracles (negative control)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  static const std::map<std::string, ModelChoice> models{
      {"comp", ModelChoice::Comp}, {"sp", ModelChoice::Sp}, {"both", ModelChoice::Both}};
  if (bound->parsed()) c.command = Command::Bound;
  else if (curve->parsed()) c.command = Command::Curve;
  else if (keyrate->parsed()) c.command = Command::Keyrate;
  else c.command = Command::Verify;
  c.model = models.at(model);
  c.format = format == "json" ? Format::Json : Format::Csv;
  if (nu >= 0) c.nu = nu;
  else if (nu != -1) {
    std::cerr << "error: --nu must be 0, 1 or 2\n";
    return kExitUsage;
  }
  try {
    if (!lambda_grid.empty()) c.lambda_grid = LambdaGrid::parse(lambda_grid);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(c, std::cout, std::cerr);
}
