#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "dime/runner.hpp"

namespace {

void add_common(CLI::App* cmd, dime::RunConfig& rc) {
  cmd->add_option("--config", rc.config_path, "parameter file (JSON)")->required();
  cmd->add_option("--out", rc.out_path, "output table path")->required();
  cmd->add_option("--seed", rc.seed, "root seed for Monte Carlo streams (default 1729)");
  cmd->add_option("--format", [&rc](const CLI::results_t& res) {
        if (res[0] == "csv") {
          rc.format = dime::OutputFormat::Csv;
        } else if (res[0] == "jsonl") {
          rc.format = dime::OutputFormat::JsonLines;
        } else {
          return false;
        }
        return true;
      },
      "output format: csv (default) or jsonl");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differential-information market equilibria and token-economy simulation"};
  app.require_subcommand(1);

  dime::RunConfig rc;

  CLI::App* eq = app.add_subcommand("equilibrium", "closed-form and solved equilibrium prices");
  add_common(eq, rc);
  CLI::App* conv =
      app.add_subcommand("convergence", "Monte Carlo convergence study over an (N, M) grid");
  add_common(conv, rc);
  CLI::App* tok = app.add_subcommand("tokenomics", "run a token-economy scenario script");
  add_common(tok, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? dime::kExitValidation : dime::kExitOk;
  }

  if (eq->parsed()) {
    rc.command = dime::Command::Equilibrium;
  } else if (conv->parsed()) {
    rc.command = dime::Command::Convergence;
  } else {
    rc.command = dime::Command::Tokenomics;
  }
  return dime::run(rc);
}
