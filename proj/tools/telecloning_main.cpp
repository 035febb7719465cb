#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

namespace cli = telecloning::cli;

int main(int argc, char** argv) {
  CLI::App app{"Linear-optical simulator for asymmetric cloning and telecloning by partial teleportation"};
  app.require_subcommand(1);

  cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Fidelity table over reflectivities and input polarizations");
  sweep_cmd->add_option("--r-list", sweep.r_list, "Comma-separated reflectivities")->capture_default_str();
  sweep_cmd->add_option("--inputs", sweep.inputs, "Comma-separated inputs: H, V, P45, M45, L, R")
      ->capture_default_str();
  sweep_cmd->add_option("--v", sweep.v, "Photon overlap in [0, 1]")->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Output file (default stdout)");
  sweep_cmd->add_option("--format", sweep.format, "csv or json")->capture_default_str();

  telecloning::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the protocol invariant checks");
  verify_cmd->add_option("--grid-points", verify.grid_points, "Reflectivity grid size")->capture_default_str();
  verify_cmd->add_option("--random-inputs", verify.random_inputs, "Haar-random inputs per R")
      ->capture_default_str();
  verify_cmd->add_option("--tolerance", verify.tolerance, "Residual tolerance")->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Seed for the random inputs")->capture_default_str();

  cli::FringeOptions fringe;
  auto* fringe_cmd = app.add_subcommand("fringe", "Mach-Zehnder fringes for the two heralded photons");
  fringe_cmd->add_option("--phi-steps", fringe.phi_steps, "Phase points over [0, 2pi]")->capture_default_str();
  fringe_cmd->add_option("--delta", fringe.delta, "Birefringent error, radians")->capture_default_str();
  fringe_cmd->add_option("--gamma", fringe.gamma, "Compensator phase, radians")->capture_default_str();
  fringe_cmd->add_option("--out", fringe.out, "Output file (default stdout)");
  fringe_cmd->add_option("--format", fringe.format, "csv or json")->capture_default_str();

  cli::CountsOptions counts;
  auto* counts_cmd = app.add_subcommand("counts", "Monte Carlo four-fold counts and fidelity estimates");
  counts_cmd->add_option("--r", counts.r, "Reflectivity")->capture_default_str();
  counts_cmd->add_option("--input", counts.input, "Input polarization: H, V, P45, M45, L, R")
      ->capture_default_str();
  counts_cmd->add_option("--trials", counts.trials, "Heralded events")->capture_default_str();
  counts_cmd->add_option("--seed", counts.seed, "RNG seed")->required();
  counts_cmd->add_option("--v", counts.v, "Photon overlap in [0, 1]")->capture_default_str();
  counts_cmd->add_option("--out", counts.out, "Output file (default stdout)");
  counts_cmd->add_option("--format", counts.format, "csv or json")->capture_default_str();

  cli::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Execute a circuit description file");
  run_cmd->add_option("circuit", run.circuit_path, "Circuit file")->required();
  run_cmd->add_option("--out", run.out, "Output file (default stdout)");
  run_cmd->add_option("--format", run.format, "text or json")->capture_default_str();
  run_cmd->add_option("--dump-transform", run.dump_transform, "Write the applied transforms as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Prints help to stdout or the diagnostic to stderr.
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  try {
    if (*sweep_cmd) return cli::cmd_sweep(sweep, std::cout, std::cerr);
    if (*verify_cmd) return cli::cmd_verify(verify, std::cout, std::cerr);
    if (*fringe_cmd) return cli::cmd_fringe(fringe, std::cout, std::cerr);
    if (*counts_cmd) return cli::cmd_counts(counts, std::cout, std::cerr);
    if (*run_cmd) return cli::cmd_run(run, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailed;
  }
  return cli::kExitUsage;
}
