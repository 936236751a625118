#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bohm_squeeze/cli.hpp"
#include "bohm_squeeze/parallel.hpp"

namespace cli = bohm_squeeze::cli;

int main(int argc, char** argv) {
  CLI::App app{"Two-mode squeezed states in the Madelung-Bohm picture: sampling, verification and Fock checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::size_t> grid_n;
  std::optional<double> tol;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides out_dir in the config)");
    sub->add_option("--grid-n", grid_n, "Samples per axis (overrides the grid resolution)")
        ->check(CLI::Range(std::size_t{3}, std::size_t{100001}));
    sub->add_option("--tol", tol, "Tolerance override (residuals for verify, flagging for fock)")
        ->check(CLI::PositiveNumber);
  };
  CLI::App* density = app.add_subcommand("density", "Write |psi|^2 grids (and optional potentials) per time");
  CLI::App* verify = app.add_subcommand("verify", "Finite-difference residuals, normalization and variances");
  CLI::App* fock = app.add_subcommand("fock", "Truncated Fock-space factorization and vacuum-column checks");
  CLI::App* entropy = app.add_subcommand("entropy", "Entanglement entropy from the Schmidt spectrum");
  for (auto* sub : {density, verify, fock, entropy}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    bohm_squeeze::configure_threads_from_env();
    cli::RunConfig cfg = cli::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    cli::RunResult result;
    if (*density) {
      result = cli::run_density(cfg, grid_n);
    } else if (*verify) {
      result = cli::run_verify(cfg, grid_n, tol);
    } else if (*fock) {
      result = cli::run_fock(cfg.fock.nu_values, cfg.fock.n_max, cfg.out_dir, tol.value_or(cfg.tolerances.factorization));
    } else {
      result = cli::run_entropy(cfg.entropy_nu, cfg.out_dir);
    }
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return result.exit_code;
  } catch (const bohm_squeeze::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kIo;
  } catch (const bohm_squeeze::config_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const bohm_squeeze::precision_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kTolerance;
  } catch (const bohm_squeeze::convergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kTolerance;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  }
}
