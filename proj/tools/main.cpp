#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "qpc/errors.hpp"

// Exit codes: 0 success, 1 invariant failure or I/O error, 2 configuration
// error, 3 numerical failure.
int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents of analytic quasi-periodic 2x2 cocycles"};
  std::string command, config_path, output_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("command", command, "le | scan | ldt | zeros | cf | check (overrides run.command)");
  app.add_option("-c,--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("-o,--output-dir", output_dir, "output directory (default: $QPC_OUTPUT_DIR or .)");
  auto* seed_opt = app.add_option("--seed", seed, "overrides budget.seed");
  auto* thr_opt = app.add_option("--threads", threads, "worker cap, 0 = all cores")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  qpc::cli::Overrides over;
  if (!command.empty()) over.command = command;
  if (*out_opt) over.output_dir = output_dir;
  if (*seed_opt) over.seed = seed;
  if (*thr_opt) over.threads = threads;

  try {
    qpc::cli::RunConfig cfg;
    if (config_path.empty()) {
      cfg = qpc::cli::parse_config_text("", over);
    } else {
      std::ifstream in(config_path);
      cfg = qpc::cli::parse_config(in, over);
    }
    const auto outcome = qpc::cli::run(cfg, std::cout);
    for (const auto& f : outcome.files) std::cerr << "wrote " << f << "\n";
    return outcome.exit_code;
  } catch (const qpc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qpc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
