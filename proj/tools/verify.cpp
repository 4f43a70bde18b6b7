// shm-verify: runs verification suites and reports one record per check.
//
//   shm-verify <suite> [--config FILE] [--grid NxM] [--mode spectral|fd2|fd4]
//              [--gens N] [--out FILE] [--timing]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
// error. SHM_THREADS sets how many suites run concurrently under "all".

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "shm/suites.hpp"

namespace {

int threads_from_env() {
  const char* v = std::getenv("SHM_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 256) shm::fail(shm::ErrorCode::config_parse, "SHM_THREADS must be in [1, 256]");
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification suites for super harmonic maps on the flat torus", "shm-verify"};
  std::string suite;
  std::string config_file, grid, mode, out;
  int gens = 0;
  bool timing = false;
  app.add_option("suite", suite, "algebra, clifford, geometry, dirac, torsion, couplings, weyl, super-weyl, "
                                 "susy-basic, susy-full, varform1 or all")
      ->required();
  app.add_option("--config", config_file, "key = value configuration file");
  app.add_option("--grid", grid, "grid size NxM (default 32x32)");
  app.add_option("--mode", mode, "derivative mode: spectral, fd2 or fd4 (default spectral)");
  app.add_option("--gens", gens, "Grassmann generator budget, 8..16 (default 8)");
  app.add_option("--out", out, "write JSON-lines records to FILE ('-' for standard output)");
  app.add_flag("--timing", timing, "record wall time per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  shm::SuiteConfig config;
  std::vector<shm::CheckRecord> records;
  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) shm::fail(shm::ErrorCode::config_parse, "cannot open '" + config_file + "'");
      shm::parse_config(in, config);
    }
    if (!grid.empty()) shm::apply_config_entry(config, "grid", grid);
    if (!mode.empty()) shm::apply_config_entry(config, "mode", mode);
    if (gens != 0) shm::apply_config_entry(config, "gens", std::to_string(gens));
    if (!out.empty()) config.out = out;
    if (timing) config.timing = true;
    config.suite = suite;
    config.threads = threads_from_env();
    records = shm::run_suite(config.suite, config);
  } catch (const shm::Error& e) {
    std::cerr << "shm-verify: " << e.what() << "\n";
    return 2;
  }

  if (config.out == "-") {
    for (const auto& r : records) std::cout << shm::to_json_line(r) << "\n";
  } else {
    if (!config.out.empty()) {
      std::ofstream f(config.out);
      if (!f) {
        std::cerr << "shm-verify: cannot write '" << config.out << "'\n";
        return 2;
      }
      for (const auto& r : records) f << shm::to_json_line(r) << "\n";
    }
    std::cout << shm::summary_table(records);
  }
  return shm::all_pass(records) ? 0 : 1;
}
