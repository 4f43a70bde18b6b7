#pragma once

// Verification suites: frozen configurations, named checks and their
// machine-readable records.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shm/torus.hpp"

namespace shm {

// Defaults: 32x32 unit torus, spectral derivatives, 8 generators, seed 1.
struct SuiteConfig {
  std::string suite = "all";
  int n1 = 32;
  int n2 = 32;
  DerivMode mode = DerivMode::spectral;
  int generators = 8;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerance;  // check id -> overriding tolerance
  std::string out;                          // JSON-lines report path, empty for none
  bool timing = false;                      // record wall time (otherwise 0)
  int threads = 1;                          // suites run concurrently under "all"
};

// Applies one "key = value" assignment. Keys: suite, grid (NxM), n1, n2,
// mode (spectral|fd2|fd4), gens, seed, out, timing (0|1) and tol.<check id>.
// Throws ConfigParse on unknown keys or malformed values.
void apply_config_entry(SuiteConfig& config, const std::string& key, const std::string& value);

// Reads "key = value" lines; blank lines and '#' comments are skipped.
void parse_config(std::istream& in, SuiteConfig& config);

DerivMode parse_mode(const std::string& name);
std::string mode_name(DerivMode mode);
// "NxM" -> (N, M); throws ConfigParse.
std::pair<int, int> parse_grid(const std::string& text);

// bound: pass iff measured <= tolerance. witness: pass iff measured >=
// tolerance. band: pass iff tolerance <= measured <= upper.
enum class CheckKind { bound, witness, band };

struct CheckRecord {
  std::string id;
  std::string anchor;
  std::string mode;
  std::string grid;
  CheckKind kind = CheckKind::bound;
  double measured = 0.0;
  double tolerance = 0.0;
  double upper = 0.0;
  bool pass = false;
  double wall_seconds = 0.0;
  std::string error;  // set when the check raised instead of measuring
};

std::string_view to_string(CheckKind kind);
std::string to_json_line(const CheckRecord& r);

// Names accepted by run_suite, in the order used by "all".
const std::vector<std::string>& suite_names();

// Runs a named suite (or "all"). Records come in a fixed order. Throws
// UnknownSuite for other names.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteConfig& config);

bool all_pass(const std::vector<CheckRecord>& records);

// Fixed-width text table, one line per record plus a closing count.
std::string summary_table(const std::vector<CheckRecord>& records);

}  // namespace shm
