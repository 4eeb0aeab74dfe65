#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpc/cocycle.hpp"
#include "qpc/deviation.hpp"

namespace qpc::cli {

enum class Command { Le, Scan, Ldt, Zeros, Cf, Check };

struct FrequencySpec {
  std::string kind = "golden";  // golden | silver | decimal | rational
  double value = 0.0;
  std::int64_t p = 0, q = 0;
  int depth = 40;
};

struct CocycleSpec {
  std::string kind;  // harper | almost_mathieu | jacobi | raw
  HarperParams harper;
  double lambda = 1.0;
  double E = 0.0;
  TrigPoly v, c;              // jacobi
  std::array<TrigPoly, 4> raw;
  double delta = 0.1;
};

struct Budget {
  std::vector<std::int64_t> schedule{5000, 10000};
  int grid = 128;
  std::uint64_t seed = 1;
  double kappa = 0.1;
  std::vector<std::int64_t> q_list{34, 55, 89, 144};
  int phases = 1000;
  NPolicy policy;
  std::int64_t q_min = 0;
  int perturbations = 0;
  double gamma = 1e-2;
  double tol = 1e-9;
  double r = 2.0;
  std::int64_t j_max = 10000;
  int rational_grid = 200;
};

struct ScanSpec {
  std::string mode = "path";  // path | frequency
  std::vector<std::string> parameters{"E"};
  double from = 0.0, to = 1.0;
  int points = 11;
  std::vector<std::pair<std::int64_t, std::int64_t>> approximants;
};

struct ZerosSpec {
  std::string target = "det";  // det | c | entry0..entry3 | poly
  TrigPoly f;
};

struct RunConfig {
  Command command = Command::Check;
  std::string experiment;
  int threads = 0;
  FrequencySpec frequency;
  std::optional<CocycleSpec> cocycle;
  Budget budget;
  ScanSpec scan;
  ZerosSpec zeros;
  std::string output_dir;
  /// Canonical "section.key=value" lines that determine the results.
  std::map<std::string, std::string> canonical;
  std::string hash;
};

/// Command-line values that override the file.
struct Overrides {
  std::optional<std::string> command;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

/// Parses INI text. Unknown sections or keys, malformed values and
/// inconsistent cocycle specs raise ConfigError naming the key.
RunConfig parse_config(std::istream& in, const Overrides& over);
RunConfig parse_config_text(const std::string& text, const Overrides& over);

Command parse_command(const std::string& name);
std::string command_name(Command c);

Frequency build_frequency(const FrequencySpec& spec);
/// The configured cocycle with scan parameters replaced by `t`.
AnalyticCocycle build_cocycle(const CocycleSpec& spec, const Frequency& freq,
                              const std::vector<std::string>& parameters = {}, double t = 0.0);

/// Coefficient list "lo: c0 c1 ..." where each entry is `re` or `(re,im)`.
TrigPoly parse_poly(const std::string& key, const std::string& text);

}  // namespace qpc::cli
