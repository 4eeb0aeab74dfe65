#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <locale>
#include <set>
#include <sstream>

#include "qpc/errors.hpp"
#include "qpc/report.hpp"

namespace qpc::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"run", {"command", "experiment", "threads"}},
    {"frequency", {"kind", "value", "p", "q", "depth"}},
    {"cocycle",
     {"kind", "lambda1", "lambda2", "lambda3", "lambda", "E", "v", "c", "a", "b", "d", "delta"}},
    {"budget",
     {"schedule", "grid", "seed", "kappa", "q_list", "phases", "policy_C", "policy_eta", "policy_cap", "q_min",
      "perturbations", "gamma", "tol", "r", "j_max", "rational_grid"}},
    {"scan", {"mode", "parameters", "from", "to", "points", "approximants"}},
    {"zeros", {"target", "f"}},
    {"output", {"dir"}},
};

// Cocycle keys accepted per kind, besides kind and delta.
const std::map<std::string, std::set<std::string>> kCocycleKeys = {
    {"harper", {"lambda1", "lambda2", "lambda3", "E"}},
    {"almost_mathieu", {"lambda", "E"}},
    {"jacobi", {"v", "c", "E"}},
    {"raw", {"a", "b", "c", "d"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw ConfigError(key, "cannot parse '" + text + "' as a number");
  return v;
}

// Integers may be written in floating notation (1e6) when exact.
std::int64_t parse_int(const std::string& key, const std::string& text) {
  if (text.find_first_of(".eE") == std::string::npos) return parse_number<std::int64_t>(key, text);
  const double d = parse_number<double>(key, text);
  if (d != std::floor(d) || std::abs(d) > 9.0e18) throw ConfigError(key, "'" + text + "' is not an integer");
  return static_cast<std::int64_t>(d);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }
  std::string str(const std::string& s, const std::string& k, const std::string& def) const {
    return raw(s, k).value_or(def);
  }
  double real(const std::string& s, const std::string& k, double def) const {
    const auto v = raw(s, k);
    return v ? parse_number<double>(s + "." + k, *v) : def;
  }
  std::int64_t integer(const std::string& s, const std::string& k, std::int64_t def) const {
    const auto v = raw(s, k);
    return v ? parse_int(s + "." + k, *v) : def;
  }
  std::vector<std::int64_t> int_list(const std::string& s, const std::string& k, std::vector<std::int64_t> def) const {
    const auto v = raw(s, k);
    if (!v) return def;
    std::vector<std::int64_t> out;
    for (const auto& tok : split_list(*v)) out.push_back(parse_int(s + "." + k, tok));
    if (out.empty()) throw ConfigError(s + "." + k, "empty list");
    return out;
  }

 private:
  const pt::ptree& tree_;
};

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(key, "must be positive");
}

}  // namespace

Command parse_command(const std::string& name) {
  static const std::map<std::string, Command> m = {{"le", Command::Le},       {"scan", Command::Scan},
                                                   {"ldt", Command::Ldt},     {"zeros", Command::Zeros},
                                                   {"cf", Command::Cf},       {"check", Command::Check}};
  const auto it = m.find(name);
  if (it == m.end()) throw ConfigError("run.command", "unknown command '" + name + "'");
  return it->second;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Le: return "le";
    case Command::Scan: return "scan";
    case Command::Ldt: return "ldt";
    case Command::Zeros: return "zeros";
    case Command::Cf: return "cf";
    case Command::Check: return "check";
  }
  return "?";
}

TrigPoly parse_poly(const std::string& key, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError(key, "expected 'lo: c0 c1 ...'");
  const int lo = static_cast<int>(parse_int(key, trim(text.substr(0, colon))));
  std::istringstream in(text.substr(colon + 1));
  in.imbue(std::locale::classic());
  std::vector<cd> coeffs;
  for (;;) {
    in >> std::ws;
    if (in.eof()) break;
    cd v;
    if (!(in >> v)) throw ConfigError(key, "cannot parse coefficient list '" + text + "'");
    coeffs.push_back(v);
  }
  if (coeffs.empty()) throw ConfigError(key, "empty coefficient list");
  TrigPoly p = TrigPoly::from_dense(lo, std::move(coeffs));
  p.trim();
  return p;
}

RunConfig parse_config(std::istream& in, const Overrides& over) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  for (const auto& [section, child] : tree) {
    if (child.empty()) throw ConfigError(section, "key outside a section");
    const auto sec = kSchema.find(section);
    if (sec == kSchema.end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, leaf] : child) {
      (void)leaf;
      if (!sec->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }

  const Reader rd(tree);
  RunConfig cfg;

  const std::string command = over.command.value_or(rd.str("run", "command", ""));
  if (command.empty()) throw ConfigError("run.command", "no command given");
  cfg.command = parse_command(command);
  cfg.experiment = rd.str("run", "experiment", command);
  if (cfg.experiment.empty() || cfg.experiment.find_first_of("/\\ ") != std::string::npos)
    throw ConfigError("run.experiment", "must be a non-empty name without spaces or slashes");
  cfg.threads = static_cast<int>(over.threads.value_or(static_cast<int>(rd.integer("run", "threads", 0))));
  if (cfg.threads < 0) throw ConfigError("run.threads", "must be >= 0");

  FrequencySpec& f = cfg.frequency;
  f.kind = rd.str("frequency", "kind", "golden");
  f.depth = static_cast<int>(rd.integer("frequency", "depth", f.kind == "silver" ? 24 : 40));
  if (f.depth < 1) throw ConfigError("frequency.depth", "must be positive");
  if (f.kind == "decimal") {
    if (!rd.raw("frequency", "value")) throw ConfigError("frequency.value", "required for kind decimal");
    f.value = rd.real("frequency", "value", 0.0);
    if (!(f.value > 0.0 && f.value < 1.0)) throw ConfigError("frequency.value", "must lie in (0,1)");
  } else if (f.kind == "rational") {
    if (!rd.raw("frequency", "p") || !rd.raw("frequency", "q")) throw ConfigError("frequency.q", "p and q are required");
    f.p = rd.integer("frequency", "p", 0);
    f.q = rd.integer("frequency", "q", 0);
    if (!(f.p > 0 && f.q > f.p)) throw ConfigError("frequency.p", "need 0 < p < q");
  } else if (f.kind != "golden" && f.kind != "silver") {
    throw ConfigError("frequency.kind", "unknown kind '" + f.kind + "'");
  }
  for (const char* k : {"value", "p", "q"}) {
    const bool wanted = (f.kind == "decimal" && std::string(k) == "value") || (f.kind == "rational" && std::string(k) != "value");
    if (!wanted && rd.raw("frequency", k)) throw ConfigError(std::string("frequency.") + k, "not used by kind " + f.kind);
  }

  if (tree.get_child_optional("cocycle")) {
    CocycleSpec c;
    c.kind = rd.str("cocycle", "kind", "");
    const auto kinds = kCocycleKeys.find(c.kind);
    if (kinds == kCocycleKeys.end()) throw ConfigError("cocycle.kind", "expected harper, almost_mathieu, jacobi or raw");
    for (const auto& [key, leaf] : tree.get_child("cocycle")) {
      (void)leaf;
      if (key != "kind" && key != "delta" && !kinds->second.count(key))
        throw ConfigError("cocycle." + key, "not valid for kind " + c.kind);
    }
    c.delta = rd.real("cocycle", "delta", 0.1);
    require_positive("cocycle.delta", c.delta);
    c.E = rd.real("cocycle", "E", 0.0);
    if (c.kind == "harper") {
      c.harper = {rd.real("cocycle", "lambda1", 0.0), rd.real("cocycle", "lambda2", 1.0),
                  rd.real("cocycle", "lambda3", 0.0), c.E};
    } else if (c.kind == "almost_mathieu") {
      c.lambda = rd.real("cocycle", "lambda", 1.0);
    } else if (c.kind == "jacobi") {
      for (const char* k : {"v", "c"})
        if (!rd.raw("cocycle", k)) throw ConfigError(std::string("cocycle.") + k, "required for kind jacobi");
      c.v = parse_poly("cocycle.v", *rd.raw("cocycle", "v"));
      c.c = parse_poly("cocycle.c", *rd.raw("cocycle", "c"));
    } else {
      const char* names[4] = {"a", "b", "c", "d"};
      for (int i = 0; i < 4; ++i) {
        const auto v = rd.raw("cocycle", names[i]);
        if (!v) throw ConfigError(std::string("cocycle.") + names[i], "required for kind raw");
        c.raw[static_cast<std::size_t>(i)] = parse_poly(std::string("cocycle.") + names[i], *v);
      }
    }
    cfg.cocycle = c;
  }

  Budget& b = cfg.budget;
  b.schedule = rd.int_list("budget", "schedule", b.schedule);
  for (std::size_t i = 0; i < b.schedule.size(); ++i) {
    require_positive("budget.schedule", static_cast<double>(b.schedule[i]));
    if (i && b.schedule[i] <= b.schedule[i - 1]) throw ConfigError("budget.schedule", "must increase");
  }
  b.grid = static_cast<int>(rd.integer("budget", "grid", b.grid));
  require_positive("budget.grid", b.grid);
  const std::int64_t seed = rd.integer("budget", "seed", 1);
  if (seed < 0) throw ConfigError("budget.seed", "must be >= 0");
  b.seed = over.seed.value_or(static_cast<std::uint64_t>(seed));
  b.kappa = rd.real("budget", "kappa", b.kappa);
  if (!(b.kappa > 0.0 && b.kappa < 1.0)) throw ConfigError("budget.kappa", "must lie in (0,1)");
  b.q_list = rd.int_list("budget", "q_list", b.q_list);
  b.phases = static_cast<int>(rd.integer("budget", "phases", b.phases));
  if (b.phases < 1000) throw ConfigError("budget.phases", "must be at least 1000");
  b.policy.C = rd.real("budget", "policy_C", b.policy.C);
  require_positive("budget.policy_C", b.policy.C);
  b.policy.eta = rd.real("budget", "policy_eta", b.policy.eta);
  require_positive("budget.policy_eta", b.policy.eta);
  b.policy.cap = rd.integer("budget", "policy_cap", b.policy.cap);
  require_positive("budget.policy_cap", static_cast<double>(b.policy.cap));
  b.q_min = rd.integer("budget", "q_min", b.q_min);
  b.perturbations = static_cast<int>(rd.integer("budget", "perturbations", b.perturbations));
  if (b.perturbations < 0) throw ConfigError("budget.perturbations", "must be >= 0");
  b.gamma = rd.real("budget", "gamma", b.gamma);
  require_positive("budget.gamma", b.gamma);
  b.tol = rd.real("budget", "tol", b.tol);
  require_positive("budget.tol", b.tol);
  b.r = rd.real("budget", "r", b.r);
  require_positive("budget.r", b.r);
  b.j_max = rd.integer("budget", "j_max", b.j_max);
  require_positive("budget.j_max", static_cast<double>(b.j_max));
  b.rational_grid = static_cast<int>(rd.integer("budget", "rational_grid", b.rational_grid));
  require_positive("budget.rational_grid", b.rational_grid);

  ScanSpec& s = cfg.scan;
  s.mode = rd.str("scan", "mode", s.mode);
  if (s.mode != "path" && s.mode != "frequency") throw ConfigError("scan.mode", "expected path or frequency");
  if (const auto p = rd.raw("scan", "parameters")) s.parameters = split_list(*p);
  s.from = rd.real("scan", "from", s.from);
  s.to = rd.real("scan", "to", s.to);
  s.points = static_cast<int>(rd.integer("scan", "points", s.points));
  if (s.points < 2) throw ConfigError("scan.points", "need at least 2");
  if (s.from == s.to) throw ConfigError("scan.to", "path is empty");
  if (const auto a = rd.raw("scan", "approximants")) {
    for (const auto& tok : split_list(*a)) {
      const auto slash = tok.find('/');
      if (slash == std::string::npos) throw ConfigError("scan.approximants", "expected p/q, got '" + tok + "'");
      s.approximants.emplace_back(parse_int("scan.approximants", tok.substr(0, slash)),
                                  parse_int("scan.approximants", tok.substr(slash + 1)));
    }
  }

  cfg.zeros.target = rd.str("zeros", "target", cfg.zeros.target);
  static const std::set<std::string> targets = {"det", "c", "entry0", "entry1", "entry2", "entry3", "poly"};
  if (!targets.count(cfg.zeros.target)) throw ConfigError("zeros.target", "unknown target '" + cfg.zeros.target + "'");
  if (cfg.zeros.target == "poly") {
    const auto fx = rd.raw("zeros", "f");
    if (!fx) throw ConfigError("zeros.f", "required for target poly");
    cfg.zeros.f = parse_poly("zeros.f", *fx);
  }

  const bool needs_cocycle = cfg.command == Command::Le || cfg.command == Command::Scan || cfg.command == Command::Ldt ||
                             (cfg.command == Command::Zeros && cfg.zeros.target != "poly");
  if (needs_cocycle && !cfg.cocycle) throw ConfigError("cocycle", "command " + command + " needs a [cocycle] section");
  if (cfg.command == Command::Zeros && cfg.zeros.target == "c" && cfg.cocycle &&
      cfg.cocycle->kind != "harper" && cfg.cocycle->kind != "jacobi" && cfg.cocycle->kind != "almost_mathieu")
    throw ConfigError("zeros.target", "target c needs a Jacobi-type cocycle");
  if (cfg.command == Command::Scan && s.mode == "frequency" && s.approximants.empty())
    throw ConfigError("scan.approximants", "required for mode frequency");

  cfg.output_dir = over.output_dir.value_or(rd.str("output", "dir", ""));
  if (cfg.output_dir.empty())
    if (const char* env = std::getenv("QPC_OUTPUT_DIR")) cfg.output_dir = env;
  if (cfg.output_dir.empty()) cfg.output_dir = ".";

  // Everything that can change a result goes into the hash; threads and the
  // output location do not.
  for (const auto& [section, child] : tree)
    for (const auto& [key, leaf] : child)
      if (section != "output" && !(section == "run" && key == "threads"))
        cfg.canonical[section + "." + key] = trim(leaf.data());
  cfg.canonical["run.command"] = command;
  cfg.canonical["budget.seed"] = std::to_string(b.seed);
  std::string text;
  for (const auto& [k, v] : cfg.canonical) text += k + "=" + v + "\n";
  cfg.hash = sha256_hex(text).substr(0, 16);
  return cfg;
}

RunConfig parse_config_text(const std::string& text, const Overrides& over) {
  std::istringstream in(text);
  return parse_config(in, over);
}

Frequency build_frequency(const FrequencySpec& spec) {
  if (spec.kind == "golden") return Frequency::golden(spec.depth);
  if (spec.kind == "silver") return Frequency::silver(spec.depth);
  if (spec.kind == "decimal") return Frequency::decimal(spec.value, spec.depth);
  return Frequency::rational(spec.p, spec.q);
}

AnalyticCocycle build_cocycle(const CocycleSpec& spec, const Frequency& freq, const std::vector<std::string>& parameters,
                              double t) {
  CocycleSpec s = spec;
  for (const auto& p : parameters) {
    if (p == "E") {
      s.E = t;
      s.harper.E = t;
    } else if (s.kind == "harper" && p == "lambda1") {
      s.harper.lambda1 = t;
    } else if (s.kind == "harper" && p == "lambda2") {
      s.harper.lambda2 = t;
    } else if (s.kind == "harper" && p == "lambda3") {
      s.harper.lambda3 = t;
    } else if (s.kind == "almost_mathieu" && p == "lambda") {
      s.lambda = t;
    } else {
      throw ConfigError("scan.parameters", "'" + p + "' cannot be varied for kind " + s.kind);
    }
  }
  const StripDomain dom(s.delta);
  if (s.kind == "harper") {
    // build_harper fixes the default strip; rebuild on the configured one.
    const AnalyticCocycle h = build_harper(s.harper, freq);
    return AnalyticCocycle(freq, h.entries(), dom);
  }
  if (s.kind == "almost_mathieu") {
    const AnalyticCocycle a = build_almost_mathieu(s.lambda, s.E, freq);
    return AnalyticCocycle(freq, a.entries(), dom);
  }
  if (s.kind == "jacobi") return build_jacobi(s.v, s.c, s.E, freq, dom).A;
  return AnalyticCocycle(freq, s.raw, dom);
}

}  // namespace qpc::cli
