#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "qpc/analytic.hpp"
#include "qpc/checks.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"
#include "qpc/report.hpp"

namespace qpc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Emitter {
 public:
  Emitter(const RunConfig& cfg, RunOutcome& outcome) : cfg_(cfg), outcome_(outcome) {
    fs::create_directories(cfg.output_dir);
    stem_ = (fs::path(cfg.output_dir) / output_stem(cfg)).string();
  }

  void csv(const CsvTable& t, const std::string& suffix = "") { write(stem_ + suffix + ".csv", t.str()); }

  void summary(json body) {
    json j;
    j["experiment"] = cfg_.experiment;
    j["command"] = command_name(cfg_.command);
    j["seed"] = cfg_.budget.seed;
    j["config_hash"] = cfg_.hash;
    j["config"] = cfg_.canonical;
    j["results"] = std::move(body);
    write(stem_ + ".json", j.dump(2) + "\n");
  }

 private:
  void write(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + path);
    outcome_.files.push_back(path);
  }

  const RunConfig& cfg_;
  RunOutcome& outcome_;
  std::string stem_;
};

json ldt_json(const LdtResult& r) {
  json rows = json::array();
  for (const auto& d : r.reports)
    rows.push_back({{"q", d.q}, {"n", d.n}, {"empirical_measure", d.empirical_measure},
                    {"below_resolution", d.below_resolution}, {"L_n", d.L_n}});
  return {{"fitted_c", r.fitted_c}, {"dropped_q", r.dropped_q}, {"seed", r.seed}, {"reports", rows}};
}

json flags_json(const std::vector<JumpFlag>& flags) {
  json a = json::array();
  for (const auto& f : flags)
    a.push_back({{"t_lo", f.t_lo}, {"t_hi", f.t_hi}, {"delta", f.delta}, {"sigma", f.sigma}, {"persistent", f.persistent}});
  return a;
}

LEConfig le_config(const Budget& b) { return {b.schedule, b.grid}; }

TrigPoly zeros_target(const RunConfig& cfg, const Frequency& freq) {
  const std::string& t = cfg.zeros.target;
  if (t == "poly") return cfg.zeros.f;
  const CocycleSpec& c = *cfg.cocycle;
  if (t == "c") {
    if (c.kind == "harper") return harper_c(c.harper, freq.beta());
    if (c.kind == "jacobi") return c.c;
    return TrigPoly::constant(1.0);
  }
  const AnalyticCocycle coc = build_cocycle(c, freq);
  if (t == "det") return coc.det();
  return coc.entries()[static_cast<std::size_t>(t.back() - '0')];
}

int run_le(const RunConfig& cfg, const Frequency& freq, Emitter& em, std::ostream& out) {
  const AnalyticCocycle coc = build_cocycle(*cfg.cocycle, freq);
  CsvTable t(cfg.hash, {"method", "n", "grid", "L", "L_prime", "std_error", "cutoff_A", "singular_hits"});
  json j;
  if (freq.is_rational()) {
    const RationalLE r = rational_le(coc, cfg.budget.rational_grid);
    t.row({"rational", std::to_string(r.q), std::to_string(cfg.budget.rational_grid), format_real(r.L),
           format_real(r.L_prime), "0", "", "0"});
    j = {{"method", "rational"}, {"L", r.L}, {"L_prime", r.L_prime}, {"q", r.q}};
  } else {
    const LEEstimate e = lyapunov(coc, cfg.budget.schedule, cfg.budget.grid);
    const double Lp = renorm_le(coc, e);
    t.row({"orbit", std::to_string(e.n), std::to_string(e.grid), format_real(e.value), format_real(Lp),
           format_real(e.std_error), format_real(e.cutoff_A), std::to_string(e.singular_hits)});
    json hist = json::array();
    for (const auto& [n, v] : e.history) hist.push_back({n, v});
    j = {{"method", "orbit"}, {"L", e.value}, {"L_prime", Lp}, {"std_error", e.std_error}, {"history", hist}};
  }
  em.csv(t);
  em.summary(j);
  out << t.str();
  return 0;
}

int run_scan(const RunConfig& cfg, const Frequency& freq, Emitter& em, std::ostream& out) {
  const CocycleSpec& spec = *cfg.cocycle;
  const ScanSpec& s = cfg.scan;
  if (s.mode == "frequency") {
    const FrequencyScan fs = frequency_scan([&spec](const Frequency& f) { return build_cocycle(spec, f); }, freq,
                                            s.approximants, le_config(cfg.budget), cfg.budget.rational_grid);
    em.csv(frequency_table(fs, cfg.hash));
    em.summary({{"target_L", fs.target_L}, {"target_L_prime", fs.target_L_prime},
                {"target_std_error", fs.target_std_error}, {"label", fs.label}});
    out << fs.label << " target L=" << format_real(fs.target_L) << " L'=" << format_real(fs.target_L_prime) << "\n";
    for (const auto& r : fs.rows) out << r.p << "/" << r.q << " gap=" << format_real(r.gap) << "\n";
    return 0;
  }
  std::vector<double> path;
  for (int i = 0; i < s.points; ++i) path.push_back(s.from + (s.to - s.from) * i / (s.points - 1));
  // Validate the parameter names before the expensive part.
  (void)build_cocycle(spec, freq, s.parameters, path.front());
  const ContinuityScan sc = continuity_scan(
      [&](double t) { return build_cocycle(spec, freq, s.parameters, t); }, path, le_config(cfg.budget));
  em.csv(scan_table(sc, cfg.hash));
  em.summary({{"modulus", sc.modulus}, {"candidates", flags_json(sc.candidates)}, {"jumps", flags_json(sc.jumps)}});
  out << "points=" << sc.points.size() << " candidates=" << sc.candidates.size() << " jumps=" << sc.jumps.size()
      << " modulus=" << format_real(sc.modulus) << "\n";
  return 0;
}

int run_ldt(const RunConfig& cfg, const Frequency& freq, Emitter& em, std::ostream& out) {
  const AnalyticCocycle coc = build_cocycle(*cfg.cocycle, freq);
  const Budget& b = cfg.budget;
  LdtConfig lc;
  lc.kappa = b.kappa;
  lc.q_list = b.q_list;
  lc.policy = b.policy;
  lc.phases = b.phases;
  lc.seed = b.seed;
  lc.q_min = b.q_min;
  const LdtResult r = ldt_experiment(coc, lc);
  em.csv(ldt_table(r, cfg.hash));
  json j = ldt_json(r);
  if (b.perturbations > 0) {
    const UniformityProbe u = uniformity_probe(coc, lc, r.fitted_c, b.perturbations, b.gamma);
    em.csv(uniformity_table(u, cfg.hash), "-uniformity");
    j["uniformity"] = {{"gamma", u.gamma}, {"distances", u.distances}, {"common_c_holds", u.common_c_holds}};
  }
  em.summary(j);
  out << ldt_table(r, cfg.hash).str();
  return 0;
}

int run_zeros(const RunConfig& cfg, const Frequency& freq, Emitter& em, std::ostream& out) {
  const TrigPoly f = zeros_target(cfg, freq);
  const StripDomain dom(cfg.cocycle ? cfg.cocycle->delta : 0.1);
  const AnnulusContour contour = AnnulusContour::from_strip(dom);
  const int count = count_zeros(f, contour);
  const auto zeros = locate_zeros(f, contour, cfg.budget.tol);
  const TransversalityProfile prof = fit_transversality(f);
  em.csv(zero_table(zeros, cfg.hash));
  em.csv(transversality_table(prof, cfg.hash), "-transversality");
  em.summary({{"count", count},
              {"alpha", prof.alpha},
              {"epsilon0", prof.epsilon0},
              {"max_multiplicity", prof.max_multiplicity},
              {"zero_free", prof.zero_free}});
  out << zero_table(zeros, cfg.hash).str();
  out << "count=" << count << " alpha=" << format_real(prof.alpha) << " l=" << prof.max_multiplicity << "\n";
  return 0;
}

int run_cf(const RunConfig& cfg, const Frequency& freq, Emitter& em, std::ostream& out) {
  const CsvTable t = convergent_table(freq, cfg.hash);
  json j = {{"beta", freq.beta()}, {"digits", freq.digits()}, {"rational", freq.is_rational()},
            {"depth_capped", freq.depth_capped()}};
  if (freq.is_rational()) {
    j["diophantine"] = nullptr;  // undefined: sin(2 pi q beta) = 0
  } else {
    const DiophantineParams d = fit_diophantine(freq, cfg.budget.r, cfg.budget.j_max);
    j["diophantine"] = {{"b", d.b}, {"r", d.r}, {"j_max", d.j_max}, {"growth_check", growth_check(freq, d)}};
    out << "b=" << format_real(d.b) << " r=" << format_real(d.r) << " j_max=" << d.j_max << "\n";
  }
  em.csv(t);
  em.summary(j);
  out << t.str();
  return 0;
}

int run_check(const RunConfig& cfg, Emitter& em, std::ostream& out) {
  const auto results = run_invariant_suite(cfg.budget.seed);
  CsvTable t(cfg.hash, {"invariant", "passed", "detail"});
  json rows = json::array();
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
    std::string detail = r.detail;
    for (char& ch : detail)
      if (ch == ',') ch = ';';
    t.row({r.name, r.passed ? "1" : "0", detail});
    rows.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  em.csv(t);
  em.summary({{"all_passed", all}, {"invariants", rows}});
  return all ? 0 : 1;
}

}  // namespace

std::string output_stem(const RunConfig& cfg) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return cfg.experiment + "-" + buf + "-" + std::to_string(cfg.budget.seed);
}

RunOutcome run(const RunConfig& cfg, std::ostream& out) {
  set_max_threads(cfg.threads);
  RunOutcome outcome;
  Emitter em(cfg, outcome);
  if (cfg.command == Command::Check) {
    outcome.exit_code = run_check(cfg, em, out);
    return outcome;
  }
  const Frequency freq = build_frequency(cfg.frequency);
  switch (cfg.command) {
    case Command::Le: outcome.exit_code = run_le(cfg, freq, em, out); break;
    case Command::Scan: outcome.exit_code = run_scan(cfg, freq, em, out); break;
    case Command::Ldt: outcome.exit_code = run_ldt(cfg, freq, em, out); break;
    case Command::Zeros: outcome.exit_code = run_zeros(cfg, freq, em, out); break;
    case Command::Cf: outcome.exit_code = run_cf(cfg, freq, em, out); break;
    case Command::Check: break;
  }
  return outcome;
}

}  // namespace qpc::cli
