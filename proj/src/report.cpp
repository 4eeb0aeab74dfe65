#include "qpc/report.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qpc {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

CsvTable::CsvTable(std::string config_hash, std::vector<std::string> header)
    : hash_(std::move(config_hash)), header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width differs from header");
  rows_.push_back(std::move(cells));
  return *this;
}

namespace {

void join(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::string i64(std::int64_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string CsvTable::str() const {
  std::string out = "# config " + hash_ + "\n";
  join(out, header_);
  for (const auto& r : rows_) join(out, r);
  return out;
}

CsvTable ldt_table(const LdtResult& r, const std::string& config_hash) {
  CsvTable t(config_hash, {"q", "kappa", "n", "samples", "empirical_measure", "below_resolution", "L_n", "fitted_c"});
  for (const auto& d : r.reports)
    t.row({i64(d.q), format_real(d.kappa), i64(d.n), i64(d.samples), format_real(d.empirical_measure),
           flag(d.below_resolution), format_real(d.L_n), format_real(d.fitted_c)});
  return t;
}

CsvTable uniformity_table(const UniformityProbe& u, const std::string& config_hash) {
  CsvTable t(config_hash, {"perturbation", "distance", "q", "n", "empirical_measure", "bound"});
  for (std::size_t i = 0; i < u.results.size(); ++i)
    for (const auto& d : u.results[i].reports)
      t.row({i64(static_cast<std::int64_t>(i)), format_real(u.distances[i]), i64(d.q), i64(d.n),
             format_real(d.empirical_measure), format_real(std::exp(-u.fitted_c * d.kappa * static_cast<double>(d.q)))});
  return t;
}

CsvTable scan_table(const ContinuityScan& s, const std::string& config_hash) {
  CsvTable t(config_hash, {"t", "L", "L_prime", "std_error", "refinement"});
  for (const auto& p : s.points)
    t.row({format_real(p.t), format_real(p.L), format_real(p.L_prime), format_real(p.std_error), flag(p.refinement)});
  return t;
}

CsvTable frequency_table(const FrequencyScan& s, const std::string& config_hash) {
  CsvTable t(config_hash, {"p", "q", "L", "L_prime", "gap", "gap_prime", "label"});
  for (const auto& r : s.rows)
    t.row({i64(r.p), i64(r.q), format_real(r.L), format_real(r.L_prime), format_real(r.gap), format_real(r.gap_prime),
           s.label});
  return t;
}

CsvTable zero_table(const std::vector<ZeroCluster>& zeros, const std::string& config_hash) {
  CsvTable t(config_hash, {"re", "im", "multiplicity"});
  for (const auto& z : zeros) t.row({format_real(z.location.real()), format_real(z.location.imag()), i64(z.multiplicity)});
  return t;
}

CsvTable transversality_table(const TransversalityProfile& p, const std::string& config_hash) {
  CsvTable t(config_hash, {"eps", "measure"});
  for (const auto& [eps, m] : p.samples) t.row({format_real(eps), format_real(m)});
  return t;
}

CsvTable convergent_table(const Frequency& f, const std::string& config_hash) {
  CsvTable t(config_hash, {"n", "digit", "p", "q", "error"});
  for (std::size_t i = 0; i < f.convergents().size(); ++i) {
    const auto& c = f.convergents()[i];
    t.row({i64(static_cast<std::int64_t>(i + 1)), i64(f.digits()[i]), i64(c.p), i64(c.q),
           format_real(static_cast<double>(f.approximation_error(i)))});
  }
  return t;
}

}  // namespace qpc
