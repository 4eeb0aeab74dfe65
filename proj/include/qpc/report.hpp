#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/analytic.hpp"
#include "qpc/deviation.hpp"

namespace qpc {

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_real(double v);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// CSV text: a "# config <hash>" line, a header row, then data rows.
class CsvTable {
 public:
  CsvTable(std::string config_hash, std::vector<std::string> header);
  CsvTable& row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::string hash_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable ldt_table(const LdtResult& r, const std::string& config_hash);
/// One block of rows per perturbation, keyed by the perturbation index.
CsvTable uniformity_table(const UniformityProbe& u, const std::string& config_hash);
CsvTable scan_table(const ContinuityScan& s, const std::string& config_hash);
CsvTable frequency_table(const FrequencyScan& s, const std::string& config_hash);
CsvTable zero_table(const std::vector<ZeroCluster>& zeros, const std::string& config_hash);
CsvTable transversality_table(const TransversalityProfile& p, const std::string& config_hash);
CsvTable convergent_table(const Frequency& f, const std::string& config_hash);

}  // namespace qpc
