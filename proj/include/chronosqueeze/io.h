#ifndef CHRONOSQUEEZE_IO_H_
#define CHRONOSQUEEZE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chronosqueeze/conformal.h"
#include "chronosqueeze/detection.h"

namespace chronosqueeze {

/// FNV-1a 64-bit digest.
std::uint64_t fnv1a64(std::string_view data);
/// 16 lowercase hex digits.
std::string hex_digest(std::uint64_t value);

/// Shortest decimal text that round-trips the double.
std::string format_number(double v);

/// Writes "# <comment>" followed by header and rows.  Missing values are
/// written as empty fields.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(std::vector<std::string> fields);
  void add_row(std::span<const double> values);
  std::size_t rows() const { return rows_.size(); }
  void write(const std::filesystem::path& path, std::string_view comment) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// t_d_fs,V,rdv,rdv_simplified,degree_pct
CsvTable trace_table(const VarianceTrace& trace, std::span<const double> t_d_fs);
/// theta,tau_out,slope; every stride-th map node.
CsvTable map_table(const ConformalMap& map, std::size_t stride = 1);
/// line,z_frac,theta
CsvTable worldline_table(std::span<const WorldLine> lines);

void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace chronosqueeze

#endif  // CHRONOSQUEEZE_IO_H_
