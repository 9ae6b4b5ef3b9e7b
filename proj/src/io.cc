#include "chronosqueeze/io.h"

#include <charconv>
#include <fstream>

#include "chronosqueeze/errors.h"

namespace chronosqueeze {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
  if (fields.size() != columns_.size()) {
    throw InvalidArgumentError("CSV row width does not match the header");
  }
  rows_.push_back(std::move(fields));
}

void CsvTable::add_row(std::span<const double> values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  add_row(std::move(fields));
}

void CsvTable::write(const std::filesystem::path& path, std::string_view comment) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "# " << comment << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

CsvTable trace_table(const VarianceTrace& trace, std::span<const double> t_d_fs) {
  if (t_d_fs.size() != trace.size()) throw InvalidArgumentError("delay column length mismatch");
  CsvTable table({"t_d_fs", "V", "rdv", "rdv_simplified", "degree_pct"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const bool has_degree = i < trace.degree_pct.size() && trace.degree_pct[i].has_value();
    table.add_row({format_number(t_d_fs[i]), format_number(trace.V[i]),
                   format_number(trace.rdv[i]), format_number(trace.rdv_simplified[i]),
                   has_degree ? format_number(*trace.degree_pct[i]) : std::string()});
  }
  return table;
}

CsvTable map_table(const ConformalMap& map, std::size_t stride) {
  if (stride == 0) stride = 1;
  CsvTable table({"theta", "tau_out", "slope"});
  const auto theta = map.theta_grid();
  const auto tau = map.tau_out();
  const auto slope = map.slope();
  for (std::size_t i = 0; i < theta.size(); i += stride) {
    const double row[] = {theta[i], tau[i], slope[i]};
    table.add_row(row);
  }
  return table;
}

CsvTable worldline_table(std::span<const WorldLine> lines) {
  CsvTable table({"line", "z_frac", "theta"});
  for (std::size_t l = 0; l < lines.size(); ++l) {
    for (std::size_t k = 0; k < lines[l].z_frac.size(); ++k) {
      table.add_row({std::to_string(l), format_number(lines[l].z_frac[k]),
                     format_number(lines[l].theta[k])});
    }
  }
  return table;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace chronosqueeze
